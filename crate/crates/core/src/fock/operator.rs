use std::fmt;

use crate::error::{Error, Result};

use super::ModeSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LadderKind {
    Creation,
    Annihilation,
}

/// A single creation or annihilation operator on a canonical mode position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LadderOp {
    pub mode: usize,
    pub kind: LadderKind,
}

impl LadderOp {
    pub fn creation(mode: usize) -> Self {
        Self {
            mode,
            kind: LadderKind::Creation,
        }
    }

    pub fn annihilation(mode: usize) -> Self {
        Self {
            mode,
            kind: LadderKind::Annihilation,
        }
    }

    /// Resolves a mode label against `system`.
    pub fn on(system: &ModeSystem, label: &str, kind: LadderKind) -> Result<Self> {
        Ok(Self {
            mode: system.index_of(label)?,
            kind,
        })
    }

    /// Acts on a basis ket. Returns `None` when the result vanishes, otherwise
    /// the sign `(-1)^{occupied modes before mode}` and the flipped bitstring.
    ///
    /// This is the single place where anticommutation signs are produced.
    #[inline]
    pub fn act(self, bits: usize) -> Option<(i8, usize)> {
        let flag = 1usize << self.mode;
        let occupied = bits & flag != 0;
        match (self.kind, occupied) {
            (LadderKind::Creation, true) | (LadderKind::Annihilation, false) => None,
            _ => {
                let before = (bits & (flag - 1)).count_ones();
                let sign = if before.is_multiple_of(2) { 1 } else { -1 };
                Some((sign, bits ^ flag))
            }
        }
    }
}

/// An ordered product of ladder operators, written as in mathematical
/// notation: the rightmost factor acts first.
///
/// Text form: whitespace-separated tokens `<label>+` (creation) and
/// `<label>-` (annihilation), e.g. `a1+ c2-`. The empty string is the
/// identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct OperatorString {
    factors: Vec<(String, LadderKind)>,
}

impl OperatorString {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new(factors: Vec<(String, LadderKind)>) -> Self {
        Self { factors }
    }

    /// Product of creators on the given labels, left to right.
    pub fn creators<S: AsRef<str>>(labels: &[S]) -> Self {
        Self {
            factors: labels
                .iter()
                .map(|l| (l.as_ref().to_string(), LadderKind::Creation))
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for token in text.split_whitespace() {
            let (label, kind) = if let Some(l) = token.strip_suffix('+') {
                (l, LadderKind::Creation)
            } else if let Some(l) = token.strip_suffix('-') {
                (l, LadderKind::Annihilation)
            } else {
                return Err(Error::Parse(format!(
                    "operator token `{token}` must end in `+` or `-`"
                )));
            };
            if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::Parse(format!("invalid mode label in `{token}`")));
            }
            factors.push((label.to_string(), kind));
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[(String, LadderKind)] {
        &self.factors
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn only_creators(&self) -> bool {
        self.factors.iter().all(|(_, k)| *k == LadderKind::Creation)
    }

    /// Resolved factors in application order (rightmost first).
    pub fn resolve(&self, system: &ModeSystem) -> Result<Vec<LadderOp>> {
        self.factors
            .iter()
            .rev()
            .map(|(label, kind)| LadderOp::on(system, label, *kind))
            .collect()
    }

    /// Concatenation `self * other`.
    pub fn then(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Self { factors }
    }

    /// Hermitian adjoint: reverses the product and swaps kinds.
    pub fn adjoint(&self) -> Self {
        Self {
            factors: self
                .factors
                .iter()
                .rev()
                .map(|(l, k)| {
                    let k = match k {
                        LadderKind::Creation => LadderKind::Annihilation,
                        LadderKind::Annihilation => LadderKind::Creation,
                    };
                    (l.clone(), k)
                })
                .collect(),
        }
    }
}

/// Applies resolved operators (in application order) to a basis ket.
pub fn act_sequence(ops: &[LadderOp], bits: usize) -> Option<(i8, usize)> {
    ops.iter().try_fold((1i8, bits), |(sign, b), op| {
        op.act(b).map(|(s, nb)| (sign * s, nb))
    })
}

impl fmt::Display for OperatorString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (label, kind)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let suffix = match kind {
                LadderKind::Creation => '+',
                LadderKind::Annihilation => '-',
            };
            write!(f, "{label}{suffix}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for OperatorString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn act_signs() {
        // order (a, c): a at 0, c at 1
        assert_eq!(LadderOp::creation(0).act(0b00), Some((1, 0b01)));
        assert_eq!(LadderOp::creation(1).act(0b01), Some((-1, 0b11)));
        assert_eq!(LadderOp::annihilation(0).act(0b11), Some((1, 0b10)));
        assert_eq!(LadderOp::creation(0).act(0b01), None);
        assert_eq!(LadderOp::annihilation(1).act(0b01), None);
    }

    #[test]
    fn parse_and_display() {
        let s = OperatorString::parse("  a1+   c2- ").unwrap();
        assert_eq!(s.to_string(), "a1+ c2-");
        assert_eq!(s.adjoint().to_string(), "c2+ a1-");
        assert!(OperatorString::parse("a1").is_err());
        assert!(OperatorString::parse("+").is_err());
        assert!(OperatorString::parse("").unwrap().is_identity());
    }

    #[test]
    fn resolve_reverses() {
        let sys = ModeSystem::new(&["a", "c"], 1).unwrap();
        let ops = OperatorString::parse("a+ c+").unwrap().resolve(&sys).unwrap();
        assert_eq!(ops, vec![LadderOp::creation(1), LadderOp::creation(0)]);
        assert!(matches!(
            OperatorString::parse("z+").unwrap().resolve(&sys),
            Err(Error::UnknownMode(_))
        ));
    }
}
