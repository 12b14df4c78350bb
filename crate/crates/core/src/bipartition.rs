use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::ModeSystem;

/// Split of a system's modes into a kept set and a traced set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BipartitionSpec {
    kept: Vec<String>,
    traced: Vec<String>,
    #[serde(skip)]
    kept_positions: Vec<usize>,
    #[serde(skip)]
    traced_positions: Vec<usize>,
}

impl BipartitionSpec {
    /// Both sets must be non-empty, disjoint, and together cover `system`.
    pub fn new<S: AsRef<str>>(system: &ModeSystem, kept: &[S], traced: &[S]) -> Result<Self> {
        let resolve = |labels: &[S]| -> Result<Vec<usize>> {
            labels
                .iter()
                .map(|l| {
                    system
                        .index_of(l.as_ref())
                        .map_err(|_| Error::InvalidBipartition(format!("unknown mode `{}`", l.as_ref())))
                })
                .collect()
        };
        let mut kept_positions = resolve(kept)?;
        let mut traced_positions = resolve(traced)?;
        kept_positions.sort_unstable();
        traced_positions.sort_unstable();
        if kept_positions.is_empty() || traced_positions.is_empty() {
            return Err(Error::InvalidBipartition("both sides must be non-empty".into()));
        }
        let mut all: Vec<usize> = kept_positions.iter().chain(&traced_positions).copied().collect();
        all.sort_unstable();
        all.dedup();
        if all.len() != kept_positions.len() + traced_positions.len() {
            return Err(Error::InvalidBipartition("kept and traced sets overlap or repeat".into()));
        }
        if all.len() != system.n_modes() {
            return Err(Error::InvalidBipartition("sets do not cover every mode".into()));
        }
        Ok(Self::from_positions(system, kept_positions, traced_positions))
    }

    /// Keeps the system's `a` block and traces its `c` block.
    pub fn from_system(system: &ModeSystem) -> Result<Self> {
        let n = system.a_count();
        let kept: Vec<&str> = system.labels()[..n].iter().map(String::as_str).collect();
        let traced: Vec<&str> = system.labels()[n..].iter().map(String::as_str).collect();
        Self::new(system, &kept, &traced)
    }

    /// Keeps the given labels and traces the rest.
    pub fn keeping<S: AsRef<str>>(system: &ModeSystem, kept: &[S]) -> Result<Self> {
        let kept: Vec<&str> = kept.iter().map(|s| s.as_ref()).collect();
        let traced: Vec<&str> = system
            .labels()
            .iter()
            .map(String::as_str)
            .filter(|l| !kept.contains(l))
            .collect();
        Self::new(system, &kept, &traced)
    }

    fn from_positions(system: &ModeSystem, kept: Vec<usize>, traced: Vec<usize>) -> Self {
        Self {
            kept: kept.iter().map(|&k| system.label(k).to_string()).collect(),
            traced: traced.iter().map(|&k| system.label(k).to_string()).collect(),
            kept_positions: kept,
            traced_positions: traced,
        }
    }

    /// Kept labels in canonical order.
    pub fn kept(&self) -> &[String] {
        &self.kept
    }

    /// Traced labels in canonical order.
    pub fn traced(&self) -> &[String] {
        &self.traced
    }

    pub fn kept_positions(&self) -> &[usize] {
        &self.kept_positions
    }

    pub fn traced_positions(&self) -> &[usize] {
        &self.traced_positions
    }

    pub fn kept_mask(&self) -> usize {
        self.kept_positions.iter().fold(0, |m, &k| m | (1 << k))
    }

    pub fn traced_mask(&self) -> usize {
        self.traced_positions.iter().fold(0, |m, &k| m | (1 << k))
    }

    pub fn n_modes(&self) -> usize {
        self.kept_positions.len() + self.traced_positions.len()
    }

    /// Errors unless this bipartition was built for `system`.
    pub fn check_system(&self, system: &ModeSystem) -> Result<()> {
        let matches = self.n_modes() == system.n_modes()
            && self
                .kept_positions
                .iter()
                .zip(&self.kept)
                .chain(self.traced_positions.iter().zip(&self.traced))
                .all(|(&k, l)| system.label(k) == l);
        if matches {
            Ok(())
        } else {
            Err(Error::InvalidBipartition(format!(
                "bipartition {:?}|{:?} does not match system {:?}",
                self.kept,
                self.traced,
                system.labels()
            )))
        }
    }

    /// The kept sub-system.
    pub fn kept_system(&self, system: &ModeSystem) -> Result<ModeSystem> {
        system.subsystem(&self.kept_positions)
    }
}

/// Spreads the low bits of `compact` onto `positions` (in order).
pub(crate) fn expand_bits(compact: usize, positions: &[usize]) -> usize {
    positions
        .iter()
        .enumerate()
        .filter(|(i, _)| compact >> i & 1 == 1)
        .fold(0, |acc, (_, &p)| acc | (1 << p))
}

/// Gathers the bits at `positions` into the low bits.
pub(crate) fn compress_bits(bits: usize, positions: &[usize]) -> usize {
    positions
        .iter()
        .enumerate()
        .filter(|(_, &p)| bits >> p & 1 == 1)
        .fold(0, |acc, (i, _)| acc | (1 << i))
}
