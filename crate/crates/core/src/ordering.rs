//! Fermion-to-qubit mappings induced by operator orderings.
//!
//! An ordering lists every mode of a system; it defines an alternative basis
//! whose kets are creation-operator products written in that order. Mapping a
//! fermionic state to qubits means reading off its coefficients in that basis
//! and reinterpreting them under the ordinary tensor product, with no
//! anticommutation signs. The coefficient relating the two bases for a given
//! bitstring is [`ordering_sign`].
//!
//! Qubit states keep the canonical bit positions; only the signs change.

use serde::Serialize;

use num_complex::Complex64;

use crate::bipartition::BipartitionSpec;
use crate::error::{Error, Result};
use crate::fock::{DensityOperator, FockVector, ModeSystem, OccupationBasisState};
use crate::numerics::ComplexMatrix;

/// A permutation of a system's modes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModeOrdering {
    labels: Vec<String>,
    /// `order[i]` is the canonical position of the `i`-th mode in this ordering.
    order: Vec<usize>,
}

impl ModeOrdering {
    pub fn new<S: AsRef<str>>(system: &ModeSystem, labels: &[S]) -> Result<Self> {
        let positions = labels
            .iter()
            .map(|l| {
                system
                    .index_of(l.as_ref())
                    .map_err(|_| Error::InvalidOrdering(format!("unknown mode `{}`", l.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_positions(system, positions)
    }

    /// Canonical order.
    pub fn identity(system: &ModeSystem) -> Self {
        Self {
            labels: system.labels().to_vec(),
            order: (0..system.n_modes()).collect(),
        }
    }

    pub fn from_positions(system: &ModeSystem, order: Vec<usize>) -> Result<Self> {
        let n = system.n_modes();
        if order.len() != n {
            return Err(Error::InvalidOrdering(format!(
                "ordering lists {} modes, system has {n}",
                order.len()
            )));
        }
        let mut seen = vec![false; n];
        for &p in &order {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidOrdering("not a permutation of the modes".into()));
            }
        }
        Ok(Self {
            labels: order.iter().map(|&p| system.label(p).to_string()).collect(),
            order,
        })
    }

    /// Accepts a JSON array of labels or a comma-separated list.
    pub fn parse(system: &ModeSystem, text: &str) -> Result<Self> {
        let text = text.trim();
        let labels: Vec<String> = if text.starts_with('[') {
            serde_json::from_str(text)?
        } else {
            text.split(',').map(|s| s.trim().to_string()).collect()
        };
        Self::new(system, &labels)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.labels).expect("labels serialize")
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn positions(&self) -> &[usize] {
        &self.order
    }

    pub fn n_modes(&self) -> usize {
        self.order.len()
    }

    pub fn is_identity(&self) -> bool {
        self.order.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Rank of each canonical position within this ordering.
    pub fn ranks(&self) -> Vec<usize> {
        let mut rank = vec![0; self.order.len()];
        for (i, &p) in self.order.iter().enumerate() {
            rank[p] = i;
        }
        rank
    }

    /// Sign relating this ordering's basis ket to the canonical one.
    pub fn sign(&self, bits: usize) -> i8 {
        let mut inversions = 0u32;
        let mut seen = 0usize;
        for &p in &self.order {
            if bits >> p & 1 == 1 {
                // occupied modes already listed that sit after p canonically
                inversions += (seen >> p).count_ones();
                seen |= 1 << p;
            }
        }
        if inversions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// This ordering restricted to `sub`, whose labels must all occur here.
    pub fn restricted_to(&self, sub: &ModeSystem) -> Result<Self> {
        let labels: Vec<&str> = self
            .labels
            .iter()
            .map(String::as_str)
            .filter(|l| sub.labels().iter().any(|s| s == l))
            .collect();
        if labels.len() != sub.n_modes() {
            return Err(Error::InvalidSubset(format!(
                "modes {:?} are not all covered by ordering {:?}",
                sub.labels(),
                self.labels
            )));
        }
        Self::new(sub, &labels)
    }

    /// Whether every kept mode precedes every traced mode.
    pub fn is_physical(&self, bp: &BipartitionSpec) -> bool {
        is_physical(self, bp)
    }
}

impl Serialize for ModeOrdering {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.labels.serialize(s)
    }
}

/// Free-function form of [`ModeOrdering::sign`].
pub fn ordering_sign(ordering: &ModeOrdering, state: OccupationBasisState) -> i8 {
    ordering.sign(state.bits())
}

/// Kept-before-traced classification of an ordering.
pub fn is_physical(ordering: &ModeOrdering, bp: &BipartitionSpec) -> bool {
    let rank = ordering.ranks();
    let last_kept = bp.kept_positions().iter().map(|&p| rank[p]).max();
    let first_traced = bp.traced_positions().iter().map(|&p| rank[p]).min();
    match (last_kept, first_traced) {
        (Some(k), Some(t)) => k < t,
        _ => true,
    }
}

/// Whether the kept modes occupy consecutive slots of the ordering (traced
/// modes may sit on either side). With a single kept mode this always holds.
///
/// This is exactly the class of orderings whose qubit-route reduction agrees
/// with the fermionic partial trace on every parity-definite state; it
/// contains the [`is_physical`] class.
pub fn kept_block_contiguous(ordering: &ModeOrdering, bp: &BipartitionSpec) -> bool {
    let rank = ordering.ranks();
    let ranks: Vec<usize> = bp.kept_positions().iter().map(|&p| rank[p]).collect();
    match (ranks.iter().min(), ranks.iter().max()) {
        (Some(lo), Some(hi)) => hi - lo + 1 == ranks.len(),
        _ => true,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum QubitRepr {
    Pure(Vec<Complex64>),
    Mixed(ComplexMatrix),
}

/// Image of a fermionic state under an ordering's qubit mapping.
///
/// Indexed by canonical bit positions; the ordering's signs are folded into
/// the amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitState {
    system: ModeSystem,
    ordering: ModeOrdering,
    repr: QubitRepr,
}

impl QubitState {
    /// Wraps raw qubit data over `system`; the ordering only records provenance.
    pub fn new(system: ModeSystem, ordering: ModeOrdering, repr: QubitRepr) -> Result<Self> {
        let dim = match &repr {
            QubitRepr::Pure(v) => v.len(),
            QubitRepr::Mixed(m) => m.dim(),
        };
        if dim != system.dim() {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: system.dim(),
            });
        }
        if ordering.n_modes() != system.n_modes() {
            return Err(Error::InvalidOrdering("ordering does not match system".into()));
        }
        Ok(Self {
            system,
            ordering,
            repr,
        })
    }

    pub fn system(&self) -> &ModeSystem {
        &self.system
    }

    pub fn ordering(&self) -> &ModeOrdering {
        &self.ordering
    }

    pub fn repr(&self) -> &QubitRepr {
        &self.repr
    }

    pub fn amplitudes(&self) -> Option<&[Complex64]> {
        match &self.repr {
            QubitRepr::Pure(v) => Some(v),
            QubitRepr::Mixed(_) => None,
        }
    }

    pub fn density_matrix(&self) -> ComplexMatrix {
        match &self.repr {
            QubitRepr::Pure(v) => ComplexMatrix::outer(v),
            QubitRepr::Mixed(m) => m.clone(),
        }
    }
}

/// Maps a pure fermionic state to qubits under `ordering`.
pub fn qubit_image_pure(state: &FockVector, ordering: &ModeOrdering) -> Result<QubitState> {
    check_ordering(state.system(), ordering)?;
    let amps = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(bits, &z)| z * f64::from(ordering.sign(bits)))
        .collect();
    QubitState::new(state.system().clone(), ordering.clone(), QubitRepr::Pure(amps))
}

/// Maps a fermionic density operator to qubits under `ordering`:
/// `q[k][l] = s(k) s(l) rho[k][l]`.
pub fn qubit_image(rho: &DensityOperator, ordering: &ModeOrdering) -> Result<QubitState> {
    check_ordering(rho.system(), ordering)?;
    let m = resign(rho.matrix(), ordering);
    QubitState::new(rho.system().clone(), ordering.clone(), QubitRepr::Mixed(m))
}

/// Reads a reduced qubit state back as a fermionic density operator over its
/// own modes, undoing the signs of `ordering` restricted to those modes.
pub fn inverse_image_restricted(q: &QubitState, ordering: &ModeOrdering) -> Result<DensityOperator> {
    let restricted = ordering.restricted_to(q.system())?;
    let m = resign(&q.density_matrix(), &restricted);
    Ok(DensityOperator::from_parts(q.system().clone(), m))
}

/// Multiplies entry `(k, l)` by `s(k) s(l)`.
fn resign(m: &ComplexMatrix, ordering: &ModeOrdering) -> ComplexMatrix {
    let dim = m.dim();
    let signs: Vec<i8> = (0..dim).map(|b| ordering.sign(b)).collect();
    let mut out = m.clone();
    for k in 0..dim {
        for l in 0..dim {
            let s = signs[k] * signs[l];
            out[(k, l)] = m[(k, l)] * f64::from(s);
        }
    }
    out
}

fn check_ordering(system: &ModeSystem, ordering: &ModeOrdering) -> Result<()> {
    let same = ordering.n_modes() == system.n_modes()
        && ordering
            .positions()
            .iter()
            .zip(ordering.labels())
            .all(|(&p, l)| system.label(p) == l);
    if same {
        Ok(())
    } else {
        Err(Error::InvalidOrdering(format!(
            "ordering {:?} does not belong to system {:?}",
            ordering.labels(),
            system.labels()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abcd() -> ModeSystem {
        ModeSystem::new(&["a", "b", "c", "d"], 2).unwrap()
    }

    fn bits(s: &str) -> OccupationBasisState {
        OccupationBasisState::parse(s).unwrap()
    }

    #[test]
    fn sign_examples() {
        let sys = abcd();
        let id = ModeOrdering::identity(&sys);
        for b in 0..16 {
            assert_eq!(id.sign(b), 1);
        }
        let adbc = ModeOrdering::new(&sys, &["a", "d", "b", "c"]).unwrap();
        assert_eq!(ordering_sign(&adbc, bits("0101")), -1);
        let abdc = ModeOrdering::new(&sys, &["a", "b", "d", "c"]).unwrap();
        assert_eq!(ordering_sign(&abdc, bits("1100")), 1);
        assert_eq!(ordering_sign(&abdc, bits("0011")), -1);
    }

    #[test]
    fn parse_forms() {
        let sys = abcd();
        let a = ModeOrdering::parse(&sys, r#"["a","d","b","c"]"#).unwrap();
        let b = ModeOrdering::parse(&sys, "a, d, b, c").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), r#"["a","d","b","c"]"#);
        assert!(ModeOrdering::parse(&sys, "a,b,c").is_err());
        assert!(ModeOrdering::parse(&sys, "a,b,c,c").is_err());
        assert!(ModeOrdering::parse(&sys, "a,b,c,z").is_err());
    }

    #[test]
    fn physical_classification() {
        let sys = ModeSystem::standard(2, 2).unwrap();
        let bp = BipartitionSpec::from_system(&sys).unwrap();
        let o = |l: [&str; 4]| ModeOrdering::new(&sys, &l).unwrap();
        assert!(is_physical(&o(["a1", "a2", "c1", "c2"]), &bp));
        assert!(is_physical(&o(["a1", "a2", "c2", "c1"]), &bp));
        assert!(!is_physical(&o(["a1", "c1", "a2", "c2"]), &bp));
        assert!(!kept_block_contiguous(&o(["a1", "c1", "a2", "c2"]), &bp));
        assert!(!is_physical(&o(["c1", "a2", "a1", "c2"]), &bp));
        assert!(kept_block_contiguous(&o(["c1", "a2", "a1", "c2"]), &bp));
    }

    #[test]
    fn vacuum_image_is_vacuum() {
        let sys = abcd();
        let vac = FockVector::vacuum(&sys);
        let o = ModeOrdering::new(&sys, &["d", "c", "b", "a"]).unwrap();
        let q = qubit_image_pure(&vac, &o).unwrap();
        assert_eq!(q.amplitudes().unwrap(), vac.amplitudes());
    }

    #[test]
    fn inverse_on_single_mode_and_full_round_trip() {
        let sys = abcd();
        let sub = sys.subsystem(&[0]).unwrap();
        let o = ModeOrdering::identity(&sys);
        let q = QubitState::new(
            sub.clone(),
            ModeOrdering::identity(&sub),
            QubitRepr::Mixed(ComplexMatrix::from_diagonal(&[0.0, 1.0])),
        )
        .unwrap();
        let back = inverse_image_restricted(&q, &o).unwrap();
        assert_eq!(back.matrix(), &ComplexMatrix::from_diagonal(&[0.0, 1.0]));

        let rho = crate::fock::random_state(&sys, crate::fock::Sector::Any, 2).density();
        let o = ModeOrdering::new(&sys, &["c", "a", "d", "b"]).unwrap();
        let back = inverse_image_restricted(&qubit_image(&rho, &o).unwrap(), &o).unwrap();
        assert_eq!(back.matrix(), rho.matrix());
    }

    #[test]
    fn inverse_rejects_foreign_subset() {
        let sys = abcd();
        let other = ModeSystem::new(&["x"], 1).unwrap();
        let q = QubitState::new(
            other.clone(),
            ModeOrdering::identity(&other),
            QubitRepr::Mixed(ComplexMatrix::from_diagonal(&[1.0, 0.0])),
        )
        .unwrap();
        assert!(matches!(
            inverse_image_restricted(&q, &ModeOrdering::identity(&sys)),
            Err(Error::InvalidSubset(_))
        ));
    }
}
