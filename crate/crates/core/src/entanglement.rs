//! Entanglement measures on qubit images of fermionic states.
//!
//! Negativity uses the convention `N = (||rho^{T_B}||_1 - 1) / 2`, so a
//! two-qubit maximally entangled state scores `0.5`.
//!
//! Fermionic states have no ordering-free qubit image, so every measure here
//! either takes a [`QubitState`] (which records the ordering that produced it)
//! or an explicit [`ModeOrdering`]. There is no default ordering.

use num_complex::Complex64;
use serde::Serialize;

use crate::bipartition::BipartitionSpec;
use crate::error::{Error, Result};
use crate::fock::{DensityOperator, FockVector, ModeSystem, OperatorString};
use crate::numerics::{hermitian_eigen, hermitian_eigenvalues, psd_sqrt, trace_norm, ComplexMatrix, DEFAULT_TOL};
use crate::ordering::{qubit_image, ModeOrdering, QubitState};

/// Negative partial-transpose eigenvalue tolerated as separable.
pub const PPT_TOL: f64 = 1e-10;

/// Negativity values below this are reported as exactly zero.
pub const NEGATIVITY_CLAMP: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Negativity,
    Concurrence,
    Eof,
}

/// A measure value together with the bipartition and ordering behind it.
#[derive(Clone, Debug, Serialize)]
pub struct MeasureResult {
    pub value: f64,
    pub measure: Measure,
    pub bipartition: Option<BipartitionSpec>,
    pub ordering: Option<ModeOrdering>,
}

/// Transposes the traced-block indices of a matrix over mode bitstrings.
pub fn partial_transpose(m: &ComplexMatrix, system: &ModeSystem, bp: &BipartitionSpec) -> Result<ComplexMatrix> {
    bp.check_system(system)?;
    if m.dim() != system.dim() {
        return Err(Error::DimensionMismatch {
            left: m.dim(),
            right: system.dim(),
        });
    }
    Ok(transpose_bits(m, bp.traced_mask()))
}

fn transpose_bits(m: &ComplexMatrix, mask: usize) -> ComplexMatrix {
    let dim = m.dim();
    let keep = !mask;
    let mut out = ComplexMatrix::zeros(dim);
    for k in 0..dim {
        for l in 0..dim {
            let row = (k & keep) | (l & mask);
            let col = (l & keep) | (k & mask);
            out[(row, col)] = m[(k, l)];
        }
    }
    out
}

/// Negativity of a qubit state across `bp`.
pub fn negativity(q: &QubitState, bp: &BipartitionSpec) -> Result<MeasureResult> {
    let pt = partial_transpose(&q.density_matrix(), q.system(), bp)?;
    let raw = (trace_norm(&pt)? - 1.0) / 2.0;
    Ok(MeasureResult {
        value: if raw < NEGATIVITY_CLAMP { 0.0 } else { raw },
        measure: Measure::Negativity,
        bipartition: Some(bp.clone()),
        ordering: Some(q.ordering().clone()),
    })
}

/// Negativity of a fermionic state's qubit image under `ordering`.
pub fn fermionic_negativity(
    rho: &DensityOperator,
    bp: &BipartitionSpec,
    ordering: &ModeOrdering,
) -> Result<MeasureResult> {
    negativity(&qubit_image(rho, ordering)?, bp)
}

/// Number of block occupation patterns carrying weight on the diagonal, for
/// the kept and traced blocks.
///
/// A positive semidefinite matrix lives on the span of these patterns, so the
/// counts are the local dimensions that matter for separability.
pub fn effective_dimensions(m: &ComplexMatrix, bp: &BipartitionSpec) -> (usize, usize) {
    let (kept, traced) = support_patterns(m, bp);
    (kept.len(), traced.len())
}

fn support_patterns(m: &ComplexMatrix, bp: &BipartitionSpec) -> (Vec<usize>, Vec<usize>) {
    let kmask = bp.kept_mask();
    let tmask = bp.traced_mask();
    let mut kept = Vec::new();
    let mut traced = Vec::new();
    for i in 0..m.dim() {
        if m[(i, i)].re > DEFAULT_TOL {
            let (k, t) = (i & kmask, i & tmask);
            if !kept.contains(&k) {
                kept.push(k);
            }
            if !traced.contains(&t) {
                traced.push(t);
            }
        }
    }
    kept.sort_unstable();
    traced.sort_unstable();
    (kept, traced)
}

/// Peres-Horodecki test. Conclusive only when the effective local dimensions
/// are 2x2 or 2x3 (or one side is one-dimensional).
pub fn ppt_separable(q: &QubitState, bp: &BipartitionSpec) -> Result<bool> {
    let m = q.density_matrix();
    let (dk, dt) = effective_dimensions(&m, bp);
    let (lo, hi) = (dk.min(dt), dk.max(dt));
    if !(lo <= 1 || (lo == 2 && hi <= 3)) {
        return Err(Error::UnsupportedDimensions { kept: dk, traced: dt });
    }
    let pt = partial_transpose(&m, q.system(), bp)?;
    let eig = hermitian_eigenvalues(&pt, DEFAULT_TOL)?;
    Ok(eig.eigenvalues.last().copied().unwrap_or(0.0) >= -PPT_TOL)
}

/// A linear combination of creation-operator products.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CreatorPolynomial {
    pub terms: Vec<(Complex64, OperatorString)>,
}

impl CreatorPolynomial {
    pub fn single(ops: OperatorString) -> Self {
        Self {
            terms: vec![(Complex64::new(1.0, 0.0), ops)],
        }
    }

    fn apply(&self, v: &FockVector) -> Result<FockVector> {
        let mut acc = vec![Complex64::new(0.0, 0.0); v.system().dim()];
        for (coef, ops) in &self.terms {
            let w = v.apply_string(ops)?;
            for (a, b) in acc.iter_mut().zip(w.amplitudes()) {
                *a += coef * b;
            }
        }
        FockVector::new(v.system().clone(), acc)
    }
}

impl From<OperatorString> for CreatorPolynomial {
    fn from(ops: OperatorString) -> Self {
        Self::single(ops)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeparableTerm {
    pub weight: f64,
    /// Creators on the system's `a` block only.
    pub a: CreatorPolynomial,
    /// Creators on the system's `c` block only.
    pub b: CreatorPolynomial,
}

/// `rho = sum_i p_i A_i B_i |0><0| B_i^+ A_i^+`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SeparableDecomposition {
    pub terms: Vec<SeparableTerm>,
}

impl SeparableDecomposition {
    fn validate(&self, system: &ModeSystem) -> Result<()> {
        let bad = |msg: String| Err(Error::MalformedDecomposition(msg));
        if self.terms.is_empty() {
            return bad("no terms".into());
        }
        let mut total = 0.0;
        for (i, t) in self.terms.iter().enumerate() {
            if !(t.weight > 0.0) || !t.weight.is_finite() {
                return bad(format!("term {i}: weight {} is not positive", t.weight));
            }
            total += t.weight;
            for (side, poly, range) in [
                ("A", &t.a, 0..system.a_count()),
                ("B", &t.b, system.a_count()..system.n_modes()),
            ] {
                for (_, ops) in &poly.terms {
                    if !ops.only_creators() {
                        return bad(format!("term {i}: {side} `{ops}` contains an annihilator"));
                    }
                    for (label, _) in ops.factors() {
                        let pos = system.index_of(label)?;
                        if !range.contains(&pos) {
                            return bad(format!("term {i}: {side} acts on `{label}` outside its block"));
                        }
                    }
                }
            }
        }
        if (total - 1.0).abs() >= DEFAULT_TOL {
            return bad(format!("weights sum to {total}"));
        }
        Ok(())
    }
}

/// Builds the density operator of a separable decomposition with exact
/// fermionic signs. Each `A_i B_i |0>` is normalized before weighting.
pub fn build_separable(dec: &SeparableDecomposition, system: &ModeSystem) -> Result<DensityOperator> {
    dec.validate(system)?;
    let vacuum = FockVector::vacuum(system);
    let mut terms = Vec::with_capacity(dec.terms.len());
    for (i, t) in dec.terms.iter().enumerate() {
        let v = t.a.apply(&t.b.apply(&vacuum)?)?;
        let v = v
            .normalized()
            .map_err(|_| Error::MalformedDecomposition(format!("term {i} annihilates the vacuum")))?;
        terms.push((t.weight, v));
    }
    DensityOperator::mixture(&terms)
}

/// Binary entropy in bits.
pub fn binary_entropy(x: f64) -> f64 {
    let h = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    h(x) + h(1.0 - x)
}

/// Wootters concurrence and entanglement of formation of a two-qubit density
/// matrix (4x4, computational basis).
pub fn concurrence_and_eof(rho: &ComplexMatrix) -> Result<(MeasureResult, MeasureResult)> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: 4,
        });
    }
    // sigma_y (x) sigma_y: |00> <-> |11> with -1, |01> <-> |10> with +1
    let mut yy = ComplexMatrix::zeros(4);
    yy[(0, 3)] = Complex64::new(-1.0, 0.0);
    yy[(3, 0)] = Complex64::new(-1.0, 0.0);
    yy[(1, 2)] = Complex64::new(1.0, 0.0);
    yy[(2, 1)] = Complex64::new(1.0, 0.0);
    let flipped = yy.matmul(&rho.conj())?.matmul(&yy)?;
    let root = psd_sqrt(rho)?;
    let mut m = root.matmul(&flipped)?.matmul(&root)?;
    // symmetrise rounding before the Hermitian solver
    m = m.add(&m.adjoint())?.scale(Complex64::new(0.5, 0.0));
    let dec = hermitian_eigen(&m, DEFAULT_TOL)?;
    let l: Vec<f64> = dec.values.iter().map(|x| x.max(0.0).sqrt()).collect();
    let c = (l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0);
    let eof = binary_entropy((1.0 + (1.0 - c * c).max(0.0).sqrt()) / 2.0);
    let wrap = |value, measure| MeasureResult {
        value,
        measure,
        bipartition: None,
        ordering: None,
    };
    Ok((wrap(c, Measure::Concurrence), wrap(eof, Measure::Eof)))
}

/// Restricts a qubit state to its effective 2x2 support and returns the
/// 4x4 matrix, kept pattern as the low qubit.
///
/// One-dimensional supports are padded with an unused pattern.
pub fn effective_two_qubit(q: &QubitState, bp: &BipartitionSpec) -> Result<ComplexMatrix> {
    bp.check_system(q.system())?;
    let m = q.density_matrix();
    let (mut kept, mut traced) = support_patterns(&m, bp);
    if kept.len() > 2 || traced.len() > 2 {
        return Err(Error::UnsupportedDimensions {
            kept: kept.len(),
            traced: traced.len(),
        });
    }
    pad_support(&mut kept, bp.kept_mask());
    pad_support(&mut traced, bp.traced_mask());
    let mut out = ComplexMatrix::zeros(4);
    for (ti, &t) in traced.iter().enumerate() {
        for (ki, &k) in kept.iter().enumerate() {
            for (tj, &t2) in traced.iter().enumerate() {
                for (kj, &k2) in kept.iter().enumerate() {
                    out[(ki | ti << 1, kj | tj << 1)] = m[(k | t, k2 | t2)];
                }
            }
        }
    }
    Ok(out)
}

fn pad_support(patterns: &mut Vec<usize>, mask: usize) {
    let mut candidate = 0usize;
    while patterns.len() < 2 {
        // next sub-mask of `mask` not yet used
        let p = candidate & mask;
        if !patterns.contains(&p) {
            patterns.push(p);
        }
        candidate = (candidate | !mask).wrapping_add(1) & mask;
        if candidate == 0 {
            break;
        }
    }
}

/// Concurrence and entanglement of formation of a qubit state whose
/// effective local dimensions are at most two, with provenance attached.
pub fn two_qubit_measures(q: &QubitState, bp: &BipartitionSpec) -> Result<(MeasureResult, MeasureResult)> {
    let m = effective_two_qubit(q, bp)?;
    let (mut c, mut e) = concurrence_and_eof(&m)?;
    for r in [&mut c, &mut e] {
        r.bipartition = Some(bp.clone());
        r.ordering = Some(q.ordering().clone());
    }
    Ok((c, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordering::QubitRepr;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn two_modes() -> (ModeSystem, BipartitionSpec) {
        let sys = ModeSystem::new(&["a", "c"], 1).unwrap();
        let bp = BipartitionSpec::from_system(&sys).unwrap();
        (sys, bp)
    }

    fn qubit(sys: &ModeSystem, m: ComplexMatrix) -> QubitState {
        QubitState::new(sys.clone(), ModeOrdering::identity(sys), QubitRepr::Mixed(m)).unwrap()
    }

    fn bell() -> ComplexMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::outer(&[c(h), c(0.0), c(0.0), c(h)])
    }

    #[test]
    fn partial_transpose_of_diagonal_is_identity_map() {
        let (sys, bp) = two_modes();
        let d = ComplexMatrix::from_diagonal(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(partial_transpose(&d, &sys, &bp).unwrap(), d);
    }

    #[test]
    fn partial_transpose_product() {
        let (sys, bp) = two_modes();
        // sigma (a) on bit 0, tau (c) on bit 1, tau complex so tau^T != tau
        let sigma = [[0.7, 0.2], [0.2, 0.3]];
        let tau = [[c(0.4), Complex64::new(0.1, 0.2)], [Complex64::new(0.1, -0.2), c(0.6)]];
        let mut m = ComplexMatrix::zeros(4);
        let mut expect = ComplexMatrix::zeros(4);
        for k in 0..4 {
            for l in 0..4 {
                let s = sigma[k & 1][l & 1];
                m[(k, l)] = tau[k >> 1][l >> 1] * s;
                expect[(k, l)] = tau[l >> 1][k >> 1] * s;
            }
        }
        let pt = partial_transpose(&m, &sys, &bp).unwrap();
        assert!(pt.max_abs_diff(&expect).unwrap() < 1e-16);
        assert!(ppt_separable(&qubit(&sys, m), &bp).unwrap());
    }

    #[test]
    fn bell_measures() {
        let (sys, bp) = two_modes();
        let q = qubit(&sys, bell());
        assert!((negativity(&q, &bp).unwrap().value - 0.5).abs() < 1e-12);
        assert!(!ppt_separable(&q, &bp).unwrap());
        let (conc, eof) = concurrence_and_eof(&bell()).unwrap();
        assert!((conc.value - 1.0).abs() < 1e-7);
        assert!((eof.value - 1.0).abs() < 1e-7);
    }

    #[test]
    fn maximally_mixed_is_ppt() {
        let (sys, bp) = two_modes();
        let q = qubit(&sys, ComplexMatrix::identity(4).scale(c(0.25)));
        assert!(ppt_separable(&q, &bp).unwrap());
        assert_eq!(negativity(&q, &bp).unwrap().value, 0.0);
    }

    #[test]
    fn product_state_measures() {
        let rho = ComplexMatrix::outer(&[c(0.6), c(0.8), c(0.0), c(0.0)]);
        let (conc, eof) = concurrence_and_eof(&rho).unwrap();
        assert!(conc.value < 1e-7);
        assert!(eof.value < 1e-6);
    }

    #[test]
    fn ppt_rejects_large_blocks() {
        let sys = ModeSystem::standard(2, 2).unwrap();
        let bp = BipartitionSpec::from_system(&sys).unwrap();
        let q = qubit(&sys, ComplexMatrix::identity(16).scale(c(1.0 / 16.0)));
        assert!(matches!(
            ppt_separable(&q, &bp),
            Err(Error::UnsupportedDimensions { kept: 4, traced: 4 })
        ));
    }

    #[test]
    fn separable_examples() {
        let (sys, bp) = two_modes();
        let single = SeparableDecomposition {
            terms: vec![SeparableTerm {
                weight: 1.0,
                a: OperatorString::parse("a+").unwrap().into(),
                b: OperatorString::parse("c+").unwrap().into(),
            }],
        };
        let rho = build_separable(&single, &sys).unwrap();
        assert_eq!(rho.matrix(), &ComplexMatrix::from_diagonal(&[0.0, 0.0, 0.0, 1.0]));
        let id = ModeOrdering::identity(&sys);
        assert_eq!(fermionic_negativity(&rho, &bp, &id).unwrap().value, 0.0);

        let half = SeparableDecomposition {
            terms: vec![
                SeparableTerm {
                    weight: 0.5,
                    a: OperatorString::parse("a+").unwrap().into(),
                    b: OperatorString::parse("c+").unwrap().into(),
                },
                SeparableTerm {
                    weight: 0.5,
                    a: OperatorString::identity().into(),
                    b: OperatorString::identity().into(),
                },
            ],
        };
        let rho = build_separable(&half, &sys).unwrap();
        assert_eq!(rho.matrix(), &ComplexMatrix::from_diagonal(&[0.5, 0.0, 0.0, 0.5]));
        assert_eq!(fermionic_negativity(&rho, &bp, &id).unwrap().value, 0.0);
    }

    #[test]
    fn malformed_decompositions() {
        let (sys, _) = two_modes();
        let term = |w: f64, a: &str, b: &str| SeparableTerm {
            weight: w,
            a: OperatorString::parse(a).unwrap().into(),
            b: OperatorString::parse(b).unwrap().into(),
        };
        let cases = [
            vec![],
            vec![term(0.5, "a+", "c+")],
            vec![term(1.0, "c+", "")],
            vec![term(1.0, "a-", "")],
            vec![term(1.0, "a+ a+", "")],
            vec![term(1.5, "", ""), term(-0.5, "a+", "")],
        ];
        for terms in cases {
            let dec = SeparableDecomposition { terms };
            assert!(
                matches!(build_separable(&dec, &sys), Err(Error::MalformedDecomposition(_))),
                "{dec:?}"
            );
        }
    }

    #[test]
    fn binary_entropy_endpoints() {
        assert_eq!(binary_entropy(1.0), 0.0);
        assert_eq!(binary_entropy(0.0), 0.0);
        assert!((binary_entropy(0.5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn effective_two_qubit_pads() {
        let (sys, bp) = two_modes();
        let q = qubit(&sys, ComplexMatrix::from_diagonal(&[0.0, 1.0, 0.0, 0.0]));
        let m = effective_two_qubit(&q, &bp).unwrap();
        assert!((m.trace().re - 1.0).abs() < 1e-15);
    }
}
