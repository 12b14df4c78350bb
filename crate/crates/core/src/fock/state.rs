use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eigenvalues, ComplexMatrix, DEFAULT_TOL};

use super::operator::act_sequence;
use super::{LadderOp, ModeSystem, OccupationBasisState, OperatorString, Sector};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Smallest eigenvalue tolerated in a density operator.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Pure state: one amplitude per occupation bitstring of the system.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    system: ModeSystem,
    amplitudes: Vec<Complex64>,
}

impl FockVector {
    pub fn new(system: ModeSystem, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != system.dim() {
            return Err(Error::DimensionMismatch {
                left: amplitudes.len(),
                right: system.dim(),
            });
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { system, amplitudes })
    }

    pub fn zero(system: &ModeSystem) -> Self {
        Self {
            amplitudes: vec![ZERO; system.dim()],
            system: system.clone(),
        }
    }

    pub fn vacuum(system: &ModeSystem) -> Self {
        Self::basis(system, 0)
    }

    pub fn basis(system: &ModeSystem, bits: usize) -> Self {
        let mut v = Self::zero(system);
        v.amplitudes[bits] = Complex64::new(1.0, 0.0);
        v
    }

    /// Applies `ops` right to left to the vacuum.
    pub fn from_operator_string(ops: &OperatorString, system: &ModeSystem) -> Result<Self> {
        Self::vacuum(system).apply_string(ops)
    }

    /// Parses `coef: ops; coef: ops; ...` and normalizes the result.
    ///
    /// A coefficient is a real number or a complex pair `(re,im)`; omitting
    /// `coef:` means 1.
    pub fn from_superposition(system: &ModeSystem, text: &str) -> Result<Self> {
        let mut acc = Self::zero(system);
        let mut terms = 0;
        for term in text.split(';') {
            let term = term.trim();
            if term.is_empty() {
                continue;
            }
            let (coef, ops) = match term.split_once(':') {
                Some((c, o)) => (parse_coefficient(c.trim())?, o),
                None => (Complex64::new(1.0, 0.0), term),
            };
            let ops = OperatorString::parse(ops)?;
            let v = Self::from_operator_string(&ops, system)?;
            for (a, b) in acc.amplitudes.iter_mut().zip(&v.amplitudes) {
                *a += coef * b;
            }
            terms += 1;
        }
        if terms == 0 {
            return Err(Error::Parse("empty superposition".into()));
        }
        acc.normalized()
    }

    pub fn system(&self) -> &ModeSystem {
        &self.system
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, bits: usize) -> Complex64 {
        self.amplitudes[bits]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() < DEFAULT_TOL
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes.iter().all(|z| *z == ZERO)
    }

    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        for z in &mut self.amplitudes {
            *z /= norm;
        }
        Ok(self)
    }

    /// Applies one ladder operator. The result is not renormalized.
    pub fn apply(&self, op: LadderOp) -> Result<Self> {
        if op.mode >= self.system.n_modes() {
            return Err(Error::UnknownMode(format!("position {}", op.mode)));
        }
        Ok(self.apply_resolved(&[op]))
    }

    pub fn apply_string(&self, ops: &OperatorString) -> Result<Self> {
        let resolved = ops.resolve(&self.system)?;
        Ok(self.apply_resolved(&resolved))
    }

    fn apply_resolved(&self, ops: &[LadderOp]) -> Self {
        let mut out = Self::zero(&self.system);
        for (bits, &amp) in self.amplitudes.iter().enumerate() {
            if amp == ZERO {
                continue;
            }
            if let Some((sign, nb)) = act_sequence(ops, bits) {
                out.amplitudes[nb] += amp * f64::from(sign);
            }
        }
        out
    }

    /// All amplitudes above tolerance share one total parity.
    pub fn ssr_compliant(&self) -> bool {
        let mut parity = None;
        for (bits, amp) in self.amplitudes.iter().enumerate() {
            if amp.norm() <= DEFAULT_TOL {
                continue;
            }
            let p = bits.count_ones() % 2;
            match parity {
                None => parity = Some(p),
                Some(q) if q != p => return false,
                _ => {}
            }
        }
        true
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator::from_pure(self)
    }

    pub fn to_json(&self) -> Result<String> {
        let n = self.system.n_modes();
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(_, z)| **z != ZERO)
            .map(|(bits, z)| {
                (
                    OccupationBasisState::new(bits, n).to_string(),
                    [z.re, z.im],
                )
            })
            .collect();
        Ok(serde_json::to_string(&StateJson {
            modes: self.system.labels().to_vec(),
            amplitudes,
        })?)
    }

    /// Reads the JSON state form; the first `a_count` modes form the `a` block.
    pub fn from_json(text: &str, a_count: usize) -> Result<Self> {
        let parsed: StateJson = serde_json::from_str(text)?;
        let system = ModeSystem::new(&parsed.modes, a_count)?;
        let mut v = Self::zero(&system);
        for (key, [re, im]) in parsed.amplitudes {
            let basis = OccupationBasisState::parse(&key)?;
            if basis.n_modes() != system.n_modes() {
                return Err(Error::Parse(format!(
                    "bitstring `{key}` has {} modes, system has {}",
                    basis.n_modes(),
                    system.n_modes()
                )));
            }
            v.amplitudes[basis.bits()] = Complex64::new(re, im);
        }
        Self::new(system, v.amplitudes)
    }
}

#[derive(Serialize, Deserialize)]
struct StateJson {
    modes: Vec<String>,
    amplitudes: BTreeMap<String, [f64; 2]>,
}

fn parse_coefficient(text: &str) -> Result<Complex64> {
    let bad = || Error::Parse(format!("invalid coefficient `{text}`"));
    if let Some(inner) = text.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        let (re, im) = inner.split_once(',').ok_or_else(bad)?;
        let re: f64 = re.trim().parse().map_err(|_| bad())?;
        let im: f64 = im.trim().parse().map_err(|_| bad())?;
        return Ok(Complex64::new(re, im));
    }
    let re: f64 = text.parse().map_err(|_| bad())?;
    if !re.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, 0.0))
}

/// Density operator in the canonical occupation basis: row = ket bitstring,
/// column = bra bitstring.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    system: ModeSystem,
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(system: ModeSystem, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dim() != system.dim() {
            return Err(Error::DimensionMismatch {
                left: matrix.dim(),
                right: system.dim(),
            });
        }
        let dev = matrix.hermitian_deviation();
        if dev >= DEFAULT_TOL {
            return Err(Error::NotHermitian {
                deviation: dev,
                tol: DEFAULT_TOL,
            });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() >= DEFAULT_TOL || tr.im.abs() >= DEFAULT_TOL {
            return Err(Error::InvalidDensity(format!("trace is {tr}")));
        }
        let eig = hermitian_eigenvalues(&matrix, DEFAULT_TOL)?;
        let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -POSITIVITY_TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { system, matrix })
    }

    /// Wraps a matrix produced by a trace-preserving map of a valid density.
    pub(crate) fn from_parts(system: ModeSystem, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.dim(), system.dim());
        Self { system, matrix }
    }

    pub fn from_pure(state: &FockVector) -> Self {
        Self {
            system: state.system.clone(),
            matrix: ComplexMatrix::outer(&state.amplitudes),
        }
    }

    /// Convex combination of pure states.
    pub fn mixture(terms: &[(f64, FockVector)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidDensity("empty mixture".into()))?;
        let system = first.1.system.clone();
        let mut m = ComplexMatrix::zeros(system.dim());
        for (p, v) in terms {
            if v.system != system {
                return Err(Error::InvalidDensity("mixture over different systems".into()));
            }
            m = m.add(&ComplexMatrix::outer(&v.amplitudes).scale(Complex64::new(*p, 0.0)))?;
        }
        Self::new(system, m)
    }

    pub fn system(&self) -> &ModeSystem {
        &self.system
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Block diagonal in total parity (no element above tolerance links
    /// bitstrings of different parity).
    pub fn ssr_compliant(&self) -> bool {
        let dim = self.matrix.dim();
        for i in 0..dim {
            for j in 0..dim {
                if (i.count_ones() + j.count_ones()) % 2 == 1
                    && self.matrix[(i, j)].norm() > DEFAULT_TOL
                {
                    return false;
                }
            }
        }
        true
    }
}

/// Complex Gaussian amplitudes on the chosen parity sector, normalized.
/// Deterministic in `seed`.
pub fn random_state(system: &ModeSystem, sector: Sector, seed: u64) -> FockVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = FockVector::zero(system);
    for (bits, amp) in v.amplitudes.iter_mut().enumerate() {
        if sector.contains(bits) {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            *amp = Complex64::new(re, im);
        }
    }
    // a Gaussian draw is zero with probability zero; every sector is non-empty
    v.normalized().expect("Gaussian sample is non-zero")
}
