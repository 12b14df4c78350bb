//! Independent oracles shared by the integration suites.
//!
//! Nothing here goes through the bitstring sign logic of the library: mode
//! operators are explicit Jordan-Wigner matrices built from Kronecker
//! products, and spectra come from nalgebra.

#![allow(dead_code)]

use fermiorder::entanglement::{CreatorPolynomial, SeparableDecomposition, SeparableTerm};
use fermiorder::{BipartitionSpec, ComplexMatrix, ModeSystem, OperatorString};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type IntMatrix = Vec<Vec<i64>>;

fn kron(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![0; ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// Jordan-Wigner matrix of the ladder operator on mode `k` of `n` modes.
///
/// Basis index `sum_j bit_j 2^j`, so mode 0 is the rightmost Kronecker
/// factor. Modes before `k` carry `diag(1, -1)`.
pub fn jw_ladder(n: usize, k: usize, creation: bool) -> IntMatrix {
    let id = vec![vec![1, 0], vec![0, 1]];
    let z = vec![vec![1, 0], vec![0, -1]];
    let raise = vec![vec![0, 0], vec![1, 0]];
    let lower = vec![vec![0, 1], vec![0, 0]];
    let mut m = vec![vec![1]];
    for j in (0..n).rev() {
        let factor = if j < k {
            &z
        } else if j == k {
            if creation {
                &raise
            } else {
                &lower
            }
        } else {
            &id
        };
        m = kron(&m, factor);
    }
    m
}

pub fn to_dense(m: &ComplexMatrix) -> DMatrix<Complex64> {
    let n = m.dim();
    DMatrix::from_fn(n, n, |i, j| m[(i, j)])
}

pub fn from_dense(m: &DMatrix<Complex64>) -> ComplexMatrix {
    let n = m.nrows();
    let rows: Vec<Vec<Complex64>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)]).collect()).collect();
    ComplexMatrix::from_rows(&rows).unwrap()
}

pub fn int_to_dense(m: &IntMatrix) -> DMatrix<Complex64> {
    let n = m.len();
    DMatrix::from_fn(n, n, |i, j| Complex64::new(m[i][j] as f64, 0.0))
}

/// Eigenvalues (descending) from nalgebra's Hermitian solver.
pub fn oracle_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let eig = to_dense(m).symmetric_eigen();
    let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

pub fn oracle_trace_norm(m: &ComplexMatrix) -> f64 {
    oracle_eigenvalues(m).iter().map(|x| x.abs()).sum()
}

/// Fermionic partial trace from dense Jordan-Wigner matrices:
/// `sum_j P (C_j rho C_j^+) P` restricted to traced-vacuum rows and columns.
pub fn oracle_fermionic_trace(rho: &ComplexMatrix, n_modes: usize, bp: &BipartitionSpec) -> ComplexMatrix {
    let dim = 1 << n_modes;
    let traced = bp.traced_positions();
    let kept = bp.kept_positions();
    let rho = to_dense(rho);
    let annihilators: Vec<DMatrix<Complex64>> = traced
        .iter()
        .map(|&p| int_to_dense(&jw_ladder(n_modes, p, false)))
        .collect();
    let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
    for j in 0..(1usize << traced.len()) {
        // C_j = c_m^{j_m} ... c_1^{j_1}
        let mut c = DMatrix::<Complex64>::identity(dim, dim);
        for (i, a) in annihilators.iter().enumerate() {
            if j >> i & 1 == 1 {
                c = a * c;
            }
        }
        acc += &c * &rho * c.adjoint();
    }
    let kdim = 1 << kept.len();
    let spread = |x: usize| {
        kept.iter()
            .enumerate()
            .filter(|(i, _)| x >> i & 1 == 1)
            .fold(0, |m, (_, &p)| m | (1 << p))
    };
    from_dense(&DMatrix::from_fn(kdim, kdim, |i, j| acc[(spread(i), spread(j))]))
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        m[(i, i)] = Complex64::new(rng.sample(StandardNormal), 0.0);
        for j in (i + 1)..dim {
            let z = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Random unitary from the QR factor of a complex Gaussian matrix.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    from_dense(&g.qr().q())
}

/// Random density matrix `G G^+ / tr`.
pub fn random_density(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let m = &g * g.adjoint();
    let tr = m.trace();
    from_dense(&(m / tr))
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// All creation-operator monomials on `labels` (canonical order).
fn monomials(labels: &[String]) -> Vec<OperatorString> {
    (0..(1usize << labels.len()))
        .map(|mask| {
            let chosen: Vec<&str> = labels
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, l)| l.as_str())
                .collect();
            OperatorString::creators(&chosen)
        })
        .collect()
}

/// Random separable decomposition over the system's `a | c` split.
///
/// Each local factor is a Gaussian combination of creation monomials drawn
/// from at most `max_patterns_b` monomials on the traced block (so the traced
/// support can be capped at three for PPT-conclusive 2x3 cases).
pub fn random_separable(
    system: &ModeSystem,
    max_patterns_b: usize,
    rng: &mut ChaCha8Rng,
) -> SeparableDecomposition {
    let a_labels = system.labels()[..system.a_count()].to_vec();
    let b_labels = system.labels()[system.a_count()..].to_vec();
    let a_monos = monomials(&a_labels);
    let mut b_monos = monomials(&b_labels);
    b_monos.shuffle(rng);
    b_monos.truncate(max_patterns_b);

    let n_terms = rng.random_range(1..=4);
    let raw: Vec<f64> = (0..n_terms).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    // exact unit sum
    let rest: f64 = weights[1..].iter().sum();
    weights[0] = 1.0 - rest;

    let terms = weights
        .into_iter()
        .map(|weight| SeparableTerm {
            weight,
            a: CreatorPolynomial {
                terms: a_monos.iter().map(|m| (gaussian(rng), m.clone())).collect(),
            },
            b: CreatorPolynomial {
                terms: b_monos.iter().map(|m| (gaussian(rng), m.clone())).collect(),
            },
        })
        .collect();
    SeparableDecomposition { terms }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
