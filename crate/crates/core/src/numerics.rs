//! Small dense complex linear algebra.
//!
//! Everything downstream (negativity, trace distance, concurrence) only needs
//! the spectrum of modest Hermitian matrices, so this module carries a single
//! cyclic Jacobi eigensolver and the handful of matrix operations around it.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::Serialize;

use crate::error::{Error, Result};

/// Absolute entry tolerance used for Hermiticity and equality checks.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Off-diagonal Frobenius norm at which a Jacobi sweep is considered converged.
pub const JACOBI_OFF_TOL: f64 = 1e-13;

/// Maximum number of Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Builds a matrix from a row-major entry vector.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch { left: 0, right: 1 });
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: data.len(),
                right: dim * dim,
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: row.len(),
                    right: dim,
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(dim, data)
    }

    /// Real-valued convenience constructor.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Outer product |v><v|.
    pub fn outer(v: &[Complex64]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            if v[i] == ZERO {
                continue;
            }
            for j in 0..dim {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest entrywise modulus of `self - self^dagger`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() < tol
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc += self.data[i * n + j].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }
}

/// Serialized as a list of rows, each entry `[re, im]`.
impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.dim))?;
        for i in 0..self.dim {
            let row: Vec<[f64; 2]> = self.row(i).iter().map(|z| [z.re, z.im]).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Spectrum of a Hermitian matrix, sorted descending.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenResult {
    pub eigenvalues: Vec<f64>,
    /// Off-diagonal Frobenius norm left after the final sweep.
    pub residual: f64,
}

/// Full eigendecomposition `m = V diag(values) V^dagger`.
///
/// Column `k` of `vectors` is the eigenvector for `values[k]`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
    pub residual: f64,
}

impl EigenDecomposition {
    /// Rebuilds `V f(Λ) V^dagger` for a real function of the eigenvalues.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        let mut out = ComplexMatrix::zeros(n);
        for k in 0..n {
            let w = f(self.values[k]);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|x| x)
    }
}

/// Cyclic Jacobi diagonalisation of a Hermitian matrix.
///
/// Each rotation first rephases column `q` so that the pivot `m[p][q]` is
/// real, then applies a real Givens rotation annihilating it.
pub fn hermitian_eigen(m: &ComplexMatrix, tol: f64) -> Result<EigenDecomposition> {
    let deviation = m.hermitian_deviation();
    if !(deviation < tol) {
        return Err(Error::NotHermitian { deviation, tol });
    }
    let n = m.dim();
    let mut a = m.clone();
    // symmetrise so the iteration starts exactly Hermitian
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let threshold = JACOBI_OFF_TOL * a.frobenius_norm().max(1.0);

    let mut off = a.off_diagonal_norm();
    let mut sweeps = 0;
    while off >= threshold {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        off = a.off_diagonal_norm();
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = v[(row, src)];
        }
    }
    Ok(EigenDecomposition {
        values,
        vectors,
        residual: off,
    })
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r < f64::MIN_POSITIVE {
        return;
    }
    let n = a.dim();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // phase e^{-i phi} with apq = r e^{i phi}
    let phase = apq.conj() / r;

    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // columns: A <- A W, with W e_p = c e_p - s e^{-i phi} e_q, W e_q = s e_p + c e^{-i phi} e_q
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)] * phase;
        a[(k, p)] = akp * c - akq * s;
        a[(k, q)] = akp * s + akq * c;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)] * phase;
        v[(k, p)] = vkp * c - vkq * s;
        v[(k, q)] = vkp * s + vkq * c;
    }
    // rows: A <- W^dagger A
    let phase_c = phase.conj();
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)] * phase_c;
        a[(p, k)] = apk * c - aqk * s;
        a[(q, k)] = apk * s + aqk * c;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}

/// Real eigenvalues of a Hermitian matrix, sorted descending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix, tol: f64) -> Result<EigenResult> {
    let dec = hermitian_eigen(m, tol)?;
    Ok(EigenResult {
        eigenvalues: dec.values,
        residual: dec.residual,
    })
}

/// Sum of absolute eigenvalues.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    let eig = hermitian_eigenvalues(m, DEFAULT_TOL)?;
    Ok(eig.eigenvalues.iter().map(|x| x.abs()).sum())
}

/// Half the trace norm of `x - y`.
pub fn trace_distance(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<f64> {
    let diff = x.sub(y)?;
    Ok(0.5 * trace_norm(&diff)?)
}

/// Principal square root of a positive semidefinite Hermitian matrix.
///
/// Eigenvalues below zero (numerical noise) are clamped.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dec = hermitian_eigen(m, DEFAULT_TOL)?;
    Ok(dec.reconstruct_with(|x| x.max(0.0).sqrt()))
}
