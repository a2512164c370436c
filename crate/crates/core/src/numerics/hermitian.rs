//! Hermitian log-determinant and eigendecomposition.
//!
//! `log_det_i_plus` uses a Cholesky factorization of `I + scale·G`; the eigen
//! routines use nalgebra's Hermitian eigensolver. Tests cross-check the two.

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Absolute tolerance on Hermitian symmetry and on negative PSD eigenvalues.
pub const HERMITIAN_TOL: f64 = 1e-9;

const EIGEN_MAX_ITER: usize = 10_000;

fn ensure_hermitian(m: &ComplexMatrix) -> Result<()> {
    match m.hermitian_deviation() {
        None => Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        ))),
        Some(dev) if dev > HERMITIAN_TOL || dev.is_nan() => Err(Error::NonHermitianInput { deviation: dev }),
        Some(_) => Ok(()),
    }
}

fn to_dmatrix(m: &ComplexMatrix) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

/// `ln det(I + scale·gram)` in nats for a Hermitian PSD `gram`.
pub fn log_det_i_plus(scale: f64, gram: &ComplexMatrix) -> Result<f64> {
    if !(scale >= 0.0 && scale.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "scale must be finite and >= 0, got {scale}"
        )));
    }
    ensure_hermitian(gram)?;
    let n = gram.rows();
    let mut a = to_dmatrix(gram) * Complex64::new(scale, 0.0);
    for i in 0..n {
        a[(i, i)] = Complex64::new(1.0 + a[(i, i)].re, 0.0);
    }
    let chol = Cholesky::new(a)
        .ok_or_else(|| Error::NumericalBreakdown("Cholesky factorization failed; input is not PSD".into()))?;
    let l = chol.l_dirty();
    // A negative pivot comes back as an imaginary diagonal entry, not a failure.
    if let Some(j) = (0..n).find(|&j| {
        let d = l[(j, j)];
        d.im != 0.0 || d.re.is_nan() || d.re <= 0.0
    }) {
        return Err(Error::NumericalBreakdown(format!(
            "non-positive pivot at column {j}; input is not PSD"
        )));
    }
    let log_det: f64 = (0..n).map(|j| 2.0 * l[(j, j)].re.ln()).sum();
    if !log_det.is_finite() {
        return Err(Error::NumericalBreakdown(format!("log-determinant is {log_det}")));
    }
    Ok(log_det.max(0.0))
}

/// Eigenvalues (descending) and unit eigenvectors (columns of `vectors`).
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Eigenvector for `values[k]`.
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (0..n)
                    .map(|k| self.vectors[(i, k)] * self.values[k] * self.vectors[(j, k)].conj())
                    .sum();
            }
        }
        out
    }
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    ensure_hermitian(m)?;
    let n = m.rows();
    if n == 0 {
        return Ok(HermitianEigen {
            values: Vec::new(),
            vectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::try_new(to_dmatrix(m), f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or_else(|| Error::NumericalBreakdown("eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, dst)] = eig.eigenvectors[(i, src)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues of a Hermitian matrix, sorted descending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(m)?.values)
}

/// Eigenvalues of a Hermitian PSD matrix; values in `[-1e-9, 0)` are clamped to zero.
pub fn psd_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let mut values = hermitian_eigenvalues(m)?;
    for v in &mut values {
        if *v < 0.0 && *v >= -HERMITIAN_TOL {
            *v = 0.0;
        }
    }
    Ok(values)
}
