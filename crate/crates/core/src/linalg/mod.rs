//! Dense complex linear algebra shared by every other layer.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. Composite spaces use the
//! convention that the system factor is the slow (leftmost) tensor index, so
//! the joint index of `(s, e)` is `s * d_e + e`.

mod spectral;
mod subspace;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{EacError, Result};

pub use spectral::{check_commuting_family, hermitian_propagator, simultaneous_eigenspaces, HermitianSpectrum, JointEigenspace};
pub use subspace::{intersect, nullspace, Subspace};

pub type ComplexMatrix = DMatrix<Complex64>;

/// Default relative tolerance for rank and residual decisions.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Tolerance for Hermiticity preconditions.
pub const HERMITIAN_TOL: f64 = 1e-10;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(rows, cols)
}

/// Builds a matrix from real entries given row by row.
pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> ComplexMatrix {
    assert_eq!(entries.len(), rows * cols, "entry count must equal rows * cols");
    ComplexMatrix::from_fn(rows, cols, |i, j| Complex64::new(entries[i * cols + j], 0.0))
}

/// Kronecker product; entry `((i1, i2), (j1, j2))` is `a[i1, j1] * b[i2, j2]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Kronecker product of a list of factors, leftmost factor slowest.
pub fn kron_all<'a, It>(factors: It) -> ComplexMatrix
where
    It: IntoIterator<Item = &'a ComplexMatrix>,
{
    factors
        .into_iter()
        .fold(identity(1), |acc, f| acc.kronecker(f))
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

/// Hilbert-Schmidt inner product `tr(a^dagger b)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    a.dotc(b)
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    m.diagonal().sum()
}

/// `||h - h^dagger||_F / max(1, ||h||_F)`.
pub fn hermiticity_residual(h: &ComplexMatrix) -> f64 {
    (h - h.adjoint()).norm() / h.norm().max(1.0)
}

pub fn ensure_square(m: &ComplexMatrix, context: &'static str) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(EacError::DimensionMismatch {
            context,
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    Ok(m.nrows())
}

pub fn ensure_hermitian(h: &ComplexMatrix, tol: f64) -> Result<()> {
    let residual = hermiticity_residual(h);
    if residual > tol {
        return Err(EacError::NotHermitian { residual });
    }
    Ok(())
}

/// `(h + h^dagger) / 2`.
pub fn hermitian_part(h: &ComplexMatrix) -> ComplexMatrix {
    (h + h.adjoint()).scale(0.5)
}

/// Traces out the environment (fast) factor of a `(d_s * d_e)`-square matrix.
pub fn partial_trace_env(m: &ComplexMatrix, d_s: usize, d_e: usize) -> Result<ComplexMatrix> {
    let n = d_s * d_e;
    if m.nrows() != n || m.ncols() != n {
        return Err(EacError::DimensionMismatch {
            context: "partial_trace_env",
            expected: n,
            found: if m.nrows() != n { m.nrows() } else { m.ncols() },
        });
    }
    Ok(ComplexMatrix::from_fn(d_s, d_s, |i, j| {
        (0..d_e).map(|k| m[(i * d_e + k, j * d_e + k)]).sum()
    }))
}

/// Gram-Schmidt under the Hilbert-Schmidt inner product.
///
/// A candidate whose residual norm after projection is `<= tol` is dropped.
/// Each candidate is projected twice, which keeps the output orthonormal to
/// machine precision even for nearly dependent inputs.
pub fn hs_orthonormalize(ms: &[ComplexMatrix], tol: f64) -> Vec<ComplexMatrix> {
    let mut basis: Vec<ComplexMatrix> = Vec::with_capacity(ms.len());
    for m in ms {
        if let Some(next) = orthogonal_residual(&basis, m) {
            let norm = next.norm();
            if norm > tol {
                basis.push(next.unscale(norm));
            }
        }
    }
    basis
}

/// Component of `m` orthogonal to the span of an HS-orthonormal `basis`.
pub(crate) fn orthogonal_residual(basis: &[ComplexMatrix], m: &ComplexMatrix) -> Option<ComplexMatrix> {
    if let Some(first) = basis.first() {
        if first.shape() != m.shape() {
            return None;
        }
    }
    let mut r = m.clone();
    for _ in 0..2 {
        for b in basis {
            let c = hs_inner(b, &r);
            r -= b * c;
        }
    }
    Some(r)
}

/// Spectral norm (largest singular value).
pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

/// `max_ij |a_ij - b_ij|`.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Pauli matrices in the computational basis.
pub mod pauli {
    use super::{ComplexMatrix, I, ONE, ZERO};

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
    }
}
