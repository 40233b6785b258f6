use nalgebra::SVD;

use super::{identity, zeros, ComplexMatrix, DEFAULT_TOL};
use crate::error::{EacError, Result};

/// Orthonormality tolerance for stored isometries (Frobenius norm of `V^dagger V - I`).
const ISOMETRY_TOL: f64 = 1e-10;

/// A linear subspace stored as an isometry whose columns form an orthonormal basis.
///
/// A basis with zero columns encodes the zero subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: ComplexMatrix,
}

impl Subspace {
    /// Wraps an isometry, rejecting bases whose columns drift from orthonormality.
    pub fn from_isometry(basis: ComplexMatrix) -> Result<Self> {
        if basis.ncols() > basis.nrows() {
            return Err(EacError::DimensionMismatch {
                context: "subspace basis columns",
                expected: basis.nrows(),
                found: basis.ncols(),
            });
        }
        let drift = orthonormality_drift(&basis);
        if drift > ISOMETRY_TOL {
            return Err(EacError::NotOrthonormal { drift });
        }
        Ok(Self {
            ambient_dim: basis.nrows(),
            basis,
        })
    }

    /// Accepts a nearly orthonormal basis (drift up to `max_drift`) and
    /// re-orthonormalizes it by a thin QR factorization.
    pub fn from_nearly_orthonormal(basis: ComplexMatrix, max_drift: f64) -> Result<Self> {
        let drift = orthonormality_drift(&basis);
        if drift > max_drift || basis.ncols() > basis.nrows() {
            return Err(EacError::NotOrthonormal { drift });
        }
        if basis.ncols() == 0 {
            return Ok(Self::zero(basis.nrows()));
        }
        let q = basis.qr().q();
        Self::from_isometry(q)
    }

    /// Orthonormal basis for the span of arbitrary columns.
    pub fn span(ambient_dim: usize, columns: &[ComplexMatrix]) -> Result<Self> {
        let mut m = zeros(ambient_dim, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.nrows() != ambient_dim || c.ncols() != 1 {
                return Err(EacError::DimensionMismatch {
                    context: "subspace span column",
                    expected: ambient_dim,
                    found: c.nrows(),
                });
            }
            m.set_column(j, &c.column(0));
        }
        Ok(column_space(&m, DEFAULT_TOL))
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: identity(ambient_dim),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn into_basis(self) -> ComplexMatrix {
        self.basis
    }

    /// Orthogonal projector `V V^dagger`.
    pub fn projector(&self) -> ComplexMatrix {
        &self.basis * self.basis.adjoint()
    }

    /// `I - V V^dagger`.
    pub fn complement_projector(&self) -> ComplexMatrix {
        identity(self.ambient_dim) - self.projector()
    }

    /// Orthogonal complement in the ambient space.
    pub fn complement(&self) -> Subspace {
        nullspace(&self.basis.adjoint(), DEFAULT_TOL)
    }

    /// Restriction `V^dagger x V` of an ambient operator.
    pub fn restrict(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.basis.adjoint() * x * &self.basis
    }

    /// Image `u V` of the subspace under a unitary.
    pub fn transformed(&self, u: &ComplexMatrix) -> Result<Subspace> {
        if u.nrows() != self.ambient_dim || u.ncols() != self.ambient_dim {
            return Err(EacError::DimensionMismatch {
                context: "subspace transform",
                expected: self.ambient_dim,
                found: u.nrows(),
            });
        }
        Subspace::from_nearly_orthonormal(u * &self.basis, 1e-8)
    }
}

/// Frobenius norm of `V^dagger V - I`.
pub(crate) fn orthonormality_drift(basis: &ComplexMatrix) -> f64 {
    (basis.adjoint() * basis - identity(basis.ncols())).norm()
}

/// Null space of `m`: right singular vectors whose singular value is at most
/// `tol` times the largest singular value (or `tol` if `m` vanishes).
pub fn nullspace(m: &ComplexMatrix, tol: f64) -> Subspace {
    let n = m.ncols();
    if n == 0 {
        return Subspace::zero(0);
    }
    if m.iter().all(|z| z.norm() == 0.0) {
        return Subspace::full(n);
    }
    // A wide matrix gives only a thin V; zero rows complete it.
    let work = if m.nrows() < n {
        let mut padded = zeros(n, n);
        padded.rows_mut(0, m.nrows()).copy_from(m);
        padded
    } else {
        m.clone()
    };
    let svd = SVD::new(work, false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let threshold = tol * if sigma_max > 0.0 { sigma_max } else { 1.0 };
    let keep: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= threshold)
        .map(|(i, _)| i)
        .collect();
    let mut basis = zeros(n, keep.len());
    for (j, &i) in keep.iter().enumerate() {
        let row = v_t.row(i).adjoint();
        basis.set_column(j, &row.column(0));
    }
    Subspace { ambient_dim: n, basis }
}

/// Column space of `m`: left singular vectors above the relative threshold.
pub(crate) fn column_space(m: &ComplexMatrix, tol: f64) -> Subspace {
    let rows = m.nrows();
    if m.ncols() == 0 || m.iter().all(|z| z.norm() == 0.0) {
        return Subspace::zero(rows);
    }
    let svd = SVD::new(m.clone(), true, false);
    let u = svd.u.expect("left singular vectors requested");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s > tol * sigma_max)
        .map(|(i, _)| i)
        .collect();
    let mut basis = zeros(rows, keep.len());
    for (j, &i) in keep.iter().enumerate() {
        basis.set_column(j, &u.column(i));
    }
    Subspace { ambient_dim: rows, basis }
}

/// Intersection of subspaces as the joint null space of their complement
/// projectors. The empty intersection is the full space.
pub fn intersect(ambient_dim: usize, spaces: &[Subspace]) -> Result<Subspace> {
    if let Some(bad) = spaces.iter().find(|s| s.ambient_dim != ambient_dim) {
        return Err(EacError::DimensionMismatch {
            context: "intersect",
            expected: ambient_dim,
            found: bad.ambient_dim,
        });
    }
    if spaces.is_empty() {
        return Ok(Subspace::full(ambient_dim));
    }
    let mut stacked = zeros(ambient_dim * spaces.len(), ambient_dim);
    for (k, s) in spaces.iter().enumerate() {
        stacked
            .rows_mut(k * ambient_dim, ambient_dim)
            .copy_from(&s.complement_projector());
    }
    Ok(nullspace(&stacked, DEFAULT_TOL))
}
