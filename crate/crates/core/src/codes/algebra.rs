//! Dynamical algebra generated by the error operators.

use num_complex::Complex64;

use crate::error::{EacError, Result};
use crate::linalg::{commutator, ensure_square, hs_orthonormalize, nullspace, orthogonal_residual, zeros, ComplexMatrix, Subspace, I};

/// Commutator-norm threshold for the abelian flag.
const ABELIAN_TOL: f64 = 1e-10;

/// Hilbert-Schmidt orthonormal basis of a matrix Lie algebra.
#[derive(Debug, Clone)]
pub struct OperatorAlgebra {
    pub ambient_dim: usize,
    pub basis: Vec<ComplexMatrix>,
    pub closed: bool,
    pub abelian: bool,
}

impl OperatorAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// True when the algebra equals its derived algebra.
    ///
    /// Closures of Hermitian generators are compact, hence reductive, so a
    /// perfect algebra has trivial center and is semisimple.
    pub fn is_semisimple(&self, tol: f64) -> bool {
        if self.basis.is_empty() {
            return false;
        }
        let mut brackets = Vec::new();
        for i in 0..self.basis.len() {
            for j in i + 1..self.basis.len() {
                brackets.push(hermitian_bracket(&self.basis[i], &self.basis[j]));
            }
        }
        let scale = brackets.iter().map(|b| b.norm()).fold(1.0, f64::max);
        hs_orthonormalize(&brackets, tol * scale).len() == self.basis.len()
    }

    /// Largest deviation of a basis commutator from the span of the basis.
    pub fn closure_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.basis.len() {
            for j in i + 1..self.basis.len() {
                let c = hermitian_bracket(&self.basis[i], &self.basis[j]);
                if let Some(r) = orthogonal_residual(&self.basis, &c) {
                    worst = worst.max(r.norm());
                }
            }
        }
        worst
    }
}

/// `i [a, b]`, Hermitian whenever `a` and `b` are.
pub fn hermitian_bracket(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    commutator(a, b) * I
}

/// Lie closure of `generators` under `i [A, B]`.
///
/// New brackets are adjoined when their residual against the current basis
/// exceeds `tol * max(1, ||bracket||_F)`. Iteration stops when a full sweep
/// adds nothing, or fails once the basis grows past `max_dim`.
pub fn lie_closure(generators: &[ComplexMatrix], max_dim: usize, tol: f64) -> Result<OperatorAlgebra> {
    let first = generators
        .first()
        .ok_or_else(|| EacError::InvalidArgument("no generators to close".into()))?;
    let n = ensure_square(first, "lie_closure")?;
    for g in generators {
        if g.nrows() != n || g.ncols() != n {
            return Err(EacError::DimensionMismatch {
                context: "lie_closure",
                expected: n,
                found: g.nrows(),
            });
        }
    }

    let abelian = generators.iter().enumerate().all(|(i, a)| {
        generators[i + 1..]
            .iter()
            .all(|b| commutator(a, b).norm() <= ABELIAN_TOL * (a.norm() * b.norm()).max(1.0))
    });

    let scale = generators.iter().map(|g| g.norm()).fold(1.0, f64::max);
    let mut basis = hs_orthonormalize(generators, tol * scale);
    if basis.len() > max_dim {
        return Err(EacError::ClosureDimensionExceeded { max_dim, partial: basis });
    }

    let mut fresh_from = 0;
    loop {
        let size = basis.len();
        for j in fresh_from..size {
            for i in 0..j {
                let c = hermitian_bracket(&basis[i], &basis[j]);
                let Some(r) = orthogonal_residual(&basis, &c) else {
                    continue;
                };
                let norm = r.norm();
                if norm > tol * c.norm().max(1.0) {
                    basis.push(r.unscale(norm));
                    if basis.len() > max_dim {
                        return Err(EacError::ClosureDimensionExceeded { max_dim, partial: basis });
                    }
                }
            }
        }
        if basis.len() == size {
            break;
        }
        fresh_from = size;
    }

    Ok(OperatorAlgebra {
        ambient_dim: n,
        basis,
        closed: true,
        abelian,
    })
}

/// Joint kernel of every element of a closed algebra.
///
/// For a semisimple algebra every one-dimensional submodule carries the zero
/// weight, so this is the whole singlet sector.
pub fn singlet_sector(algebra: &OperatorAlgebra, tol: f64) -> Result<Subspace> {
    if !algebra.closed {
        return Err(EacError::NotClosed);
    }
    let n = algebra.ambient_dim;
    if algebra.basis.is_empty() {
        return Ok(Subspace::full(n));
    }
    let mut stacked = zeros(n * algebra.basis.len(), n);
    for (k, b) in algebra.basis.iter().enumerate() {
        stacked.rows_mut(k * n, n).copy_from(b);
    }
    Ok(nullspace(&stacked, tol))
}

/// Generalized Gell-Mann matrices spanning the defining representation of sl(d).
///
/// Order: symmetric off-diagonal pairs (row-major over `j < k`), then the
/// antisymmetric pairs in the same order, then the `d - 1` diagonal ones.
/// Each has Hilbert-Schmidt norm `sqrt(2)`.
pub fn gell_mann(d: usize) -> Vec<ComplexMatrix> {
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|j| (j + 1..d).map(move |k| (j, k))).collect();
    let mut out = Vec::with_capacity(d * d - 1);
    for &(j, k) in &pairs {
        let mut m = zeros(d, d);
        m[(j, k)] = Complex64::new(1.0, 0.0);
        m[(k, j)] = Complex64::new(1.0, 0.0);
        out.push(m);
    }
    for &(j, k) in &pairs {
        let mut m = zeros(d, d);
        m[(j, k)] = Complex64::new(0.0, -1.0);
        m[(k, j)] = Complex64::new(0.0, 1.0);
        out.push(m);
    }
    for l in 1..d {
        let c = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut m = zeros(d, d);
        for j in 0..l {
            m[(j, j)] = Complex64::new(c, 0.0);
        }
        m[(l, l)] = Complex64::new(-c * l as f64, 0.0);
        out.push(m);
    }
    out
}
