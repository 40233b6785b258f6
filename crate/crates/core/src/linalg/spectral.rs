use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::{commutator, ensure_hermitian, ensure_square, hermitian_part, ComplexMatrix, Subspace, HERMITIAN_TOL};
use crate::error::{EacError, Result};

/// Eigendecomposition `h = V diag(lambda) V^dagger` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianSpectrum {
    pub fn new(h: &ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(h, HERMITIAN_TOL)
    }

    pub fn with_tolerance(h: &ComplexMatrix, tol: f64) -> Result<Self> {
        ensure_square(h, "Hermitian eigendecomposition")?;
        ensure_hermitian(h, tol)?;
        Ok(Self::of_hermitian_part(h))
    }

    /// Decomposes `(h + h^dagger) / 2` without checking Hermiticity.
    pub(crate) fn of_hermitian_part(h: &ComplexMatrix) -> Self {
        let eig = SymmetricEigen::new(hermitian_part(h));
        Self {
            eigenvalues: eig.eigenvalues.iter().cloned().collect(),
            eigenvectors: eig.eigenvectors,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// `exp(-i t h)`.
    pub fn propagator(&self, t: f64) -> ComplexMatrix {
        let mut scaled = self.eigenvectors.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let phase = Complex64::from_polar(1.0, -t * lambda);
            for z in scaled.column_mut(j).iter_mut() {
                *z *= phase;
            }
        }
        scaled * self.eigenvectors.adjoint()
    }
}

/// `exp(-i t h)` for Hermitian `h`, via its eigendecomposition.
pub fn hermitian_propagator(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    Ok(HermitianSpectrum::new(h)?.propagator(t))
}

/// One joint eigenspace of a commuting family, with the eigenvalue of each member.
#[derive(Debug, Clone)]
pub struct JointEigenspace {
    pub eigenvalues: Vec<f64>,
    pub space: Subspace,
}

/// Complete decomposition of the ambient space into joint eigenspaces of a
/// commuting Hermitian family.
///
/// The space is refined one operator at a time: each current block is
/// diagonalized under the restricted operator and split wherever consecutive
/// eigenvalues differ by more than `tol * max(1, spectral radius)`. Nearby
/// eigenvalues are merged, so every returned space is maximal. Spaces are
/// ordered by descending eigenvalue tuple.
pub fn simultaneous_eigenspaces(family: &[ComplexMatrix], tol: f64) -> Result<Vec<JointEigenspace>> {
    let first = family
        .first()
        .ok_or_else(|| EacError::InvalidArgument("empty operator family".into()))?;
    let n = ensure_square(first, "simultaneous_eigenspaces")?;
    for op in family {
        if op.nrows() != n || op.ncols() != n {
            return Err(EacError::DimensionMismatch {
                context: "simultaneous_eigenspaces",
                expected: n,
                found: op.nrows(),
            });
        }
        ensure_hermitian(op, tol)?;
    }
    check_commuting_family(family, tol)?;

    let mut blocks = vec![Subspace::full(n)];
    for op in family {
        let spectra: Vec<HermitianSpectrum> = blocks
            .iter()
            .map(|b| HermitianSpectrum::of_hermitian_part(&b.restrict(op)))
            .collect();
        let radius = spectra
            .iter()
            .map(HermitianSpectrum::spectral_radius)
            .fold(0.0, f64::max);
        let gap = tol * radius.max(1.0);
        let mut refined = Vec::with_capacity(blocks.len());
        for (block, spectrum) in blocks.iter().zip(&spectra) {
            for cluster in cluster_sorted(&spectrum.eigenvalues, gap) {
                let mut w = ComplexMatrix::zeros(spectrum.dim(), cluster.len());
                for (j, &k) in cluster.iter().enumerate() {
                    w.set_column(j, &spectrum.eigenvectors.column(k));
                }
                refined.push(Subspace::from_nearly_orthonormal(block.basis() * w, 1e-8)?);
            }
        }
        blocks = refined;
    }

    let mut spaces: Vec<JointEigenspace> = blocks
        .into_iter()
        .map(|space| {
            let k = space.dim() as f64;
            let eigenvalues = family
                .iter()
                .map(|op| super::trace(&space.restrict(op)).re / k)
                .collect();
            JointEigenspace { eigenvalues, space }
        })
        .collect();
    spaces.sort_by(|a, b| {
        b.eigenvalues
            .iter()
            .zip(&a.eigenvalues)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(spaces)
}

/// Rejects the first pair with `||[A, B]||_F > tol * ||A||_F * ||B||_F`.
pub fn check_commuting_family(family: &[ComplexMatrix], tol: f64) -> Result<()> {
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            let norm = commutator(&family[i], &family[j]).norm();
            if norm > tol * family[i].norm() * family[j].norm() {
                return Err(EacError::NonCommutingFamily {
                    first: i,
                    second: j,
                    norm,
                });
            }
        }
    }
    Ok(())
}

/// Groups eigenvalue indices into clusters separated by gaps larger than `gap`.
fn cluster_sorted(values: &[f64], gap: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for k in order {
        match clusters.last_mut() {
            Some(c) if values[k] - last <= gap => c.push(k),
            _ => clusters.push(vec![k]),
        }
        last = values[k];
    }
    clusters
}
