//! Closed system-plus-environment model and exact marginal dynamics.
//!
//! The joint Hamiltonian is
//! `H_SE = H_S (x) I_E + I_S (x) H_E + sum_l S_l (x) E_l`
//! with the system as the slow tensor factor. The marginal state at time `t`
//! is obtained by evolving `rho_S (x) rho_E` under `exp(-i t H_SE)` and
//! tracing the environment out. Time is a dimensionless phase (hbar = 1).

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{EacError, Result};
use crate::linalg::{
    ensure_hermitian, ensure_square, hermitian_part, hermiticity_residual, identity, kron, trace,
    zeros, ComplexMatrix, HermitianSpectrum, HERMITIAN_TOL,
};
use crate::random;

/// Tolerance on trace and positivity of density states.
const STATE_TOL: f64 = 1e-10;

/// Purity above `1 - PURE_TOL` marks a state as pure for fidelity purposes.
const PURE_TOL: f64 = 1e-10;

/// Eigenvalues of a state at or below this are dropped when factoring it.
const FACTOR_CUTOFF: f64 = 1e-15;

/// One interaction term `S (x) E`.
#[derive(Debug, Clone)]
pub struct Coupling {
    pub system: ComplexMatrix,
    pub environment: ComplexMatrix,
}

impl Coupling {
    pub fn new(system: ComplexMatrix, environment: ComplexMatrix) -> Self {
        Self { system, environment }
    }
}

#[derive(Debug, Clone)]
pub struct HamiltonianModel {
    h_s: ComplexMatrix,
    h_e: ComplexMatrix,
    couplings: Vec<Coupling>,
}

impl HamiltonianModel {
    pub fn new(h_s: ComplexMatrix, h_e: ComplexMatrix, couplings: Vec<Coupling>) -> Result<Self> {
        let d_s = ensure_square(&h_s, "system Hamiltonian")?;
        let d_e = ensure_square(&h_e, "environment Hamiltonian")?;
        ensure_hermitian(&h_s, HERMITIAN_TOL)?;
        ensure_hermitian(&h_e, HERMITIAN_TOL)?;
        for c in &couplings {
            for (op, dim, context) in [
                (&c.system, d_s, "coupling system operator"),
                (&c.environment, d_e, "coupling environment operator"),
            ] {
                if op.nrows() != dim || op.ncols() != dim {
                    return Err(EacError::DimensionMismatch {
                        context,
                        expected: dim,
                        found: if op.nrows() != dim { op.nrows() } else { op.ncols() },
                    });
                }
                ensure_hermitian(op, HERMITIAN_TOL)?;
            }
        }
        Ok(Self { h_s, h_e, couplings })
    }

    /// Model without interaction terms.
    pub fn free(h_s: ComplexMatrix, h_e: ComplexMatrix) -> Result<Self> {
        Self::new(h_s, h_e, Vec::new())
    }

    pub fn system_dim(&self) -> usize {
        self.h_s.nrows()
    }

    pub fn env_dim(&self) -> usize {
        self.h_e.nrows()
    }

    pub fn h_s(&self) -> &ComplexMatrix {
        &self.h_s
    }

    pub fn h_e(&self) -> &ComplexMatrix {
        &self.h_e
    }

    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    /// Same model with every system-side operator replaced by `u X u^dagger`.
    pub fn conjugate_system(&self, u: &ComplexMatrix) -> Result<Self> {
        let conj = |x: &ComplexMatrix| hermitian_part(&(u * x * u.adjoint()));
        if u.nrows() != self.system_dim() || u.ncols() != self.system_dim() {
            return Err(EacError::DimensionMismatch {
                context: "system unitary",
                expected: self.system_dim(),
                found: u.nrows(),
            });
        }
        Self::new(
            conj(&self.h_s),
            self.h_e.clone(),
            self.couplings
                .iter()
                .map(|c| Coupling::new(conj(&c.system), c.environment.clone()))
                .collect(),
        )
    }
}

/// `H_SE = H_S (x) I_E + I_S (x) H_E + sum_l S_l (x) E_l`.
pub fn assemble_joint(model: &HamiltonianModel) -> ComplexMatrix {
    let (d_s, d_e) = (model.system_dim(), model.env_dim());
    let mut h = kron(&model.h_s, &identity(d_e)) + kron(&identity(d_s), &model.h_e);
    for c in &model.couplings {
        h += kron(&c.system, &c.environment);
    }
    h
}

/// Density operator: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    rho: ComplexMatrix,
}

impl DensityState {
    pub fn new(rho: ComplexMatrix) -> Result<Self> {
        ensure_square(&rho, "density state")?;
        let residual = hermiticity_residual(&rho);
        if residual > STATE_TOL {
            return Err(EacError::InvalidState(format!("not Hermitian (residual {residual:.3e})")));
        }
        let tr = trace(&rho);
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(EacError::InvalidState(format!("trace {tr} differs from 1")));
        }
        let state = Self::from_hermitian_part(rho);
        let min_eig = state.min_eigenvalue();
        if min_eig < -STATE_TOL {
            return Err(EacError::InvalidState(format!("negative eigenvalue {min_eig:.3e}")));
        }
        Ok(state)
    }

    /// `|psi><psi|` for a unit column vector.
    pub fn pure(psi: &ComplexMatrix) -> Result<Self> {
        check_unit_column(psi)?;
        Ok(Self::from_hermitian_part(psi * psi.adjoint()))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            rho: identity(dim).unscale(dim as f64),
        }
    }

    fn from_hermitian_part(rho: ComplexMatrix) -> Self {
        Self {
            rho: hermitian_part(&rho),
        }
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.rho
    }

    pub fn purity(&self) -> f64 {
        // tr(rho^2) = ||rho||_F^2 for Hermitian rho.
        self.rho.norm_squared()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        HermitianSpectrum::of_hermitian_part(&self.rho)
            .eigenvalues
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_pure(&self) -> bool {
        self.purity() >= 1.0 - PURE_TOL
    }

    /// Eigenvector of the largest eigenvalue.
    pub fn dominant_vector(&self) -> ComplexMatrix {
        let spectrum = HermitianSpectrum::of_hermitian_part(&self.rho);
        let k = spectrum
            .eigenvalues
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(k, _)| k)
            .unwrap_or(0);
        spectrum.eigenvectors.columns(k, 1).into_owned()
    }

    /// `u rho u^dagger`.
    pub fn conjugated(&self, u: &ComplexMatrix) -> Self {
        Self::from_hermitian_part(u * &self.rho * u.adjoint())
    }
}

fn check_unit_column(psi: &ComplexMatrix) -> Result<()> {
    if psi.ncols() != 1 {
        return Err(EacError::DimensionMismatch {
            context: "state vector columns",
            expected: 1,
            found: psi.ncols(),
        });
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > STATE_TOL {
        return Err(EacError::InvalidState(format!("vector norm {norm} differs from 1")));
    }
    Ok(())
}

/// `tr(rho^2)`.
pub fn purity(rho: &DensityState) -> f64 {
    rho.purity()
}

/// `<psi|rho|psi>` for a unit vector `psi`.
pub fn fidelity_pure(psi: &ComplexMatrix, rho: &DensityState) -> Result<f64> {
    check_unit_column(psi)?;
    if psi.nrows() != rho.dim() {
        return Err(EacError::DimensionMismatch {
            context: "fidelity_pure",
            expected: rho.dim(),
            found: psi.nrows(),
        });
    }
    Ok((psi.adjoint() * &rho.rho * psi)[(0, 0)].re)
}

/// Gap indicator for mixed states, `1 - ||a - b||_F / 2`, clamped to `[0, 1]`.
pub fn frobenius_fidelity(a: &DensityState, b: &DensityState) -> f64 {
    (1.0 - (&a.rho - &b.rho).norm() / 2.0).clamp(0.0, 1.0)
}

/// Seeded random state `G G^dagger / tr(G G^dagger)` with `G` a `dim x rank`
/// complex Gaussian matrix.
pub fn sample_state(dim: usize, rank: usize, seed: u64) -> Result<DensityState> {
    sample_state_with(&mut random::seeded(seed), dim, rank)
}

pub fn sample_state_with<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> Result<DensityState> {
    if rank == 0 || rank > dim {
        return Err(EacError::InvalidRank { rank, dim });
    }
    let g = random::gaussian_matrix(rng, dim, rank);
    let rho = &g * g.adjoint();
    let tr = trace(&rho).re;
    Ok(DensityState::from_hermitian_part(rho.unscale(tr)))
}

/// Cached eigendecomposition of `H_SE` for repeated evolution of one model.
#[derive(Debug, Clone)]
pub struct JointEvolution {
    system_dim: usize,
    env_dim: usize,
    spectrum: HermitianSpectrum,
}

impl JointEvolution {
    pub fn new(model: &HamiltonianModel) -> Self {
        Self {
            system_dim: model.system_dim(),
            env_dim: model.env_dim(),
            spectrum: HermitianSpectrum::of_hermitian_part(&assemble_joint(model)),
        }
    }

    pub fn propagator(&self, t: f64) -> ComplexMatrix {
        self.spectrum.propagator(t)
    }

    /// `U(t) rho U(t)^dagger` on the joint space.
    pub fn evolve_joint(&self, joint: &ComplexMatrix, t: f64) -> ComplexMatrix {
        let u = self.propagator(t);
        &u * joint * u.adjoint()
    }

    /// Marginal state `tr_E(U(t) rho_S (x) rho_E U(t)^dagger)`.
    pub fn marginal(&self, rho_s: &DensityState, rho_e: &DensityState, t: f64) -> Result<DensityState> {
        let coeffs = self.prepare(rho_s, rho_e)?;
        Ok(self.marginal_prepared(&coeffs, t))
    }

    /// Factor `W` of `rho_S (x) rho_E = W W^dagger`, in the eigenbasis of `H_SE`.
    fn prepare(&self, rho_s: &DensityState, rho_e: &DensityState) -> Result<ComplexMatrix> {
        self.check_dims(rho_s, rho_e)?;
        let w = kron(&psd_factor(&rho_s.rho), &psd_factor(&rho_e.rho));
        Ok(self.spectrum.eigenvectors.adjoint() * w)
    }

    fn marginal_prepared(&self, coeffs: &ComplexMatrix, t: f64) -> DensityState {
        let mut scaled = coeffs.clone();
        for (i, &lambda) in self.spectrum.eigenvalues.iter().enumerate() {
            let phase = Complex64::from_polar(1.0, -t * lambda);
            for z in scaled.row_mut(i).iter_mut() {
                *z *= phase;
            }
        }
        let w = &self.spectrum.eigenvectors * scaled;
        // tr_E(W W^dagger) = M M^dagger with M[a, (e, k)] = W[(a, e), k].
        let (d_e, r) = (self.env_dim, w.ncols());
        let m = ComplexMatrix::from_fn(self.system_dim, d_e * r, |a, c| w[(a * d_e + c / r, c % r)]);
        DensityState::from_hermitian_part(&m * m.adjoint())
    }

    fn check_dims(&self, rho_s: &DensityState, rho_e: &DensityState) -> Result<()> {
        for (state, dim, context) in [
            (rho_s, self.system_dim, "system state"),
            (rho_e, self.env_dim, "environment state"),
        ] {
            if state.dim() != dim {
                return Err(EacError::DimensionMismatch {
                    context,
                    expected: dim,
                    found: state.dim(),
                });
            }
        }
        Ok(())
    }
}

/// Columns `sqrt(p_i) v_i` over the nonzero spectrum of a positive matrix.
fn psd_factor(rho: &ComplexMatrix) -> ComplexMatrix {
    let eig = rho.clone().symmetric_eigen();
    let keep: Vec<usize> = (0..rho.nrows()).filter(|&i| eig.eigenvalues[i] > FACTOR_CUTOFF).collect();
    let mut w = zeros(rho.nrows(), keep.len().max(1));
    for (k, &i) in keep.iter().enumerate() {
        w.set_column(k, &eig.eigenvectors.column(i).scale(eig.eigenvalues[i].sqrt()));
    }
    w
}

/// Exact marginal state at time `t` for the preparation `rho_s (x) rho_e`.
pub fn evolve_marginal(
    model: &HamiltonianModel,
    rho_s: &DensityState,
    rho_e: &DensityState,
    t: f64,
) -> Result<DensityState> {
    JointEvolution::new(model).marginal(rho_s, rho_e, t)
}

/// `exp(-i t h_s) rho exp(i t h_s)`.
pub fn ideal_evolution(h_s: &ComplexMatrix, rho: &DensityState, t: f64) -> Result<DensityState> {
    let spectrum = HermitianSpectrum::new(h_s)?;
    if spectrum.dim() != rho.dim() {
        return Err(EacError::DimensionMismatch {
            context: "ideal_evolution",
            expected: spectrum.dim(),
            found: rho.dim(),
        });
    }
    Ok(rho.conjugated(&spectrum.propagator(t)))
}

#[derive(Debug, Clone)]
pub struct EvolutionSample {
    pub time: f64,
    pub marginal: DensityState,
    pub purity: f64,
    pub fidelity_vs_ideal: f64,
}

/// Marginal state, purity, and fidelity to the ideal unitary image at each time.
///
/// Fidelity is `<psi_t|rho_t|psi_t>` when `rho_s` is pure and the Frobenius gap
/// indicator [`frobenius_fidelity`] otherwise.
pub fn decoherence_trace(
    model: &HamiltonianModel,
    rho_s: &DensityState,
    rho_e: &DensityState,
    times: &[f64],
) -> Result<Vec<EvolutionSample>> {
    if times.is_empty() {
        return Err(EacError::InvalidArgument("no sample times given".into()));
    }
    if let Some(t) = times.iter().find(|t| !t.is_finite()) {
        return Err(EacError::InvalidArgument(format!("non-finite sample time {t}")));
    }
    let joint = JointEvolution::new(model);
    let coeffs = joint.prepare(rho_s, rho_e)?;
    let system = HermitianSpectrum::of_hermitian_part(model.h_s());
    let pure_vector = rho_s.is_pure().then(|| rho_s.dominant_vector());

    times
        .par_iter()
        .map(|&t| {
            let marginal = joint.marginal_prepared(&coeffs, t);
            let u_s = system.propagator(t);
            let fidelity = match &pure_vector {
                Some(psi) => {
                    let ideal = &u_s * psi;
                    let ideal = ideal.unscale(ideal.norm());
                    fidelity_pure(&ideal, &marginal)?.clamp(0.0, 1.0)
                }
                None => frobenius_fidelity(&rho_s.conjugated(&u_s), &marginal),
            };
            Ok(EvolutionSample {
                time: t,
                purity: marginal.purity(),
                marginal,
                fidelity_vs_ideal: fidelity,
            })
        })
        .collect()
}

/// `count` points log-spaced in `[lo, hi]`.
pub fn log_spaced_times(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..count)
                .map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp())
                .collect()
        }
    }
}

/// Zero operator of the given size, for models without a self-Hamiltonian.
pub fn zero_hamiltonian(dim: usize) -> ComplexMatrix {
    zeros(dim, dim)
}
