//! Construction and verification of error-avoiding codes.
//!
//! A subspace `C` with isometry `V` is an error-avoiding code exactly when the
//! system Hamiltonian leaves `C` invariant and every error generator acts on
//! `C` as a multiple of the identity, so the interaction restricted to `C`
//! factorizes as `I_C (x) E(C)` with `E(C) = sum_l sigma_l E_l`. Only the
//! system-side operators matter for that test; environment operators enter
//! only in [`verify_code_dynamically`].

mod algebra;
mod register;

use rayon::prelude::*;

use crate::error::{EacError, Result};
use crate::linalg::{
    ensure_hermitian, ensure_square, identity, simultaneous_eigenspaces, trace, ComplexMatrix, Subspace, HERMITIAN_TOL,
};
use crate::linalg::DEFAULT_TOL;
use crate::open_system::{
    decoherence_trace, log_spaced_times, sample_state_with, Coupling, DensityState, HamiltonianModel,
};
use crate::random;

pub use algebra::{gell_mann, hermitian_bracket, lie_closure, singlet_sector, OperatorAlgebra};
pub use register::{
    build_register_model, check_sn_invariance, coproduct, permutation_matrix, register_dim, register_singlet_code,
    transposition_permutation, DEFAULT_AMBIENT_CAP,
};

/// Default tolerance on `1 - fidelity` for dynamical verification.
pub const DYNAMICAL_TOL: f64 = 1e-7;

/// System Hamiltonian plus the error generators `S_l`.
#[derive(Debug, Clone)]
pub struct ErrorModel {
    h_s: ComplexMatrix,
    generators: Vec<ComplexMatrix>,
}

impl ErrorModel {
    pub fn new(h_s: ComplexMatrix, generators: Vec<ComplexMatrix>) -> Result<Self> {
        let n = ensure_square(&h_s, "system Hamiltonian")?;
        ensure_hermitian(&h_s, HERMITIAN_TOL)?;
        if generators.is_empty() {
            return Err(EacError::InvalidArgument("error model needs at least one generator".into()));
        }
        for g in &generators {
            if g.nrows() != n || g.ncols() != n {
                return Err(EacError::DimensionMismatch {
                    context: "error generator",
                    expected: n,
                    found: if g.nrows() != n { g.nrows() } else { g.ncols() },
                });
            }
            ensure_hermitian(g, HERMITIAN_TOL)?;
        }
        Ok(Self { h_s, generators })
    }

    /// Model with zero system Hamiltonian.
    pub fn without_hamiltonian(generators: Vec<ComplexMatrix>) -> Result<Self> {
        let n = generators.first().map(|g| g.nrows()).unwrap_or(0);
        Self::new(ComplexMatrix::zeros(n, n), generators)
    }

    pub fn dim(&self) -> usize {
        self.h_s.nrows()
    }

    pub fn h_s(&self) -> &ComplexMatrix {
        &self.h_s
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    /// Every operator replaced by `u X u^dagger`.
    pub fn conjugated(&self, u: &ComplexMatrix) -> Result<Self> {
        let conj = |x: &ComplexMatrix| crate::linalg::hermitian_part(&(u * x * u.adjoint()));
        Self::new(conj(&self.h_s), self.generators.iter().map(conj).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeRoute {
    CommonEigenspace,
    SingletSector,
    WeightSpace,
    RegisterSinglet,
    UserSupplied,
}

impl CodeRoute {
    pub fn as_str(self) -> &'static str {
        match self {
            CodeRoute::CommonEigenspace => "common_eigenspace",
            CodeRoute::SingletSector => "singlet_sector",
            CodeRoute::WeightSpace => "weight_space",
            CodeRoute::RegisterSinglet => "register_singlet",
            CodeRoute::UserSupplied => "user_supplied",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Eac,
    NotEac,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Eac => "EAC",
            Verdict::NotEac => "NotEAC",
            Verdict::Inconclusive => "Inconclusive",
        }
    }
}

/// Outcome of a static and optionally dynamical check of one subspace.
#[derive(Debug, Clone)]
pub struct CodeReport {
    pub code: Subspace,
    pub route: CodeRoute,
    /// `tr(V^dagger S_l V) / dim C` for each generator; `E(C) = sum_l sigma_l E_l`.
    pub sigmas: Vec<f64>,
    pub lemma31_residual: f64,
    pub induced_env_op_shape: Option<(usize, usize)>,
    pub hs_invariance_residual: f64,
    pub dynamical_min_fidelity: Option<f64>,
    pub verdict: Verdict,
}

/// Whether `x` maps the subspace into itself.
///
/// Residual is `||(I - V V^dagger) x V||_F / max(1, ||x||_F)`.
pub fn check_invariant_subspace(x: &ComplexMatrix, c: &Subspace, tol: f64) -> Result<(bool, f64)> {
    if c.is_zero() {
        return Err(EacError::EmptySubspace);
    }
    if x.nrows() != c.ambient_dim() || x.ncols() != c.ambient_dim() {
        return Err(EacError::DimensionMismatch {
            context: "check_invariant_subspace",
            expected: c.ambient_dim(),
            found: if x.nrows() != c.ambient_dim() { x.nrows() } else { x.ncols() },
        });
    }
    let residual = leakage(x, c) / x.norm().max(1.0);
    Ok((residual <= tol, residual))
}

/// `||(I - V V^dagger) x V||_F`, computed as `||x V - V (V^dagger x V)||_F`.
fn leakage(x: &ComplexMatrix, c: &Subspace) -> f64 {
    let v = c.basis();
    let xv = x * v;
    let inside = v * (v.adjoint() * &xv);
    (xv - inside).norm()
}

/// Static test of the factorization condition on `c`.
///
/// Per generator, the restriction `M = V^dagger S V` must be `sigma I` and the
/// leakage `(I - V V^dagger) S V` must vanish; the residual is the largest of
/// the two norms over all generators, relative to `max(1, ||S||_F)`.
pub fn check_lemma31(model: &ErrorModel, c: &Subspace, tol: f64) -> Result<CodeReport> {
    if c.is_zero() {
        return Err(EacError::EmptySubspace);
    }
    if c.ambient_dim() != model.dim() {
        return Err(EacError::DimensionMismatch {
            context: "check_lemma31",
            expected: model.dim(),
            found: c.ambient_dim(),
        });
    }
    let k = c.dim();
    let mut sigmas = Vec::with_capacity(model.generators.len());
    let mut residual: f64 = 0.0;
    for s in &model.generators {
        let m = c.restrict(s);
        let mean = trace(&m) / k as f64;
        let deviation = (&m - identity(k) * mean).norm();
        let leak = leakage(s, c);
        residual = residual.max(deviation.max(leak) / s.norm().max(1.0));
        sigmas.push(mean.re);
    }
    let (_, hs_residual) = check_invariant_subspace(&model.h_s, c, tol)?;
    let verdict = if residual <= tol && hs_residual <= tol {
        Verdict::Eac
    } else {
        Verdict::NotEac
    };
    Ok(CodeReport {
        code: c.clone(),
        route: CodeRoute::UserSupplied,
        sigmas,
        lemma31_residual: residual,
        induced_env_op_shape: None,
        hs_invariance_residual: hs_residual,
        dynamical_min_fidelity: None,
        verdict,
    })
}

/// Maximal joint eigenspaces of a commuting set of generators.
///
/// The system Hamiltonian must commute with every generator as well; it then
/// leaves each joint eigenspace invariant.
pub fn common_eigenspace_codes(model: &ErrorModel, tol: f64) -> Result<Vec<CodeReport>> {
    eigenspace_codes(model, tol, CodeRoute::CommonEigenspace)
}

/// Weight spaces of an abelian set of generators; every irreducible module of
/// an abelian algebra is one-dimensional, so these are the code spaces.
pub fn weight_space_codes(model: &ErrorModel, tol: f64) -> Result<Vec<CodeReport>> {
    eigenspace_codes(model, tol, CodeRoute::WeightSpace)
}

fn eigenspace_codes(model: &ErrorModel, tol: f64, route: CodeRoute) -> Result<Vec<CodeReport>> {
    let mut family = model.generators.clone();
    family.push(model.h_s.clone());
    crate::linalg::check_commuting_family(&family, tol)?;
    simultaneous_eigenspaces(&model.generators, tol)?
        .into_iter()
        .map(|joint| {
            let mut report = check_lemma31(model, &joint.space, tol)?;
            report.route = route;
            Ok(report)
        })
        .collect()
}

/// Result of the singlet-sector search on a model's dynamical algebra.
#[derive(Debug, Clone)]
pub struct SingletSearch {
    pub algebra: OperatorAlgebra,
    pub semisimple: bool,
    pub codes: Vec<CodeReport>,
    /// False when one-dimensional submodules with nonzero weight may exist
    /// that the annihilator construction cannot see.
    pub complete: bool,
}

/// Closes the generators into their dynamical algebra and extracts codes.
///
/// Abelian algebras yield their weight spaces. Otherwise the joint kernel of
/// the algebra is returned; it is every singlet when the algebra is
/// semisimple, and only the zero-weight class when it has a center.
pub fn singlet_sector_codes(model: &ErrorModel, tol: f64) -> Result<SingletSearch> {
    let n = model.dim();
    let algebra = lie_closure(&model.generators, n * n, tol)?;
    let semisimple = algebra.is_semisimple(tol);
    if algebra.abelian {
        let codes = weight_space_codes(model, tol)?;
        return Ok(SingletSearch {
            algebra,
            semisimple,
            codes,
            complete: true,
        });
    }
    let sector = singlet_sector(&algebra, tol)?;
    let codes = if sector.is_zero() {
        Vec::new()
    } else {
        vec![register::singlet_report(model, sector, CodeRoute::SingletSector, tol)?]
    };
    Ok(SingletSearch {
        algebra,
        semisimple,
        codes,
        complete: semisimple,
    })
}

/// Sampling plan for [`verify_code_dynamically`].
#[derive(Debug, Clone)]
pub struct DynamicalConfig {
    pub env_dim: usize,
    pub trials: usize,
    pub times: Vec<f64>,
    pub seed: u64,
    /// Bound on `1 - min fidelity`.
    pub fidelity_tol: f64,
    /// Bound on the static residuals.
    pub residual_tol: f64,
}

impl Default for DynamicalConfig {
    fn default() -> Self {
        Self {
            env_dim: 4,
            trials: 16,
            times: log_spaced_times(0.1, 10.0, 8),
            seed: 0,
            fidelity_tol: DYNAMICAL_TOL,
            residual_tol: DEFAULT_TOL,
        }
    }
}

/// Static check plus randomized joint evolution of pure code states.
///
/// Each trial draws, from its own stream of `seed`, one unit-spectral-norm
/// Hermitian `E_l` per generator, a unit-norm environment Hamiltonian, a pure
/// state in the code, and an environment state of rank `1 + trial % env_dim`.
/// The smallest fidelity to the ideal image over all trials and times is
/// recorded.
pub fn verify_code_dynamically(model: &ErrorModel, code: &Subspace, config: &DynamicalConfig) -> Result<CodeReport> {
    if config.env_dim == 0 || config.trials == 0 {
        return Err(EacError::InvalidArgument("env_dim and trials must be positive".into()));
    }
    let mut report = check_lemma31(model, code, config.residual_tol)?;
    let fidelities = (0..config.trials)
        .into_par_iter()
        .map(|trial| trial_min_fidelity(model, code, config, trial))
        .collect::<Result<Vec<f64>>>()?;
    let min_fidelity = fidelities.into_iter().fold(1.0, f64::min);
    report.induced_env_op_shape = Some((config.env_dim, config.env_dim));
    report.dynamical_min_fidelity = Some(min_fidelity);
    if report.verdict == Verdict::Eac && 1.0 - min_fidelity > config.fidelity_tol {
        report.verdict = Verdict::NotEac;
    }
    Ok(report)
}

fn trial_min_fidelity(model: &ErrorModel, code: &Subspace, config: &DynamicalConfig, trial: usize) -> Result<f64> {
    let mut rng = random::stream(config.seed, trial as u64);
    let d_e = config.env_dim;
    let couplings = model
        .generators
        .iter()
        .map(|s| Coupling::new(s.clone(), random::unit_hermitian(&mut rng, d_e)))
        .collect();
    let h_e = random::unit_hermitian(&mut rng, d_e);
    let joint = HamiltonianModel::new(model.h_s.clone(), h_e, couplings)?;
    let psi = code.basis() * random::unit_vector(&mut rng, code.dim());
    let psi = psi.unscale(psi.norm());
    let rho_s = DensityState::pure(&psi)?;
    let rho_e = sample_state_with(&mut rng, d_e, 1 + trial % d_e)?;
    let samples = decoherence_trace(&joint, &rho_s, &rho_e, &config.times)?;
    Ok(samples.iter().map(|s| s.fidelity_vs_ideal).fold(1.0, f64::min))
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::linalg::{kron, pauli, real_matrix, zeros, ONE};

    fn unit(n: usize, k: usize) -> ComplexMatrix {
        let mut v = zeros(n, 1);
        v[(k, 0)] = ONE;
        v
    }

    fn diag(values: &[f64]) -> ComplexMatrix {
        let n = values.len();
        ComplexMatrix::from_fn(n, n, |i, j| if i == j { Complex64::new(values[i], 0.0) } else { Complex64::new(0.0, 0.0) })
    }

    #[test]
    fn invariant_subspace_examples() {
        let e1 = Subspace::span(2, &[unit(2, 0)]).unwrap();
        assert_eq!(check_invariant_subspace(&identity(2), &e1, 1e-9).unwrap(), (true, 0.0));
        let (ok, r) = check_invariant_subspace(&pauli::x(), &e1, 1e-9).unwrap();
        assert!(!ok);
        // ||sigma_x e1|| = 1 and max(1, ||sigma_x||_F) = sqrt 2.
        assert!((r - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        let plane = Subspace::span(3, &[unit(3, 0), unit(3, 1)]).unwrap();
        let (ok, r) = check_invariant_subspace(&diag(&[1.0, 2.0, 3.0]), &plane, 1e-9).unwrap();
        assert!(ok && r < 1e-15);
        assert!(matches!(
            check_invariant_subspace(&identity(2), &Subspace::zero(2), 1e-9),
            Err(EacError::EmptySubspace)
        ));
    }

    #[test]
    fn lemma_examples() {
        let e1 = Subspace::span(2, &[unit(2, 0)]).unwrap();
        let any = Subspace::span(2, &[unit(2, 0), unit(2, 1)]).unwrap();
        let identity_model = ErrorModel::without_hamiltonian(vec![identity(2)]).unwrap();
        let r = check_lemma31(&identity_model, &any, 1e-9).unwrap();
        assert_eq!(r.verdict, Verdict::Eac);
        assert!(r.lemma31_residual < 1e-15);

        let z_model = ErrorModel::without_hamiltonian(vec![pauli::z()]).unwrap();
        let r = check_lemma31(&z_model, &e1, 1e-9).unwrap();
        assert_eq!(r.verdict, Verdict::Eac);
        assert!((r.sigmas[0] - 1.0).abs() < 1e-15);

        let x_model = ErrorModel::without_hamiltonian(vec![pauli::x()]).unwrap();
        let r = check_lemma31(&x_model, &e1, 1e-9).unwrap();
        assert_eq!(r.verdict, Verdict::NotEac);
        // Leakage ||sigma_x e1|| = 1 relative to ||sigma_x||_F = sqrt 2.
        assert!((r.lemma31_residual - 1.0 / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn lemma_flags_hamiltonian_leakage() {
        let model = ErrorModel::new(pauli::x(), vec![pauli::z()]).unwrap();
        let e1 = Subspace::span(2, &[unit(2, 0)]).unwrap();
        let r = check_lemma31(&model, &e1, 1e-9).unwrap();
        assert!(r.lemma31_residual < 1e-15);
        assert!(r.hs_invariance_residual > 0.5);
        assert_eq!(r.verdict, Verdict::NotEac);
    }

    #[test]
    fn eigenspace_route_examples() {
        let model = ErrorModel::new(diag(&[5.0, 7.0, 0.0]), vec![diag(&[1.0, 1.0, -1.0])]).unwrap();
        let codes = common_eigenspace_codes(&model, 1e-9).unwrap();
        let dims: Vec<usize> = codes.iter().map(|c| c.code.dim()).collect();
        assert_eq!(dims, vec![2, 1]);
        assert!(codes.iter().all(|c| c.verdict == Verdict::Eac && c.route == CodeRoute::CommonEigenspace));

        let total_z = kron(&pauli::z(), &identity(2)) + kron(&identity(2), &pauli::z());
        let model = ErrorModel::without_hamiltonian(vec![total_z]).unwrap();
        let codes = common_eigenspace_codes(&model, 1e-9).unwrap();
        let summary: Vec<(usize, i64)> = codes
            .iter()
            .map(|c| (c.code.dim(), c.sigmas[0].round() as i64))
            .collect();
        assert_eq!(summary, vec![(1, 2), (2, 0), (1, -2)]);

        let model = ErrorModel::without_hamiltonian(vec![pauli::x(), pauli::z()]).unwrap();
        assert!(matches!(
            common_eigenspace_codes(&model, 1e-9),
            Err(EacError::NonCommutingFamily { first: 0, second: 1, .. })
        ));
    }

    #[test]
    fn eigenspace_route_rejects_noncommuting_hamiltonian() {
        let model = ErrorModel::new(pauli::x(), vec![pauli::z()]).unwrap();
        assert!(matches!(
            common_eigenspace_codes(&model, 1e-9),
            Err(EacError::NonCommutingFamily { first: 0, second: 1, .. })
        ));
    }

    #[test]
    fn weight_space_examples() {
        let model = ErrorModel::without_hamiltonian(vec![diag(&[1.0, -1.0])]).unwrap();
        let codes = weight_space_codes(&model, 1e-9).unwrap();
        assert_eq!(codes.len(), 2);
        assert!(codes.iter().all(|c| c.code.dim() == 1 && c.route == CodeRoute::WeightSpace));

        let zi = kron(&pauli::z(), &identity(2));
        let iz = kron(&identity(2), &pauli::z());
        let model = ErrorModel::without_hamiltonian(vec![zi, iz]).unwrap();
        let codes = weight_space_codes(&model, 1e-9).unwrap();
        assert_eq!(codes.len(), 4);

        let model = ErrorModel::without_hamiltonian(vec![coproduct(&pauli::z(), 2).unwrap()]).unwrap();
        let codes = weight_space_codes(&model, 1e-9).unwrap();
        let summary: Vec<(usize, i64)> = codes
            .iter()
            .map(|c| (c.code.dim(), c.sigmas[0].round() as i64))
            .collect();
        assert_eq!(summary, vec![(1, 2), (2, 0), (1, -2)]);
    }

    #[test]
    fn singlet_search_on_two_qubit_register() {
        let model = build_register_model(&[pauli::x(), pauli::y(), pauli::z()], 2, None).unwrap();
        let search = singlet_sector_codes(&model, 1e-9).unwrap();
        assert!(search.semisimple && search.complete && !search.algebra.abelian);
        assert_eq!(search.codes.len(), 1);
        assert_eq!(search.codes[0].code.dim(), 1);
        assert_eq!(search.codes[0].verdict, Verdict::Eac);
    }

    #[test]
    fn singlet_search_with_center_is_incomplete() {
        // Generators of u(2) on one qubit: no joint kernel, and the identity
        // component means nonzero-weight singlets cannot be ruled out here.
        let model = ErrorModel::without_hamiltonian(vec![pauli::x(), pauli::y(), pauli::z() + identity(2)]).unwrap();
        let search = singlet_sector_codes(&model, 1e-9).unwrap();
        assert!(!search.semisimple);
        assert!(!search.complete);
        assert!(search.codes.is_empty());
    }

    #[test]
    fn singlet_search_routes_abelian_to_weights() {
        let model = ErrorModel::without_hamiltonian(vec![pauli::z()]).unwrap();
        let search = singlet_sector_codes(&model, 1e-9).unwrap();
        assert!(search.complete);
        assert_eq!(search.codes.len(), 2);
        assert!(search.codes.iter().all(|c| c.route == CodeRoute::WeightSpace));
    }

    #[test]
    fn dynamical_check_with_identity_generator() {
        let model = ErrorModel::without_hamiltonian(vec![identity(2)]).unwrap();
        let config = DynamicalConfig {
            trials: 4,
            ..DynamicalConfig::default()
        };
        let report = verify_code_dynamically(&model, &Subspace::full(2), &config).unwrap();
        assert!(1.0 - report.dynamical_min_fidelity.unwrap() < 1e-10);
        assert_eq!(report.verdict, Verdict::Eac);
        assert_eq!(report.induced_env_op_shape, Some((4, 4)));
    }

    #[test]
    fn dynamical_check_is_deterministic() {
        let model = ErrorModel::new(real_matrix(2, 2, &[0.3, 0.0, 0.0, -0.2]), vec![pauli::x()]).unwrap();
        let e1 = Subspace::span(2, &[unit(2, 0)]).unwrap();
        let config = DynamicalConfig {
            trials: 3,
            seed: 42,
            ..DynamicalConfig::default()
        };
        let a = verify_code_dynamically(&model, &e1, &config).unwrap();
        let b = verify_code_dynamically(&model, &e1, &config).unwrap();
        assert_eq!(a.dynamical_min_fidelity, b.dynamical_min_fidelity);
        assert_eq!(a.verdict, Verdict::NotEac);
        assert!(a.dynamical_min_fidelity.unwrap() < 1.0 - 1e-3);
    }
}
