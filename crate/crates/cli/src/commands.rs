use std::fmt::Write as _;
use std::path::Path;

use eac_core::codes::{
    build_register_model, common_eigenspace_codes, gell_mann, register_dim, register_singlet_code,
    singlet_sector_codes, verify_code_dynamically, weight_space_codes, CodeReport, DynamicalConfig, ErrorModel,
    Verdict, DYNAMICAL_TOL,
};
use eac_core::linalg::{check_commuting_family, ensure_hermitian, HERMITIAN_TOL};
use eac_core::open_system::{decoherence_trace, sample_state, Coupling, DensityState, HamiltonianModel};
use eac_core::{ComplexMatrix, EacError, Subspace};

use crate::error::CliError;
use crate::opfile::{OperatorDocument, OperatorFile, Role};
use crate::report::{
    format_real, AlgebraSummary, CodeBasis, CodeEntry, ConfigEcho, FindPayload, ModelSummary, Real, Report,
    VerifyPayload,
};
use crate::{Outcome, RunConfig};

/// Largest basis drift repaired by re-orthonormalization when reading a code.
pub const MAX_BASIS_DRIFT: f64 = 1e-6;

/// Register rows get a dynamical check only up to this joint dimension.
pub const REGISTER_JOINT_DIM_LIMIT: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FindRoute {
    Auto,
    Eigenspace,
    Singlet,
    Weight,
}

impl FindRoute {
    pub fn as_str(self) -> &'static str {
        match self {
            FindRoute::Auto => "auto",
            FindRoute::Eigenspace => "eigenspace",
            FindRoute::Singlet => "singlet",
            FindRoute::Weight => "weight",
        }
    }
}

pub(crate) fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))
}

fn read_operators(path: &Path) -> Result<OperatorDocument, CliError> {
    OperatorDocument::parse(&read_text(path)?)
        .map_err(|e| match e {
            CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
            CliError::Validation(msg) => CliError::Validation(format!("{}: {msg}", path.display())),
        })
}

fn hermitian_matrix(op: &OperatorFile) -> Result<ComplexMatrix, CliError> {
    let m = op.to_matrix();
    ensure_hermitian(&m, HERMITIAN_TOL).map_err(|e| match e {
        EacError::NotHermitian { residual } => CliError::Validation(format!(
            "operator '{}' is not Hermitian (relative residual {residual:.3e})",
            op.name
        )),
        other => other.into(),
    })?;
    Ok(m)
}

/// An error model with the operator names kept for messages.
struct LoadedModel {
    model: ErrorModel,
    names: Vec<String>,
    hamiltonian: Option<String>,
}

impl LoadedModel {
    fn read(path: &Path, require_generators: bool) -> Result<(Self, OperatorDocument), CliError> {
        let doc = read_operators(path)?;
        let generators = doc
            .with_role(Role::Generator)
            .map(hermitian_matrix)
            .collect::<Result<Vec<_>, _>>()?;
        let names: Vec<String> = doc.with_role(Role::Generator).map(|op| op.name.clone()).collect();
        if generators.is_empty() && require_generators {
            return Err(CliError::Validation(format!("{}: model has no generator operators", path.display())));
        }
        let h = doc.single(Role::Hamiltonian)?;
        let h_s = match h {
            Some(op) => hermitian_matrix(op)?,
            None => ComplexMatrix::zeros(doc.dim, doc.dim),
        };
        let hamiltonian = h.map(|op| op.name.clone());
        let model = if generators.is_empty() {
            // Placeholder so the free model still carries its Hamiltonian.
            ErrorModel::new(h_s, vec![ComplexMatrix::zeros(doc.dim, doc.dim)])?
        } else {
            ErrorModel::new(h_s, generators)?
        };
        Ok((Self { model, names, hamiltonian }, doc))
    }

    fn summary(&self) -> ModelSummary {
        ModelSummary {
            dim: self.model.dim(),
            generators: self.names.clone(),
            hamiltonian: self.hamiltonian.clone(),
        }
    }

    /// Name of position `k` in the family `generators ++ [h_s]`.
    fn family_name(&self, k: usize) -> String {
        match self.names.get(k) {
            Some(name) => name.clone(),
            None => self.hamiltonian.clone().unwrap_or_else(|| "system Hamiltonian".into()),
        }
    }

    fn name_error(&self, err: EacError) -> CliError {
        match err {
            EacError::NonCommutingFamily { first, second, norm } => CliError::Validation(format!(
                "NonCommutingFamily: operators '{}' and '{}' do not commute (||[A, B]||_F = {norm:.3e})",
                self.family_name(first),
                self.family_name(second)
            )),
            other => other.into(),
        }
    }
}

fn config_echo(config: &RunConfig) -> ConfigEcho {
    ConfigEcho {
        tol: Real(config.tol),
        env_dim: config.env_dim,
        trials: config.trials,
        seed: config.seed,
        times: config.times.iter().copied().map(Real).collect(),
        ambient_cap: config.ambient_cap,
    }
}

fn dynamical_config(config: &RunConfig, env_dim: usize) -> DynamicalConfig {
    DynamicalConfig {
        env_dim,
        trials: config.trials,
        times: config.times.clone(),
        seed: config.seed,
        fidelity_tol: DYNAMICAL_TOL,
        residual_tol: config.tol,
    }
}

fn check_cap(dim: usize, config: &RunConfig) -> Result<(), CliError> {
    if dim > config.ambient_cap {
        return Err(EacError::AmbientCapExceeded {
            dim,
            cap: config.ambient_cap,
        }
        .into());
    }
    Ok(())
}

pub fn cmd_find(model_path: &Path, route: FindRoute, config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    let (loaded, _) = LoadedModel::read(model_path, true)?;
    check_cap(loaded.model.dim(), config)?;
    let model = &loaded.model;
    let tol = config.tol;

    let resolved = match route {
        FindRoute::Auto => {
            if check_commuting_family(model.generators(), tol).is_ok() {
                FindRoute::Eigenspace
            } else {
                FindRoute::Singlet
            }
        }
        other => other,
    };

    let (codes, algebra, complete): (Vec<CodeReport>, Option<AlgebraSummary>, bool) = match resolved {
        FindRoute::Eigenspace => (
            common_eigenspace_codes(model, tol).map_err(|e| loaded.name_error(e))?,
            None,
            true,
        ),
        FindRoute::Weight => (
            weight_space_codes(model, tol).map_err(|e| loaded.name_error(e))?,
            None,
            true,
        ),
        FindRoute::Singlet => {
            let search = singlet_sector_codes(model, tol).map_err(|e| loaded.name_error(e))?;
            let summary = AlgebraSummary::new(&search.algebra, search.semisimple);
            (search.codes, Some(summary), search.complete)
        }
        FindRoute::Auto => unreachable!("auto resolved above"),
    };

    let found = codes.iter().any(|c| c.verdict == Verdict::Eac && c.code.dim() >= 1);
    let payload = FindPayload {
        command: "find",
        route: resolved.as_str(),
        model: loaded.summary(),
        config: config_echo(config),
        algebra,
        complete,
        codes: codes.iter().map(CodeEntry::new).collect(),
    };
    Ok(Outcome {
        exit_code: if found { 0 } else { 3 },
        output: Report::new(payload).to_json(),
    })
}

pub fn cmd_verify(model_path: &Path, code_path: &Path, code_index: usize, config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    let (loaded, _) = LoadedModel::read(model_path, true)?;
    let raw = CodeBasis::from_json(&read_text(code_path)?, code_index)?.to_matrix()?;
    if raw.nrows() != loaded.model.dim() {
        return Err(CliError::Validation(format!(
            "code ambient dimension {} does not match model dimension {}",
            raw.nrows(),
            loaded.model.dim()
        )));
    }
    let drift = (raw.adjoint() * &raw - ComplexMatrix::identity(raw.ncols(), raw.ncols())).norm();
    let code = Subspace::from_nearly_orthonormal(raw, MAX_BASIS_DRIFT).map_err(|e| match e {
        EacError::NotOrthonormal { drift } => CliError::Validation(format!(
            "code basis drift {drift:.3e} exceeds {MAX_BASIS_DRIFT:.0e}"
        )),
        other => other.into(),
    })?;
    let report = verify_code_dynamically(&loaded.model, &code, &dynamical_config(config, config.env_dim))
        .map_err(|e| loaded.name_error(e))?;
    let exit_code = if report.verdict == Verdict::Eac { 0 } else { 3 };
    let payload = VerifyPayload {
        command: "verify",
        model: loaded.summary(),
        config: config_echo(config),
        basis_drift: Real(drift),
        code: CodeEntry::new(&report),
    };
    Ok(Outcome {
        exit_code,
        output: Report::new(payload).to_json(),
    })
}

/// One row of the register sweep.
#[derive(Debug, Clone)]
pub struct RegisterRow {
    pub d: usize,
    pub n: usize,
    pub ambient_dim: usize,
    pub code_dim: usize,
    pub lemma31_residual: f64,
    pub min_fidelity: Option<f64>,
}

pub const REGISTER_HEADER: &str = "d,n,ambient_dim,code_dim,lemma31_residual,min_fidelity";

pub fn register_rows(d: usize, n_lo: usize, n_hi: usize, config: &RunConfig) -> Result<Vec<RegisterRow>, CliError> {
    config.validate()?;
    if n_hi < n_lo {
        return Err(CliError::Validation(format!("--n-max {n_hi} is below --n {n_lo}")));
    }
    for n in n_lo..=n_hi {
        register_dim(d, n, config.ambient_cap)?;
    }
    (n_lo..=n_hi)
        .map(|n| {
            let ambient_dim = register_dim(d, n, config.ambient_cap)?;
            let report = register_singlet_code(d, n, config.tol, config.ambient_cap)?;
            let code_dim = report.code.dim();
            let min_fidelity = if code_dim >= 1 && ambient_dim * config.env_dim <= REGISTER_JOINT_DIM_LIMIT {
                let model = build_register_model(&gell_mann(d), n, None)?;
                let checked = verify_code_dynamically(&model, &report.code, &dynamical_config(config, config.env_dim))?;
                checked.dynamical_min_fidelity
            } else {
                None
            };
            Ok(RegisterRow {
                d,
                n,
                ambient_dim,
                code_dim,
                lemma31_residual: report.lemma31_residual,
                min_fidelity,
            })
        })
        .collect()
}

pub fn cmd_register(d: usize, n_lo: usize, n_hi: usize, config: &RunConfig) -> Result<Outcome, CliError> {
    let rows = register_rows(d, n_lo, n_hi, config)?;
    let mut out = String::new();
    let _ = writeln!(out, "{REGISTER_HEADER}");
    for row in &rows {
        let fidelity = row.min_fidelity.map(format_real).unwrap_or_else(|| "NA".into());
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            row.d,
            row.n,
            row.ambient_dim,
            row.code_dim,
            format_real(row.lemma31_residual),
            fidelity
        );
    }
    Ok(Outcome { exit_code: 0, output: out })
}

pub fn cmd_simulate(model_path: &Path, state_path: &Path, envops_path: &Path, config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    let (loaded, _) = LoadedModel::read(model_path, false)?;
    let d_s = loaded.model.dim();

    let state_doc = read_operators(state_path)?;
    let state_op = match state_doc.single(Role::State)? {
        Some(op) => op,
        None if state_doc.operators.len() == 1 => &state_doc.operators[0],
        None => {
            return Err(CliError::Validation(format!(
                "{}: expected one operator with role 'state'",
                state_path.display()
            )))
        }
    };
    if state_doc.dim != d_s {
        return Err(CliError::Validation(format!(
            "state '{}' has dimension {} but the model has dimension {d_s}",
            state_op.name, state_doc.dim
        )));
    }
    let rho_s = DensityState::new(state_op.to_matrix())
        .map_err(|e| CliError::Validation(format!("state '{}' is not a density matrix: {e}", state_op.name)))?;

    let env_doc = read_operators(envops_path)?;
    let d_e = env_doc.dim;
    check_cap(d_s * d_e, config)?;
    let couplings: Vec<&OperatorFile> = env_doc.with_role(Role::Coupling).collect();
    if couplings.len() != loaded.names.len() {
        return Err(CliError::Validation(format!(
            "{} coupling operators for {} generators",
            couplings.len(),
            loaded.names.len()
        )));
    }
    let h_e = match env_doc.single(Role::EnvHamiltonian)? {
        Some(op) => hermitian_matrix(op)?,
        None => ComplexMatrix::zeros(d_e, d_e),
    };
    let rho_e = match env_doc.single(Role::EnvState)? {
        Some(op) => DensityState::new(op.to_matrix())
            .map_err(|e| CliError::Validation(format!("env_state '{}' is not a density matrix: {e}", op.name)))?,
        None => sample_state(d_e, d_e, config.seed)?,
    };
    let terms = loaded
        .model
        .generators()
        .iter()
        .zip(&couplings)
        .map(|(s, e)| Ok(Coupling::new(s.clone(), hermitian_matrix(e)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let joint = HamiltonianModel::new(loaded.model.h_s().clone(), h_e, terms)?;
    let samples = decoherence_trace(&joint, &rho_s, &rho_e, &config.times)?;

    let mut out = String::from("t,purity,fidelity\n");
    for s in &samples {
        let _ = writeln!(
            out,
            "{},{},{}",
            format_real(s.time),
            format_real(s.purity),
            format_real(s.fidelity_vs_ideal)
        );
    }
    Ok(Outcome { exit_code: 0, output: out })
}
