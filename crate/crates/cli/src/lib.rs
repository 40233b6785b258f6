//! Command-line front end for the error-avoiding code toolkit.
//!
//! Commands read sparse operator files (see [`opfile`]), run the searches and
//! checks from `eac-core`, and return an [`Outcome`]: the exit code plus the
//! full text to write. Nothing is streamed.

pub mod commands;
pub mod error;
pub mod opfile;
pub mod report;

use eac_core::codes::DEFAULT_AMBIENT_CAP;
use eac_core::open_system::log_spaced_times;
use eac_core::DEFAULT_TOL;

pub use commands::{cmd_find, cmd_register, cmd_simulate, cmd_verify, FindRoute};
pub use error::CliError;

/// Environment variable that overrides `--seed`.
pub const SEED_ENV: &str = "EAC_SEED";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub tol: f64,
    pub env_dim: usize,
    pub trials: usize,
    pub times: Vec<f64>,
    pub seed: u64,
    pub ambient_cap: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            env_dim: 4,
            trials: 16,
            times: log_spaced_times(0.1, 10.0, 8),
            seed: 0,
            ambient_cap: DEFAULT_AMBIENT_CAP,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(CliError::Validation(format!("--tol must be positive (got {})", self.tol)));
        }
        if self.env_dim == 0 || self.trials == 0 || self.ambient_cap == 0 {
            return Err(CliError::Validation("--env-dim, --trials and --cap must be positive".into()));
        }
        if self.times.is_empty() {
            return Err(CliError::Validation("--times is empty".into()));
        }
        if let Some(t) = self.times.iter().find(|t| !t.is_finite() || **t < 0.0) {
            return Err(CliError::Validation(format!("sample time {t} is not a finite non-negative number")));
        }
        Ok(())
    }
}

/// Parses a comma-separated list of times.
pub fn parse_times(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|field| {
            let field = field.trim();
            field
                .parse::<f64>()
                .map_err(|_| CliError::Parse(format!("bad time value '{field}' in --times")))
        })
        .collect()
}

/// The seed from `EAC_SEED` when set, else `flag`.
pub fn resolve_seed(flag: u64, env: Option<&str>) -> Result<u64, CliError> {
    match env {
        Some(value) => value
            .trim()
            .parse::<u64>()
            .map_err(|_| CliError::Parse(format!("{SEED_ENV}='{value}' is not an unsigned integer"))),
        None => Ok(flag),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub output: String,
}
