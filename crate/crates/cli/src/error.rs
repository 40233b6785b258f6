use eac_core::EacError;
use thiserror::Error;

/// Process-level failure classes; each maps to one exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or malformed input.
    #[error("parse error: {0}")]
    Parse(String),
    /// Well-formed input that violates a dimension, Hermiticity, or other precondition.
    #[error("validation error: {0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Validation(_) => 2,
        }
    }
}

impl From<EacError> for CliError {
    fn from(err: EacError) -> Self {
        let kind = match &err {
            EacError::NonCommutingFamily { .. } => "NonCommutingFamily: ",
            EacError::AmbientCapExceeded { .. } => "AmbientCapExceeded: ",
            EacError::ClosureDimensionExceeded { .. } => "ClosureDimensionExceeded: ",
            _ => "",
        };
        CliError::Validation(format!("{kind}{err}"))
    }
}
