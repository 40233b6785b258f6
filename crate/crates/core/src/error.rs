use thiserror::Error;

use crate::linalg::ComplexMatrix;

/// Failures raised by the linear-algebra, dynamics, and code-construction layers.
#[derive(Debug, Error)]
pub enum EacError {
    #[error("operator is not Hermitian (relative residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    /// Indices refer to the position in the family that was checked.
    #[error("operators {first} and {second} do not commute (commutator norm {norm:.3e})")]
    NonCommutingFamily {
        first: usize,
        second: usize,
        norm: f64,
    },

    #[error("rank {rank} is outside 1..={dim}")]
    InvalidRank { rank: usize, dim: usize },

    #[error("Lie closure exceeded {max_dim} dimensions")]
    ClosureDimensionExceeded {
        max_dim: usize,
        partial: Vec<ComplexMatrix>,
    },

    #[error("operator algebra is not commutator-closed")]
    NotClosed,

    #[error("subspace is the zero subspace")]
    EmptySubspace,

    #[error("ambient dimension {dim} exceeds the configured cap {cap}")]
    AmbientCapExceeded { dim: usize, cap: usize },

    #[error("basis is not orthonormal (drift {drift:.3e})")]
    NotOrthonormal { drift: f64 },

    #[error("invalid density state: {0}")]
    InvalidState(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, EacError>;
