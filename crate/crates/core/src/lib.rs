//! Numerical toolkit for error-avoiding (decoherence-free) codes.
//!
//! An error-avoiding code is a subspace of a system Hilbert space on which the
//! marginal dynamics, obtained by evolving system and environment jointly and
//! tracing the environment out, stays unitary for every environment
//! preparation. The crate is split into three layers:
//!
//! - [`linalg`]: dense complex kernels (Kronecker products, Hermitian
//!   propagators, partial traces, SVD nullspaces, joint eigenspaces).
//! - [`open_system`]: the closed system-plus-environment model and exact
//!   marginal evolution with purity and fidelity diagnostics.
//! - [`codes`]: code construction from the interaction structure (common
//!   eigenspaces, weight spaces, singlet sectors of the dynamical algebra,
//!   symmetric registers) together with static and dynamical verification.
//!
//! Tensor products always place the system as the slow (leftmost) factor.

pub mod codes;
pub mod error;
pub mod linalg;
pub mod open_system;
pub mod random;

pub use error::{EacError, Result};
pub use linalg::{ComplexMatrix, Subspace, DEFAULT_TOL};
