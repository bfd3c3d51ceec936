//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by synthesis, verification, and serialization.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument is outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A matrix failed the unitarity check (`U U^dagger = I`).
    #[error("matrix is not unitary (residual {0:.3e})")]
    NonUnitary(f64),

    /// The requested construction cannot be carried out (e.g. not enough
    /// dirty ancilla qubits for a multi-controlled X chain).
    #[error("infeasible construction: {0}")]
    Infeasible(String),

    /// A resource guard of the reference oracle would be exceeded.
    #[error("oracle resource guard exceeded: {0}")]
    GuardExceeded(String),

    /// Malformed serialized input (circuit JSON or OpenQASM text).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
