//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by library operations.
#[derive(Debug, Error)]
pub enum Error {
    /// Operand shapes do not agree.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A value violates a domain invariant (non-finite entry, determinant or
    /// orthonormality drift beyond repair, invalid parameter range).
    #[error("invalid value: {0}")]
    Domain(String),

    /// A caller broke an API contract (tangent based at a different point,
    /// non-descent search direction).
    #[error("contract violation: {0}")]
    Contract(String),

    /// An internal numerical self-check failed.
    #[error("numerical integrity: {0}")]
    Numerical(String),

    /// Backtracking line search exhausted its budget without an acceptable step.
    #[error("line search failed after {0} backtracks")]
    StepFailure(usize),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
