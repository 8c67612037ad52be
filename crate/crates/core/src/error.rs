use thiserror::Error;

/// Errors produced by the qutrit-bloch library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("bad shape: {0}")]
    BadShape(String),

    #[error("matrix is not Hermitian (max defect {defect:e} > {tol:e})")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("trace is {trace} (expected 1 within {tol:e})")]
    BadTrace { trace: f64, tol: f64 },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    #[error("invalid level pair ({i},{j}) for dimension {d}")]
    InvalidPair { i: usize, j: usize, d: usize },

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("not a valid state: {0}")]
    InvalidState(String),

    #[error("outside formula domain: {0}")]
    Domain(String),

    #[error("state is not pure (purity {purity})")]
    NotPure { purity: f64 },

    #[error("precondition unmet: {0}")]
    Precondition(String),

    #[error("unsupported dimension {0} (supported: 2..=8)")]
    UnsupportedDimension(usize),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
