use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid state vector: |m| = {norm} exceeds 1")]
    InvalidState { norm: f64 },

    #[error("invalid direction: |n| = {norm}, expected unit norm")]
    InvalidDirection { norm: f64 },

    #[error("invalid sharpness: lambda = {lambda}, expected 0 <= lambda <= 1")]
    InvalidSharpness { lambda: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("operator not hermitian: residual {residual:.3e} exceeds tol {tol:.3e}")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid observable set: {0}")]
    InvalidSet(String),

    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
