use std::io;

use thiserror::Error;

/// Errors produced while validating parameters, building tables or evaluating.
#[derive(Debug, Error)]
pub enum Error {
    /// Some propagation constant is (numerically) zero.
    #[error("Wood anomaly: |beta| = {modulus:e} at mode {mode:?}")]
    WoodAnomaly { mode: Vec<i64>, modulus: f64 },

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("table format error: {0}")]
    Format(String),

    #[error("truncated table file: expected {expected} bytes, found {found}")]
    TruncatedFile { expected: u64, found: u64 },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("series did not converge after {terms} terms")]
    NoConvergence { terms: u64 },

    #[error("evaluation point coincides with a lattice source")]
    EvalAtSource,

    #[error("singular-coefficient cache does not match parameters: {0}")]
    CacheMismatch(String),

    #[error("parameter sets are incompatible: {0}")]
    ParamMismatch(String),

    #[error("grid extent mismatch: {0}")]
    ExtentMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
