//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Curve parametrization degenerates (|gamma'(t)| below threshold).
    #[error("degenerate curve: |gamma'({t})| = {speed:e} is too small")]
    DegenerateCurve { t: f64, speed: f64 },

    /// A dense linear system was numerically singular.
    #[error("singular linear system: {0}")]
    SingularSystem(String),

    /// A configuration value failed validation.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Dataset metadata does not match the supplied configuration.
    #[error("metadata mismatch: {0}")]
    MetadataMismatch(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
