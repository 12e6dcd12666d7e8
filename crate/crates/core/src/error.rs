//! Error type shared across the library.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported degree {degree}: supported degrees are 0..={cap}")]
    UnsupportedDegree { degree: usize, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("resampling error: {0}")]
    Resampling(String),

    #[error("near-delta regime: t = {t} is below the closed-form kernel threshold {threshold}; use the eigen-expansion method instead")]
    NearDelta { t: f64, threshold: f64 },

    #[error("truncation error: eigen-expansion tail bound {bound} exceeds tolerance {tolerance}")]
    Truncation { bound: f64, tolerance: f64 },

    #[error("convergence failure: {0}")]
    Convergence(String),

    #[error("internal error: {0}")]
    Internal(String),
}
