//! Error type shared across the crate.

use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SampError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The S-transform was evaluated at (or numerically too close to) a pole.
    /// Solvers treat this as a divergence signal, not a crash.
    #[error("S-transform pole at omega = {omega} (alpha = {alpha})")]
    SpectralPole { omega: f64, alpha: f64 },

    #[error("argument outside the transform's admissible domain: {0}")]
    SpectralDomain(String),

    #[error("scalar root solve failed: {0}")]
    RootNotFound(String),

    #[error("quadrature did not reach tolerance {tol:e} (error estimate {err:e})")]
    QuadratureNonConvergence { tol: f64, err: f64 },

    #[error("rank-one update is singular: 1 + delta * sigma_kk = {denom:e}")]
    SingularUpdate { denom: f64 },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("linear algebra backend error: {0}")]
    Linalg(String),

    #[error("all {0} trials diverged")]
    AllTrialsDiverged(usize),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl From<ndarray_linalg::error::LinalgError> for SampError {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        SampError::Linalg(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, SampError>;
