use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the operators, estimators and solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("inadmissible exponents (alpha={alpha}, beta={beta}): {reason}")]
    InvalidParams {
        alpha: f64,
        beta: f64,
        reason: &'static str,
    },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("symbol is not Hermitian at xi=({xi1}, {xi2})")]
    NonHermitianSymbol { xi1: f64, xi2: f64 },

    #[error("invalid sweep configuration: {0}")]
    InvalidSweep(String),

    #[error("Picard iteration diverged at iteration {iteration}")]
    Divergence { iteration: usize },

    #[error("reference solver blew up at t={time}")]
    BlowUp { time: f64 },

    #[error("malformed field file {path}: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
