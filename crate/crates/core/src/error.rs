use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Quantum numbers or physical parameters outside their allowed domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("validation error at line {line}: {message}")]
    Validation { line: usize, message: String },

    /// Radial grid too coarse for the local de Broglie wavelength.
    #[error("unresolved grid: step {step} a0 exceeds {limit} a0 (lambda/20 at R = {radius} a0)")]
    Resolution { step: f64, limit: f64, radius: f64 },

    #[error("matching error: {0}")]
    Matching(String),

    #[error("no crossing in bracket [{lo}, {hi}] a0")]
    NoCrossing { lo: f64, hi: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
