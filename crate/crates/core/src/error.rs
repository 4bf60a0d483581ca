use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed interval [{lo}, {hi}]: lower bound exceeds upper bound")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("invalid gain: {0}")]
    InvalidGain(String),

    #[error("time step must be positive, got {0}")]
    NonPositiveStep(f64),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("simulation diverged at step {step}")]
    Diverged { step: usize },

    #[error("window [{start}, {end}] contains no trace records")]
    EmptyWindow { start: f64, end: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
