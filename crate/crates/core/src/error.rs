use std::path::PathBuf;

use thiserror::Error;

use crate::params::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("speed {speed} m/s at sample {sample} is below the minimum of {min} m/s")]
    SpeedTooLow { speed: f64, min: f64, sample: usize },

    #[error("slip angle {alpha} rad is outside (-pi/2, pi/2)")]
    InvalidSlip { alpha: f64 },

    #[error("misaligned traces: {0}")]
    Misaligned(String),

    #[error("numeric failure (non-finite value) at sample {sample}")]
    NumericFailure { sample: usize },

    #[error("reference trace is constant, normalized error is undefined")]
    UndefinedNormalization,

    #[error("parameter validation failed: {0}")]
    InvalidParams(ValidationReport),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Schema { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Config {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn schema(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}
