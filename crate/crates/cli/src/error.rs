use std::path::PathBuf;

use polycurve::PolycurveError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] PolycurveError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed CSV input: {0}")]
    Csv(#[from] csv::Error),

    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1: a verification check failed; 2: invalid input or configuration;
    /// 3: numerical non-convergence; 4: I/O failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerificationFailed(_) => 1,
            CliError::Config(_) | CliError::Csv(_) => 2,
            CliError::Io { .. } => 4,
            CliError::Core(e) => match e {
                PolycurveError::NonConvergence(_)
                | PolycurveError::LineSearchStall(_)
                | PolycurveError::SecondVariationMismatch { .. } => 3,
                PolycurveError::Io(_) => 4,
                _ => 2,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
