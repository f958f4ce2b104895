use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: {left} != {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("sample too small: need at least {need}, got {got}")]
    TooFew { need: usize, got: usize },

    #[error("zero variance")]
    ZeroVariance,

    #[error("degenerate ties")]
    DegenerateTies,

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("correlation matrix is not positive semidefinite (det = {det:e})")]
    NotPositiveSemidefinite { det: f64 },

    #[error("correlation out of range: {0}")]
    CorrelationOutOfRange(f64),

    #[error("Steiger's test is not defined for Kendall correlations")]
    KendallSteiger,

    #[error("length variables must differ")]
    SameLengthVariable,

    #[error("no complete bin: {n} items with bin width {lambda}")]
    NoCompleteBin { n: usize, lambda: usize },

    #[error("non-positive value {value} at index {index}")]
    NonPositive { index: usize, value: f64 },

    #[error("nonlinear least squares did not converge after {iterations} iterations (prefactor {prefactor}, exponent {exponent})")]
    NoConvergence {
        iterations: usize,
        prefactor: f64,
        exponent: f64,
    },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid record: {0}")]
    InvalidRecord(String),

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Process exit code: 2 for bad input, 3 for numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Stage { source, .. } => source.exit_code(),
            Error::LengthMismatch { .. }
            | Error::TooFew { .. }
            | Error::ZeroVariance
            | Error::DegenerateTies
            | Error::NonFinite(_)
            | Error::NotPositiveSemidefinite { .. }
            | Error::CorrelationOutOfRange(_)
            | Error::NoCompleteBin { .. }
            | Error::NonPositive { .. }
            | Error::NoConvergence { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
