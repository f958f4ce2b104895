//! Statistical laws of lexical structure: Zipf's meaning-frequency law, the
//! law of abbreviation, tie-aware correlation, Steiger comparisons and
//! power-law fitting.

pub mod error;
pub mod ingest;
pub mod lawfit;
pub mod model;
pub mod report;
pub mod stats;
pub mod steiger;
pub mod synth;

pub use error::{Error, Result};
pub use model::{CorrelationResult, CoverageStats, Dataset, FreqSource, Method, Role, Variable, WordRecord, WordRecordBuilder};
