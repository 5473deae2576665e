//! Config-driven pipeline runs, per-source emotion distributions and the
//! training-source subset search.

mod config;
mod presets;
mod run;
mod search;
mod sources;

use thiserror::Error;

pub use config::{EmbeddingSettings, ExperimentConfig, Holdout, SourceKind, SourceSpec, CONFIG_VERSION};
pub use presets::{page_key, preset, select_sources, Preset, PRESETS};
pub use run::{run, Artifacts, DatasetReport, RunRecord, StageTiming, TrainedPipeline};
pub use search::{evaluate_subset, page_search, search_subsets, SearchOutcome, SubsetScore, MAX_CANDIDATES};
pub use sources::{distribution_of, load_source, source_distribution, LoadedSource, SourceDistribution};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config: {0}")]
    Config(String),
    /// Unreadable or invalid input data.
    #[error("{stage}: {message}")]
    Data { stage: &'static str, message: String },
    #[error("{stage}: {message}")]
    Internal { stage: &'static str, message: String },
}

impl ExperimentError {
    pub(crate) fn data(stage: &'static str, err: impl std::fmt::Display) -> Self {
        ExperimentError::Data { stage, message: err.to_string() }
    }

    pub(crate) fn internal(stage: &'static str, err: impl std::fmt::Display) -> Self {
        ExperimentError::Internal { stage, message: err.to_string() }
    }

    pub fn stage(&self) -> Option<&'static str> {
        match self {
            ExperimentError::Config(_) => None,
            ExperimentError::Data { stage, .. } | ExperimentError::Internal { stage, .. } => Some(stage),
        }
    }

    /// 1 for configuration errors, 2 for data errors, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Config(_) => 1,
            ExperimentError::Data { .. } => 2,
            ExperimentError::Internal { .. } => 3,
        }
    }
}
