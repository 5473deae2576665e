//! Word vectors: the text vector format, skip-gram training, and
//! retrofitting toward a lexicon-derived emotion graph.

mod graph;
mod retrofit;
mod skipgram;
mod table;

use thiserror::Error;

pub use graph::{build_emotion_graph, EdgeWeighting, EmotionGraph, DEFAULT_MAX_DEGREE};
pub use retrofit::{retrofit, retrofit_objective, retrofit_with_trace, Sweep, DEFAULT_RETROFIT_ITERATIONS};
pub use skipgram::{train_skipgram, SkipGramConfig};
pub use table::{cosine, load_vectors, read_vectors, write_vectors, EmbeddingTable, LoadedVectors};

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("line {line}: {reason}")]
    Format { line: usize, reason: String },
    #[error("vector has {found} values, table dimension is {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("embedding dimension must be positive")]
    ZeroDimension,
    #[error("vocabulary is empty after applying min_count {min_count}")]
    EmptyVocabulary { min_count: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
