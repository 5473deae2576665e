//! Text to sparse feature vectors: tf-idf and n-gram blocks, negation and
//! punctuation cues, lexicon sums and pooled word embeddings.

mod config;
mod featurizer;
mod lexicon;
mod sparse;
mod surface;
mod text;
mod vectorizer;
mod wordlists;

use thiserror::Error;

pub use config::{FeatureConfig, Pooling};
pub use featurizer::{embed_sentence, Block, BlockSpan, Featurizer};
pub use lexicon::{lexicon_features, lexicon_sums, Category, Flags, Lexicon};
pub use sparse::{combine, SparseVector};
pub use surface::{surface_features, SurfaceFeatures, NEGATION_BLOCK_DIM, PUNCTUATION_BLOCK_DIM};
pub use text::{char_ngrams, normalize_whitespace, tokenize, word_ngrams};
pub use vectorizer::{smoothed_idf, TermFamily, Vectorizer, Vocabulary};
pub use wordlists::WordList;

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("lexicon line {line}: {reason}")]
    Lexicon { line: usize, reason: String },
    #[error("invalid feature config: {0}")]
    InvalidConfig(String),
    #[error("cannot fit on an empty document list")]
    EmptyCorpus,
    #[error("fitted vocabulary is empty")]
    EmptyVocabulary,
    #[error("{0}")]
    MissingResource(String),
    #[error("vectorizer file: {0}")]
    Serialization(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
