//! Training and evaluation data: reaction feeds, distant labels, the
//! canonical corpus format, benchmark label mappings and synthetic corpora.

mod benchmarks;
mod emotion;
mod feed;
mod label;
mod scheme;
mod synth;
mod tsv;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use benchmarks::{load_fairy_tales, map_affective_scores, FairyTaleRecord, AFFECTIVE_DEFAULT_THRESHOLD};
pub use emotion::Emotion;
pub use feed::{parse_reaction_feed, write_reaction_feed, FeedParse, ReactionPost, Reactions};
pub use label::{assign_label, entropy_filter, reaction_entropy, LabelRule, TiePolicy};
pub use scheme::{Mapped, SourceScheme};
pub use synth::{class_vocabulary, synth_corpus, SynthSpec};
pub use tsv::{load_canonical_tsv, read_canonical_tsv, write_canonical_tsv, DocLoad};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("malformed JSON at byte {offset}: {message}")]
    Json { offset: usize, message: String },
    #[error("record {index}: {reason}")]
    Record { index: usize, reason: String },
    #[error("line {line}: {reason}")]
    Line { line: usize, reason: String },
    #[error("unknown canonical label {0:?}")]
    UnknownLabel(String),
    #[error("unknown {scheme} label {label:?}")]
    UnknownRawLabel { scheme: SourceScheme, label: String },
    #[error("score {value} out of range 0..=100")]
    ScoreOutOfRange { value: i64 },
    #[error("document text is empty")]
    EmptyText,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// How loaders react to a record that fails validation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParseMode {
    /// First bad record aborts the load.
    Strict,
    /// Bad records are skipped and reported alongside the good ones.
    #[default]
    Tolerant,
}

/// A text carrying one canonical emotion label and the name of its source.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledDoc {
    text: String,
    label: Emotion,
    source: String,
}

impl LabeledDoc {
    pub fn new(
        text: impl Into<String>,
        label: Emotion,
        source: impl Into<String>,
    ) -> Result<Self, CorpusError> {
        let text = text.into();
        if text.trim().is_empty() {
            return Err(CorpusError::EmptyText);
        }
        Ok(LabeledDoc {
            text,
            label,
            source: source.into(),
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn label(&self) -> Emotion {
        self.label
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = source.into();
        self
    }
}

impl fmt::Display for LabeledDoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.label, self.text)
    }
}

/// Per-emotion label counts; the statistic behind per-source distributions.
pub fn label_counts<'a>(labels: impl IntoIterator<Item = &'a Emotion>) -> [usize; Emotion::COUNT] {
    let mut counts = [0; Emotion::COUNT];
    for label in labels {
        counts[label.index()] += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labeled_doc_rejects_blank_text() {
        assert!(matches!(
            LabeledDoc::new("  \t ", Emotion::Joy, "x"),
            Err(CorpusError::EmptyText)
        ));
        let doc = LabeledDoc::new("fine", Emotion::Joy, "x").unwrap();
        assert_eq!(doc.text(), "fine");
        assert_eq!(doc.source(), "x");
    }
}
