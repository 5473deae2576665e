use serde::{Deserialize, Serialize};

use super::FeatureError;

/// How word vectors are pooled into one sentence vector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pooling {
    #[default]
    Mean,
    /// Each in-vocabulary token weighted by its idf.
    IdfWeighted,
}

/// Which feature families are produced, plus tokenization settings.
///
/// `Default` is the strongest configuration reported for the approach: every
/// family except the lexicon, plus sentence embeddings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeatureConfig {
    pub tfidf: bool,
    pub word_ngrams: bool,
    pub char_ngrams: bool,
    pub negation: bool,
    pub punctuation: bool,
    pub lexicon: bool,
    pub embeddings: bool,
    pub word_ngram_range: (usize, usize),
    pub char_ngram_range: (usize, usize),
    /// Terms seen fewer times than this across the fitting corpus are dropped.
    pub min_term_freq: usize,
    pub lowercase: bool,
    /// Use `1 + ln(tf)` instead of the raw count.
    pub sublinear_tf: bool,
    pub pooling: Pooling,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            tfidf: true,
            word_ngrams: true,
            char_ngrams: true,
            negation: true,
            punctuation: true,
            lexicon: false,
            embeddings: true,
            word_ngram_range: (2, 3),
            char_ngram_range: (2, 5),
            min_term_freq: 1,
            lowercase: true,
            sublinear_tf: false,
            pooling: Pooling::Mean,
        }
    }
}

impl FeatureConfig {
    /// Bag-of-words tf-idf and nothing else.
    pub fn tfidf_only() -> Self {
        FeatureConfig {
            word_ngrams: false,
            char_ngrams: false,
            negation: false,
            punctuation: false,
            lexicon: false,
            embeddings: false,
            ..Default::default()
        }
    }

    /// Every text-derived family, including the lexicon, without embeddings.
    pub fn all_text() -> Self {
        FeatureConfig {
            lexicon: true,
            embeddings: false,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), FeatureError> {
        for (name, (lo, hi)) in [
            ("word_ngram_range", self.word_ngram_range),
            ("char_ngram_range", self.char_ngram_range),
        ] {
            if lo < 1 || lo > hi {
                return Err(FeatureError::InvalidConfig(format!(
                    "{name} must satisfy 1 <= low <= high, got ({lo}, {hi})"
                )));
            }
        }
        if !(self.tfidf
            || self.word_ngrams
            || self.char_ngrams
            || self.negation
            || self.punctuation
            || self.lexicon
            || self.embeddings)
        {
            return Err(FeatureError::InvalidConfig("no feature family enabled".into()));
        }
        if self.min_term_freq == 0 {
            return Err(FeatureError::InvalidConfig("min_term_freq must be at least 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_matches_best_reported_setup() {
        let c = FeatureConfig::default();
        assert!(c.tfidf && c.word_ngrams && c.char_ngrams && c.negation && c.punctuation && c.embeddings);
        assert!(!c.lexicon);
        assert_eq!(c.word_ngram_range, (2, 3));
        assert_eq!(c.char_ngram_range, (2, 5));
        c.validate().unwrap();
    }

    #[test]
    fn validation() {
        let bad = FeatureConfig {
            char_ngram_range: (3, 2),
            ..FeatureConfig::tfidf_only()
        };
        assert!(bad.validate().is_err());
        let bad = FeatureConfig {
            word_ngram_range: (0, 2),
            ..FeatureConfig::tfidf_only()
        };
        assert!(bad.validate().is_err());
        let none = FeatureConfig {
            tfidf: false,
            ..FeatureConfig::tfidf_only()
        };
        assert!(none.validate().is_err());
    }

    #[test]
    fn json_rejects_unknown_keys() {
        let c: FeatureConfig = serde_json::from_str(r#"{"lexicon": true}"#).unwrap();
        assert!(c.lexicon && c.tfidf);
        assert!(serde_json::from_str::<FeatureConfig>(r#"{"lexikon": true}"#).is_err());
    }
}
