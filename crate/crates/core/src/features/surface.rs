use super::text::tokenize;
use super::{SparseVector, WordList};

pub const NEGATION_BLOCK_DIM: usize = 2;
pub const PUNCTUATION_BLOCK_DIM: usize = 6;

/// Negation and punctuation cues of one text. Counts and presence flags are
/// both kept.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SurfaceFeatures {
    pub negations: usize,
    pub exclamations: usize,
    pub questions: usize,
    pub punctuation: usize,
    pub all_caps_tokens: usize,
}

impl SurfaceFeatures {
    /// `[negation count, negation present]`
    pub fn negation_block(&self) -> SparseVector {
        SparseVector::from_dense(&[self.negations as f64, flag(self.negations)])
    }

    /// `['!' count, '?' count, punctuation count, '!' present, '?' present, all-caps tokens]`
    pub fn punctuation_block(&self) -> SparseVector {
        SparseVector::from_dense(&[
            self.exclamations as f64,
            self.questions as f64,
            self.punctuation as f64,
            flag(self.exclamations),
            flag(self.questions),
            self.all_caps_tokens as f64,
        ])
    }
}

fn flag(count: usize) -> f64 {
    if count > 0 {
        1.0
    } else {
        0.0
    }
}

fn is_punctuation(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(
            c,
            '…' | '“' | '”' | '‘' | '’' | '¡' | '¿' | '«' | '»' | '–' | '—'
        )
}

/// Counts negation hits, '!' and '?', all punctuation, and all-caps tokens
/// (at least two letters, none lowercase).
///
/// A whitespace-delimited word is a negation when, stripped of surrounding
/// punctuation and lowercased, it is in `negations`; a list containing
/// `n't` also matches contractions such as "don't".
pub fn surface_features(text: &str, negations: &WordList) -> SurfaceFeatures {
    let contractions = negations.contains("n't");
    let negation_count = text
        .split_whitespace()
        .map(|chunk| {
            chunk
                .trim_matches(|c: char| !c.is_alphanumeric() && c != '\'' && c != '’')
                .replace('’', "'")
                .to_lowercase()
        })
        .filter(|w| !w.is_empty() && (negations.contains(w) || (contractions && w.ends_with("n't"))))
        .count();

    let all_caps_tokens = tokenize(text, false)
        .iter()
        .filter(|t| {
            t.chars().filter(|c| c.is_alphabetic()).count() >= 2 && !t.chars().any(char::is_lowercase)
        })
        .count();

    SurfaceFeatures {
        negations: negation_count,
        exclamations: text.matches('!').count(),
        questions: text.matches('?').count(),
        punctuation: text.chars().filter(|&c| is_punctuation(c)).count(),
        all_caps_tokens,
    }
}
