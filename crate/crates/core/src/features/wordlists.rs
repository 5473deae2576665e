use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::FeatureError;

const STOPWORDS: &str = include_str!("../../data/stopwords.txt");
const NEGATIONS: &str = include_str!("../../data/negations.txt");

/// A lowercase word set read from one-word-per-line text.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WordList(BTreeSet<String>);

impl WordList {
    pub fn parse(text: &str) -> Self {
        WordList(
            text.lines()
                .map(|l| l.trim().to_lowercase())
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .collect(),
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, FeatureError> {
        Ok(Self::parse(&fs::read_to_string(path)?))
    }

    /// English function words used to pick out content words.
    pub fn stopwords() -> Self {
        Self::parse(STOPWORDS)
    }

    pub fn negations() -> Self {
        Self::parse(NEGATIONS)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

impl<S: Into<String>> FromIterator<S> for WordList {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        WordList(iter.into_iter().map(|s| s.into().to_lowercase()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_lists() {
        let neg = WordList::negations();
        assert_eq!(neg.len(), 10);
        for w in ["not", "no", "never", "n't", "cannot", "nor"] {
            assert!(neg.contains(w));
        }
        let stop = WordList::stopwords();
        assert!(stop.contains("the"));
        assert!(!stop.contains("happy"));
        assert!(!stop.contains("not"));
    }

    #[test]
    fn parse_skips_blank_and_comment_lines() {
        let list = WordList::parse("# mine\nFoo\n\n  bar \n");
        assert_eq!(list.iter().collect::<Vec<_>>(), ["bar", "foo"]);
    }
}
