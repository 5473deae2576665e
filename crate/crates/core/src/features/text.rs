//! Tokenization and n-gram enumeration.

/// Splits on every non-alphanumeric character (Unicode-aware).
pub fn tokenize(text: &str, lowercase: bool) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| if lowercase { t.to_lowercase() } else { t.to_string() })
        .collect()
}

/// Collapses whitespace runs to single spaces and trims the ends.
pub fn normalize_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// All contiguous character windows of length `low..=high` over the
/// whitespace-normalized text, shorter lengths first.
pub fn char_ngrams(text: &str, low: usize, high: usize) -> Vec<String> {
    let chars: Vec<char> = normalize_whitespace(text).chars().collect();
    let mut out = Vec::new();
    for n in low.max(1)..=high {
        if n > chars.len() {
            break;
        }
        out.extend(chars.windows(n).map(|w| w.iter().collect::<String>()));
    }
    out
}

/// All contiguous token windows of length `low..=high`, shorter lengths first.
pub fn word_ngrams<S>(tokens: &[S], low: usize, high: usize) -> Vec<&[S]> {
    let mut out = Vec::new();
    for n in low.max(1)..=high {
        if n > tokens.len() {
            break;
        }
        out.extend(tokens.windows(n));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn tokenize_splits_on_punctuation() {
        assert_eq!(tokenize("I'm NOT happy!!", true), ["i", "m", "not", "happy"]);
        assert_eq!(tokenize("Čaj, über-cool", false), ["Čaj", "über", "cool"]);
        assert!(tokenize("  ...  ", true).is_empty());
    }

    #[test]
    fn char_ngram_examples() {
        assert_eq!(char_ngrams("ab", 2, 5), ["ab"]);
        assert_eq!(char_ngrams("a  b", 2, 2), ["a ", " b"]);
        assert!(char_ngrams("a", 2, 5).is_empty());
        assert!(char_ngrams("", 1, 3).is_empty());
    }

    #[test]
    fn word_ngram_examples() {
        let tokens = ["i", "am", "sad"];
        let grams: Vec<Vec<&str>> = word_ngrams(&tokens, 2, 3).into_iter().map(|g| g.to_vec()).collect();
        assert_eq!(grams, vec![vec!["i", "am"], vec!["am", "sad"], vec!["i", "am", "sad"]]);
        assert!(word_ngrams(&["hi"], 2, 3).is_empty());
    }

    proptest! {
        #[test]
        fn char_ngram_count(s in "[a-z ]{0,20}", n in 1usize..6) {
            let normalized = normalize_whitespace(&s);
            let expected = (normalized.chars().count() + 1).saturating_sub(n);
            prop_assert_eq!(char_ngrams(&s, n, n).len(), expected);
        }
    }
}
