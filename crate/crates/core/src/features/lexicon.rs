//! Word-emotion association lexicons in the NRC-style
//! `word<TAB>category<TAB>0|1` format.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use super::text::tokenize;
use super::{FeatureError, SparseVector, WordList};

const TOY_LEXICON: &str = include_str!("../../data/toy_lexicon.tsv");

/// Lexicon categories; eight emotions followed by the two valence flags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    Anger,
    Anticipation,
    Disgust,
    Fear,
    Joy,
    Sadness,
    Surprise,
    Trust,
    Positive,
    Negative,
}

impl Category {
    pub const ALL: [Category; 10] = [
        Category::Anger,
        Category::Anticipation,
        Category::Disgust,
        Category::Fear,
        Category::Joy,
        Category::Sadness,
        Category::Surprise,
        Category::Trust,
        Category::Positive,
        Category::Negative,
    ];

    pub const COUNT: usize = 10;

    pub fn name(self) -> &'static str {
        match self {
            Category::Anger => "anger",
            Category::Anticipation => "anticipation",
            Category::Disgust => "disgust",
            Category::Fear => "fear",
            Category::Joy => "joy",
            Category::Sadness => "sadness",
            Category::Surprise => "surprise",
            Category::Trust => "trust",
            Category::Positive => "positive",
            Category::Negative => "negative",
        }
    }

    pub fn is_emotion(self) -> bool {
        !matches!(self, Category::Positive | Category::Negative)
    }

    fn bit(self) -> u16 {
        1 << self as u16
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| format!("unknown lexicon category {s:?}"))
    }
}

/// Set of categories flagged for one word.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Flags(u16);

impl Flags {
    pub fn contains(self, category: Category) -> bool {
        self.0 & category.bit() != 0
    }

    pub fn insert(&mut self, category: Category) {
        self.0 |= category.bit();
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Category> {
        Category::ALL.into_iter().filter(move |c| self.contains(*c))
    }

    /// True when both flag at least one common emotion (valence ignored).
    pub fn shares_emotion(self, other: Flags) -> bool {
        self.0 & other.0 & EMOTION_MASK != 0
    }
}

const EMOTION_MASK: u16 = (1 << 8) - 1;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<String, Flags>,
}

impl Lexicon {
    pub fn parse(text: &str) -> Result<Self, FeatureError> {
        Self::read(text.as_bytes())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, FeatureError> {
        Self::read(BufReader::new(File::open(path)?))
    }

    /// Reads `word<TAB>category<TAB>0|1` rows. Rows with 0 are accepted and
    /// ignored; words that end up with no flag are not stored.
    pub fn read<R: BufRead>(reader: R) -> Result<Self, FeatureError> {
        let mut entries: BTreeMap<String, Flags> = BTreeMap::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let err = |reason: String| FeatureError::Lexicon { line: i + 1, reason };
            let fields: Vec<&str> = line.trim_end_matches('\r').split('\t').collect();
            let [word, category, value] = fields[..] else {
                return Err(err(format!("expected 3 tab-separated fields, found {}", fields.len())));
            };
            let category: Category = category.parse().map_err(err)?;
            match value.trim() {
                "1" => entries.entry(word.trim().to_lowercase()).or_default().insert(category),
                "0" => {}
                other => return Err(err(format!("association must be 0 or 1, found {other:?}"))),
            }
        }
        Ok(Lexicon { entries })
    }

    /// The 30-word lexicon bundled for tests and demos.
    pub fn toy() -> Self {
        Self::parse(TOY_LEXICON).expect("bundled lexicon is valid")
    }

    pub fn from_entries<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = (S, Vec<Category>)>,
        S: Into<String>,
    {
        let mut lex = Lexicon::default();
        for (word, categories) in entries {
            let mut flags = Flags::default();
            categories.into_iter().for_each(|c| flags.insert(c));
            if !flags.is_empty() {
                lex.entries.insert(word.into().to_lowercase(), flags);
            }
        }
        lex
    }

    /// Flags for `word`; empty for words not in the lexicon.
    pub fn flags(&self, word: &str) -> Flags {
        self.entries.get(word).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in lexicographic word order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, Flags)> {
        self.entries.iter().map(|(w, f)| (w.as_str(), *f))
    }

    /// Writes only the positive associations, in word then category order.
    pub fn write<W: Write>(&self, mut writer: W) -> io::Result<()> {
        for (word, flags) in self.iter() {
            for category in flags.iter() {
                writeln!(writer, "{word}\t{}\t1", category.name())?;
            }
        }
        writer.flush()
    }
}

/// Per-category sums of lexicon flags over the content words of `tokens`
/// (tokens not in `stopwords`). Tokens are looked up as given.
pub fn lexicon_sums<S: AsRef<str>>(lex: &Lexicon, tokens: &[S], stopwords: &WordList) -> [f64; Category::COUNT] {
    let mut sums = [0.0; Category::COUNT];
    for token in tokens.iter().map(AsRef::as_ref) {
        if stopwords.contains(token) {
            continue;
        }
        for category in lex.flags(token).iter() {
            sums[category as usize] += 1.0;
        }
    }
    sums
}

/// Lexicon block of a raw text: lowercased tokens, stopwords removed.
pub fn lexicon_features(lex: &Lexicon, text: &str, stopwords: &WordList) -> SparseVector {
    SparseVector::from_dense(&lexicon_sums(lex, &tokenize(text, true), stopwords))
}
