use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::text::{char_ngrams, tokenize, word_ngrams};
use super::{FeatureConfig, FeatureError, SparseVector};

const FORMAT: &str = "emoreact-vectorizer";
const VERSION: u32 = 1;

/// Term namespaces; each has its own vocabulary and its own output block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermFamily {
    Word,
    WordNgram,
    CharNgram,
}

/// Terms in lexicographic order with their document frequencies.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    df: Vec<usize>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    fn from_sorted(entries: Vec<(String, usize)>) -> Self {
        let index = entries.iter().enumerate().map(|(i, (t, _))| (t.clone(), i)).collect();
        let (terms, df) = entries.into_iter().unzip();
        Vocabulary { terms, df, index }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, index: usize) -> &str {
        &self.terms[index]
    }

    pub fn df(&self, index: usize) -> usize {
        self.df[index]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.terms.iter().map(String::as_str).zip(self.df.iter().copied())
    }
}

/// Smoothed inverse document frequency: `ln((1 + n) / (1 + df)) + 1`.
pub fn smoothed_idf(n_docs: usize, df: usize) -> f64 {
    ((1.0 + n_docs as f64) / (1.0 + df as f64)).ln() + 1.0
}

/// Fitted vocabularies and document frequencies for the term families.
///
/// The unigram vocabulary is always fitted (it also drives idf-weighted
/// embedding pooling); n-gram vocabularies only when enabled.
#[derive(Clone, Debug, PartialEq)]
pub struct Vectorizer {
    config: FeatureConfig,
    n_docs: usize,
    vocabularies: BTreeMap<TermFamily, Vocabulary>,
}

impl Vectorizer {
    /// Fits on `texts`. An empty corpus is an error; a corpus without any
    /// token yields empty vocabularies (see [`Vectorizer::fit_strict`]).
    pub fn fit<S: AsRef<str>>(texts: &[S], config: &FeatureConfig) -> Result<Self, FeatureError> {
        config.validate()?;
        if texts.is_empty() {
            return Err(FeatureError::EmptyCorpus);
        }
        let families = Self::families_for(config);
        // family -> term -> (df, total count)
        let mut stats: Vec<HashMap<String, (usize, usize)>> = vec![HashMap::new(); families.len()];
        for text in texts {
            let tokens = tokenize(text.as_ref(), config.lowercase);
            for (family, table) in families.iter().zip(stats.iter_mut()) {
                let mut counts: HashMap<String, usize> = HashMap::new();
                for term in extract(config, *family, text.as_ref(), &tokens) {
                    *counts.entry(term).or_default() += 1;
                }
                for (term, count) in counts {
                    let entry = table.entry(term).or_default();
                    entry.0 += 1;
                    entry.1 += count;
                }
            }
        }

        let vocabularies = families
            .into_iter()
            .zip(stats)
            .map(|(family, table)| {
                let mut entries: Vec<(String, usize)> = table
                    .into_iter()
                    .filter(|(_, (_, total))| *total >= config.min_term_freq)
                    .map(|(term, (df, _))| (term, df))
                    .collect();
                entries.sort_unstable_by(|a, b| a.0.cmp(&b.0));
                (family, Vocabulary::from_sorted(entries))
            })
            .collect();

        Ok(Vectorizer {
            config: config.clone(),
            n_docs: texts.len(),
            vocabularies,
        })
    }

    /// Like [`Vectorizer::fit`] but an empty unigram vocabulary is an error.
    pub fn fit_strict<S: AsRef<str>>(texts: &[S], config: &FeatureConfig) -> Result<Self, FeatureError> {
        let v = Self::fit(texts, config)?;
        if v.vocabulary(TermFamily::Word).is_none_or(Vocabulary::is_empty) {
            return Err(FeatureError::EmptyVocabulary);
        }
        Ok(v)
    }

    fn families_for(config: &FeatureConfig) -> Vec<TermFamily> {
        let mut families = vec![TermFamily::Word];
        if config.word_ngrams {
            families.push(TermFamily::WordNgram);
        }
        if config.char_ngrams {
            families.push(TermFamily::CharNgram);
        }
        families
    }

    pub fn config(&self) -> &FeatureConfig {
        &self.config
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn vocabulary(&self, family: TermFamily) -> Option<&Vocabulary> {
        self.vocabularies.get(&family)
    }

    pub fn idf(&self, family: TermFamily, term: &str) -> Option<f64> {
        let vocab = self.vocabulary(family)?;
        vocab.index_of(term).map(|i| smoothed_idf(self.n_docs, vocab.df(i)))
    }

    /// Tf-idf block of one family, L2-normalized. Out-of-vocabulary terms
    /// are ignored; a text with none in vocabulary gives the zero vector.
    pub fn transform_family(&self, family: TermFamily, text: &str) -> SparseVector {
        let tokens = tokenize(text, self.config.lowercase);
        self.transform_tokens(family, text, &tokens)
    }

    pub(crate) fn transform_tokens(&self, family: TermFamily, text: &str, tokens: &[String]) -> SparseVector {
        let Some(vocab) = self.vocabulary(family) else {
            return SparseVector::zeros(0);
        };
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for term in extract(&self.config, family, text, tokens) {
            if let Some(i) = vocab.index_of(&term) {
                *counts.entry(i).or_default() += 1;
            }
        }
        let pairs = counts
            .into_iter()
            .map(|(i, count)| {
                let tf = if self.config.sublinear_tf {
                    1.0 + (count as f64).ln()
                } else {
                    count as f64
                };
                (i, tf * smoothed_idf(self.n_docs, vocab.df(i)))
            })
            .collect();
        let mut v = SparseVector::from_pairs(vocab.len(), pairs).expect("indices come from the vocabulary");
        v.normalize();
        v
    }

    /// Unigram tf-idf vector of `text`.
    pub fn tfidf_transform(&self, text: &str) -> SparseVector {
        self.transform_family(TermFamily::Word, text)
    }

    pub fn to_json(&self) -> String {
        let file = VectorizerFile {
            format: FORMAT.into(),
            version: VERSION,
            config: self.config.clone(),
            n_docs: self.n_docs,
            vocabularies: self
                .vocabularies
                .iter()
                .map(|(f, v)| (*f, v.iter().map(|(t, df)| (t.to_string(), df)).collect()))
                .collect(),
        };
        let mut json = serde_json::to_string_pretty(&file).expect("vectorizer serializes");
        json.push('\n');
        json
    }

    pub fn from_json(json: &str) -> Result<Self, FeatureError> {
        let file: VectorizerFile = serde_json::from_str(json).map_err(|e| FeatureError::Serialization(e.to_string()))?;
        let bad = |m: String| Err(FeatureError::Serialization(m));
        if file.format != FORMAT {
            return bad(format!("not a vectorizer file (format {:?})", file.format));
        }
        if file.version != VERSION {
            return bad(format!("unsupported vectorizer version {}", file.version));
        }
        file.config.validate()?;
        if file.n_docs == 0 {
            return bad("n_docs must be positive".into());
        }
        let mut vocabularies = BTreeMap::new();
        for (family, entries) in file.vocabularies {
            for pair in entries.windows(2) {
                if pair[0].0 >= pair[1].0 {
                    return bad(format!("{family:?} vocabulary is not strictly sorted at {:?}", pair[1].0));
                }
            }
            if let Some((term, df)) = entries.iter().find(|(_, df)| *df == 0 || *df > file.n_docs) {
                return bad(format!("document frequency {df} of {term:?} outside 1..={}", file.n_docs));
            }
            vocabularies.insert(family, Vocabulary::from_sorted(entries));
        }
        if !vocabularies.contains_key(&TermFamily::Word) {
            return bad("missing word vocabulary".into());
        }
        Ok(Vectorizer {
            config: file.config,
            n_docs: file.n_docs,
            vocabularies,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorizerFile {
    format: String,
    version: u32,
    config: FeatureConfig,
    n_docs: usize,
    vocabularies: BTreeMap<TermFamily, Vec<(String, usize)>>,
}

fn extract(config: &FeatureConfig, family: TermFamily, text: &str, tokens: &[String]) -> Vec<String> {
    match family {
        TermFamily::Word => tokens.to_vec(),
        TermFamily::WordNgram => {
            let (lo, hi) = config.word_ngram_range;
            word_ngrams(tokens, lo, hi).into_iter().map(|g| g.join(" ")).collect()
        }
        TermFamily::CharNgram => {
            let (lo, hi) = config.char_ngram_range;
            if config.lowercase {
                char_ngrams(&text.to_lowercase(), lo, hi)
            } else {
                char_ngrams(text, lo, hi)
            }
        }
    }
}
