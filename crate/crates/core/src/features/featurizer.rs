use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::surface::{surface_features, NEGATION_BLOCK_DIM, PUNCTUATION_BLOCK_DIM};
use super::text::tokenize;
use super::vectorizer::{smoothed_idf, TermFamily};
use super::{combine, lexicon_features, Category, FeatureConfig, FeatureError, Lexicon, Pooling, SparseVector, Vectorizer, WordList};
use crate::embeddings::EmbeddingTable;

/// Output blocks, in the order they are laid out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Block {
    Tfidf,
    WordNgrams,
    CharNgrams,
    Negation,
    Punctuation,
    Lexicon,
    Embeddings,
}

impl Block {
    pub fn name(self) -> &'static str {
        match self {
            Block::Tfidf => "tfidf",
            Block::WordNgrams => "word_ngrams",
            Block::CharNgrams => "char_ngrams",
            Block::Negation => "negation",
            Block::Punctuation => "punctuation",
            Block::Lexicon => "lexicon",
            Block::Embeddings => "embeddings",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSpan {
    pub block: Block,
    pub offset: usize,
    pub dim: usize,
}

/// Mean of the vectors of in-vocabulary tokens; the zero vector when none is.
pub fn embed_sentence<S: AsRef<str>>(table: &EmbeddingTable, tokens: &[S]) -> Vec<f64> {
    pool(table, tokens, |_| 1.0)
}

fn pool<S: AsRef<str>>(table: &EmbeddingTable, tokens: &[S], weight: impl Fn(&str) -> f64) -> Vec<f64> {
    let mut sum = vec![0.0; table.dim()];
    let mut total = 0.0;
    for token in tokens.iter().map(AsRef::as_ref) {
        if let Some(v) = table.get(token) {
            let w = weight(token);
            total += w;
            for (s, x) in sum.iter_mut().zip(v) {
                *s += w * x;
            }
        }
    }
    if total > 0.0 {
        sum.iter_mut().for_each(|s| *s /= total);
    }
    sum
}

/// A fitted vectorizer plus the resources the enabled blocks need.
/// Immutable once built; `transform` is pure and thread-safe.
#[derive(Clone, Debug)]
pub struct Featurizer {
    vectorizer: Vectorizer,
    lexicon: Option<Lexicon>,
    embeddings: Option<EmbeddingTable>,
    stopwords: WordList,
    negations: WordList,
}

impl Featurizer {
    /// Errors when an enabled block lacks its resource. Resources for
    /// disabled blocks are dropped.
    pub fn new(
        vectorizer: Vectorizer,
        lexicon: Option<Lexicon>,
        embeddings: Option<EmbeddingTable>,
    ) -> Result<Self, FeatureError> {
        let config = vectorizer.config();
        if config.lexicon && lexicon.is_none() {
            return Err(FeatureError::MissingResource("lexicon block enabled but no lexicon given".into()));
        }
        if config.embeddings && embeddings.is_none() {
            return Err(FeatureError::MissingResource(
                "embedding block enabled but no embedding table given".into(),
            ));
        }
        Ok(Featurizer {
            lexicon: lexicon.filter(|_| config.lexicon),
            embeddings: embeddings.filter(|_| config.embeddings),
            vectorizer,
            stopwords: WordList::stopwords(),
            negations: WordList::negations(),
        })
    }

    pub fn fit<S: AsRef<str> + Sync>(
        texts: &[S],
        config: &FeatureConfig,
        lexicon: Option<Lexicon>,
        embeddings: Option<EmbeddingTable>,
    ) -> Result<Self, FeatureError> {
        Self::new(Vectorizer::fit(texts, config)?, lexicon, embeddings)
    }

    pub fn with_word_lists(mut self, stopwords: WordList, negations: WordList) -> Self {
        self.stopwords = stopwords;
        self.negations = negations;
        self
    }

    pub fn vectorizer(&self) -> &Vectorizer {
        &self.vectorizer
    }

    pub fn config(&self) -> &FeatureConfig {
        self.vectorizer.config()
    }

    pub fn lexicon(&self) -> Option<&Lexicon> {
        self.lexicon.as_ref()
    }

    pub fn embeddings(&self) -> Option<&EmbeddingTable> {
        self.embeddings.as_ref()
    }

    /// Enabled blocks with their offsets; stable for a fixed config and fitted state.
    pub fn layout(&self) -> Vec<BlockSpan> {
        let config = self.config();
        let vocab_len = |f| self.vectorizer.vocabulary(f).map_or(0, |v| v.len());
        let candidates = [
            (config.tfidf, Block::Tfidf, vocab_len(TermFamily::Word)),
            (config.word_ngrams, Block::WordNgrams, vocab_len(TermFamily::WordNgram)),
            (config.char_ngrams, Block::CharNgrams, vocab_len(TermFamily::CharNgram)),
            (config.negation, Block::Negation, NEGATION_BLOCK_DIM),
            (config.punctuation, Block::Punctuation, PUNCTUATION_BLOCK_DIM),
            (config.lexicon, Block::Lexicon, Category::COUNT),
            (config.embeddings, Block::Embeddings, self.embeddings.as_ref().map_or(0, |t| t.dim())),
        ];
        let mut offset = 0;
        candidates
            .into_iter()
            .filter(|c| c.0)
            .map(|(_, block, dim)| {
                let span = BlockSpan { block, offset, dim };
                offset += dim;
                span
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.layout().iter().map(|s| s.dim).sum()
    }

    pub fn transform(&self, text: &str) -> SparseVector {
        let config = self.config();
        let tokens = tokenize(text, config.lowercase);
        let surface = (config.negation || config.punctuation).then(|| surface_features(text, &self.negations));
        let blocks: Vec<SparseVector> = self
            .layout()
            .into_iter()
            .map(|span| match span.block {
                Block::Tfidf => self.vectorizer.transform_tokens(TermFamily::Word, text, &tokens),
                Block::WordNgrams => self.vectorizer.transform_tokens(TermFamily::WordNgram, text, &tokens),
                Block::CharNgrams => self.vectorizer.transform_tokens(TermFamily::CharNgram, text, &tokens),
                Block::Negation => surface.expect("computed when enabled").negation_block(),
                Block::Punctuation => surface.expect("computed when enabled").punctuation_block(),
                Block::Lexicon => lexicon_features(self.lexicon.as_ref().expect("checked in new"), text, &self.stopwords),
                Block::Embeddings => {
                    let table = self.embeddings.as_ref().expect("checked in new");
                    SparseVector::from_dense(&self.pool(table, &tokens))
                }
            })
            .collect();
        combine(&blocks)
    }

    fn pool(&self, table: &EmbeddingTable, tokens: &[String]) -> Vec<f64> {
        match self.config().pooling {
            Pooling::Mean => embed_sentence(table, tokens),
            Pooling::IdfWeighted => {
                let vocab = self.vectorizer.vocabulary(TermFamily::Word).expect("unigrams always fitted");
                let n = self.vectorizer.n_docs();
                pool(table, tokens, |t| smoothed_idf(n, vocab.index_of(t).map_or(0, |i| vocab.df(i))))
            }
        }
    }

    /// Transforms in parallel; output order matches input order.
    pub fn transform_many<S: AsRef<str> + Sync>(&self, texts: &[S]) -> Vec<SparseVector> {
        texts.par_iter().map(|t| self.transform(t.as_ref())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> EmbeddingTable {
        let mut t = EmbeddingTable::new(2).unwrap();
        t.insert("up", &[1.0, 2.0]).unwrap();
        t.insert("down", &[-1.0, -2.0]).unwrap();
        t.insert("side", &[3.0, 0.0]).unwrap();
        t
    }

    #[test]
    fn embed_sentence_cases() {
        let t = table();
        assert_eq!(embed_sentence(&t, &["up"]), [1.0, 2.0]);
        assert_eq!(embed_sentence(&t, &["up", "down"]), [0.0, 0.0]);
        assert_eq!(embed_sentence(&t, &["nothing", "here"]), [0.0, 0.0]);
        assert_eq!(embed_sentence(&t, &["up", "side", "zzz"]), [2.0, 1.0]);
    }

    #[test]
    fn missing_resources_are_errors() {
        let cfg = FeatureConfig::default();
        assert!(matches!(Featurizer::fit(&["a"], &cfg, None, None), Err(FeatureError::MissingResource(_))));
        assert!(Featurizer::fit(&["a"], &cfg, None, Some(table())).is_ok());
        assert!(Featurizer::fit(&["a"], &FeatureConfig::all_text(), None, None).is_err());
    }

    #[test]
    fn layout_follows_declaration_order() {
        let cfg = FeatureConfig {
            char_ngrams: false,
            lexicon: true,
            ..FeatureConfig::default()
        };
        let f = Featurizer::fit(&["up down", "side up"], &cfg, Some(Lexicon::toy()), Some(table())).unwrap();
        let layout = f.layout();
        let blocks: Vec<_> = layout.iter().map(|s| (s.block, s.offset, s.dim)).collect();
        assert_eq!(
            blocks,
            [
                (Block::Tfidf, 0, 3),
                (Block::WordNgrams, 3, 2),
                (Block::Negation, 5, 2),
                (Block::Punctuation, 7, 6),
                (Block::Lexicon, 13, 10),
                (Block::Embeddings, 23, 2),
            ]
        );
        assert_eq!(f.dim(), 25);
        assert_eq!(f.transform("whatever").dim(), 25);
    }

    #[test]
    fn disabling_a_block_shrinks_by_its_size() {
        let docs = ["I am NOT happy!", "what a sad day?", "so angry"];
        let full = Featurizer::fit(&docs, &FeatureConfig::all_text(), Some(Lexicon::toy()), None).unwrap();
        for span in full.layout() {
            let mut cfg = FeatureConfig::all_text();
            match span.block {
                Block::Tfidf => cfg.tfidf = false,
                Block::WordNgrams => cfg.word_ngrams = false,
                Block::CharNgrams => cfg.char_ngrams = false,
                Block::Negation => cfg.negation = false,
                Block::Punctuation => cfg.punctuation = false,
                Block::Lexicon => cfg.lexicon = false,
                Block::Embeddings => unreachable!(),
            }
            let reduced = Featurizer::fit(&docs, &cfg, Some(Lexicon::toy()), None).unwrap();
            assert_eq!(reduced.dim() + span.dim, full.dim(), "{:?}", span.block);
        }
    }

    #[test]
    fn transform_places_blocks() {
        let cfg = FeatureConfig {
            negation: true,
            punctuation: true,
            ..FeatureConfig::tfidf_only()
        };
        let f = Featurizer::fit(&["happy", "not happy"], &cfg, None, None).unwrap();
        let x = f.transform("I am not happy!");
        // vocabulary [happy, not]; negation at 2..4, punctuation at 4..10
        assert_eq!(x.dim(), 10);
        assert_eq!(x.get(2), 1.0);
        assert_eq!(x.get(3), 1.0);
        assert_eq!(x.get(4), 1.0);
        assert_eq!(x.get(7), 1.0);
        assert!((x.get(0).powi(2) + x.get(1).powi(2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn idf_pooling_weights_rare_words() {
        let cfg = FeatureConfig {
            embeddings: true,
            pooling: Pooling::IdfWeighted,
            ..FeatureConfig::tfidf_only()
        };
        let f = Featurizer::fit(&["up side", "up"], &cfg, None, Some(table())).unwrap();
        let x = f.transform("up side").to_dense();
        let (w_up, w_side) = (1.0, (3.0f64 / 2.0).ln() + 1.0);
        let expect0 = (w_up * 1.0 + w_side * 3.0) / (w_up + w_side);
        assert!((x[2] - expect0).abs() < 1e-12);
    }

    #[test]
    fn parallel_matches_sequential() {
        let docs: Vec<String> = (0..50).map(|i| format!("doc {i} up {} side!", i % 7)).collect();
        let f = Featurizer::fit(&docs, &FeatureConfig::default(), None, Some(table())).unwrap();
        let seq: Vec<_> = docs.iter().map(|d| f.transform(d)).collect();
        assert_eq!(f.transform_many(&docs), seq);
    }
}
