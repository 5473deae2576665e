use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{EmbeddingError, EmbeddingTable};

/// Skip-gram with negative sampling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SkipGramConfig {
    /// Maximum context distance; each position samples its own window in `1..=window`.
    pub window: usize,
    /// Initial learning rate, decayed linearly to `min_lr` over all epochs.
    pub lr: f64,
    pub min_lr: f64,
    pub dim: usize,
    pub min_count: usize,
    pub negatives: usize,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for SkipGramConfig {
    fn default() -> Self {
        SkipGramConfig {
            window: 5,
            lr: 0.01,
            min_lr: 0.0001,
            dim: 100,
            min_count: 2,
            negatives: 5,
            epochs: 5,
            seed: 1,
        }
    }
}

impl SkipGramConfig {
    fn validate(&self) -> Result<(), EmbeddingError> {
        let bad = |m: &str| Err(EmbeddingError::InvalidParameter(m.into()));
        if self.window == 0 {
            return bad("window must be positive");
        }
        if self.dim == 0 {
            return Err(EmbeddingError::ZeroDimension);
        }
        if self.epochs == 0 {
            return bad("epochs must be positive");
        }
        if !(self.lr > 0.0 && self.min_lr >= 0.0 && self.min_lr <= self.lr) {
            return bad("learning rates must satisfy 0 <= min_lr <= lr, lr > 0");
        }
        Ok(())
    }
}

/// Unigram^0.75 sampler over vocabulary rows.
struct NoiseSampler {
    cumulative: Vec<f64>,
}

impl NoiseSampler {
    fn new(counts: &[usize]) -> Self {
        let mut acc = 0.0;
        let cumulative = counts
            .iter()
            .map(|&c| {
                acc += (c as f64).powf(0.75);
                acc
            })
            .collect();
        NoiseSampler { cumulative }
    }

    fn sample(&self, rng: &mut impl Rng) -> usize {
        let total = *self.cumulative.last().expect("non-empty vocabulary");
        let x = rng.gen::<f64>() * total;
        self.cumulative
            .partition_point(|&c| c <= x)
            .min(self.cumulative.len() - 1)
    }
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Trains input vectors with skip-gram negative sampling.
///
/// Words seen fewer than `min_count` times are removed before windows are
/// formed. The vocabulary is ordered by descending count, ties by word.
/// Training is single-threaded and fully determined by `config.seed`.
pub fn train_skipgram<S: AsRef<str>>(
    corpus: &[Vec<S>],
    config: &SkipGramConfig,
) -> Result<EmbeddingTable, EmbeddingError> {
    config.validate()?;

    let mut counts: HashMap<&str, usize> = HashMap::new();
    for token in corpus.iter().flatten() {
        *counts.entry(token.as_ref()).or_default() += 1;
    }
    let mut vocab: Vec<(&str, usize)> = counts
        .into_iter()
        .filter(|&(_, c)| c >= config.min_count)
        .collect();
    if vocab.is_empty() {
        return Err(EmbeddingError::EmptyVocabulary {
            min_count: config.min_count,
        });
    }
    vocab.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    let row_of: HashMap<&str, usize> = vocab.iter().enumerate().map(|(i, &(w, _))| (w, i)).collect();

    let sentences: Vec<Vec<usize>> = corpus
        .iter()
        .map(|s| s.iter().filter_map(|t| row_of.get(t.as_ref()).copied()).collect::<Vec<_>>())
        .filter(|s| s.len() > 1)
        .collect();
    let tokens_per_epoch: usize = sentences.iter().map(Vec::len).sum();

    let dim = config.dim;
    let n = vocab.len();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut input: Vec<f64> = (0..n * dim)
        .map(|_| (rng.gen::<f64>() - 0.5) / dim as f64)
        .collect();
    let mut output = vec![0.0; n * dim];
    let sampler = NoiseSampler::new(&vocab.iter().map(|&(_, c)| c).collect::<Vec<_>>());

    let total = (tokens_per_epoch * config.epochs).max(1) as f64;
    let mut processed = 0usize;
    let mut grad = vec![0.0; dim];

    for _ in 0..config.epochs {
        for sentence in &sentences {
            for (pos, &center) in sentence.iter().enumerate() {
                let progress = processed as f64 / total;
                let lr = (config.lr - (config.lr - config.min_lr) * progress).max(config.min_lr);
                processed += 1;

                let reach = rng.gen_range(1..=config.window);
                let lo = pos.saturating_sub(reach);
                let hi = (pos + reach).min(sentence.len() - 1);
                for (ctx_pos, &context) in sentence.iter().enumerate().take(hi + 1).skip(lo) {
                    if ctx_pos == pos {
                        continue;
                    }
                    grad.iter_mut().for_each(|g| *g = 0.0);
                    let center_vec = &input[center * dim..(center + 1) * dim];

                    for k in 0..=config.negatives {
                        let (target, label) = if k == 0 {
                            (context, 1.0)
                        } else {
                            let t = sampler.sample(&mut rng);
                            if t == context {
                                continue;
                            }
                            (t, 0.0)
                        };
                        let out = &mut output[target * dim..(target + 1) * dim];
                        let score: f64 = center_vec.iter().zip(out.iter()).map(|(a, b)| a * b).sum();
                        let g = (label - sigmoid(score)) * lr;
                        for ((gi, oi), ci) in grad.iter_mut().zip(out.iter_mut()).zip(center_vec) {
                            *gi += g * *oi;
                            *oi += g * ci;
                        }
                    }
                    for (v, g) in input[center * dim..(center + 1) * dim].iter_mut().zip(&grad) {
                        *v += g;
                    }
                }
            }
        }
    }

    let mut table = EmbeddingTable::new(dim)?;
    for (row, &(word, _)) in vocab.iter().enumerate() {
        table.insert(word, &input[row * dim..(row + 1) * dim])?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SkipGramConfig {
        SkipGramConfig {
            dim: 8,
            epochs: 2,
            ..Default::default()
        }
    }

    fn corpus(text: &[&str]) -> Vec<Vec<String>> {
        text.iter()
            .map(|s| s.split(' ').map(String::from).collect())
            .collect()
    }

    #[test]
    fn rare_words_are_filtered() {
        let c = corpus(&["a b c a b", "b a once"]);
        let table = train_skipgram(&c, &small()).unwrap();
        assert!(!table.contains("once"));
        assert!(!table.contains("c"));
        assert_eq!(table.words(), ["a", "b"]);
    }

    #[test]
    fn deterministic_for_seed() {
        let c = corpus(&["x y z x y z", "z y x w w"]);
        let a = train_skipgram(&c, &small()).unwrap();
        let b = train_skipgram(&c, &small()).unwrap();
        assert_eq!(a, b);
        let other = train_skipgram(&c, &SkipGramConfig { seed: 9, ..small() }).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn empty_vocabulary_is_error() {
        let c = corpus(&["all distinct words here"]);
        assert!(matches!(
            train_skipgram(&c, &small()),
            Err(EmbeddingError::EmptyVocabulary { min_count: 2 })
        ));
        assert!(train_skipgram::<String>(&[], &small()).is_err());
    }

    #[test]
    fn vectors_are_finite() {
        let c = corpus(&["p q r s p q r s p q", "s r q p s r"]);
        let cfg = SkipGramConfig { lr: 0.5, epochs: 20, ..small() };
        let table = train_skipgram(&c, &cfg).unwrap();
        assert!(table.iter().all(|(_, v)| v.iter().all(|x| x.is_finite())));
    }

    #[test]
    fn noise_sampler_respects_weights() {
        let sampler = NoiseSampler::new(&[16, 0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut hits = [0usize; 3];
        for _ in 0..9000 {
            hits[sampler.sample(&mut rng)] += 1;
        }
        assert_eq!(hits[1], 0);
        // 16^0.75 = 8 against 1
        let ratio = hits[0] as f64 / hits[2] as f64;
        assert!((ratio - 8.0).abs() < 1.0, "{hits:?}");
    }
}
