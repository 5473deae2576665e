use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CorpusError, Emotion, LabeledDoc};

const STEMS: [&str; Emotion::COUNT] = ["grr", "yay", "sob", "wow"];

/// Parameters of a planted-signal corpus: each emotion owns a disjoint block
/// of pseudo-words and documents draw mostly from their own block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSpec {
    pub n_docs: usize,
    pub vocab_per_class: usize,
    /// Probability that a token comes from another class's block.
    pub noise_rate: f64,
    /// Probability that a document's label is replaced by a uniformly random one.
    pub label_noise: f64,
    pub tokens_per_doc: usize,
    pub seed: u64,
    pub source: String,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            n_docs: 2000,
            vocab_per_class: 50,
            noise_rate: 0.05,
            label_noise: 0.0,
            tokens_per_doc: 12,
            seed: 0,
            source: "synthetic".into(),
        }
    }
}

impl SynthSpec {
    pub fn new(n_docs: usize, vocab_per_class: usize, noise_rate: f64, seed: u64) -> Self {
        SynthSpec {
            n_docs,
            vocab_per_class,
            noise_rate,
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        let bad = |msg: &str| Err(CorpusError::InvalidParameter(msg.into()));
        if self.n_docs == 0 {
            return bad("n_docs must be positive");
        }
        if self.vocab_per_class == 0 {
            return bad("vocab_per_class must be positive");
        }
        if self.tokens_per_doc == 0 {
            return bad("tokens_per_doc must be positive");
        }
        if !(0.0..1.0).contains(&self.noise_rate) {
            return bad("noise_rate must lie in [0, 1)");
        }
        if !(0.0..=1.0).contains(&self.label_noise) {
            return bad("label_noise must lie in [0, 1]");
        }
        Ok(())
    }
}

/// The pseudo-word vocabulary owned by `emotion`.
pub fn class_vocabulary(emotion: Emotion, vocab_per_class: usize) -> Vec<String> {
    (0..vocab_per_class).map(|j| word(emotion, j)).collect()
}

fn word(emotion: Emotion, j: usize) -> String {
    format!("{}{j}", STEMS[emotion.index()])
}

/// Generates a deterministic planted-signal corpus.
///
/// Class counts differ by at most one document.
pub fn synth_corpus(spec: &SynthSpec) -> Result<Vec<LabeledDoc>, CorpusError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut classes: Vec<Emotion> = (0..spec.n_docs).map(|i| Emotion::ALL[i % Emotion::COUNT]).collect();
    classes.shuffle(&mut rng);

    let mut docs = Vec::with_capacity(spec.n_docs);
    for class in classes {
        let mut tokens = Vec::with_capacity(spec.tokens_per_doc);
        for _ in 0..spec.tokens_per_doc {
            let owner = if spec.noise_rate > 0.0 && rng.gen_bool(spec.noise_rate) {
                let shift = rng.gen_range(1..Emotion::COUNT);
                Emotion::ALL[(class.index() + shift) % Emotion::COUNT]
            } else {
                class
            };
            tokens.push(word(owner, rng.gen_range(0..spec.vocab_per_class)));
        }
        let label = if spec.label_noise > 0.0 && rng.gen_bool(spec.label_noise) {
            Emotion::ALL[rng.gen_range(0..Emotion::COUNT)]
        } else {
            class
        };
        docs.push(LabeledDoc::new(tokens.join(" "), label, spec.source.clone())?);
    }
    Ok(docs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn noise_free_docs_use_own_vocabulary() {
        let docs = synth_corpus(&SynthSpec::new(4, 10, 0.0, 3)).unwrap();
        assert_eq!(docs.len(), 4);
        let labels: HashSet<_> = docs.iter().map(|d| d.label()).collect();
        assert_eq!(labels.len(), 4);
        for doc in &docs {
            let vocab: HashSet<_> = class_vocabulary(doc.label(), 10).into_iter().collect();
            assert!(doc.text().split(' ').all(|t| vocab.contains(t)), "{doc}");
        }
    }

    #[test]
    fn same_seed_same_corpus() {
        let spec = SynthSpec::new(200, 20, 0.1, 42);
        assert_eq!(synth_corpus(&spec).unwrap(), synth_corpus(&spec).unwrap());
        let other = SynthSpec { seed: 43, ..spec.clone() };
        assert_ne!(synth_corpus(&spec).unwrap(), synth_corpus(&other).unwrap());
    }

    #[test]
    fn classes_are_balanced() {
        for n in [1, 5, 7, 2001] {
            let docs = synth_corpus(&SynthSpec::new(n, 5, 0.2, 1)).unwrap();
            let counts = crate::corpus::label_counts(docs.iter().map(|d| &d.label));
            let (lo, hi) = (counts.iter().min().unwrap(), counts.iter().max().unwrap());
            assert!(hi - lo <= 1, "{counts:?}");
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(synth_corpus(&SynthSpec::new(0, 5, 0.0, 1)).is_err());
        assert!(synth_corpus(&SynthSpec::new(5, 0, 0.0, 1)).is_err());
        assert!(synth_corpus(&SynthSpec::new(5, 5, 1.0, 1)).is_err());
    }
}
