use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sources::{load_source, LoadedSource};
use super::{ExperimentConfig, ExperimentError};
use crate::classifier::{train, TrainConfig};
use crate::corpus::{Emotion, LabeledDoc};
use crate::eval::evaluate;
use crate::features::{FeatureConfig, Featurizer};

/// Upper bound on candidates for the exhaustive search.
pub const MAX_CANDIDATES: usize = 15;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsetScore {
    /// Source names in candidate order.
    pub sources: Vec<String>,
    pub micro_f1: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub dev: String,
    pub results: Vec<SubsetScore>,
}

/// Dev micro-F1 of the bag-of-words tf-idf model trained on the pooled
/// documents of `sources`.
pub fn evaluate_subset(
    sources: &[&LoadedSource],
    dev: &[LabeledDoc],
    train_cfg: &TrainConfig,
) -> Result<f64, ExperimentError> {
    let docs: Vec<&LabeledDoc> = sources.iter().flat_map(|s| &s.docs).collect();
    let texts: Vec<&str> = docs.iter().map(|d| d.text()).collect();
    let y: Vec<Emotion> = docs.iter().map(|d| d.label()).collect();
    let featurizer = Featurizer::fit(&texts, &FeatureConfig::tfidf_only(), None, None)
        .map_err(|e| ExperimentError::internal("search", e))?;
    let model = train(&featurizer.transform_many(&texts), &y, train_cfg).map_err(|e| {
        let names: Vec<&str> = sources.iter().map(|s| s.name.as_str()).collect();
        ExperimentError::internal("search", format!("{}: {e}", names.join("+")))
    })?;
    let dev_texts: Vec<&str> = dev.iter().map(LabeledDoc::text).collect();
    let pred = model
        .predict_many(&featurizer.transform_many(&dev_texts))
        .map_err(|e| ExperimentError::internal("search", e))?;
    let gold: Vec<Emotion> = dev.iter().map(LabeledDoc::label).collect();
    Ok(evaluate(&gold, &pred).map_err(|e| ExperimentError::internal("search", e))?.micro_f1)
}

/// Scores every non-empty subset of at most `k_max` candidates, best first.
/// Ties go to the smaller subset, then to the lexicographically smaller
/// sorted name list.
pub fn search_subsets(
    candidates: &[LoadedSource],
    dev: &[LabeledDoc],
    k_max: usize,
    train_cfg: &TrainConfig,
) -> Result<Vec<SubsetScore>, ExperimentError> {
    let n = candidates.len();
    if n == 0 || n > MAX_CANDIDATES {
        return Err(ExperimentError::Config(format!(
            "page search needs 1 to {MAX_CANDIDATES} candidate sources, got {n}"
        )));
    }
    if k_max == 0 || k_max > n {
        return Err(ExperimentError::Config(format!("k_max must lie in 1..={n}, got {k_max}")));
    }
    if dev.is_empty() {
        return Err(ExperimentError::data("search", "development set has no labeled documents"));
    }
    let masks: Vec<u32> = (1u32..(1 << n)).filter(|m| m.count_ones() as usize <= k_max).collect();
    let mut results = masks
        .par_iter()
        .map(|&mask| {
            let subset: Vec<&LoadedSource> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &candidates[i]).collect();
            let micro_f1 = evaluate_subset(&subset, dev, train_cfg)?;
            Ok(SubsetScore { sources: subset.iter().map(|s| s.name.clone()).collect(), micro_f1 })
        })
        .collect::<Result<Vec<_>, ExperimentError>>()?;
    let key = |s: &SubsetScore| {
        let mut names = s.sources.clone();
        names.sort();
        names
    };
    results.sort_by(|a, b| {
        b.micro_f1
            .total_cmp(&a.micro_f1)
            .then(a.sources.len().cmp(&b.sources.len()))
            .then_with(|| key(a).cmp(&key(b)))
    });
    Ok(results)
}

/// Searches over the config's training sources, scoring on its first
/// evaluation dataset.
pub fn page_search(config: &ExperimentConfig, k_max: usize) -> Result<SearchOutcome, ExperimentError> {
    config.validate()?;
    let dev_spec = config
        .eval
        .first()
        .ok_or_else(|| ExperimentError::Config("page search needs an evaluation dataset in `eval`".into()))?;
    let candidates = config.sources.iter().map(|s| load_source(s, config)).collect::<Result<Vec<_>, _>>()?;
    let dev = load_source(dev_spec, config)?;
    Ok(SearchOutcome {
        dev: dev.name,
        results: search_subsets(&candidates, &dev.docs, k_max, &config.train)?,
    })
}
