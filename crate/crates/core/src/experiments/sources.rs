use std::fs;

use serde::{Deserialize, Serialize};

use super::config::{resolve, SourceKind, SourceSpec};
use super::{ExperimentConfig, ExperimentError};
use crate::corpus::{
    entropy_filter, label_counts, load_canonical_tsv, parse_reaction_feed, synth_corpus, Emotion, LabeledDoc,
};

/// A source's labeled documents plus what was dropped on the way.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedSource {
    pub name: String,
    pub docs: Vec<LabeledDoc>,
    /// Posts left without a label by the label rule.
    pub unlabeled: usize,
    /// Posts removed by the entropy filter.
    pub filtered: usize,
    /// Malformed records skipped in tolerant mode, plus posts with empty text.
    pub rejected: usize,
}

/// Loads one source; documents carry the source's configured name.
pub fn load_source(spec: &SourceSpec, config: &ExperimentConfig) -> Result<LoadedSource, ExperimentError> {
    let fail = |e: &dyn std::fmt::Display| ExperimentError::data("load", format!("{}: {e}", spec.name));
    let mut out = LoadedSource {
        name: spec.name.clone(),
        docs: Vec::new(),
        unlabeled: 0,
        filtered: 0,
        rejected: 0,
    };
    let path = || resolve(config.base_dir(), spec.path.as_deref().unwrap_or("".as_ref()));
    match spec.kind {
        SourceKind::ReactionFeed => {
            let bytes = fs::read(path()).map_err(|e| fail(&e))?;
            let parsed = parse_reaction_feed(&bytes, config.parse_mode).map_err(|e| fail(&e))?;
            out.rejected = parsed.rejected.len();
            let total = parsed.posts.len();
            let posts = match config.max_entropy {
                Some(h) => entropy_filter(&parsed.posts, h),
                None => parsed.posts,
            };
            out.filtered = total - posts.len();
            for post in posts {
                match config.label_rule.apply(&post.reactions) {
                    None => out.unlabeled += 1,
                    Some(label) => match LabeledDoc::new(post.message, label, spec.name.clone()) {
                        Ok(doc) => out.docs.push(doc),
                        Err(_) => out.rejected += 1,
                    },
                }
            }
        }
        SourceKind::CanonicalTsv => {
            let load = load_canonical_tsv(path(), config.parse_mode).map_err(|e| fail(&e))?;
            out.rejected = load.rejected.len();
            out.docs = load.docs.into_iter().map(|d| d.with_source(spec.name.clone())).collect();
        }
        SourceKind::Synthetic => {
            let synth = spec.synthetic.as_ref().ok_or_else(|| fail(&"missing synthetic spec"))?;
            out.docs = synth_corpus(synth)
                .map_err(|e| fail(&e))?
                .into_iter()
                .map(|d| d.with_source(spec.name.clone()))
                .collect();
        }
    }
    Ok(out)
}

/// Share of each emotion among a source's labeled posts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SourceDistribution {
    pub source: String,
    /// Counts in emotion ordinal order (anger, joy, sadness, surprise).
    pub counts: [usize; Emotion::COUNT],
    pub proportions: [f64; Emotion::COUNT],
    pub labeled: usize,
    pub unlabeled: usize,
}

pub fn distribution_of(source: &LoadedSource) -> Result<SourceDistribution, ExperimentError> {
    let labels: Vec<Emotion> = source.docs.iter().map(LabeledDoc::label).collect();
    let counts = label_counts(&labels);
    let labeled: usize = counts.iter().sum();
    if labeled == 0 {
        return Err(ExperimentError::data("distribution", format!("{}: no labeled posts", source.name)));
    }
    Ok(SourceDistribution {
        source: source.name.clone(),
        counts,
        proportions: counts.map(|c| c as f64 / labeled as f64),
        labeled,
        unlabeled: source.unlabeled,
    })
}

pub fn source_distribution(sources: &[LoadedSource]) -> Result<Vec<SourceDistribution>, ExperimentError> {
    sources.iter().map(distribution_of).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{write_reaction_feed, ReactionPost, Reactions};

    fn post(message: &str, r: [u64; 8]) -> ReactionPost {
        ReactionPost {
            created_time: "2017-01-01T00:00:00+0000".into(),
            message: message.into(),
            reactions: Reactions(r),
        }
    }

    fn feed_config(dir: &std::path::Path, posts: &[ReactionPost]) -> (ExperimentConfig, SourceSpec) {
        fs::write(dir.join("feed.json"), write_reaction_feed(posts)).unwrap();
        let spec = SourceSpec::feed("Page", "feed.json");
        let config = ExperimentConfig::new(vec![spec.clone()], vec![], "out").with_base_dir(dir);
        (config, spec)
    }

    #[test]
    fn feed_labels_and_counts() {
        let dir = tempfile::tempdir().unwrap();
        let posts = [
            post("happy news", [10, 5, 3, 0, 0, 0, 0, 0]),
            post("terrible news", [10, 5, 0, 0, 0, 0, 4, 0]),
            post("nothing", [10, 10, 0, 0, 0, 0, 0, 0]),
            post("", [3, 0, 3, 0, 0, 0, 0, 0]),
        ];
        let (config, spec) = feed_config(dir.path(), &posts);
        let src = load_source(&spec, &config).unwrap();
        assert_eq!(src.docs.len(), 2);
        assert_eq!((src.unlabeled, src.rejected, src.filtered), (1, 1, 0));
        assert!(src.docs.iter().all(|d| d.source() == "Page"));
        let d = distribution_of(&src).unwrap();
        assert_eq!(d.proportions, [0.5, 0.5, 0.0, 0.0]);
        assert_eq!(d.unlabeled, 1);
    }

    #[test]
    fn entropy_filter_applies() {
        let dir = tempfile::tempdir().unwrap();
        let posts = [post("mixed", [4, 0, 1, 1, 1, 1, 0, 0]), post("clear", [4, 0, 4, 0, 0, 0, 0, 0])];
        let (mut config, spec) = feed_config(dir.path(), &posts);
        config.max_entropy = Some(0.5);
        let src = load_source(&spec, &config).unwrap();
        assert_eq!(src.filtered, 1);
        assert_eq!(src.docs[0].text(), "clear");
    }

    #[test]
    fn all_joy_and_empty() {
        let dir = tempfile::tempdir().unwrap();
        let (config, spec) = feed_config(dir.path(), &[post("a", [1, 0, 1, 0, 0, 0, 0, 0]), post("b", [1, 0, 0, 1, 0, 0, 0, 0])]);
        let d = distribution_of(&load_source(&spec, &config).unwrap()).unwrap();
        assert_eq!(d.proportions, [0.0, 1.0, 0.0, 0.0]);

        let (config, spec) = feed_config(dir.path(), &[]);
        let err = source_distribution(&[load_source(&spec, &config).unwrap()]).unwrap_err();
        assert!(err.to_string().contains("no labeled posts"));
        assert_eq!(err.exit_code(), 2);
    }
}
