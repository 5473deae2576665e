use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ExperimentError;
use crate::classifier::TrainConfig;
use crate::corpus::{LabelRule, ParseMode, SynthSpec};
use crate::embeddings::{SkipGramConfig, DEFAULT_MAX_DEGREE, DEFAULT_RETROFIT_ITERATIONS};
use crate::features::FeatureConfig;

pub const CONFIG_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    /// Reaction-annotated posts, labeled by the configured rule.
    ReactionFeed,
    /// `label<TAB>source<TAB>text` lines.
    CanonicalTsv,
    /// Planted-signal corpus generated from `synthetic`.
    Synthetic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    pub name: String,
    pub kind: SourceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synthetic: Option<SynthSpec>,
}

impl SourceSpec {
    pub fn feed(name: impl Into<String>, path: impl Into<PathBuf>) -> Self {
        SourceSpec {
            name: name.into(),
            kind: SourceKind::ReactionFeed,
            path: Some(path.into()),
            synthetic: None,
        }
    }

    pub fn tsv(name: impl Into<String>, path: impl Into<PathBuf>) -> Self {
        SourceSpec {
            name: name.into(),
            kind: SourceKind::CanonicalTsv,
            path: Some(path.into()),
            synthetic: None,
        }
    }

    pub fn synthetic(name: impl Into<String>, spec: SynthSpec) -> Self {
        SourceSpec {
            name: name.into(),
            kind: SourceKind::Synthetic,
            path: None,
            synthetic: Some(spec),
        }
    }

    fn validate(&self, base: &Path) -> Result<(), ExperimentError> {
        let err = |m: String| Err(ExperimentError::Config(format!("source {:?}: {m}", self.name)));
        if self.name.trim().is_empty() {
            return Err(ExperimentError::Config("source with an empty name".into()));
        }
        match self.kind {
            SourceKind::Synthetic => match (&self.path, &self.synthetic) {
                (None, Some(spec)) => spec.validate().or_else(|e| err(e.to_string())),
                _ => err("synthetic sources take `synthetic` and no `path`".into()),
            },
            SourceKind::ReactionFeed | SourceKind::CanonicalTsv => match (&self.path, &self.synthetic) {
                (Some(path), None) => {
                    let full = resolve(base, path);
                    if full.is_file() {
                        Ok(())
                    } else {
                        err(format!("file {} not found", full.display()))
                    }
                }
                _ => err("file sources take `path` and no `synthetic`".into()),
            },
        }
    }
}

/// A random fraction of the pooled training documents held out as an
/// extra evaluation dataset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Holdout {
    #[serde(default = "default_holdout_name")]
    pub name: String,
    pub fraction: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_holdout_name() -> String {
    "heldout".into()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum EmbeddingSettings {
    #[default]
    None,
    Load {
        path: PathBuf,
    },
    /// Skip-gram on the tokenized training documents.
    Train {
        #[serde(default)]
        skipgram: SkipGramConfig,
    },
    /// Loads `path` (or trains when absent), then retrofits toward the
    /// emotion graph of `lexicon`.
    Retrofit {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        path: Option<PathBuf>,
        #[serde(default)]
        skipgram: SkipGramConfig,
        lexicon: PathBuf,
        #[serde(default = "default_iterations")]
        iterations: usize,
        #[serde(default = "default_max_degree")]
        max_degree: usize,
    },
}

fn default_iterations() -> usize {
    DEFAULT_RETROFIT_ITERATIONS
}

fn default_max_degree() -> usize {
    DEFAULT_MAX_DEGREE
}

/// One experiment: training sources, evaluation datasets, features,
/// classifier settings and the output directory. Relative paths resolve
/// against the directory of the config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub version: u32,
    pub sources: Vec<SourceSpec>,
    #[serde(default)]
    pub eval: Vec<SourceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holdout: Option<Holdout>,
    #[serde(default)]
    pub features: FeatureConfig,
    #[serde(default)]
    pub train: TrainConfig,
    #[serde(default)]
    pub label_rule: LabelRule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_entropy: Option<f64>,
    #[serde(default)]
    pub parse_mode: ParseMode,
    #[serde(default)]
    pub embeddings: EmbeddingSettings,
    /// Lexicon for the lexicon feature block.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lexicon: Option<PathBuf>,
    pub output_dir: PathBuf,
    #[serde(skip)]
    base_dir: PathBuf,
}

pub(crate) fn resolve(base: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base.join(path)
    }
}

impl ExperimentConfig {
    /// Minimal config; everything else takes its default.
    pub fn new(sources: Vec<SourceSpec>, eval: Vec<SourceSpec>, output_dir: impl Into<PathBuf>) -> Self {
        ExperimentConfig {
            version: CONFIG_VERSION,
            sources,
            eval,
            holdout: None,
            features: FeatureConfig::default(),
            train: TrainConfig::default(),
            label_rule: LabelRule::default(),
            max_entropy: None,
            parse_mode: ParseMode::default(),
            embeddings: EmbeddingSettings::None,
            lexicon: None,
            output_dir: output_dir.into(),
            base_dir: PathBuf::new(),
        }
    }

    /// Reads and validates a config file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ExperimentError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| ExperimentError::Config(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let config = Self::from_json(&text, base)?;
        config.validate()?;
        Ok(config)
    }

    /// Parses without validating.
    pub fn from_json(json: &str, base_dir: impl Into<PathBuf>) -> Result<Self, ExperimentError> {
        let mut config: ExperimentConfig =
            serde_json::from_str(json).map_err(|e| ExperimentError::Config(e.to_string()))?;
        config.base_dir = base_dir.into();
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    pub fn base_dir(&self) -> &Path {
        &self.base_dir
    }

    pub fn with_base_dir(mut self, base: impl Into<PathBuf>) -> Self {
        self.base_dir = base.into();
        self
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        resolve(&self.base_dir, path)
    }

    pub fn output_path(&self) -> PathBuf {
        self.resolve(&self.output_dir)
    }

    /// Hex of the first 8 bytes of the SHA-256 of the config's JSON form.
    pub fn config_hash(&self) -> String {
        let digest = Sha256::digest(serde_json::to_vec(self).expect("config serializes"));
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: String| Err(ExperimentError::Config(m));
        if self.version != CONFIG_VERSION {
            return bad(format!("unsupported config version {} (expected {CONFIG_VERSION})", self.version));
        }
        if self.sources.is_empty() {
            return bad("at least one training source is required".into());
        }
        if self.eval.is_empty() && self.holdout.is_none() {
            return bad("at least one evaluation dataset (or a holdout) is required".into());
        }
        let mut names = BTreeSet::new();
        for s in &self.sources {
            s.validate(&self.base_dir)?;
            if !names.insert(s.name.as_str()) {
                return bad(format!("duplicate source name {:?}", s.name));
            }
        }
        let mut eval_names = BTreeSet::new();
        for s in &self.eval {
            s.validate(&self.base_dir)?;
            if !eval_names.insert(s.name.as_str()) {
                return bad(format!("duplicate evaluation dataset name {:?}", s.name));
            }
        }
        if let Some(h) = &self.holdout {
            if !(h.fraction > 0.0 && h.fraction < 1.0) {
                return bad(format!("holdout fraction must lie in (0, 1), got {}", h.fraction));
            }
            if !eval_names.insert(h.name.as_str()) {
                return bad(format!("holdout name {:?} clashes with an evaluation dataset", h.name));
            }
        }
        if let Some(h) = self.max_entropy {
            if !(h >= 0.0 && h.is_finite()) {
                return bad(format!("max_entropy must be a non-negative number, got {h}"));
            }
        }
        self.features.validate().or_else(|e| bad(e.to_string()))?;
        self.train.validate().or_else(|e| bad(e.to_string()))?;
        if self.features.lexicon && self.lexicon.is_none() {
            return bad("the lexicon feature block needs `lexicon`".into());
        }
        if self.features.embeddings && self.embeddings == EmbeddingSettings::None {
            return bad("the embedding feature block needs `embeddings` other than none".into());
        }
        let mut files: Vec<&PathBuf> = self.lexicon.iter().collect();
        match &self.embeddings {
            EmbeddingSettings::Load { path } => files.push(path),
            EmbeddingSettings::Retrofit { path, lexicon, iterations, .. } => {
                files.extend(path.iter());
                files.push(lexicon);
                if *iterations == 0 {
                    return bad("retrofit iterations must be at least 1".into());
                }
            }
            EmbeddingSettings::None | EmbeddingSettings::Train { .. } => {}
        }
        for f in files {
            let full = self.resolve(f);
            if !full.is_file() {
                return bad(format!("file {} not found", full.display()));
            }
        }
        if self.output_dir.as_os_str().is_empty() {
            return bad("output_dir must be set".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> ExperimentConfig {
        let mut c = ExperimentConfig::new(
            vec![SourceSpec::synthetic("s", SynthSpec::new(40, 5, 0.0, 1))],
            vec![SourceSpec::synthetic("dev", SynthSpec::new(20, 5, 0.0, 2))],
            "out",
        );
        c.features = FeatureConfig::tfidf_only();
        c
    }

    #[test]
    fn json_round_trip_and_unknown_keys() {
        let c = minimal();
        let json = c.to_json();
        let back = ExperimentConfig::from_json(&json, "").unwrap();
        assert_eq!(back, c);
        let typo = json.replacen("\"version\": 1", "\"version\": 1, \"sourcez\": []", 1);
        assert!(matches!(ExperimentConfig::from_json(&typo, ""), Err(ExperimentError::Config(_))));
    }

    #[test]
    fn validation_rules() {
        minimal().validate().unwrap();
        let mut c = minimal();
        c.eval.clear();
        assert!(c.validate().is_err());
        c.holdout = Some(Holdout { name: "heldout".into(), fraction: 0.2, seed: 0 });
        c.validate().unwrap();
        c.holdout.as_mut().unwrap().fraction = 1.0;
        assert!(c.validate().is_err());

        let mut c = minimal();
        c.sources.push(c.sources[0].clone());
        assert!(c.validate().is_err());

        let mut c = minimal();
        c.sources.push(SourceSpec::feed("missing", "/definitely/not/here.json"));
        let err = c.validate().unwrap_err().to_string();
        assert!(err.contains("not found"), "{err}");

        let mut c = minimal();
        c.features = FeatureConfig::default();
        assert!(c.validate().is_err());
        c.embeddings = EmbeddingSettings::Train { skipgram: SkipGramConfig::default() };
        c.validate().unwrap();
    }

    #[test]
    fn embedding_settings_tagged() {
        let e: EmbeddingSettings = serde_json::from_str(r#"{"mode": "load", "path": "v.txt"}"#).unwrap();
        assert_eq!(e, EmbeddingSettings::Load { path: "v.txt".into() });
        let e: EmbeddingSettings = serde_json::from_str(r#"{"mode": "retrofit", "lexicon": "l.tsv"}"#).unwrap();
        assert!(matches!(e, EmbeddingSettings::Retrofit { iterations: 10, max_degree: 50, path: None, .. }));
        assert!(serde_json::from_str::<EmbeddingSettings>(r#"{"mode": "load", "path": "v", "x": 1}"#).is_err());
    }

    #[test]
    fn hash_tracks_every_field() {
        let base = minimal();
        let mut variants = vec![base.clone()];
        let mut v = base.clone();
        v.train.c = 2.0;
        variants.push(v);
        let mut v = base.clone();
        v.train.seed = 1;
        variants.push(v);
        let mut v = base.clone();
        v.features.sublinear_tf = true;
        variants.push(v);
        let mut v = base.clone();
        v.max_entropy = Some(1.0);
        variants.push(v);
        let mut v = base.clone();
        v.output_dir = "elsewhere".into();
        variants.push(v);
        let mut v = base.clone();
        v.sources[0].name = "t".into();
        variants.push(v);
        let mut v = base.clone();
        v.label_rule.sum_before_argmax = true;
        variants.push(v);
        let hashes: BTreeSet<String> = variants.iter().map(ExperimentConfig::config_hash).collect();
        assert_eq!(hashes.len(), variants.len());
        assert_eq!(base.config_hash().len(), 16);
        assert_eq!(base.config_hash(), base.clone().with_base_dir("/x").config_hash());
    }
}
