use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::EmbeddingSettings;
use super::sources::{load_source, source_distribution, SourceDistribution};
use super::{ExperimentConfig, ExperimentError};
use crate::classifier::{train, LinearModel};
use crate::corpus::{Emotion, LabeledDoc};
use crate::embeddings::{build_emotion_graph, load_vectors, retrofit, train_skipgram, write_vectors, EmbeddingTable, SkipGramConfig};
use crate::eval::{evaluate, render_report, EvalReport, ReportFormat};
use crate::features::{tokenize, BlockSpan, Featurizer, Lexicon, Vectorizer};

const MODEL_FILE: &str = "model.json";
const VECTORIZER_FILE: &str = "vectorizer.json";
const LEXICON_FILE: &str = "lexicon.tsv";
const EMBEDDINGS_FILE: &str = "embeddings.txt";
const RECORD_FILE: &str = "run_record.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetReport {
    pub name: String,
    pub report: EvalReport,
}

/// Files needed to rebuild the trained pipeline. Relative paths are inside
/// the output directory.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Artifacts {
    pub model: PathBuf,
    pub vectorizer: PathBuf,
    pub lexicon: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config_hash: String,
    pub n_train: usize,
    pub feature_dim: usize,
    pub layout: Vec<BlockSpan>,
    pub reports: Vec<DatasetReport>,
    pub timings: Vec<StageTiming>,
    pub distributions: Vec<SourceDistribution>,
    pub artifacts: Artifacts,
}

impl RunRecord {
    pub fn report(&self, name: &str) -> Option<&EvalReport> {
        self.reports.iter().find(|r| r.name == name).map(|r| &r.report)
    }
}

#[derive(Default)]
struct Timer(Vec<StageTiming>);

impl Timer {
    fn stage<T>(&mut self, stage: &str, f: impl FnOnce() -> Result<T, ExperimentError>) -> Result<T, ExperimentError> {
        let start = Instant::now();
        let out = f();
        self.0.push(StageTiming { stage: stage.into(), seconds: start.elapsed().as_secs_f64() });
        out
    }
}

/// Tracks written files so a failed write can be rolled back.
struct Output {
    dir: PathBuf,
    created: bool,
    written: Vec<PathBuf>,
}

impl Output {
    fn open(dir: PathBuf) -> Result<Self, ExperimentError> {
        let created = !dir.exists();
        fs::create_dir_all(&dir).map_err(|e| ExperimentError::internal("write", format!("{}: {e}", dir.display())))?;
        Ok(Output { dir, created, written: Vec::new() })
    }

    fn write(&mut self, name: &str, bytes: impl AsRef<[u8]>) -> Result<(), ExperimentError> {
        let path = self.dir.join(name);
        self.written.push(path.clone());
        fs::write(&path, bytes).map_err(|e| ExperimentError::internal("write", format!("{}: {e}", path.display())))
    }

    fn discard(self) {
        for path in &self.written {
            let _ = fs::remove_file(path);
        }
        if self.created {
            let _ = fs::remove_dir(&self.dir);
        }
    }
}

/// Splits off `fraction` of the documents (at least one, at most all but one).
fn split_holdout(docs: Vec<LabeledDoc>, fraction: f64, seed: u64) -> (Vec<LabeledDoc>, Vec<LabeledDoc>) {
    let mut idx: Vec<usize> = (0..docs.len()).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n_held = ((docs.len() as f64 * fraction).round() as usize).clamp(1, docs.len().saturating_sub(1).max(1));
    let mut held_mask = vec![false; docs.len()];
    for &i in &idx[..n_held] {
        held_mask[i] = true;
    }
    let (mut train, mut held) = (Vec::new(), Vec::new());
    for (doc, held_out) in docs.into_iter().zip(held_mask) {
        if held_out { held.push(doc) } else { train.push(doc) }
    }
    (train, held)
}

fn train_vectors(docs: &[LabeledDoc], cfg: &SkipGramConfig, lowercase: bool) -> Result<EmbeddingTable, ExperimentError> {
    let corpus: Vec<Vec<String>> = docs.iter().map(|d| tokenize(d.text(), lowercase)).collect();
    train_skipgram(&corpus, cfg).map_err(|e| ExperimentError::data("embeddings", e))
}

fn load_table(path: &Path) -> Result<EmbeddingTable, ExperimentError> {
    let loaded = load_vectors(path).map_err(|e| ExperimentError::data("embeddings", format!("{}: {e}", path.display())))?;
    for w in &loaded.warnings {
        log::warn!("{}: {w}", path.display());
    }
    Ok(loaded.table)
}

/// Builds the table and reports whether it must be written to the output
/// directory (trained or retrofitted) or can be referenced in place.
fn build_embeddings(
    config: &ExperimentConfig,
    docs: &[LabeledDoc],
) -> Result<Option<(EmbeddingTable, Option<PathBuf>)>, ExperimentError> {
    let lowercase = config.features.lowercase;
    Ok(match &config.embeddings {
        EmbeddingSettings::None => None,
        EmbeddingSettings::Load { path } => {
            let full = config.resolve(path);
            Some((load_table(&full)?, Some(full)))
        }
        EmbeddingSettings::Train { skipgram } => Some((train_vectors(docs, skipgram, lowercase)?, None)),
        EmbeddingSettings::Retrofit { path, skipgram, lexicon, iterations, max_degree } => {
            let base = match path {
                Some(p) => load_table(&config.resolve(p))?,
                None => train_vectors(docs, skipgram, lowercase)?,
            };
            let lex_path = config.resolve(lexicon);
            let lex = Lexicon::load(&lex_path)
                .map_err(|e| ExperimentError::data("embeddings", format!("{}: {e}", lex_path.display())))?;
            let graph = build_emotion_graph(&lex, &base, *max_degree);
            let table = retrofit(&base, &graph, *iterations).map_err(|e| ExperimentError::internal("embeddings", e))?;
            Some((table, None))
        }
    })
}

fn texts(docs: &[LabeledDoc]) -> Vec<&str> {
    docs.iter().map(LabeledDoc::text).collect()
}

fn labels(docs: &[LabeledDoc]) -> Vec<Emotion> {
    docs.iter().map(LabeledDoc::label).collect()
}

/// Runs the whole pipeline and writes model, vectorizer, reports and the
/// run record to the output directory. On failure nothing is left behind.
pub fn run(config: &ExperimentConfig) -> Result<RunRecord, ExperimentError> {
    config.validate()?;
    let mut timer = Timer::default();

    let (sources, mut eval_sets) = timer.stage("load", || {
        let sources = config.sources.iter().map(|s| load_source(s, config)).collect::<Result<Vec<_>, _>>()?;
        let eval = config
            .eval
            .iter()
            .map(|s| load_source(s, config).map(|l| (l.name, l.docs)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((sources, eval))
    })?;
    let distributions = source_distribution(&sources)?;
    for (name, docs) in &eval_sets {
        if docs.is_empty() {
            return Err(ExperimentError::data("load", format!("{name}: no labeled documents")));
        }
    }
    let mut train_docs: Vec<LabeledDoc> = sources.into_iter().flat_map(|s| s.docs).collect();
    if let Some(h) = &config.holdout {
        let (rest, held) = split_holdout(train_docs, h.fraction, h.seed);
        train_docs = rest;
        eval_sets.push((h.name.clone(), held));
    }

    let lexicon = timer.stage("lexicon", || {
        config
            .lexicon
            .as_ref()
            .filter(|_| config.features.lexicon)
            .map(|p| {
                let path = config.resolve(p);
                Lexicon::load(&path).map_err(|e| ExperimentError::data("lexicon", format!("{}: {e}", path.display())))
            })
            .transpose()
    })?;
    let embeddings = timer.stage("embeddings", || {
        if config.features.embeddings {
            build_embeddings(config, &train_docs)
        } else {
            Ok(None)
        }
    })?;
    let (table, table_source) = match embeddings {
        Some((t, src)) => (Some(t), Some(src)),
        None => (None, None),
    };

    let (featurizer, x) = timer.stage("features", || {
        let texts = texts(&train_docs);
        let f = Featurizer::fit(&texts, &config.features, lexicon, table).map_err(|e| ExperimentError::internal("features", e))?;
        let x = f.transform_many(&texts);
        Ok((f, x))
    })?;
    let model = timer.stage("train", || {
        train(&x, &labels(&train_docs), &config.train).map_err(|e| ExperimentError::internal("train", e))
    })?;
    let reports = timer.stage("evaluate", || {
        eval_sets
            .iter()
            .map(|(name, docs)| {
                let pred = model
                    .predict_many(&featurizer.transform_many(&texts(docs)))
                    .map_err(|e| ExperimentError::internal("evaluate", e))?;
                let report = evaluate(&labels(docs), &pred).map_err(|e| ExperimentError::internal("evaluate", e))?;
                Ok(DatasetReport { name: name.clone(), report })
            })
            .collect::<Result<Vec<_>, _>>()
    })?;

    let mut artifacts = Artifacts {
        model: MODEL_FILE.into(),
        vectorizer: VECTORIZER_FILE.into(),
        lexicon: featurizer.lexicon().map(|_| LEXICON_FILE.into()),
        embeddings: None,
    };
    let mut record = RunRecord {
        config_hash: config.config_hash(),
        n_train: train_docs.len(),
        feature_dim: featurizer.dim(),
        layout: featurizer.layout(),
        reports,
        timings: Vec::new(),
        distributions,
        artifacts: Artifacts::default(),
    };

    let mut out = Output::open(config.output_path())?;
    let written = timer.stage("write", || {
        out.write(MODEL_FILE, model.to_json())?;
        out.write(VECTORIZER_FILE, featurizer.vectorizer().to_json())?;
        if let Some(lex) = featurizer.lexicon() {
            let mut buf = Vec::new();
            lex.write(&mut buf).map_err(|e| ExperimentError::internal("write", e))?;
            out.write(LEXICON_FILE, buf)?;
        }
        if let (Some(table), Some(src)) = (featurizer.embeddings(), &table_source) {
            artifacts.embeddings = Some(match src {
                Some(path) => fs::canonicalize(path).unwrap_or_else(|_| path.clone()),
                None => {
                    let mut buf = Vec::new();
                    write_vectors(table, &mut buf).map_err(|e| ExperimentError::internal("write", e))?;
                    out.write(EMBEDDINGS_FILE, buf)?;
                    EMBEDDINGS_FILE.into()
                }
            });
        }
        for r in &record.reports {
            let stem = file_stem(&r.name);
            for format in [ReportFormat::Tsv, ReportFormat::Json] {
                out.write(&format!("report_{stem}.{}", format.extension()), render_report(&r.report, format))?;
            }
        }
        Ok(())
    });
    if let Err(e) = written {
        out.discard();
        return Err(e);
    }
    record.artifacts = artifacts;
    record.timings = timer.0;
    let json = serde_json::to_string_pretty(&record).expect("record serializes") + "\n";
    if let Err(e) = out.write(RECORD_FILE, json) {
        out.discard();
        return Err(e);
    }
    Ok(record)
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

/// A trained featurizer and model reloaded from a run's output directory.
pub struct TrainedPipeline {
    pub featurizer: Featurizer,
    pub model: LinearModel,
}

impl TrainedPipeline {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, ExperimentError> {
        let dir = dir.as_ref();
        let read = |p: &Path| {
            let full = if p.is_absolute() { p.to_path_buf() } else { dir.join(p) };
            fs::read_to_string(&full).map_err(|e| ExperimentError::data("open", format!("{}: {e}", full.display())))
        };
        let record: RunRecord = serde_json::from_str(&read(RECORD_FILE.as_ref())?)
            .map_err(|e| ExperimentError::data("open", format!("{RECORD_FILE}: {e}")))?;
        let a = &record.artifacts;
        let model = LinearModel::from_json(&read(&a.model)?).map_err(|e| ExperimentError::data("open", e))?;
        let vectorizer = Vectorizer::from_json(&read(&a.vectorizer)?).map_err(|e| ExperimentError::data("open", e))?;
        let lexicon = a
            .lexicon
            .as_ref()
            .map(|p| Lexicon::parse(&read(p)?).map_err(|e| ExperimentError::data("open", e)))
            .transpose()?;
        let embeddings = a
            .embeddings
            .as_ref()
            .map(|p| load_table(&if p.is_absolute() { p.clone() } else { dir.join(p) }))
            .transpose()?;
        let featurizer = Featurizer::new(vectorizer, lexicon, embeddings).map_err(|e| ExperimentError::data("open", e))?;
        if featurizer.dim() != model.dim() {
            return Err(ExperimentError::data(
                "open",
                format!("model dimension {} does not match features {}", model.dim(), featurizer.dim()),
            ));
        }
        Ok(TrainedPipeline { featurizer, model })
    }

    pub fn predict(&self, texts: &[&str]) -> Result<Vec<Emotion>, ExperimentError> {
        self.model
            .predict_many(&self.featurizer.transform_many(texts))
            .map_err(|e| ExperimentError::internal("predict", e))
    }

    pub fn evaluate(&self, docs: &[LabeledDoc]) -> Result<EvalReport, ExperimentError> {
        let pred = self.predict(&texts(docs))?;
        evaluate(&labels(docs), &pred).map_err(|e| ExperimentError::data("evaluate", e))
    }
}
