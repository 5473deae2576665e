mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use emoreact::eval::ReportFormat;

/// Emotion classification trained on reaction-labeled posts
#[derive(Parser)]
#[command(name = "emoreact", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate and normalize reaction feed JSON files into one feed
    Ingest(IngestArgs),
    /// Label a reaction feed and write canonical TSV
    Label(LabelArgs),
    /// Emotion distribution per training source
    Distribution(ConfigArgs),
    /// Run an experiment config: train, evaluate and write artifacts
    Train(TrainArgs),
    /// Score a trained run on a canonical TSV dataset
    Eval(EvalArgs),
    /// Rank subsets of training sources by dev micro-F1
    Search(SearchArgs),
    /// Train or retrofit word vectors
    #[command(subcommand)]
    Embed(EmbedCommand),
    /// Generate a planted-signal corpus as canonical TSV
    Synth(SynthArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Json,
    Pretty,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Tsv => ReportFormat::Tsv,
            Format::Json => ReportFormat::Json,
            Format::Pretty => ReportFormat::Pretty,
        }
    }
}

#[derive(Args)]
struct IngestArgs {
    /// Feed files
    #[arg(required = true)]
    feeds: Vec<PathBuf>,
    /// Output feed file
    #[arg(long)]
    out: PathBuf,
    /// Fail on the first malformed record instead of skipping it
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct LabelArgs {
    feed: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Source name written to the TSV (default: file stem)
    #[arg(long)]
    source: Option<String>,
    /// Drop posts whose reaction entropy (nats) exceeds this
    #[arg(long)]
    max_entropy: Option<f64>,
    /// Leave posts unlabeled when two emotions tie for the maximum
    #[arg(long)]
    discard_ties: bool,
    /// Add love and haha into joy before taking the argmax
    #[arg(long)]
    sum_joy: bool,
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct ConfigArgs {
    /// Experiment config (JSON)
    #[arg(long)]
    config: PathBuf,
    /// Restrict training sources to a named page preset
    #[arg(long, value_parser = ["b-m", "ft-m", "ise-m"])]
    preset: Option<String>,
    /// Comma-separated training source names (instead of a preset)
    #[arg(long, conflicts_with = "preset")]
    sources: Option<String>,
    #[arg(long)]
    max_entropy: Option<f64>,
    #[arg(long, value_enum, default_value = "pretty")]
    format: Format,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Output directory (overrides the config)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Training seed (overrides the config)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct EvalArgs {
    /// Output directory of a finished run
    #[arg(long)]
    run: PathBuf,
    /// Canonical TSV dataset
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_enum, default_value = "pretty")]
    format: Format,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Largest subset size (default: all candidates)
    #[arg(long)]
    k_max: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum EmbedCommand {
    /// Skip-gram with negative sampling
    Train(EmbedTrainArgs),
    /// Pull vectors toward an emotion lexicon graph
    Retrofit(RetrofitArgs),
}

#[derive(Args)]
struct EmbedTrainArgs {
    /// Corpus: canonical TSV (.tsv) or one sentence per line
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 5)]
    window: usize,
    #[arg(long, default_value_t = 0.01)]
    lr: f64,
    #[arg(long, default_value_t = 100)]
    dim: usize,
    #[arg(long, default_value_t = 2)]
    min_count: usize,
    #[arg(long, default_value_t = 5)]
    negatives: usize,
    #[arg(long, default_value_t = 5)]
    epochs: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct RetrofitArgs {
    #[arg(long)]
    vectors: PathBuf,
    /// NRC-style lexicon TSV
    #[arg(long)]
    lexicon: PathBuf,
    #[arg(long, default_value_t = 10)]
    iters: usize,
    #[arg(long, default_value_t = emoreact::embeddings::DEFAULT_MAX_DEGREE)]
    max_degree: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 2000)]
    n: usize,
    #[arg(long, default_value_t = 50)]
    vocab: usize,
    /// Probability that a token comes from another class
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
    /// Probability that a label is replaced at random
    #[arg(long, default_value_t = 0.0)]
    label_noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "synthetic")]
    source: String,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
