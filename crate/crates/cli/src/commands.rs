use std::fmt::Display;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;

use emoreact::corpus::{
    entropy_filter, load_canonical_tsv, parse_reaction_feed, synth_corpus, write_canonical_tsv, write_reaction_feed,
    LabelRule, LabeledDoc, ParseMode, SynthSpec, TiePolicy,
};
use emoreact::embeddings::{build_emotion_graph, load_vectors, retrofit, train_skipgram, write_vectors, SkipGramConfig};
use emoreact::eval::render_report;
use emoreact::experiments::{
    load_source, page_search, preset, run, select_sources, source_distribution, ExperimentConfig, ExperimentError,
    SourceDistribution, SubsetScore, TrainedPipeline,
};
use emoreact::features::{tokenize, Lexicon};

use crate::{Command, ConfigArgs, EmbedCommand, EmbedTrainArgs, Format, IngestArgs, LabelArgs, RetrofitArgs, SynthArgs};

pub struct CliError {
    pub code: u8,
    pub message: String,
}

fn data_err(e: impl Display) -> CliError {
    CliError { code: 2, message: e.to_string() }
}

fn with_path(path: &Path) -> impl Fn(&dyn Display) -> CliError + '_ {
    move |e| data_err(format!("{}: {e}", path.display()))
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        CliError { code: e.exit_code() as u8, message: e.to_string() }
    }
}

fn write_file(path: &Path, bytes: impl AsRef<[u8]>) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError { code: 3, message: format!("{}: {e}", path.display()) })
}

fn mode(strict: bool) -> ParseMode {
    if strict {
        ParseMode::Strict
    } else {
        ParseMode::Tolerant
    }
}

pub fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Ingest(args) => ingest(args),
        Command::Label(args) => label(args),
        Command::Distribution(args) => distribution(args),
        Command::Train(args) => {
            let mut config = load_config(&args.config)?;
            if let Some(out) = args.out {
                config.output_dir = std::env::current_dir().map_err(data_err)?.join(out);
            }
            if let Some(seed) = args.seed {
                config.train.seed = seed;
            }
            let record = run(&config)?;
            for r in &record.reports {
                if matches!(args.config.format, Format::Pretty) {
                    println!("== {} ({} instances)", r.name, r.report.n_instances);
                }
                print!("{}", render_report(&r.report, args.config.format.into()));
            }
            eprintln!("wrote {} (config {})", config.output_path().display(), record.config_hash);
            Ok(())
        }
        Command::Eval(args) => {
            let pipeline = TrainedPipeline::open(&args.run)?;
            let docs = load_canonical_tsv(&args.data, ParseMode::Tolerant).map_err(|e| with_path(&args.data)(&e))?;
            if docs.docs.is_empty() {
                return Err(data_err(format!("{}: no labeled documents", args.data.display())));
            }
            let report = pipeline.evaluate(&docs.docs)?;
            print!("{}", render_report(&report, args.format.into()));
            Ok(())
        }
        Command::Search(args) => {
            let mut config = load_config(&args.config)?;
            if let Some(seed) = args.seed {
                config.train.seed = seed;
            }
            let k_max = args.k_max.unwrap_or(config.sources.len());
            let outcome = page_search(&config, k_max)?;
            print!("{}", render_search(&outcome.results, args.config.format));
            Ok(())
        }
        Command::Embed(EmbedCommand::Train(args)) => embed_train(args),
        Command::Embed(EmbedCommand::Retrofit(args)) => embed_retrofit(args),
        Command::Synth(args) => synth(args),
    }
}

fn load_config(args: &ConfigArgs) -> Result<ExperimentConfig, CliError> {
    let mut config = ExperimentConfig::load(&args.config)?;
    if let Some(name) = &args.preset {
        let p = preset(name).expect("clap restricts preset names");
        select_sources(&mut config, p.pages)?;
    }
    if let Some(list) = &args.sources {
        let names: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        select_sources(&mut config, &names)?;
    }
    if args.max_entropy.is_some() {
        config.max_entropy = args.max_entropy;
    }
    config.validate()?;
    Ok(config)
}

fn ingest(args: IngestArgs) -> Result<(), CliError> {
    let mut posts = Vec::new();
    for path in &args.feeds {
        let bytes = fs::read(path).map_err(|e| with_path(path)(&e))?;
        let parsed = parse_reaction_feed(&bytes, mode(args.strict)).map_err(|e| with_path(path)(&e))?;
        for bad in &parsed.rejected {
            log::warn!("{}: skipped {bad}", path.display());
        }
        eprintln!("{}: {} posts, {} rejected", path.display(), parsed.posts.len(), parsed.rejected.len());
        posts.extend(parsed.posts);
    }
    write_file(&args.out, write_reaction_feed(&posts))
}

fn label(args: LabelArgs) -> Result<(), CliError> {
    let bytes = fs::read(&args.feed).map_err(|e| with_path(&args.feed)(&e))?;
    let parsed = parse_reaction_feed(&bytes, mode(args.strict)).map_err(|e| with_path(&args.feed)(&e))?;
    let posts = match args.max_entropy {
        Some(h) if h >= 0.0 => entropy_filter(&parsed.posts, h),
        Some(h) => return Err(CliError { code: 1, message: format!("--max-entropy must be non-negative, got {h}") }),
        None => parsed.posts,
    };
    let rule = LabelRule {
        ties: if args.discard_ties { TiePolicy::Discard } else { TiePolicy::FirstSlot },
        sum_before_argmax: args.sum_joy,
    };
    let source = args.source.unwrap_or_else(|| {
        args.feed.file_stem().map_or_else(|| "feed".into(), |s| s.to_string_lossy().into_owned())
    });
    let mut docs = Vec::new();
    let mut unlabeled = 0;
    for post in posts {
        match rule.apply(&post.reactions).map(|l| LabeledDoc::new(post.message, l, source.clone())) {
            Some(Ok(doc)) => docs.push(doc),
            _ => unlabeled += 1,
        }
    }
    let mut buf = Vec::new();
    write_canonical_tsv(&docs, &mut buf).map_err(data_err)?;
    write_file(&args.out, buf)?;
    eprintln!("{} labeled, {} unlabeled or empty", docs.len(), unlabeled);
    Ok(())
}

fn distribution(args: ConfigArgs) -> Result<(), CliError> {
    let config = load_config(&args)?;
    let sources = config.sources.iter().map(|s| load_source(s, &config)).collect::<Result<Vec<_>, _>>()?;
    let dists = source_distribution(&sources)?;
    print!("{}", render_distribution(&dists, args.format));
    Ok(())
}

fn render_distribution(dists: &[SourceDistribution], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(dists).expect("serializes") + "\n",
        Format::Tsv | Format::Pretty => {
            let pretty = matches!(format, Format::Pretty);
            let mut out = if pretty {
                format!("{:<24}{:>9}{:>9}{:>9}{:>9}{:>9}{:>11}\n", "source", "anger", "joy", "sadness", "surprise", "labeled", "unlabeled")
            } else {
                "source\tanger\tjoy\tsadness\tsurprise\tlabeled\tunlabeled\n".to_string()
            };
            for d in dists {
                let p = d.proportions;
                out += &if pretty {
                    format!("{:<24}{:>9.3}{:>9.3}{:>9.3}{:>9.3}{:>9}{:>11}\n", d.source, p[0], p[1], p[2], p[3], d.labeled, d.unlabeled)
                } else {
                    format!("{}\t{:.3}\t{:.3}\t{:.3}\t{:.3}\t{}\t{}\n", d.source, p[0], p[1], p[2], p[3], d.labeled, d.unlabeled)
                };
            }
            out
        }
    }
}

fn render_search(results: &[SubsetScore], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(results).expect("serializes") + "\n",
        Format::Tsv => {
            let mut out = "rank\tmicro_f1\tsources\n".to_string();
            for (i, r) in results.iter().enumerate() {
                out += &format!("{}\t{:.3}\t{}\n", i + 1, r.micro_f1, r.sources.join(","));
            }
            out
        }
        Format::Pretty => {
            let mut out = format!("{:>4}  {:>8}  sources\n", "rank", "micro_f1");
            for (i, r) in results.iter().enumerate() {
                out += &format!("{:>4}  {:>8.3}  {}\n", i + 1, r.micro_f1, r.sources.join(", "));
            }
            out
        }
    }
}

fn embed_train(args: EmbedTrainArgs) -> Result<(), CliError> {
    let path = &args.corpus;
    let corpus: Vec<Vec<String>> = if path.extension().is_some_and(|e| e == "tsv") {
        let load = load_canonical_tsv(path, ParseMode::Tolerant).map_err(|e| with_path(path)(&e))?;
        load.docs.iter().map(|d| tokenize(d.text(), true)).collect()
    } else {
        let file = fs::File::open(path).map_err(|e| with_path(path)(&e))?;
        BufReader::new(file)
            .lines()
            .map(|l| l.map(|l| tokenize(&l, true)))
            .collect::<Result<_, _>>()
            .map_err(|e| with_path(path)(&e))?
    };
    let cfg = SkipGramConfig {
        window: args.window,
        lr: args.lr,
        min_lr: SkipGramConfig::default().min_lr.min(args.lr),
        dim: args.dim,
        min_count: args.min_count,
        negatives: args.negatives,
        epochs: args.epochs,
        seed: args.seed,
    };
    let table = train_skipgram(&corpus, &cfg).map_err(data_err)?;
    let mut buf = Vec::new();
    write_vectors(&table, &mut buf).map_err(data_err)?;
    write_file(&args.out, buf)?;
    eprintln!("{} words, dimension {}", table.len(), table.dim());
    Ok(())
}

fn embed_retrofit(args: RetrofitArgs) -> Result<(), CliError> {
    if args.iters == 0 {
        return Err(CliError { code: 1, message: "--iters must be at least 1".into() });
    }
    let loaded = load_vectors(&args.vectors).map_err(|e| with_path(&args.vectors)(&e))?;
    for w in &loaded.warnings {
        log::warn!("{}: {w}", args.vectors.display());
    }
    let lex = Lexicon::load(&args.lexicon).map_err(|e| with_path(&args.lexicon)(&e))?;
    let graph = build_emotion_graph(&lex, &loaded.table, args.max_degree);
    let table = retrofit(&loaded.table, &graph, args.iters).map_err(data_err)?;
    let mut buf = Vec::new();
    write_vectors(&table, &mut buf).map_err(data_err)?;
    write_file(&args.out, buf)?;
    eprintln!("retrofitted {} graph words ({} edges)", graph.words().count(), graph.edge_count());
    Ok(())
}

fn synth(args: SynthArgs) -> Result<(), CliError> {
    let spec = SynthSpec {
        n_docs: args.n,
        vocab_per_class: args.vocab,
        noise_rate: args.noise,
        label_noise: args.label_noise,
        seed: args.seed,
        source: args.source,
        ..SynthSpec::default()
    };
    let docs = synth_corpus(&spec).map_err(|e| CliError { code: 1, message: e.to_string() })?;
    let mut buf = Vec::new();
    write_canonical_tsv(&docs, &mut buf).map_err(data_err)?;
    write_file(&args.out, buf)
}

