use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::info;
use serde_json::Value;

use curate_core::corpus::{open_input, read_jsonl, Record};
use curate_core::dedup::ShingleCounter;
use curate_core::pipeline::{render_stats_table, StageOverrides, STATS_JSON_FILE};
use curate_core::qualitygate::{
    gate, load_scorers, sweep, BinThresholds, LabeledExample, NgramScorerModel, ScoredDoc, SweepRow, TrainConfig,
};
use curate_core::{CurateError, Pipeline, PipelineConfig, Preset, RunStats};

#[derive(Parser)]
#[command(
    name = "curate",
    version,
    about = "Filter, deduplicate, gate and decontaminate web text corpora"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every stage the configuration enables.
    Run(Common),
    /// Run the heuristic filters only: URL, language, document and line stages.
    Filter(Common),
    /// Paragraph-level Bloom filter deduplication.
    Dedup(DedupArgs),
    /// Dual-bin classifier gate.
    Classify(ClassifyArgs),
    /// Screen documents against a benchmark reference set.
    Decontam(DecontamArgs),
    /// Print the removal table of a finished run.
    Stats(StatsArgs),
    /// Retention of the classifier gate across threshold pairs.
    Sweep(SweepArgs),
    /// Train the built-in n-gram scorer on labeled JSONL.
    Train(TrainArgs),
}

#[derive(Args, Clone)]
struct Common {
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Stage composition: url-lid, doc-filter, line-clean or flux.
    #[arg(long)]
    preset: Option<String>,
    /// Input JSONL files (plain or .gz); repeatable.
    #[arg(long, num_args = 1..)]
    input: Vec<PathBuf>,
    /// Folder for kept, rejected, multilingual and stats outputs.
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Force input-order processing so outputs are byte-identical across runs.
    #[arg(long)]
    deterministic: bool,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct DedupArgs {
    #[command(flatten)]
    common: Common,
    /// Target false-positive rate of the filter.
    #[arg(long)]
    fp_rate: Option<f64>,
    /// Expected distinct shingles; counted exactly in a first pass when unset.
    #[arg(long)]
    expected_ngrams: Option<u64>,
}

#[derive(Args)]
struct GateArgs {
    /// Model file of the general-quality bin.
    #[arg(long)]
    dclm_model: Option<PathBuf>,
    /// Model file of the benchmark-proximity bin.
    #[arg(long)]
    betr_model: Option<PathBuf>,
    /// Acceptance threshold of the general-quality bin
    #[arg(long)]
    tau_dclm: Option<f64>,
    /// Acceptance threshold of the benchmark-proximity bin
    #[arg(long)]
    tau_betr: Option<f64>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    gate: GateArgs,
    /// Also write per-document scores to scores.jsonl.
    #[arg(long)]
    scores: bool,
}

#[derive(Args)]
struct DecontamArgs {
    #[command(flatten)]
    common: Common,
    /// Benchmark reference JSONL with benchmark, instance_id and text.
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Word n-gram length for overlap matching
    #[arg(long)]
    ngram_size: Option<usize>,
    /// Distinct shared n-grams needed to flag a document
    #[arg(long)]
    min_matches: Option<usize>,
}

#[derive(Args)]
struct StatsArgs {
    /// A stats.json file or the output folder holding one.
    path: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    gate: GateArgs,
    /// Threshold pair as TAU_DCLM,TAU_BETR; repeatable. Defaults to the
    /// configured sweep pairs.
    #[arg(long = "pair", value_parser = parse_pair)]
    pairs: Vec<[f64; 2]>,
}

#[derive(Args)]
struct TrainArgs {
    /// Labeled JSONL: text plus a boolean or 0/1 label.
    #[arg(long, num_args = 1.., required = true)]
    input: Vec<PathBuf>,
    /// Where to write the model.
    #[arg(long)]
    output: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    learning_rate: f64,
    #[arg(long, default_value_t = 5)]
    epochs: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Hash buckets as a power of two.
    #[arg(long, default_value_t = 21)]
    bucket_bits: u32,
    #[arg(long, default_value_t = 1)]
    min_count: usize,
    /// Unigrams only.
    #[arg(long)]
    no_bigrams: bool,
}

fn parse_pair(s: &str) -> std::result::Result<[f64; 2], String> {
    let (a, b) = s.split_once(',').ok_or("expected TAU_DCLM,TAU_BETR")?;
    let p = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x}: {e}"));
    Ok([p(a)?, p(b)?])
}

impl Common {
    fn config(&self) -> Result<PipelineConfig> {
        let mut cfg = match &self.config {
            Some(p) => PipelineConfig::load(p)?,
            None => PipelineConfig::default(),
        };
        if let Some(name) = &self.preset {
            cfg.preset = Preset::parse(name).ok_or_else(|| {
                CurateError::Config(format!(
                    "unknown preset {name}; expected url-lid, doc-filter, line-clean or flux"
                ))
            })?;
        }
        if !self.input.is_empty() {
            cfg.inputs = self.input.clone();
        }
        if let Some(d) = &self.output_dir {
            cfg.output_dir = Some(d.clone());
        }
        if self.deterministic {
            cfg.deterministic = true;
        }
        if let Some(w) = self.workers {
            cfg.workers = w;
        }
        Ok(cfg)
    }
}

impl GateArgs {
    fn apply(&self, cfg: &mut PipelineConfig) {
        if let Some(p) = &self.dclm_model {
            cfg.gate.scorer_dclm_path = Some(p.clone());
        }
        if let Some(p) = &self.betr_model {
            cfg.gate.scorer_betr_path = Some(p.clone());
        }
        if let Some(t) = self.tau_dclm {
            cfg.gate.tau_dclm = t;
        }
        if let Some(t) = self.tau_betr {
            cfg.gate.tau_betr = t;
        }
    }
}

/// Overrides that switch every stage off, for the single-stage commands.
fn nothing() -> StageOverrides {
    let off = Some(false);
    StageOverrides {
        decontamination: off,
        url_blocklist: off,
        url_substring: off,
        url_token_removal: off,
        newline_normalization: off,
        language_id: off,
        gopher_quality: off,
        nemo: off,
        gopher_repetition: off,
        badwords: off,
        custom_quality: off,
        line_clean: off,
        line_clean_extended: off,
        word_removal_ratio: off,
        dedup: off,
        quality_gate: off,
    }
}

fn execute(mut cfg: PipelineConfig) -> Result<RunStats> {
    if cfg.active_stages().dedup && cfg.dedup.expected_ngrams.is_none() {
        let n = count_shingles(&cfg)?;
        info!("counted {n} distinct shingles to size the dedup filter");
        cfg.dedup.expected_ngrams = Some(n);
    }
    let out = cfg
        .output_dir
        .clone()
        .ok_or_else(|| CurateError::Config("--output-dir (or output_dir in the config) is required".into()))?;
    if cfg.inputs.is_empty() {
        return Err(CurateError::Config("no input files given".into()).into());
    }
    let pipeline = Pipeline::from_config(cfg.clone())?;
    info!("active stages: {:?}", pipeline.active_stages());
    let stats = pipeline.run_files(&cfg.inputs, &out)?;
    print!("{}", render_stats_table(&stats));
    if let Some(c) = &stats.contamination {
        print!("\n{}", c.render_table());
    }
    info!("outputs written to {}", out.display());
    Ok(stats)
}

fn count_shingles(cfg: &PipelineConfig) -> Result<u64> {
    let mut counter = ShingleCounter::default();
    for p in &cfg.inputs {
        for rec in read_jsonl(open_input(p)?) {
            if let Record::Doc(d) = rec? {
                counter.add(&d.text, &cfg.dedup.shingle);
            }
        }
    }
    Ok(counter.count().max(1))
}

fn score_inputs(cfg: &PipelineConfig) -> Result<Vec<ScoredDoc>> {
    let mut missing = Vec::new();
    let scorers = load_scorers(&cfg.gate, &mut missing)?;
    if !missing.is_empty() {
        return Err(CurateError::MissingResources(missing).into());
    }
    let (d, b) = scorers.expect("scorers present when nothing is missing");
    let th = cfg.gate.thresholds();
    let mut scored = Vec::new();
    for p in &cfg.inputs {
        for rec in read_jsonl(open_input(p)?) {
            let Record::Doc(doc) = rec? else { continue };
            match gate(&doc, d.as_ref(), b.as_ref(), &th) {
                Ok(g) => scored.push(ScoredDoc::new(&doc, &g)),
                Err(e) => log::warn!("skipping {} in sweep: {e}", doc.id),
            }
        }
    }
    Ok(scored)
}

fn render_sweep(rows: &[SweepRow]) -> String {
    let mut s = format!(
        "{:>10}  {:>10}  {:>12}  {:>14}  {:>10}\n",
        "tau_dclm", "tau_betr", "docs kept", "tokens kept", "retention"
    );
    for r in rows {
        s.push_str(&format!(
            "{:>10}  {:>10}  {:>12}  {:>14}  {:>9.2}%\n",
            r.tau_dclm, r.tau_betr, r.docs_accepted, r.tokens_accepted, r.retention_pct
        ));
    }
    s
}

fn read_labeled(paths: &[PathBuf]) -> Result<Vec<LabeledExample>> {
    let mut out = Vec::new();
    for p in paths {
        let f = File::open(p).with_context(|| format!("cannot read {}", p.display()))?;
        for (i, line) in BufReader::new(f).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let v: Value = serde_json::from_str(&line).with_context(|| format!("{}:{}", p.display(), i + 1))?;
            let label = match v.get("label") {
                Some(Value::Bool(b)) => *b,
                Some(Value::Number(n)) => n.as_f64() == Some(1.0),
                Some(Value::String(s)) => matches!(s.as_str(), "1" | "true" | "pos" | "positive"),
                _ => bail!("{}:{}: record has no label", p.display(), i + 1),
            };
            let Some(text) = v.get("text").and_then(Value::as_str) else {
                bail!("{}:{}: record has no text", p.display(), i + 1);
            };
            let id = match v.get("id") {
                Some(Value::String(s)) => s.clone(),
                Some(other) => other.to_string(),
                None => format!("{}:{}", p.display(), i + 1),
            };
            out.push(LabeledExample {
                id,
                text: text.to_string(),
                label,
            });
        }
    }
    Ok(out)
}

fn stats_path(p: &Path) -> PathBuf {
    if p.is_dir() {
        p.join(STATS_JSON_FILE)
    } else {
        p.to_path_buf()
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(c) => {
            execute(c.config()?)?;
        }
        Command::Filter(c) => {
            let mut cfg = c.config()?;
            cfg.stages.dedup = Some(false);
            cfg.stages.quality_gate = Some(false);
            cfg.stages.decontamination = Some(false);
            execute(cfg)?;
        }
        Command::Dedup(a) => {
            let mut cfg = a.common.config()?;
            cfg.stages = StageOverrides {
                dedup: Some(true),
                ..nothing()
            };
            if let Some(p) = a.fp_rate {
                cfg.dedup.fp_rate = p;
            }
            if a.expected_ngrams.is_some() {
                cfg.dedup.expected_ngrams = a.expected_ngrams;
            }
            let stats = execute(cfg)?;
            if let Some(d) = &stats.dedup {
                println!(
                    "\nfilter: {} bits, k = {}, sparsity {:.4}; paragraphs flagged {} of {}",
                    d.m_bits, d.k, d.sparsity, d.paragraphs_flagged, d.paragraphs_in
                );
            }
        }
        Command::Classify(a) => {
            let mut cfg = a.common.config()?;
            a.gate.apply(&mut cfg);
            cfg.gate.scores_sidecar |= a.scores;
            cfg.stages = StageOverrides {
                quality_gate: Some(true),
                ..nothing()
            };
            execute(cfg)?;
        }
        Command::Decontam(a) => {
            let mut cfg = a.common.config()?;
            if a.reference.is_some() {
                cfg.decontam.reference_path = a.reference.clone();
            }
            if let Some(n) = a.ngram_size {
                cfg.decontam.ngram_size = n;
            }
            if let Some(n) = a.min_matches {
                cfg.decontam.min_matches = n;
            }
            if cfg.decontam.reference_path.is_none() {
                return Err(CurateError::Config("--reference is required".into()).into());
            }
            cfg.stages = StageOverrides {
                decontamination: Some(true),
                ..nothing()
            };
            execute(cfg)?;
        }
        Command::Stats(a) => {
            let p = stats_path(&a.path);
            let text = std::fs::read_to_string(&p).map_err(|e| CurateError::resource(&p, e))?;
            let stats: RunStats = serde_json::from_str(&text).map_err(CurateError::from)?;
            print!("{}", render_stats_table(&stats));
            if let Some(c) = &stats.contamination {
                print!("\n{}", c.render_table());
            }
        }
        Command::Sweep(a) => {
            let mut cfg = a.common.config()?;
            a.gate.apply(&mut cfg);
            if !a.pairs.is_empty() {
                cfg.gate.sweep_pairs = a.pairs.clone();
            }
            if cfg.gate.sweep_pairs.is_empty() {
                cfg.gate.sweep_pairs = vec![[cfg.gate.tau_dclm, cfg.gate.tau_betr]];
            }
            cfg.gate.validate()?;
            if cfg.inputs.is_empty() {
                return Err(CurateError::Config("no input files given".into()).into());
            }
            let pairs: Vec<BinThresholds> = cfg.gate.sweep_thresholds();
            let rows = sweep(&score_inputs(&cfg)?, &pairs);
            print!("{}", render_sweep(&rows));
            if let Some(dir) = &cfg.output_dir {
                std::fs::create_dir_all(dir).map_err(|e| CurateError::resource(dir, e))?;
                let p = dir.join("sweep.json");
                let body = serde_json::to_string_pretty(&rows).map_err(CurateError::from)? + "\n";
                std::fs::write(&p, body).map_err(|e| CurateError::resource(&p, e))?;
            }
        }
        Command::Train(a) => {
            if a.bucket_bits == 0 || a.bucket_bits > 30 {
                return Err(CurateError::Config("--bucket-bits must be between 1 and 30".into()).into());
            }
            let cfg = TrainConfig {
                learning_rate: a.learning_rate,
                epochs: a.epochs,
                min_count: a.min_count,
                bigrams: !a.no_bigrams,
                seed: a.seed,
                buckets: 1 << a.bucket_bits,
            };
            let examples = read_labeled(&a.input)?;
            let pos = examples.iter().filter(|e| e.label).count();
            info!("training on {} examples ({pos} positive)", examples.len());
            let model = NgramScorerModel::train(&examples, &cfg)?;
            model.save(&a.output)?;
            let correct = examples
                .iter()
                .filter(|e| (model.score_text(&e.text) >= 0.5) == e.label)
                .count();
            println!(
                "wrote {}; training accuracy {:.4}",
                a.output.display(),
                correct as f64 / examples.len() as f64
            );
        }
    }
    Ok(())
}

/// Configuration problems exit with 1, everything else with 2.
fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<CurateError>() {
        Some(
            CurateError::Config(_)
            | CurateError::MissingResources(_)
            | CurateError::BloomParams(_)
            | CurateError::MemoryCap { .. },
        ) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::error!("{e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
