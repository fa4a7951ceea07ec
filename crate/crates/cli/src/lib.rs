//! Command-line front-end: extract PINs from dumps, train and save models,
//! evaluate scorers over masking scenarios, and query a saved model.

pub mod config;
pub mod error;
pub mod report;

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use pinlab_core::model::PinHistogram;
use pinlab_core::{
    deserialize_model, extract_from_reader, load_corpus, rank_completions, save_corpus, serialize_model, split_corpus,
    Observation, TrainedModel,
};

pub use config::{ConfigFile, Overrides, RunConfig};
pub use error::CliError;
pub use report::{build_evaluation_report, build_sensitivity_report, EvaluationReport, SensitivityReport};

#[derive(Debug, Parser)]
#[command(
    name = "pinlab",
    version,
    about = "Missing-digit inference for partially leaked PINs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract 4-digit PINs from a password dump (one password per line).
    Extract { input: PathBuf, output: PathBuf },
    /// Train on a corpus file and write a model file.
    Train {
        corpus: PathBuf,
        model: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
        /// Train on the whole corpus instead of the train split.
        #[arg(long)]
        no_split: bool,
    },
    /// Split, train every requested model and evaluate every scenario.
    Evaluate {
        corpus: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
        /// Scenarios by missing digits (e.g. d1,d1d3) or "all".
        #[arg(long, value_delimiter = ',')]
        scenarios: Option<Vec<String>>,
        /// proposed, bigram, markov, nb, uniform, or "all".
        #[arg(long, value_delimiter = ',')]
        models: Option<Vec<String>>,
        #[arg(long, value_delimiter = ',')]
        ks: Option<Vec<usize>>,
        /// Write the JSON report here instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Rank completions of a partial PIN such as "?2?4".
    Predict {
        model: PathBuf,
        observation: String,
        /// Number of ranked completions to print.
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Re-evaluate a two-digit scenario under several joint-estimation gates.
    Sensitivity {
        corpus: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_delimiter = ',')]
        taus: Option<Vec<u64>>,
        /// Scenario to analyse (two missing digits).
        #[arg(long, default_value = "d1d2")]
        scenarios: String,
        #[arg(long, value_delimiter = ',')]
        ks: Option<Vec<usize>>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// TOML settings file; flags take precedence over it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub tau: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Decimal (0.8) or ratio (4/5).
    #[arg(long)]
    pub train_fraction: Option<String>,
}

impl CommonArgs {
    fn resolve(&self, extra: Overrides) -> Result<RunConfig, CliError> {
        let file = self.config.as_deref().map(ConfigFile::load).transpose()?;
        let overrides = Overrides {
            alpha: self.alpha,
            tau: self.tau,
            seed: self.seed,
            train_fraction: self.train_fraction.clone(),
            ..extra
        };
        RunConfig::resolve(file.as_ref(), &overrides)
    }
}

pub fn run(cli: Cli, out: &mut dyn Write, log: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Extract { input, output } => cmd_extract(&input, &output, log),
        Command::Train {
            corpus,
            model,
            common,
            no_split,
        } => {
            let cfg = common.resolve(Overrides::default())?;
            cmd_train(&corpus, &model, &cfg, no_split, log)
        }
        Command::Evaluate {
            corpus,
            common,
            scenarios,
            models,
            ks,
            report,
        } => {
            let cfg = common.resolve(Overrides {
                scenarios,
                models,
                ks,
                ..Default::default()
            })?;
            cmd_evaluate(&corpus, &cfg, report.as_deref(), out, log)
        }
        Command::Predict {
            model,
            observation,
            top,
        } => cmd_predict(&model, &observation, top, out),
        Command::Sensitivity {
            corpus,
            common,
            taus,
            scenarios,
            ks,
            report,
        } => {
            let cfg = common.resolve(Overrides {
                taus,
                scenarios: Some(vec![scenarios]),
                ks,
                ..Default::default()
            })?;
            cmd_sensitivity(&corpus, &cfg, report.as_deref(), out, log)
        }
    }
}

fn write_log(log: &mut dyn Write, msg: std::fmt::Arguments<'_>) {
    // logging failures are not fatal
    let _ = writeln!(log, "{msg}");
}

pub fn cmd_extract(input: &Path, output: &Path, log: &mut dyn Write) -> Result<(), CliError> {
    let file = File::open(input).map_err(|e| CliError::io(input, e))?;
    let extraction = extract_from_reader(BufReader::new(file)).map_err(|e| CliError::io(input, e))?;
    save_corpus(&extraction.corpus, output)?;
    let s = extraction.stats;
    write_log(
        log,
        format_args!(
            "lines read: {}, lines skipped: {}, PINs extracted: {}",
            s.lines_read, s.lines_skipped, s.pins_extracted
        ),
    );
    Ok(())
}

pub fn cmd_train(
    corpus_path: &Path,
    model_path: &Path,
    cfg: &RunConfig,
    no_split: bool,
    log: &mut dyn Write,
) -> Result<(), CliError> {
    let corpus = load_corpus(corpus_path)?;
    let train = if no_split {
        corpus
    } else {
        split_corpus(&corpus, &cfg.split_config())?.0
    };
    let model = TrainedModel::from_histogram(PinHistogram::from_corpus(&train), cfg.model_config()?);
    serialize_model(&model, model_path)?;
    write_log(
        log,
        format_args!(
            "trained on {} PINs ({} distinct) -> {}",
            train.len(),
            model.histogram().nonzero().count(),
            model_path.display()
        ),
    );
    Ok(())
}

fn emit_json<T: serde::Serialize>(value: &T, path: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Data(e.to_string()))?;
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

pub fn cmd_evaluate(
    corpus_path: &Path,
    cfg: &RunConfig,
    report: Option<&Path>,
    out: &mut dyn Write,
    log: &mut dyn Write,
) -> Result<(), CliError> {
    let corpus = load_corpus(corpus_path)?;
    let doc = build_evaluation_report(&corpus, cfg)?;
    write_log(
        log,
        format_args!(
            "evaluated {} models x {} scenarios on {} test PINs",
            doc.models.len(),
            cfg.scenarios.len(),
            doc.split.test
        ),
    );
    emit_json(&doc, report, out)
}

pub fn cmd_sensitivity(
    corpus_path: &Path,
    cfg: &RunConfig,
    report: Option<&Path>,
    out: &mut dyn Write,
    log: &mut dyn Write,
) -> Result<(), CliError> {
    let corpus = load_corpus(corpus_path)?;
    let doc = build_sensitivity_report(&corpus, cfg)?;
    for r in &doc.results {
        write_log(
            log,
            format_args!(
                "tau={:<4} accuracy={:.4} ci95=[{:.4}, {:.4}]",
                r.tau, r.result.accuracy, r.result.ci95.0, r.result.ci95.1
            ),
        );
    }
    emit_json(&doc, report, out)
}

/// Prints `candidate<TAB>pin<TAB>probability<TAB>path`, best first.
pub fn cmd_predict(model_path: &Path, observation: &str, top: usize, out: &mut dyn Write) -> Result<(), CliError> {
    let obs: Observation = observation.parse()?;
    let model = deserialize_model(model_path)?;
    let ranked = rank_completions(&model, &obs);
    let path = ranked.used_path();
    let write = |out: &mut dyn Write| -> std::io::Result<()> {
        for &(candidate, p) in ranked.entries().iter().take(top) {
            let pin = obs.complete(candidate).expect("candidate matches pattern");
            writeln!(out, "{candidate}\t{pin}\t{p:.10}\t{path}")?;
        }
        Ok(())
    };
    write(out).map_err(|e| CliError::Io(format!("stdout: {e}")))
}
