//! JSON report documents (`report_v1`).

use pinlab_core::eval::{evaluate_scenario, tau_sensitivity, TauResult};
use pinlab_core::model::PinHistogram;
use pinlab_core::{split_corpus, Corpus, MaskPattern, ScenarioResult, TrainedModel};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ConfigEcho, RunConfig};
use crate::error::CliError;

pub const SCHEMA: &str = "report_v1";

#[derive(Clone, Debug, Serialize)]
pub struct CorpusFingerprint {
    pub count: usize,
    /// FNV-1a 64 of the canonical corpus file, lower-case hex.
    pub hash: String,
}

impl CorpusFingerprint {
    pub fn of(corpus: &Corpus) -> Self {
        CorpusFingerprint {
            count: corpus.len(),
            hash: format!("{:016x}", corpus.fingerprint()),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SplitSizes {
    pub train: usize,
    pub test: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelReport {
    pub model: String,
    pub scenarios: Vec<ScenarioResult>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvaluationReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub config: ConfigEcho,
    pub corpus: CorpusFingerprint,
    pub split: SplitSizes,
    pub models: Vec<ModelReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SensitivityReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub config: ConfigEcho,
    pub corpus: CorpusFingerprint,
    pub split: SplitSizes,
    pub pattern: MaskPattern,
    pub taus: Vec<u64>,
    pub results: Vec<TauResult>,
}

pub fn build_evaluation_report(corpus: &Corpus, cfg: &RunConfig) -> Result<EvaluationReport, CliError> {
    let (train, test) = split_corpus(corpus, &cfg.split_config())?;
    let histogram = PinHistogram::from_corpus(&train);
    let model_cfg = cfg.model_config()?;
    let scorers: Vec<_> = cfg.models.iter().map(|k| k.build(&histogram, model_cfg)).collect();

    let jobs: Vec<(usize, MaskPattern)> = (0..scorers.len())
        .flat_map(|m| cfg.scenarios.iter().map(move |&p| (m, p)))
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(m, p)| evaluate_scenario(&scorers[m], test.pins(), p, &cfg.ks))
        .collect::<Result<Vec<_>, _>>()?;

    let per_model = cfg.scenarios.len();
    let models = cfg
        .models
        .iter()
        .zip(results.chunks(per_model.max(1)))
        .map(|(kind, chunk)| ModelReport {
            model: kind.as_str().to_string(),
            scenarios: chunk.to_vec(),
        })
        .collect();

    Ok(EvaluationReport {
        schema: SCHEMA,
        command: "evaluate",
        config: cfg.echo(),
        corpus: CorpusFingerprint::of(corpus),
        split: SplitSizes {
            train: train.len(),
            test: test.len(),
        },
        models,
    })
}

pub fn build_sensitivity_report(corpus: &Corpus, cfg: &RunConfig) -> Result<SensitivityReport, CliError> {
    let pattern = match cfg.scenarios.as_slice() {
        [p] => *p,
        _ => return Err(CliError::Usage("sensitivity takes exactly one scenario".into())),
    };
    let (train, test) = split_corpus(corpus, &cfg.split_config())?;
    let model = TrainedModel::from_histogram(PinHistogram::from_corpus(&train), cfg.model_config()?);
    let results = tau_sensitivity(&model, test.pins(), pattern, &cfg.taus, &cfg.ks)?;
    let mut config = cfg.echo();
    config.scenarios = vec![pattern.label()];
    config.models = vec!["proposed".into()];
    Ok(SensitivityReport {
        schema: SCHEMA,
        command: "sensitivity",
        config,
        corpus: CorpusFingerprint::of(corpus),
        split: SplitSizes {
            train: train.len(),
            test: test.len(),
        },
        pattern,
        taus: cfg.taus.clone(),
        results,
    })
}
