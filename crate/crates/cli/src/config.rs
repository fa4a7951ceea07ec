use std::path::Path;

use pinlab_core::eval::{DEFAULT_KS, DEFAULT_TAUS};
use pinlab_core::{MaskPattern, ModelConfig, ScorerKind, SplitConfig, TrainFraction};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Optional settings file; every field may be overridden on the command line.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub alpha: Option<f64>,
    pub tau: Option<u64>,
    pub seed: Option<u64>,
    pub train_fraction: Option<FractionValue>,
    pub ks: Option<Vec<usize>>,
    pub taus: Option<Vec<u64>>,
    pub scenarios: Option<Vec<String>>,
    pub models: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum FractionValue {
    Number(f64),
    Text(String),
}

impl FractionValue {
    fn parse(&self) -> Result<TrainFraction, CliError> {
        let text = match self {
            FractionValue::Number(x) => x.to_string(),
            FractionValue::Text(s) => s.clone(),
        };
        Ok(text.parse()?)
    }
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
    }
}

/// Fully resolved settings for one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub alpha: f64,
    pub tau: u64,
    pub seed: u64,
    pub train_fraction: TrainFraction,
    pub ks: Vec<usize>,
    pub taus: Vec<u64>,
    pub scenarios: Vec<MaskPattern>,
    pub models: Vec<ScorerKind>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            alpha: 1.0,
            tau: 10,
            seed: 39,
            train_fraction: TrainFraction::default(),
            ks: DEFAULT_KS.to_vec(),
            taus: DEFAULT_TAUS.to_vec(),
            scenarios: MaskPattern::all(),
            models: ScorerKind::DEFAULT.to_vec(),
        }
    }
}

/// `"all"` or a list of missing-position names such as `d1d2`.
pub fn parse_scenarios(items: &[String]) -> Result<Vec<MaskPattern>, CliError> {
    if items.len() == 1 && items[0].trim().eq_ignore_ascii_case("all") {
        return Ok(MaskPattern::all());
    }
    if items.is_empty() {
        return Err(CliError::Usage("no scenarios selected".into()));
    }
    let mut out = Vec::new();
    for item in items {
        let p: MaskPattern = item.parse()?;
        if !out.contains(&p) {
            out.push(p);
        }
    }
    Ok(out)
}

/// `"all"` or a list of model names.
pub fn parse_models(items: &[String]) -> Result<Vec<ScorerKind>, CliError> {
    if items.len() == 1 && items[0].trim().eq_ignore_ascii_case("all") {
        return Ok(ScorerKind::DEFAULT.to_vec());
    }
    if items.is_empty() {
        return Err(CliError::Usage("no models selected".into()));
    }
    let mut out = Vec::new();
    for item in items {
        let k: ScorerKind = item.parse()?;
        if !out.contains(&k) {
            out.push(k);
        }
    }
    Ok(out)
}

/// Values given on the command line; `None` means "not given".
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub alpha: Option<f64>,
    pub tau: Option<u64>,
    pub seed: Option<u64>,
    pub train_fraction: Option<String>,
    pub ks: Option<Vec<usize>>,
    pub taus: Option<Vec<u64>>,
    pub scenarios: Option<Vec<String>>,
    pub models: Option<Vec<String>>,
}

impl RunConfig {
    pub fn resolve(file: Option<&ConfigFile>, cli: &Overrides) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(f) = file {
            cfg.apply_file(f)?;
        }
        if let Some(a) = cli.alpha {
            cfg.alpha = a;
        }
        if let Some(t) = cli.tau {
            cfg.tau = t;
        }
        if let Some(s) = cli.seed {
            cfg.seed = s;
        }
        if let Some(f) = &cli.train_fraction {
            cfg.train_fraction = f.parse()?;
        }
        if let Some(ks) = &cli.ks {
            cfg.ks = ks.clone();
        }
        if let Some(taus) = &cli.taus {
            cfg.taus = taus.clone();
        }
        if let Some(s) = &cli.scenarios {
            cfg.scenarios = parse_scenarios(s)?;
        }
        if let Some(m) = &cli.models {
            cfg.models = parse_models(m)?;
        }
        // validates alpha
        cfg.model_config()?;
        if cfg.ks.is_empty() {
            return Err(CliError::Usage("--ks must list at least one k".into()));
        }
        if cfg.taus.is_empty() {
            return Err(CliError::Usage("--taus must list at least one value".into()));
        }
        Ok(cfg)
    }

    fn apply_file(&mut self, f: &ConfigFile) -> Result<(), CliError> {
        if let Some(a) = f.alpha {
            self.alpha = a;
        }
        if let Some(t) = f.tau {
            self.tau = t;
        }
        if let Some(s) = f.seed {
            self.seed = s;
        }
        if let Some(fr) = &f.train_fraction {
            self.train_fraction = fr.parse()?;
        }
        if let Some(ks) = &f.ks {
            self.ks = ks.clone();
        }
        if let Some(t) = &f.taus {
            self.taus = t.clone();
        }
        if let Some(s) = &f.scenarios {
            self.scenarios = parse_scenarios(s)?;
        }
        if let Some(m) = &f.models {
            self.models = parse_models(m)?;
        }
        Ok(())
    }

    pub fn model_config(&self) -> Result<ModelConfig, CliError> {
        Ok(ModelConfig::new(self.alpha, self.tau)?)
    }

    pub fn split_config(&self) -> SplitConfig {
        SplitConfig {
            train_fraction: self.train_fraction,
            seed: self.seed,
        }
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            alpha: self.alpha,
            tau: self.tau,
            seed: self.seed,
            train_fraction: self.train_fraction.to_string(),
            ks: self.ks.clone(),
            scenarios: self.scenarios.iter().map(|p| p.label()).collect(),
            models: self.models.iter().map(|m| m.as_str().to_string()).collect(),
        }
    }
}

/// Configuration as echoed into reports.
#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub alpha: f64,
    pub tau: u64,
    pub seed: u64,
    pub train_fraction: String,
    pub ks: Vec<usize>,
    pub scenarios: Vec<String>,
    pub models: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let cfg = RunConfig::resolve(None, &Overrides::default()).unwrap();
        assert_eq!(cfg.alpha, 1.0);
        assert_eq!(cfg.tau, 10);
        assert_eq!(cfg.seed, 39);
        assert_eq!(cfg.train_fraction.to_string(), "4/5");
        assert_eq!(cfg.ks, vec![1, 3, 5, 10]);
        assert_eq!(cfg.scenarios.len(), 14);
        assert_eq!(cfg.models.len(), 4);
    }

    #[test]
    fn flags_override_file() {
        let file: ConfigFile =
            toml::from_str("alpha = 0.5\ntau = 3\ntrain_fraction = 0.9\nscenarios = [\"d1d2\"]\nmodels = [\"bigram\"]")
                .unwrap();
        let cli = Overrides {
            tau: Some(7),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(Some(&file), &cli).unwrap();
        assert_eq!(cfg.alpha, 0.5);
        assert_eq!(cfg.tau, 7);
        assert_eq!(cfg.train_fraction.to_string(), "9/10");
        assert_eq!(cfg.scenarios, vec!["d1d2".parse().unwrap()]);
        assert_eq!(cfg.models, vec![ScorerKind::Bigram]);
    }

    #[test]
    fn rejects_bad_values() {
        let bad_alpha = Overrides {
            alpha: Some(0.0),
            ..Default::default()
        };
        assert!(RunConfig::resolve(None, &bad_alpha).is_err());
        let bad_scenario = Overrides {
            scenarios: Some(vec!["d1d2d3d4".into()]),
            ..Default::default()
        };
        assert!(RunConfig::resolve(None, &bad_scenario).is_err());
        assert!(toml::from_str::<ConfigFile>("bogus = 1").is_err());
    }
}
