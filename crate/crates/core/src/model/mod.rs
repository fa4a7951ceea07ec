//! The context-conditioned model: add-α smoothed conditionals over the
//! observed digits, a pooled global digit prior for unseen contexts, and a
//! τ-gated choice between the smoothed joint and an independence product
//! when two digits are missing.

mod format;
mod histogram;

pub use format::{deserialize_model, read_model, serialize_model, write_model};
pub use histogram::PinHistogram;

use crate::corpus::{Corpus, DIGITS};
use crate::distribution::{CompletionDistribution, EstimationPath};
use crate::error::{PinlabError, Result};
use crate::inference::Scorer;
use crate::mask::{Candidate, Observation};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelConfig {
    alpha: f64,
    tau: u64,
}

impl ModelConfig {
    /// `alpha` must be positive and finite.
    pub fn new(alpha: f64, tau: u64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(PinlabError::InvalidArgument(format!(
                "alpha must be positive and finite, got {alpha}"
            )));
        }
        Ok(ModelConfig { alpha, tau })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn tau(&self) -> u64 {
        self.tau
    }
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig { alpha: 1.0, tau: 10 }
    }
}

/// Counts of every completion of an observation, plus their total `N(C)`.
struct ContextCells {
    cells: Vec<u64>,
    total: u64,
}

impl ContextCells {
    fn scan(histogram: &PinHistogram, obs: &Observation) -> Self {
        let counts = histogram.counts();
        let cells: Vec<u64> = (0..obs.pattern().candidate_space())
            .map(|c| counts[obs.complete_index(c).index()])
            .collect();
        let total = cells.iter().sum();
        ContextCells { cells, total }
    }

    /// `marginals[j][d]`: count with digit `d` at the `j`-th missing position.
    fn marginals(&self, missing: usize) -> Vec<[u64; DIGITS]> {
        let mut out = vec![[0u64; DIGITS]; missing];
        for (index, &n) in self.cells.iter().enumerate() {
            if n == 0 {
                continue;
            }
            let mut rest = index;
            for j in (0..missing).rev() {
                out[j][rest % DIGITS] += n;
                rest /= DIGITS;
            }
        }
        out
    }
}

/// Trained histogram plus smoothing configuration. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainedModel {
    histogram: PinHistogram,
    config: ModelConfig,
}

impl TrainedModel {
    pub fn train(corpus: &Corpus, config: ModelConfig) -> Self {
        TrainedModel {
            histogram: PinHistogram::from_corpus(corpus),
            config,
        }
    }

    pub fn from_histogram(histogram: PinHistogram, config: ModelConfig) -> Self {
        TrainedModel { histogram, config }
    }

    pub fn histogram(&self) -> &PinHistogram {
        &self.histogram
    }

    pub fn config(&self) -> ModelConfig {
        self.config
    }

    /// Same counts under a different joint-estimation gate.
    pub fn with_tau(&self, tau: u64) -> Self {
        TrainedModel {
            histogram: self.histogram.clone(),
            config: ModelConfig { tau, ..self.config },
        }
    }

    /// `N(C)`: training PINs agreeing with every observed digit.
    pub fn context_count(&self, obs: &Observation) -> u64 {
        ContextCells::scan(&self.histogram, obs).total
    }

    /// `N(x, C)`: PINs matching the context with `digit` at `target`; any
    /// other missing positions are summed out.
    pub fn digit_context_count(&self, obs: &Observation, target: usize, digit: u8) -> Result<u64> {
        let slot = self.missing_slot(obs, target)?;
        check_digit(digit)?;
        let ctx = ContextCells::scan(&self.histogram, obs);
        Ok(ctx.marginals(obs.pattern().missing_count())[slot][digit as usize])
    }

    /// `(N(x, C) + α) / (N(C) + 10α)`. Returns the formula value even for an
    /// unseen context; the prior fallback lives in
    /// [`TrainedModel::completion_distribution`].
    pub fn smoothed_conditional(&self, obs: &Observation, target: usize, digit: u8) -> Result<f64> {
        let slot = self.missing_slot(obs, target)?;
        check_digit(digit)?;
        let ctx = ContextCells::scan(&self.histogram, obs);
        let marg = ctx.marginals(obs.pattern().missing_count());
        Ok(self.smooth(marg[slot][digit as usize], ctx.total, DIGITS))
    }

    /// `(N(x) + α) / (N + 10α)` with `N(x)` pooled over all four positions.
    /// Panics if `digit > 9`.
    pub fn prior_probability(&self, digit: u8) -> f64 {
        let n = self.histogram.pooled_digit_counts()[digit as usize];
        self.smooth(n, self.histogram.total_digit_slots(), DIGITS)
    }

    /// `(N([a, b, C]) + α) / (N(C) + 100α)`; two missing digits only.
    pub fn joint_two_probability(&self, obs: &Observation, pair: Candidate) -> Result<f64> {
        if obs.pattern().missing_count() != 2 {
            return Err(PinlabError::InvalidPattern(format!(
                "joint estimate needs exactly two missing digits, {} has {}",
                obs.pattern(),
                obs.pattern().missing_count()
            )));
        }
        obs.check_candidate(pair)?;
        let ctx = ContextCells::scan(&self.histogram, obs);
        Ok(self.smooth(ctx.cells[pair.index()], ctx.total, DIGITS * DIGITS))
    }

    pub fn completion_distribution(&self, obs: &Observation) -> CompletionDistribution {
        let pattern = obs.pattern();
        let missing = pattern.missing_count();
        let ctx = ContextCells::scan(&self.histogram, obs);

        if ctx.total == 0 {
            let prior: Vec<f64> = (0..DIGITS as u8).map(|d| self.prior_probability(d)).collect();
            let weights = product_weights(missing, |_, d| prior[d]);
            return CompletionDistribution::from_weights(pattern, weights, EstimationPath::PriorFallback);
        }

        match missing {
            1 => {
                let probs = ctx.cells.iter().map(|&n| self.smooth(n, ctx.total, DIGITS)).collect();
                CompletionDistribution::from_probabilities(pattern, probs, EstimationPath::DirectSingle)
            }
            2 if ctx.total >= self.config.tau => {
                let probs = ctx
                    .cells
                    .iter()
                    .map(|&n| self.smooth(n, ctx.total, DIGITS * DIGITS))
                    .collect();
                CompletionDistribution::from_probabilities(pattern, probs, EstimationPath::Joint)
            }
            _ => {
                let marg = ctx.marginals(missing);
                let factors: Vec<[f64; DIGITS]> = marg
                    .iter()
                    .map(|m| std::array::from_fn(|d| self.smooth(m[d], ctx.total, DIGITS)))
                    .collect();
                let weights = product_weights(missing, |j, d| factors[j][d]);
                CompletionDistribution::from_weights(pattern, weights, EstimationPath::Independence)
            }
        }
    }

    #[inline]
    fn smooth(&self, count: u64, total: u64, outcomes: usize) -> f64 {
        let a = self.config.alpha;
        (count as f64 + a) / (total as f64 + a * outcomes as f64)
    }

    fn missing_slot(&self, obs: &Observation, target: usize) -> Result<usize> {
        obs.pattern()
            .missing()
            .position(|p| p == target)
            .ok_or(PinlabError::PositionNotMissing(target))
    }
}

fn check_digit(digit: u8) -> Result<()> {
    if digit as usize >= DIGITS {
        return Err(PinlabError::InvalidArgument(format!("digit {digit} out of range")));
    }
    Ok(())
}

/// Weight of each candidate as the product of per-slot factors
/// `factor(slot, digit)`.
pub(crate) fn product_weights(missing: usize, factor: impl Fn(usize, usize) -> f64) -> Vec<f64> {
    let space = 10usize.pow(missing as u32);
    (0..space)
        .map(|index| {
            let mut rest = index;
            let mut w = 1.0;
            for j in (0..missing).rev() {
                w *= factor(j, rest % DIGITS);
                rest /= DIGITS;
            }
            w
        })
        .collect()
}

impl Scorer for TrainedModel {
    fn name(&self) -> &str {
        "proposed"
    }

    fn completion_distribution(&self, obs: &Observation) -> CompletionDistribution {
        TrainedModel::completion_distribution(self, obs)
    }
}
