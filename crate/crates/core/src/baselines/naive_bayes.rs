use super::{smooth, PositionalCounts};
use crate::corpus::DIGITS;
use crate::distribution::{CompletionDistribution, EstimationPath};
use crate::inference::Scorer;
use crate::mask::Observation;
use crate::model::{product_weights, PinHistogram};

/// Categorical naive Bayes per missing position: class is the hidden digit,
/// features are the observed digits, each assumed independent given the
/// class.
#[derive(Clone, Debug)]
pub struct NaiveBayesModel {
    counts: PositionalCounts,
    alpha: f64,
}

impl NaiveBayesModel {
    pub fn new(histogram: &PinHistogram, alpha: f64) -> Self {
        NaiveBayesModel {
            counts: PositionalCounts::from_histogram(histogram),
            alpha,
        }
    }

    pub fn counts(&self) -> &PositionalCounts {
        &self.counts
    }

    pub fn class_prior(&self, target: usize, value: u8) -> f64 {
        smooth(
            self.counts.position_count(target, value),
            self.counts.total(),
            self.alpha,
            DIGITS,
        )
    }

    /// `P(d_feature = observed | d_target = value)`.
    pub fn likelihood(&self, target: usize, value: u8, feature: usize, observed: u8) -> f64 {
        smooth(
            self.counts.pair_count(target, value, feature, observed),
            self.counts.position_count(target, value),
            self.alpha,
            DIGITS,
        )
    }

    /// Normalized posterior over the digit at `target`.
    pub fn posterior(&self, obs: &Observation, target: usize) -> [f64; DIGITS] {
        let mut post: [f64; DIGITS] = std::array::from_fn(|v| {
            let v = v as u8;
            obs.pattern().observed().fold(self.class_prior(target, v), |p, j| {
                p * self.likelihood(target, v, j, obs.observed(j).expect("observed"))
            })
        });
        let z: f64 = post.iter().sum();
        post.iter_mut().for_each(|p| *p /= z);
        post
    }

    pub fn nb_distribution(&self, obs: &Observation) -> CompletionDistribution {
        let pattern = obs.pattern();
        let posts: Vec<[f64; DIGITS]> = pattern.missing().map(|t| self.posterior(obs, t)).collect();
        let weights = product_weights(pattern.missing_count(), |slot, v| posts[slot][v]);
        CompletionDistribution::from_weights(pattern, weights, EstimationPath::NaiveBayes)
    }
}

impl Scorer for NaiveBayesModel {
    fn name(&self) -> &str {
        "nb"
    }

    fn completion_distribution(&self, obs: &Observation) -> CompletionDistribution {
        self.nb_distribution(obs)
    }
}
