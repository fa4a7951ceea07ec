use std::fmt;

use serde::Serialize;

use crate::mask::{Candidate, MaskPattern};

/// Which estimator produced a [`CompletionDistribution`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimationPath {
    /// One missing digit, smoothed conditional on the three observed.
    DirectSingle,
    /// Two missing digits, smoothed joint over the pair.
    Joint,
    /// Renormalized product of per-position smoothed conditionals.
    Independence,
    /// Context never seen in training: product of global digit priors.
    PriorFallback,
    Bigram,
    MarkovChain,
    NaiveBayes,
    Uniform,
}

impl EstimationPath {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimationPath::DirectSingle => "direct_single",
            EstimationPath::Joint => "joint",
            EstimationPath::Independence => "independence",
            EstimationPath::PriorFallback => "prior_fallback",
            EstimationPath::Bigram => "bigram",
            EstimationPath::MarkovChain => "markov_chain",
            EstimationPath::NaiveBayes => "naive_bayes",
            EstimationPath::Uniform => "uniform",
        }
    }
}

impl fmt::Display for EstimationPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Probability of every filling of the missing positions, indexed by
/// candidate index (see [`Candidate`]).
#[derive(Clone, Debug, PartialEq)]
pub struct CompletionDistribution {
    pattern: MaskPattern,
    probabilities: Vec<f64>,
    used_path: EstimationPath,
}

impl CompletionDistribution {
    /// Takes probabilities that are already normalized.
    pub fn from_probabilities(pattern: MaskPattern, probabilities: Vec<f64>, used_path: EstimationPath) -> Self {
        assert_eq!(probabilities.len(), pattern.candidate_space());
        CompletionDistribution {
            pattern,
            probabilities,
            used_path,
        }
    }

    /// Divides non-negative weights by their sum.
    pub fn from_weights(pattern: MaskPattern, mut weights: Vec<f64>, used_path: EstimationPath) -> Self {
        let total: f64 = weights.iter().sum();
        assert!(
            total > 0.0 && total.is_finite(),
            "weights must have positive finite mass"
        );
        for w in &mut weights {
            *w /= total;
        }
        CompletionDistribution::from_probabilities(pattern, weights, used_path)
    }

    pub fn uniform(pattern: MaskPattern) -> Self {
        let n = pattern.candidate_space();
        CompletionDistribution::from_probabilities(pattern, vec![1.0 / n as f64; n], EstimationPath::Uniform)
    }

    pub fn pattern(&self) -> MaskPattern {
        self.pattern
    }

    pub fn used_path(&self) -> EstimationPath {
        self.used_path
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    /// Panics if `candidate` has the wrong number of digits.
    pub fn probability(&self, candidate: Candidate) -> f64 {
        assert_eq!(candidate.len(), self.pattern.missing_count());
        self.probabilities[candidate.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Candidate, f64)> + '_ {
        let len = self.pattern.missing_count();
        self.probabilities
            .iter()
            .enumerate()
            .map(move |(i, &p)| (Candidate::new(len, i).expect("index in range"), p))
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}
