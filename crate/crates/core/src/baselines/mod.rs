//! Comparison scorers. Each one is built from the same [`PinHistogram`] as
//! the proposed model, so every count table it uses is an exact
//! marginalization of the joint counts.

mod bigram;
mod markov;
mod naive_bayes;

use std::fmt;
use std::str::FromStr;

pub use bigram::BigramModel;
pub use markov::MarkovChainModel;
pub use naive_bayes::NaiveBayesModel;

use crate::corpus::{DIGITS, PIN_LEN};
use crate::error::{PinlabError, Result};
use crate::inference::{Scorer, UniformScorer};
use crate::model::{ModelConfig, PinHistogram, TrainedModel};

/// Per-position digit counts and co-occurrence counts for each of the six
/// unordered position pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionalCounts {
    total: u64,
    position: [[u64; DIGITS]; PIN_LEN],
    // pairs[slot][a][b]: d_i = a and d_j = b for the slot's (i, j), i < j
    pairs: [[[u64; DIGITS]; DIGITS]; 6],
}

fn pair_slot(i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < PIN_LEN);
    match (i, j) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        _ => 5,
    }
}

impl PositionalCounts {
    pub fn from_histogram(histogram: &PinHistogram) -> Self {
        let mut out = PositionalCounts {
            total: histogram.total_pins(),
            position: [[0; DIGITS]; PIN_LEN],
            pairs: [[[0; DIGITS]; DIGITS]; 6],
        };
        for (pin, n) in histogram.nonzero() {
            let d = pin.digits().map(usize::from);
            for i in 0..PIN_LEN {
                out.position[i][d[i]] += n;
                for j in i + 1..PIN_LEN {
                    out.pairs[pair_slot(i, j)][d[i]][d[j]] += n;
                }
            }
        }
        out
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// PINs with digit `a` at position `i`.
    pub fn position_count(&self, i: usize, a: u8) -> u64 {
        self.position[i][a as usize]
    }

    /// PINs with `a` at position `i` and `b` at position `j` (`i != j`).
    pub fn pair_count(&self, i: usize, a: u8, j: usize, b: u8) -> u64 {
        assert_ne!(i, j, "pair positions must differ");
        if i < j {
            self.pairs[pair_slot(i, j)][a as usize][b as usize]
        } else {
            self.pairs[pair_slot(j, i)][b as usize][a as usize]
        }
    }
}

/// Add-α estimate over `outcomes` possible values.
#[inline]
pub(crate) fn smooth(count: u64, total: u64, alpha: f64, outcomes: usize) -> f64 {
    (count as f64 + alpha) / (total as f64 + alpha * outcomes as f64)
}

/// Names the scorers the evaluation harness can build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScorerKind {
    Proposed,
    Bigram,
    Markov,
    NaiveBayes,
    Uniform,
}

impl ScorerKind {
    /// The four models compared by default.
    pub const DEFAULT: [ScorerKind; 4] = [
        ScorerKind::Proposed,
        ScorerKind::Bigram,
        ScorerKind::Markov,
        ScorerKind::NaiveBayes,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScorerKind::Proposed => "proposed",
            ScorerKind::Bigram => "bigram",
            ScorerKind::Markov => "markov",
            ScorerKind::NaiveBayes => "nb",
            ScorerKind::Uniform => "uniform",
        }
    }

    pub fn build(self, histogram: &PinHistogram, config: ModelConfig) -> Box<dyn Scorer> {
        let alpha = config.alpha();
        match self {
            ScorerKind::Proposed => Box::new(TrainedModel::from_histogram(histogram.clone(), config)),
            ScorerKind::Bigram => Box::new(BigramModel::new(histogram, alpha)),
            ScorerKind::Markov => Box::new(MarkovChainModel::new(histogram, alpha)),
            ScorerKind::NaiveBayes => Box::new(NaiveBayesModel::new(histogram, alpha)),
            ScorerKind::Uniform => Box::new(UniformScorer),
        }
    }
}

impl fmt::Display for ScorerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScorerKind {
    type Err = PinlabError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "proposed" => Ok(ScorerKind::Proposed),
            "bigram" => Ok(ScorerKind::Bigram),
            "markov" | "hmm" => Ok(ScorerKind::Markov),
            "nb" | "naive_bayes" => Ok(ScorerKind::NaiveBayes),
            "uniform" => Ok(ScorerKind::Uniform),
            other => Err(PinlabError::InvalidArgument(format!("unknown model {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Corpus, Pin};

    #[test]
    fn pair_counts_are_orientation_aware() {
        let corpus: Corpus = ["1234", "1234", "1235", "9876"]
            .iter()
            .map(|s| s.parse::<Pin>().unwrap())
            .collect();
        let c = PositionalCounts::from_histogram(&PinHistogram::from_corpus(&corpus));
        assert_eq!(c.total(), 4);
        assert_eq!(c.pair_count(0, 1, 1, 2), 3);
        assert_eq!(c.pair_count(1, 2, 0, 1), 3);
        assert_eq!(c.pair_count(3, 5, 2, 3), 1);
        assert_eq!(c.position_count(1, 2), 3);
        assert_eq!(c.position_count(3, 6), 1);
    }

    #[test]
    fn scorer_kind_names_round_trip() {
        for k in ScorerKind::DEFAULT.into_iter().chain([ScorerKind::Uniform]) {
            assert_eq!(k.as_str().parse::<ScorerKind>().unwrap(), k);
        }
        assert!("tree".parse::<ScorerKind>().is_err());
    }
}
