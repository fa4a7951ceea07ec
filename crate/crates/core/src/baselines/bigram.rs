use super::{smooth, PositionalCounts};
use crate::corpus::DIGITS;
use crate::distribution::{CompletionDistribution, EstimationPath};
use crate::inference::Scorer;
use crate::mask::{MaskPattern, Observation};
use crate::model::{product_weights, PinHistogram};

/// Scores each missing digit from its nearest observed neighbour only,
/// treating the missing digits as independent. With `d1, d3` missing and
/// `d2, d4` observed this is `P(d1 | d2) P(d3 | d4)`.
#[derive(Clone, Debug)]
pub struct BigramModel {
    counts: PositionalCounts,
    alpha: f64,
}

impl BigramModel {
    pub fn new(histogram: &PinHistogram, alpha: f64) -> Self {
        BigramModel {
            counts: PositionalCounts::from_histogram(histogram),
            alpha,
        }
    }

    pub fn counts(&self) -> &PositionalCounts {
        &self.counts
    }

    /// Observed position nearest to `target`; equal distances go to the
    /// higher position.
    pub fn neighbour(pattern: MaskPattern, target: usize) -> usize {
        pattern
            .observed()
            .min_by_key(|&j| (target.abs_diff(j), std::cmp::Reverse(j)))
            .expect("pattern has an observed position")
    }

    /// `P(d_target = value | d_given = observed)`.
    pub fn conditional(&self, target: usize, value: u8, given: usize, observed: u8) -> f64 {
        smooth(
            self.counts.pair_count(target, value, given, observed),
            self.counts.position_count(given, observed),
            self.alpha,
            DIGITS,
        )
    }

    pub fn bigram_distribution(&self, obs: &Observation) -> CompletionDistribution {
        let pattern = obs.pattern();
        let factors: Vec<[f64; DIGITS]> = pattern
            .missing()
            .map(|t| {
                let j = Self::neighbour(pattern, t);
                let o = obs.observed(j).expect("neighbour is observed");
                std::array::from_fn(|v| self.conditional(t, v as u8, j, o))
            })
            .collect();
        let weights = product_weights(pattern.missing_count(), |slot, v| factors[slot][v]);
        CompletionDistribution::from_weights(pattern, weights, EstimationPath::Bigram)
    }
}

impl Scorer for BigramModel {
    fn name(&self) -> &str {
        "bigram"
    }

    fn completion_distribution(&self, obs: &Observation) -> CompletionDistribution {
        self.bigram_distribution(obs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Corpus, Pin};
    use crate::mask::Candidate;

    fn tiny() -> BigramModel {
        let corpus: Corpus = ["1234", "1234", "1235", "9876"]
            .iter()
            .map(|s| s.parse::<Pin>().unwrap())
            .collect();
        BigramModel::new(&PinHistogram::from_corpus(&corpus), 1.0)
    }

    #[test]
    fn neighbour_rule() {
        let p = |s: &str| s.parse::<MaskPattern>().unwrap();
        assert_eq!(BigramModel::neighbour(p("d1d3"), 0), 1);
        assert_eq!(BigramModel::neighbour(p("d1d3"), 2), 3);
        assert_eq!(BigramModel::neighbour(p("d2"), 1), 2);
        assert_eq!(BigramModel::neighbour(p("d1d2d3"), 0), 3);
        assert_eq!(BigramModel::neighbour(p("d2d3d4"), 3), 0);
        assert_eq!(BigramModel::neighbour(p("d2d3"), 1), 0);
        assert_eq!(BigramModel::neighbour(p("d2d3"), 2), 3);
    }

    #[test]
    fn hand_counted_conditional() {
        assert!((tiny().conditional(0, 1, 1, 2) - 4.0 / 13.0).abs() < 1e-12);
    }

    #[test]
    fn d1_d3_factorization() {
        let m = tiny();
        let obs: Observation = "?2?4".parse().unwrap();
        let dist = m.bigram_distribution(&obs);
        let raw: Vec<f64> = (0..100u8)
            .map(|i| m.conditional(0, i / 10, 1, 2) * m.conditional(2, i % 10, 3, 4))
            .collect();
        let z: f64 = raw.iter().sum();
        for (i, r) in raw.iter().enumerate() {
            let c = Candidate::new(2, i).unwrap();
            assert!((dist.probability(c) - r / z).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_model_is_uniform() {
        let m = BigramModel::new(&PinHistogram::new(), 1.0);
        let dist = m.bigram_distribution(&"?2?4".parse().unwrap());
        assert!(dist.probabilities().iter().all(|&p| (p - 0.01).abs() < 1e-15));
    }
}
