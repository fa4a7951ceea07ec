use super::smooth;
use crate::corpus::{DIGITS, PIN_LEN};
use crate::distribution::{CompletionDistribution, EstimationPath};
use crate::inference::Scorer;
use crate::mask::Observation;
use crate::model::PinHistogram;

/// First-order Markov chain over digit sequences: an initial distribution
/// for `d1` and one transition matrix shared by the three adjacent steps.
/// Conditioning on an observation is exact enumeration of its completions.
#[derive(Clone, Debug)]
pub struct MarkovChainModel {
    initial: [u64; DIGITS],
    transitions: [[u64; DIGITS]; DIGITS],
    row_totals: [u64; DIGITS],
    total: u64,
    alpha: f64,
}

impl MarkovChainModel {
    pub fn new(histogram: &PinHistogram, alpha: f64) -> Self {
        let mut initial = [0; DIGITS];
        let mut transitions = [[0; DIGITS]; DIGITS];
        for (pin, n) in histogram.nonzero() {
            let d = pin.digits().map(usize::from);
            initial[d[0]] += n;
            for step in d.windows(2) {
                transitions[step[0]][step[1]] += n;
            }
        }
        let row_totals = transitions.map(|row| row.iter().sum());
        MarkovChainModel {
            initial,
            transitions,
            row_totals,
            total: histogram.total_pins(),
            alpha,
        }
    }

    pub fn transition_count(&self, from: u8, to: u8) -> u64 {
        self.transitions[from as usize][to as usize]
    }

    pub fn initial_count(&self, digit: u8) -> u64 {
        self.initial[digit as usize]
    }

    pub fn initial_probability(&self, digit: u8) -> f64 {
        smooth(self.initial[digit as usize], self.total, self.alpha, DIGITS)
    }

    pub fn transition_probability(&self, from: u8, to: u8) -> f64 {
        smooth(
            self.transitions[from as usize][to as usize],
            self.row_totals[from as usize],
            self.alpha,
            DIGITS,
        )
    }

    pub fn sequence_probability(&self, digits: [u8; PIN_LEN]) -> f64 {
        digits.windows(2).fold(self.initial_probability(digits[0]), |p, w| {
            p * self.transition_probability(w[0], w[1])
        })
    }

    pub fn markov_distribution(&self, obs: &Observation) -> CompletionDistribution {
        let pattern = obs.pattern();
        let weights = (0..pattern.candidate_space())
            .map(|c| self.sequence_probability(obs.complete_index(c).digits()))
            .collect();
        CompletionDistribution::from_weights(pattern, weights, EstimationPath::MarkovChain)
    }
}

impl Scorer for MarkovChainModel {
    fn name(&self) -> &str {
        "markov"
    }

    fn completion_distribution(&self, obs: &Observation) -> CompletionDistribution {
        self.markov_distribution(obs)
    }
}
