//! Ranking completions: the shared [`Scorer`] surface, guess order, point
//! predictions and the rank of the true completion.

use std::cmp::Ordering;

use crate::distribution::{CompletionDistribution, EstimationPath};
use crate::error::Result;
use crate::mask::{Candidate, Observation};

/// Anything that assigns a normalized, strictly positive distribution over
/// the completions of an observation.
pub trait Scorer: Send + Sync {
    fn name(&self) -> &str;

    fn completion_distribution(&self, obs: &Observation) -> CompletionDistribution;
}

impl<S: Scorer + ?Sized> Scorer for &S {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn completion_distribution(&self, obs: &Observation) -> CompletionDistribution {
        (**self).completion_distribution(obs)
    }
}

impl<S: Scorer + ?Sized> Scorer for Box<S> {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn completion_distribution(&self, obs: &Observation) -> CompletionDistribution {
        (**self).completion_distribution(obs)
    }
}

/// Equal mass on every completion.
#[derive(Clone, Copy, Debug, Default)]
pub struct UniformScorer;

impl Scorer for UniformScorer {
    fn name(&self) -> &str {
        "uniform"
    }

    fn completion_distribution(&self, obs: &Observation) -> CompletionDistribution {
        CompletionDistribution::uniform(obs.pattern())
    }
}

/// Every candidate in guess order: descending probability, ties broken by
/// ascending candidate.
#[derive(Clone, Debug, PartialEq)]
pub struct RankedCompletions {
    entries: Vec<(Candidate, f64)>,
    used_path: EstimationPath,
}

impl RankedCompletions {
    pub fn from_distribution(dist: &CompletionDistribution) -> Self {
        let mut entries: Vec<(Candidate, f64)> = dist.iter().collect();
        // stable sort keeps ascending candidate order among equal probabilities
        entries.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal));
        RankedCompletions {
            entries,
            used_path: dist.used_path(),
        }
    }

    pub fn entries(&self) -> &[(Candidate, f64)] {
        &self.entries
    }

    pub fn used_path(&self) -> EstimationPath {
        self.used_path
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn best(&self) -> Candidate {
        self.entries[0].0
    }

    /// `rank_table()[c]` is the 1-based rank of candidate index `c`.
    pub fn rank_table(&self) -> Vec<u32> {
        let mut table = vec![0u32; self.entries.len()];
        for (i, (c, _)) in self.entries.iter().enumerate() {
            table[c.index()] = i as u32 + 1;
        }
        table
    }

    /// 1-based rank of `truth`.
    pub fn rank_of(&self, truth: Candidate) -> Option<usize> {
        self.entries.iter().position(|(c, _)| *c == truth).map(|i| i + 1)
    }
}

pub fn rank_completions<S: Scorer + ?Sized>(scorer: &S, obs: &Observation) -> RankedCompletions {
    RankedCompletions::from_distribution(&scorer.completion_distribution(obs))
}

/// Most probable completion, lowest candidate on ties.
pub fn predict<S: Scorer + ?Sized>(scorer: &S, obs: &Observation) -> Candidate {
    rank_completions(scorer, obs).best()
}

/// 1-based position of `truth` in the guess order.
pub fn true_rank<S: Scorer + ?Sized>(scorer: &S, obs: &Observation, truth: Candidate) -> Result<usize> {
    obs.check_candidate(truth)?;
    Ok(rank_completions(scorer, obs)
        .rank_of(truth)
        .expect("ranking covers every candidate"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Corpus, Pin};
    use crate::model::{ModelConfig, TrainedModel};

    fn tiny() -> TrainedModel {
        let corpus: Corpus = ["1234", "1234", "1235", "9876"]
            .iter()
            .map(|s| s.parse::<Pin>().unwrap())
            .collect();
        TrainedModel::train(&corpus, ModelConfig::default())
    }

    fn obs(s: &str) -> Observation {
        s.parse().unwrap()
    }

    fn cand(d: &[u8]) -> Candidate {
        Candidate::from_digits(d).unwrap()
    }

    #[test]
    fn uniform_ranks_lexicographically() {
        let ranked = rank_completions(&UniformScorer, &obs("?234"));
        let order: Vec<usize> = ranked.entries().iter().map(|(c, _)| c.index()).collect();
        assert_eq!(order, (0..10).collect::<Vec<_>>());
        assert_eq!(true_rank(&UniformScorer, &obs("?234"), cand(&[9])).unwrap(), 10);
        assert_eq!(predict(&UniformScorer, &obs("??34")), cand(&[0, 0]));
    }

    #[test]
    fn tiny_model_predictions() {
        let m = tiny();
        let ranked = rank_completions(&m, &obs("?234"));
        assert_eq!(ranked.best(), cand(&[1]));
        assert!((ranked.entries()[0].1 - 0.25).abs() < 1e-12);
        assert_eq!(predict(&m, &obs("?234")), cand(&[1]));
        assert_eq!(true_rank(&m, &obs("??34"), cand(&[1, 2])).unwrap(), 1);

        let empty = TrainedModel::train(&Corpus::default(), ModelConfig::default());
        assert_eq!(predict(&empty, &obs("?234")), cand(&[0]));
        assert_eq!(predict(&empty, &obs("??34")), cand(&[0, 0]));
    }

    #[test]
    fn ranking_is_a_permutation() {
        let m = tiny();
        for s in ["?234", "??34", "1???", "?9?6"] {
            let ranked = rank_completions(&m, &obs(s));
            let mut seen: Vec<usize> = ranked.entries().iter().map(|(c, _)| c.index()).collect();
            seen.sort_unstable();
            assert_eq!(seen, (0..ranked.len()).collect::<Vec<_>>());
            assert!(ranked.entries().windows(2).all(|w| w[0].1 >= w[1].1));
            let table = ranked.rank_table();
            for (i, (c, _)) in ranked.entries().iter().enumerate() {
                assert_eq!(table[c.index()] as usize, i + 1);
            }
        }
    }

    #[test]
    fn true_rank_rejects_wrong_shape() {
        assert!(true_rank(&tiny(), &obs("?234"), cand(&[1, 2])).is_err());
    }
}
