//! Scenario evaluation: mask every test PIN, query a scorer, and assemble
//! accuracy, macro metrics, top-k success, expected guess rank and a 95%
//! interval on accuracy.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::Pin;
use crate::error::{PinlabError, Result};
use crate::inference::{RankedCompletions, Scorer};
use crate::mask::{Candidate, MaskPattern, Observation};
use crate::metrics::{expected_guess_rank, macro_metrics, topk_success, wald_interval, ConfusionTally};
use crate::model::TrainedModel;

pub const DEFAULT_KS: [usize; 4] = [1, 3, 5, 10];
pub const DEFAULT_TAUS: [u64; 5] = [1, 5, 10, 20, 50];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScenarioResult {
    pub pattern: MaskPattern,
    pub n: u64,
    pub accuracy: f64,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub topk: BTreeMap<usize, f64>,
    pub expected_rank: f64,
    pub ci95: (f64, f64),
    /// Test records per estimation path.
    pub paths: BTreeMap<&'static str, u64>,
    pub per_class_recall: BTreeMap<String, f64>,
}

fn check_ks(pattern: MaskPattern, ks: &[usize]) -> Result<()> {
    let space = pattern.candidate_space();
    for &k in ks {
        if k < 1 {
            return Err(PinlabError::InvalidArgument("k must be at least 1".into()));
        }
        if k > space {
            return Err(PinlabError::KExceedsCandidateSpace { k, space });
        }
    }
    Ok(())
}

struct ContextOutcome {
    predicted: usize,
    ranks: Vec<u32>,
    path: &'static str,
}

/// Evaluates `scorer` on every test PIN under `pattern`.
///
/// Records sharing a context share one ranking, so the scorer is queried
/// once per distinct context. All aggregation is integer tallies, so the
/// result does not depend on thread scheduling.
pub fn evaluate_scenario<S: Scorer + ?Sized>(
    scorer: &S,
    test: &[Pin],
    pattern: MaskPattern,
    ks: &[usize],
) -> Result<ScenarioResult> {
    if test.is_empty() {
        return Err(PinlabError::EmptyTestSet);
    }
    check_ks(pattern, ks)?;

    let mut by_context: Vec<Vec<Pin>> = vec![Vec::new(); pattern.context_space()];
    for &pin in test {
        by_context[pattern.context_index(pin)].push(pin);
    }
    let contexts: Vec<usize> = (0..by_context.len()).filter(|&c| !by_context[c].is_empty()).collect();

    let outcomes: Vec<ContextOutcome> = contexts
        .par_iter()
        .map(|&ctx| {
            let obs = Observation::from_context(pattern, ctx).expect("context in range");
            let ranked = RankedCompletions::from_distribution(&scorer.completion_distribution(&obs));
            ContextOutcome {
                predicted: ranked.best().index(),
                ranks: ranked.rank_table(),
                path: ranked.used_path().as_str(),
            }
        })
        .collect();

    let mut tally = ConfusionTally::new(pattern.candidate_space());
    let mut ranks = Vec::with_capacity(test.len());
    let mut paths: BTreeMap<&'static str, u64> = BTreeMap::new();
    for (&ctx, outcome) in contexts.iter().zip(&outcomes) {
        for &pin in &by_context[ctx] {
            let truth = pattern.truth(pin).index();
            tally.record(truth, outcome.predicted);
            ranks.push(outcome.ranks[truth]);
        }
        *paths.entry(outcome.path).or_default() += by_context[ctx].len() as u64;
    }

    let n = test.len() as u64;
    let correct = tally.correct();
    let macros = macro_metrics(&tally)?;
    let topk = ks
        .iter()
        .map(|&k| Ok((k, topk_success(&ranks, k)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let missing = pattern.missing_count();
    let per_class_recall = macros
        .per_class_recall
        .iter()
        .enumerate()
        .map(|(i, &r)| (Candidate::new(missing, i).expect("in range").to_string(), r))
        .collect();

    Ok(ScenarioResult {
        pattern,
        n,
        accuracy: correct as f64 / n as f64,
        macro_precision: macros.precision,
        macro_recall: macros.recall,
        macro_f1: macros.f1,
        topk,
        expected_rank: expected_guess_rank(&ranks)?,
        ci95: wald_interval(correct, n, 0.95)?,
        paths,
        per_class_recall,
    })
}

pub fn evaluate_patterns<S: Scorer + ?Sized>(
    scorer: &S,
    test: &[Pin],
    patterns: &[MaskPattern],
    ks: &[usize],
) -> Result<Vec<ScenarioResult>> {
    patterns
        .iter()
        .map(|&p| evaluate_scenario(scorer, test, p, ks))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TauResult {
    pub tau: u64,
    #[serde(flatten)]
    pub result: ScenarioResult,
}

/// Re-evaluates a two-missing-digit scenario under each gate value. The
/// histogram is shared; only the joint/independence choice changes.
pub fn tau_sensitivity(
    model: &TrainedModel,
    test: &[Pin],
    pattern: MaskPattern,
    taus: &[u64],
    ks: &[usize],
) -> Result<Vec<TauResult>> {
    if pattern.missing_count() != 2 {
        return Err(PinlabError::InvalidPattern(format!(
            "sensitivity analysis needs two missing digits, {pattern} has {}",
            pattern.missing_count()
        )));
    }
    taus.iter()
        .map(|&tau| {
            Ok(TauResult {
                tau,
                result: evaluate_scenario(&model.with_tau(tau), test, pattern, ks)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Corpus, SplitMix64};
    use crate::distribution::{CompletionDistribution, EstimationPath};
    use crate::inference::UniformScorer;
    use crate::model::ModelConfig;
    use std::collections::HashMap;

    /// Knows the single true completion of each context.
    struct Oracle(HashMap<(MaskPattern, usize), usize>);

    impl Oracle {
        fn new(test: &[Pin], pattern: MaskPattern) -> Self {
            Oracle(
                test.iter()
                    .map(|&p| ((pattern, pattern.context_index(p)), pattern.truth(p).index()))
                    .collect(),
            )
        }
    }

    impl Scorer for Oracle {
        fn name(&self) -> &str {
            "oracle"
        }

        fn completion_distribution(&self, obs: &Observation) -> CompletionDistribution {
            let p = obs.pattern();
            let truth = self.0[&(p, obs.context_index())];
            let mut w = vec![1.0; p.candidate_space()];
            w[truth] = 1000.0;
            CompletionDistribution::from_weights(p, w, EstimationPath::Uniform)
        }
    }

    fn random_pins(n: usize, seed: u64) -> Vec<Pin> {
        let mut rng = SplitMix64::new(seed);
        (0..n).map(|_| Pin::from_index(rng.below(10_000) as usize)).collect()
    }

    #[test]
    fn perfect_scorer() {
        // distinct PINs, so each context has one truth
        let test: Vec<Pin> = (0..50).map(|i| Pin::from_index(i * 37)).collect();
        let pattern: MaskPattern = "d4".parse().unwrap();
        let r = evaluate_scenario(&Oracle::new(&test, pattern), &test, pattern, &DEFAULT_KS).unwrap();
        assert_eq!(r.accuracy, 1.0);
        assert_eq!(r.expected_rank, 1.0);
        assert!(r.topk.values().all(|&v| v == 1.0));
        // supported classes get 1, the rest 0
        let support = test
            .iter()
            .map(|&p| pattern.truth(p))
            .collect::<std::collections::BTreeSet<_>>();
        let expected = support.len() as f64 / 10.0;
        assert!((r.macro_recall - expected).abs() < 1e-12);
        assert!((r.macro_precision - expected).abs() < 1e-12);
    }

    #[test]
    fn uniform_scorer_closed_forms() {
        let test = random_pins(100_000, 7);
        let pattern: MaskPattern = "d2".parse().unwrap();
        let r = evaluate_scenario(&UniformScorer, &test, pattern, &[1, 10]).unwrap();
        assert!((r.accuracy - 0.1).abs() < 0.01);
        assert!((r.expected_rank - 5.5).abs() < 0.1);
        // ties go to digit 0, so accuracy is exactly the frequency of d2 = 0
        let zeros = test.iter().filter(|p| p.digit(1) == 0).count();
        assert_eq!(r.accuracy, zeros as f64 / test.len() as f64);
        assert_eq!(r.topk[&10], 1.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let pattern: MaskPattern = "d1".parse().unwrap();
        assert!(matches!(
            evaluate_scenario(&UniformScorer, &[], pattern, &[1]),
            Err(PinlabError::EmptyTestSet)
        ));
        let test = random_pins(10, 1);
        let err = evaluate_scenario(&UniformScorer, &test, pattern, &[1, 100]).unwrap_err();
        assert!(err.to_string().contains("k exceeds candidate space"));
        assert!(evaluate_scenario(&UniformScorer, &test, pattern, &[0]).is_err());
    }

    #[test]
    fn invariants_on_trained_model() {
        let pins = random_pins(5000, 3);
        let corpus = Corpus::new(pins[..4000].to_vec());
        let model = TrainedModel::train(&corpus, ModelConfig::default());
        for pattern in MaskPattern::all() {
            let space = pattern.candidate_space();
            let mut ks = vec![1, 3, 5, 10];
            ks.push(space);
            let r = evaluate_scenario(&model, &pins[4000..], pattern, &ks).unwrap();
            assert_eq!(r.topk[&1], r.accuracy);
            assert!(r.topk.values().zip(r.topk.values().skip(1)).all(|(a, b)| a <= b));
            assert_eq!(r.topk[&space], 1.0);
            assert!(r.expected_rank >= 1.0 && r.expected_rank <= space as f64);
            assert_eq!(r.per_class_recall.len(), space);
            assert_eq!(r.paths.values().sum::<u64>(), r.n);
            for v in [r.accuracy, r.macro_precision, r.macro_recall, r.macro_f1] {
                assert!((0.0..=1.0).contains(&v));
            }
            assert!(r.ci95.0 <= r.accuracy && r.accuracy <= r.ci95.1);
        }
    }

    #[test]
    fn order_of_test_records_does_not_matter() {
        let pins = random_pins(3000, 11);
        let model = TrainedModel::train(&Corpus::new(pins[..2000].to_vec()), ModelConfig::default());
        let mut test = pins[2000..].to_vec();
        let pattern: MaskPattern = "d1d3".parse().unwrap();
        let a = evaluate_scenario(&model, &test, pattern, &DEFAULT_KS).unwrap();
        test.reverse();
        let b = evaluate_scenario(&model, &test, pattern, &DEFAULT_KS).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sensitivity_requires_two_missing() {
        let model = TrainedModel::train(&Corpus::default(), ModelConfig::default());
        let test = random_pins(10, 2);
        assert!(tau_sensitivity(&model, &test, "d1".parse().unwrap(), &DEFAULT_TAUS, &[1]).is_err());
        let out = tau_sensitivity(&model, &test, "d1d2".parse().unwrap(), &[1, 100], &[1]).unwrap();
        assert_eq!(out.iter().map(|t| t.tau).collect::<Vec<_>>(), vec![1, 100]);
    }
}
