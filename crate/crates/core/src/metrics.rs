//! Classification and guessing metrics over the candidate class space.

use std::collections::BTreeMap;

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{PinlabError, Result};

/// Counts of (true class, predicted class) over `classes` classes. Classes
/// that never occur still count toward macro averages.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfusionTally {
    classes: usize,
    cells: BTreeMap<(u32, u32), u64>,
    total: u64,
}

impl ConfusionTally {
    pub fn new(classes: usize) -> Self {
        ConfusionTally {
            classes,
            cells: BTreeMap::new(),
            total: 0,
        }
    }

    pub fn record(&mut self, truth: usize, predicted: usize) {
        self.record_n(truth, predicted, 1);
    }

    pub fn record_n(&mut self, truth: usize, predicted: usize, n: u64) {
        assert!(truth < self.classes && predicted < self.classes, "class out of range");
        if n == 0 {
            return;
        }
        *self.cells.entry((truth as u32, predicted as u32)).or_default() += n;
        self.total += n;
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn get(&self, truth: usize, predicted: usize) -> u64 {
        self.cells.get(&(truth as u32, predicted as u32)).copied().unwrap_or(0)
    }

    pub fn correct(&self) -> u64 {
        self.cells.iter().filter(|((t, p), _)| t == p).map(|(_, n)| n).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MacroMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub per_class_recall: Vec<f64>,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Unweighted means of per-class precision, recall and F1 over every class;
/// each 0/0 counts as 0.
pub fn macro_metrics(tally: &ConfusionTally) -> Result<MacroMetrics> {
    if tally.total() == 0 || tally.classes() == 0 {
        return Err(PinlabError::EmptyTestSet);
    }
    let k = tally.classes();
    let mut tp = vec![0u64; k];
    let mut actual = vec![0u64; k];
    let mut predicted = vec![0u64; k];
    for (&(t, p), &n) in &tally.cells {
        actual[t as usize] += n;
        predicted[p as usize] += n;
        if t == p {
            tp[t as usize] += n;
        }
    }
    let mut precision = 0.0;
    let mut recall = 0.0;
    let mut f1 = 0.0;
    let mut per_class_recall = Vec::with_capacity(k);
    for c in 0..k {
        let p = ratio(tp[c], predicted[c]);
        let r = ratio(tp[c], actual[c]);
        let f = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
        precision += p;
        recall += r;
        f1 += f;
        per_class_recall.push(r);
    }
    Ok(MacroMetrics {
        precision: precision / k as f64,
        recall: recall / k as f64,
        f1: f1 / k as f64,
        per_class_recall,
    })
}

/// Fraction of 1-based ranks no larger than `k`.
pub fn topk_success(ranks: &[u32], k: usize) -> Result<f64> {
    if k < 1 {
        return Err(PinlabError::InvalidArgument("k must be at least 1".into()));
    }
    if ranks.is_empty() {
        return Err(PinlabError::EmptyTestSet);
    }
    let hits = ranks.iter().filter(|&&r| r as usize <= k).count();
    Ok(hits as f64 / ranks.len() as f64)
}

/// Mean 1-based rank.
pub fn expected_guess_rank(ranks: &[u32]) -> Result<f64> {
    if ranks.is_empty() {
        return Err(PinlabError::EmptyTestSet);
    }
    let sum: u64 = ranks.iter().map(|&r| r as u64).sum();
    Ok(sum as f64 / ranks.len() as f64)
}

/// Normal-approximation interval for a binomial proportion, clipped to
/// `[0, 1]`.
pub fn wald_interval(successes: u64, n: u64, level: f64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(PinlabError::InvalidArgument("interval needs n > 0".into()));
    }
    if successes > n {
        return Err(PinlabError::InvalidArgument(format!(
            "successes ({successes}) exceed trials ({n})"
        )));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(PinlabError::InvalidArgument(format!("level {level} outside (0, 1)")));
    }
    let z = Normal::new(0.0, 1.0)
        .expect("standard normal")
        .inverse_cdf(0.5 + level / 2.0);
    let p = successes as f64 / n as f64;
    let half = z * (p * (1.0 - p) / n as f64).sqrt();
    Ok(((p - half).max(0.0), (p + half).min(1.0)))
}
