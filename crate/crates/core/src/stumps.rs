//! Threshold stumps: the per-feature classifier families.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;

/// Outcome 0 when `x[feature] <= threshold`, outcome 1 otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stump {
    pub feature: usize,
    pub threshold: f64,
}

impl Stump {
    pub fn new(feature: usize, threshold: f64) -> Self {
        Stump { feature, threshold }
    }

    #[inline]
    pub fn outcome(&self, row: &[f64]) -> usize {
        usize::from(row[self.feature] > self.threshold)
    }
}

/// How many random candidates to draw for a node of a given size.
///
/// Nodes with more than `large_above` examples get `large`, nodes with at
/// least `medium_from` get `medium`, the rest get `small`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StumpBudgetPolicy {
    pub large_above: usize,
    pub medium_from: usize,
    pub large: usize,
    pub medium: usize,
    pub small: usize,
}

impl Default for StumpBudgetPolicy {
    fn default() -> Self {
        StumpBudgetPolicy {
            large_above: 2000,
            medium_from: 500,
            large: 80,
            medium: 40,
            small: 20,
        }
    }
}

impl StumpBudgetPolicy {
    pub fn candidate_count(&self, n_examples: usize) -> usize {
        let n = if n_examples > self.large_above {
            self.large
        } else if n_examples >= self.medium_from {
            self.medium
        } else {
            self.small
        };
        n.max(1)
    }
}

/// Source of candidate stumps for the inner minimisation of the risk rule.
#[derive(Debug, Clone, PartialEq)]
pub enum StumpSearch {
    /// Random thresholds, count given by the policy.
    Random(StumpBudgetPolicy),
    /// Every midpoint between consecutive distinct values at the node.
    Exhaustive,
    /// A fixed family per feature, reused at every node.
    Fixed(Vec<Vec<Stump>>),
}

impl Default for StumpSearch {
    fn default() -> Self {
        StumpSearch::Random(StumpBudgetPolicy::default())
    }
}

impl StumpSearch {
    pub fn candidates<R: Rng + ?Sized>(
        &self,
        data: &Dataset,
        indices: &[usize],
        feature: usize,
        rng: &mut R,
    ) -> Vec<Stump> {
        match self {
            StumpSearch::Random(policy) => generate_candidates(data, indices, feature, policy, rng),
            StumpSearch::Exhaustive => exhaustive_candidates(data, indices, feature),
            StumpSearch::Fixed(families) => families.get(feature).cloned().unwrap_or_default(),
        }
    }
}

fn feature_range(data: &Dataset, indices: &[usize], feature: usize) -> (f64, f64) {
    indices
        .iter()
        .map(|&i| data.value(i, feature))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        })
}

/// Draws `policy.candidate_count(indices.len())` stumps on `feature` with
/// thresholds uniform over the feature's range at the node.
///
/// A constant feature yields stumps that send every example to outcome 0.
pub fn generate_candidates<R: Rng + ?Sized>(
    data: &Dataset,
    indices: &[usize],
    feature: usize,
    policy: &StumpBudgetPolicy,
    rng: &mut R,
) -> Vec<Stump> {
    debug_assert!(!indices.is_empty());
    let (lo, hi) = feature_range(data, indices, feature);
    (0..policy.candidate_count(indices.len()))
        .map(|_| {
            let threshold = if lo < hi { rng.gen_range(lo..=hi) } else { lo };
            Stump::new(feature, threshold)
        })
        .collect()
}

/// All distinct non-degenerate splits on `feature` at the node.
pub fn exhaustive_candidates(data: &Dataset, indices: &[usize], feature: usize) -> Vec<Stump> {
    let mut values: Vec<f64> = indices.iter().map(|&i| data.value(i, feature)).collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    values
        .windows(2)
        .map(|w| Stump::new(feature, w[0] + (w[1] - w[0]) / 2.0))
        .collect()
}

/// Partitions `indices` by stump outcome, preserving order within each side.
pub fn split(stump: &Stump, data: &Dataset, indices: &[usize]) -> (Vec<usize>, Vec<usize>) {
    indices
        .iter()
        .partition(|&&i| stump.outcome(data.row(i)) == 0)
}
