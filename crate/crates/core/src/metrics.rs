//! Evaluation metrics and accuracy-cost curves.

use std::io::Write;

use rayon::prelude::*;

use crate::dataset::{CostVector, Dataset, FeatureSet};
use crate::error::{Error, Result};
use crate::forest::{grow_forest, BudgetConfig, Forest};
use crate::impurity::ImpuritySpec;
use crate::rng::{derive_seed, Stream};
use crate::tree::{GrowConfig, Node};

/// Threshold values swept by default.
pub const DEFAULT_ALPHAS: [u64; 10] = [0, 2, 4, 6, 8, 10, 15, 25, 35, 45];

/// Fraction of rows whose forest vote differs from the label.
pub fn test_error(forest: &Forest, data: &Dataset) -> Result<f64> {
    let mut wrong = 0usize;
    for (i, row) in data.rows().enumerate() {
        if forest.predict(row)? != data.label(i) {
            wrong += 1;
        }
    }
    Ok(wrong as f64 / data.n_rows() as f64)
}

/// Mean over rows of the share of features the forest reads.
pub fn avg_feature_fraction(forest: &Forest, data: &Dataset) -> f64 {
    let read: usize = data.rows().map(|r| forest.acquired(r).len()).sum();
    read as f64 / (data.n_rows() * forest.n_features()) as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedDoc {
    pub index: usize,
    pub relevant: bool,
    pub confidence: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryGroup {
    pub query: String,
    pub docs: Vec<RankedDoc>,
}

/// Score of one query: 1 when the top five (or all, if fewer) are relevant,
/// otherwise `(j - 1) / 5` for the first irrelevant position `j`.
pub fn precision_at_5(group: &QueryGroup) -> f64 {
    let mut order: Vec<&RankedDoc> = group.docs.iter().collect();
    // stable: equal confidences keep document order
    order.sort_by(|a, b| b.confidence.total_cmp(&a.confidence));
    match order.iter().take(5).position(|d| !d.relevant) {
        None => 1.0,
        Some(p) => p as f64 / 5.0,
    }
}

/// Mean of [`precision_at_5`] over queries (0 for no queries).
pub fn average_precision_at_5(groups: &[QueryGroup]) -> f64 {
    if groups.is_empty() {
        return 0.0;
    }
    groups.iter().map(precision_at_5).sum::<f64>() / groups.len() as f64
}

/// Groups rows by query id in first-appearance order. Relevance is class 1.
pub fn query_groups(data: &Dataset, confidences: &[f64]) -> Result<Vec<QueryGroup>> {
    let ids = data
        .query_ids()
        .ok_or_else(|| Error::InvalidDataset("AP@5 needs a query id column".into()))?;
    if data.n_classes() != 2 {
        return Err(Error::NotBinary(data.n_classes()));
    }
    let mut groups: Vec<QueryGroup> = Vec::new();
    let mut slot = std::collections::HashMap::new();
    for (i, q) in ids.iter().enumerate() {
        let g = *slot.entry(q.as_str()).or_insert_with(|| {
            groups.push(QueryGroup {
                query: q.clone(),
                docs: Vec::new(),
            });
            groups.len() - 1
        });
        groups[g].docs.push(RankedDoc {
            index: i,
            relevant: data.label(i) == 1,
            confidence: confidences[i],
        });
    }
    Ok(groups)
}

pub fn forest_ap5(forest: &Forest, data: &Dataset) -> Result<f64> {
    let conf = data
        .rows()
        .map(|r| forest.confidence(r))
        .collect::<Result<Vec<_>>>()?;
    Ok(average_precision_at_5(&query_groups(data, &conf)?))
}

/// Cost, error and (for binary data with query ids) AP@5 of every tree-count
/// prefix `1..=forest.len()`, computed in one pass over the data.
#[derive(Debug, Clone, PartialEq)]
pub struct PrefixStats {
    pub avg_cost: Vec<f64>,
    pub error: Vec<f64>,
    pub ap5: Option<Vec<f64>>,
}

pub fn prefix_stats(forest: &Forest, data: &Dataset, costs: &CostVector) -> Result<PrefixStats> {
    let t = forest.len();
    let n = data.n_rows();
    let k = forest.n_classes();
    let want_ap = data.query_ids().is_some() && k == 2 && data.n_classes() == 2;
    let mut cost_sum = vec![0.0; t];
    let mut wrong = vec![0usize; t];
    let mut conf = if want_ap {
        vec![vec![0.0; n]; t]
    } else {
        Vec::new()
    };

    let mut acquired = FeatureSet::with_capacity(forest.n_features());
    let mut votes = vec![0usize; k];
    for (i, row) in data.rows().enumerate() {
        acquired.clear();
        votes.iter_mut().for_each(|v| *v = 0);
        let (mut pos, mut tot) = (0u64, 0u64);
        for (j, tree) in forest.trees().iter().enumerate() {
            let leaf = tree.trace(row, &mut acquired);
            let Node::Leaf { counts, label } = leaf else {
                unreachable!()
            };
            votes[*label] += 1;
            cost_sum[j] += costs.total(&acquired);
            let mut best = 0;
            for (c, &v) in votes.iter().enumerate() {
                if v > votes[best] {
                    best = c;
                }
            }
            if best != data.label(i) {
                wrong[j] += 1;
            }
            if want_ap {
                pos += counts.get(1);
                tot += counts.get(0) + counts.get(1);
                conf[j][i] = if tot == 0 {
                    0.0
                } else {
                    pos as f64 / tot as f64
                };
            }
        }
    }
    let ap5 = if want_ap {
        Some(
            conf.iter()
                .map(|c| query_groups(data, c).map(|g| average_precision_at_5(&g)))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    Ok(PrefixStats {
        avg_cost: cost_sum.iter().map(|c| c / n as f64).collect(),
        error: wrong.iter().map(|&w| w as f64 / n as f64).collect(),
        ap5,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub alpha: u64,
    pub trees: usize,
    /// Test-set average acquisition cost.
    pub avg_cost: f64,
    /// Test-set error.
    pub error: f64,
    /// Test-set AP@5 when available.
    pub metric: Option<f64>,
    pub validation_cost: f64,
    pub validation_error: f64,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub max_trees: usize,
    pub seed: u64,
    pub threads: usize,
    pub grow: GrowConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            max_trees: 40,
            seed: 0,
            threads: 1,
            grow: GrowConfig::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepFailure {
    pub alpha: u64,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct Sweep {
    pub points: Vec<CurvePoint>,
    pub failures: Vec<SweepFailure>,
}

/// Grows one unbudgeted forest per alpha and emits a curve point for every
/// tree-count prefix. Alpha `i` uses a seed derived from `config.seed` and `i`.
pub fn sweep_alpha(
    train: &Dataset,
    validation: &Dataset,
    test: &Dataset,
    costs: &CostVector,
    alphas: &[u64],
    config: &SweepConfig,
) -> Result<Sweep> {
    if alphas.is_empty() {
        return Err(Error::InvalidConfig("empty alpha list".into()));
    }
    let run = |(a, &alpha): (usize, &u64)| -> Result<Vec<CurvePoint>> {
        let budget = BudgetConfig {
            budget: f64::INFINITY,
            max_trees: config.max_trees,
            seed: derive_seed(config.seed, Stream::Alpha, a as u64),
            threads: 1,
            grow: config.grow.clone(),
        };
        let report = grow_forest(
            train,
            validation,
            &budget,
            &ImpuritySpec::pairs(alpha),
            costs,
        )?;
        let val = prefix_stats(&report.forest, validation, costs)?;
        let tst = prefix_stats(&report.forest, test, costs)?;
        Ok((0..report.forest.len())
            .map(|j| CurvePoint {
                alpha,
                trees: j + 1,
                avg_cost: tst.avg_cost[j],
                error: tst.error[j],
                metric: tst.ap5.as_ref().map(|a| a[j]),
                validation_cost: val.avg_cost[j],
                validation_error: val.error[j],
            })
            .collect())
    };
    let results: Vec<Result<Vec<CurvePoint>>> = if config.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
        pool.install(|| alphas.par_iter().enumerate().map(run).collect())
    } else {
        alphas.iter().enumerate().map(run).collect()
    };

    let mut sweep = Sweep {
        points: Vec::new(),
        failures: Vec::new(),
    };
    for (r, &alpha) in results.into_iter().zip(alphas) {
        match r {
            Ok(p) => sweep.points.extend(p),
            Err(e) => {
                log::warn!("alpha {alpha} failed: {e}");
                sweep.failures.push(SweepFailure {
                    alpha,
                    reason: e.to_string(),
                })
            }
        }
    }
    Ok(sweep)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BudgetSelection {
    pub budget: f64,
    /// Point with the lowest validation error among those within budget.
    pub point: Option<CurvePoint>,
}

/// Picks, per budget, the (alpha, trees) point that minimises validation error
/// subject to validation cost within budget. Ties prefer lower cost, then the
/// earlier point.
pub fn select_for_budgets(points: &[CurvePoint], budgets: &[f64]) -> Vec<BudgetSelection> {
    budgets
        .iter()
        .map(|&budget| {
            let mut best: Option<&CurvePoint> = None;
            for p in points.iter().filter(|p| p.validation_cost <= budget) {
                let better = best.is_none_or(|b| {
                    (p.validation_error, p.validation_cost)
                        < (b.validation_error, b.validation_cost)
                });
                if better {
                    best = Some(p);
                }
            }
            BudgetSelection {
                budget,
                point: best.cloned(),
            }
        })
        .collect()
}

/// Mean and sample standard deviation (0 for fewer than two values).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Curve row averaged over repeats.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSummary {
    pub alpha: u64,
    pub trees: usize,
    pub repeats: usize,
    pub avg_cost: (f64, f64),
    pub error: (f64, f64),
    pub metric: Option<(f64, f64)>,
}

/// Aggregates the points of several repeats by `(alpha, trees)`, keeping the
/// order of first appearance.
pub fn summarize(runs: &[Vec<CurvePoint>]) -> Vec<CurveSummary> {
    let mut keys: Vec<(u64, usize)> = Vec::new();
    for p in runs.iter().flatten() {
        if !keys.contains(&(p.alpha, p.trees)) {
            keys.push((p.alpha, p.trees));
        }
    }
    keys.into_iter()
        .map(|(alpha, trees)| {
            let pts: Vec<&CurvePoint> = runs
                .iter()
                .flatten()
                .filter(|p| p.alpha == alpha && p.trees == trees)
                .collect();
            let col = |f: &dyn Fn(&CurvePoint) -> f64| pts.iter().map(|p| f(p)).collect::<Vec<_>>();
            let metric: Option<Vec<f64>> = pts.iter().map(|p| p.metric).collect();
            CurveSummary {
                alpha,
                trees,
                repeats: pts.len(),
                avg_cost: mean_std(&col(&|p| p.avg_cost)),
                error: mean_std(&col(&|p| p.error)),
                metric: metric.map(|m| mean_std(&m)),
            }
        })
        .collect()
}

/// CSV with columns `alpha,trees,avg_cost,error,metric` plus `_std` columns.
pub fn write_curve_csv<W: Write>(rows: &[CurveSummary], mut out: W) -> std::io::Result<()> {
    writeln!(
        out,
        "alpha,trees,avg_cost,error,metric,avg_cost_std,error_std,metric_std,repeats"
    )?;
    for r in rows {
        let (m, ms) = match r.metric {
            Some((m, s)) => (m.to_string(), s.to_string()),
            None => (String::new(), String::new()),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.alpha, r.trees, r.avg_cost.0, r.error.0, m, r.avg_cost.1, r.error.1, ms, r.repeats
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(rel: &[bool], conf: &[f64]) -> QueryGroup {
        QueryGroup {
            query: "q".into(),
            docs: rel
                .iter()
                .zip(conf)
                .enumerate()
                .map(|(index, (&relevant, &confidence))| RankedDoc {
                    index,
                    relevant,
                    confidence,
                })
                .collect(),
        }
    }

    #[test]
    fn ap5_positions() {
        let conf = [0.9, 0.8, 0.7, 0.6, 0.5, 0.4];
        assert_eq!(
            precision_at_5(&group(&[true, true, true, true, true, false], &conf)),
            1.0
        );
        assert_eq!(
            precision_at_5(&group(&[false, true, true, true, true, true], &conf)),
            0.0
        );
        assert_eq!(
            precision_at_5(&group(&[true, true, false, true, true, true], &conf)),
            0.4
        );
        // ordering by confidence, not input order
        let g = group(&[false, true, true], &[0.1, 0.9, 0.8]);
        assert_eq!(precision_at_5(&g), 0.4);
        assert_eq!(precision_at_5(&group(&[true, true], &[0.3, 0.2])), 1.0);
        let both = [group(&[true], &[1.0]), group(&[false], &[1.0])];
        assert_eq!(average_precision_at_5(&both), 0.5);
    }

    #[test]
    fn ap5_ties_keep_document_order() {
        let g = group(&[true, false, true], &[0.5, 0.5, 0.5]);
        assert_eq!(precision_at_5(&g), 0.2);
    }

    #[test]
    fn summary_of_single_repeat_has_zero_std() {
        let p = CurvePoint {
            alpha: 0,
            trees: 1,
            avg_cost: 2.0,
            error: 0.1,
            metric: None,
            validation_cost: 2.0,
            validation_error: 0.1,
        };
        let s = summarize(&[vec![p.clone()]]);
        assert_eq!(s[0].avg_cost, (2.0, 0.0));
        assert_eq!(s[0].error.1, 0.0);
        let q = CurvePoint {
            avg_cost: 4.0,
            ..p.clone()
        };
        let s = summarize(&[vec![p], vec![q]]);
        assert_eq!(s[0].avg_cost.0, 3.0);
        assert!((s[0].avg_cost.1 - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn budget_selection_respects_cost() {
        let mk = |alpha, trees, vc, ve| CurvePoint {
            alpha,
            trees,
            avg_cost: vc,
            error: ve,
            metric: None,
            validation_cost: vc,
            validation_error: ve,
        };
        let pts = [mk(0, 1, 1.0, 0.3), mk(0, 2, 2.0, 0.2), mk(8, 1, 1.5, 0.25)];
        let sel = select_for_budgets(&pts, &[0.5, 1.6, 10.0]);
        assert!(sel[0].point.is_none());
        assert_eq!(sel[1].point.as_ref().unwrap().alpha, 8);
        assert_eq!(sel[2].point.as_ref().unwrap().trees, 2);
    }

    proptest::proptest! {
        #[test]
        fn ap5_invariant_to_monotone_transform(
            docs in proptest::collection::vec((proptest::bool::ANY, 0.0f64..1.0), 1..12)
        ) {
            let rel: Vec<bool> = docs.iter().map(|d| d.0).collect();
            let conf: Vec<f64> = docs.iter().map(|d| d.1).collect();
            let warped: Vec<f64> = conf.iter().map(|c| (3.0 * c).exp() + 7.0).collect();
            proptest::prop_assert_eq!(
                precision_at_5(&group(&rel, &conf)),
                precision_at_5(&group(&rel, &warped))
            );
        }
    }
}
