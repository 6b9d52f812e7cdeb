//! Budget-gated forest growth and forest-level prediction.
//!
//! Trees are grown on bootstrap samples and admitted one at a time in index
//! order. A tree whose admission would push the average validation
//! acquisition cost above the budget is dropped and growth stops. Costs are
//! accounted over the union of features read by all trees for an example,
//! since a feature acquired once is free for every later tree.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataio::Quantizer;
use crate::dataset::{CostVector, Dataset, FeatureSet};
use crate::error::{Error, Result};
use crate::impurity::ImpuritySpec;
use crate::rng::{stream, Stream};
use crate::tree::{decode_nodes, encode_nodes, grow, GrowConfig, Node, Tree};

pub const FOREST_FORMAT: &str = "budgetrf-forest";
pub const FOREST_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct BudgetConfig {
    /// Average validation acquisition cost cap. `f64::INFINITY` disables it.
    pub budget: f64,
    pub max_trees: usize,
    pub seed: u64,
    /// Trees grown concurrently per admission wave; results do not depend on it.
    pub threads: usize,
    pub grow: GrowConfig,
}

impl Default for BudgetConfig {
    fn default() -> Self {
        BudgetConfig {
            budget: f64::INFINITY,
            max_trees: 40,
            seed: 0,
            threads: 1,
            grow: GrowConfig::default(),
        }
    }
}

impl BudgetConfig {
    pub fn with_budget(budget: f64) -> Self {
        BudgetConfig {
            budget,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.budget.is_nan() || self.budget < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "budget must be non-negative, got {}",
                self.budget
            )));
        }
        if self.max_trees == 0 {
            return Err(Error::InvalidConfig("max_trees must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopReason {
    /// The next tree would have pushed the validation cost to `rejected_cost`.
    BudgetExceeded { rejected_cost: f64 },
    /// `max_trees` trees were admitted without the budget binding.
    MaxTrees,
    /// Not even one tree fits. `first_tree_cost` is `None` when the budget is
    /// zero and no tree was grown.
    Infeasible { first_tree_cost: Option<f64> },
}

#[derive(Debug, Clone)]
pub struct GrowReport {
    pub forest: Forest,
    pub stop: StopReason,
    /// Average validation cost of the returned forest.
    pub validation_cost: f64,
}

impl GrowReport {
    pub fn is_infeasible(&self) -> bool {
        matches!(self.stop, StopReason::Infeasible { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    trees: Vec<Tree>,
    spec: ImpuritySpec,
    costs: CostVector,
    budget: f64,
    seed: u64,
    class_names: Vec<String>,
    /// Binning the model expects its inputs to have gone through.
    quantizer: Option<Quantizer>,
}

/// `n` indices drawn uniformly with replacement from `0..n`.
pub fn bootstrap<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..n)).collect()
}

/// Grows tree `index` of a forest seeded with `seed`.
pub fn grow_tree(
    train: &Dataset,
    spec: &ImpuritySpec,
    costs: &CostVector,
    grow_config: &GrowConfig,
    seed: u64,
    index: usize,
) -> Result<Tree> {
    let mut rng = stream(seed, Stream::Tree, index as u64);
    let sample = bootstrap(train.n_rows(), &mut rng);
    grow(train, &sample, spec, costs, grow_config, &mut rng)
}

/// Runs budgeted forest growth.
///
/// Returns an empty forest with [`StopReason::Infeasible`] when the first
/// tree alone exceeds the budget; the caller decides whether that is fatal.
pub fn grow_forest(
    train: &Dataset,
    validation: &Dataset,
    config: &BudgetConfig,
    spec: &ImpuritySpec,
    costs: &CostVector,
) -> Result<GrowReport> {
    config.validate()?;
    spec.validate()?;
    for (name, d) in [("train", train), ("validation", validation)] {
        if d.n_features() != costs.len() {
            return Err(Error::Schema(format!(
                "{name} set has {} features but {} costs were given",
                d.n_features(),
                costs.len()
            )));
        }
    }
    if validation.n_classes() != train.n_classes() {
        return Err(Error::Schema(format!(
            "validation set has {} classes, train set {}",
            validation.n_classes(),
            train.n_classes()
        )));
    }

    let mut forest = Forest::new(
        spec.clone(),
        costs.clone(),
        train.class_names().to_vec(),
        config.budget,
        config.seed,
    );
    if config.budget <= 0.0 {
        return Ok(GrowReport {
            forest,
            stop: StopReason::Infeasible {
                first_tree_cost: None,
            },
            validation_cost: 0.0,
        });
    }

    let pool = if config.threads > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(config.threads)
                .build()
                .map_err(|e| Error::InvalidConfig(e.to_string()))?,
        )
    } else {
        None
    };

    let n_val = validation.n_rows();
    let mut acquired: Vec<FeatureSet> = (0..n_val)
        .map(|_| FeatureSet::with_capacity(costs.len()))
        .collect();
    let mut accepted_cost = 0.0;
    let wave = config.threads.max(1);

    while forest.len() < config.max_trees {
        let start = forest.len();
        let end = (start + wave).min(config.max_trees);
        let grow_one = |i: usize| grow_tree(train, spec, costs, &config.grow, config.seed, i);
        let batch: Vec<Tree> = match &pool {
            Some(pool) => pool.install(|| {
                (start..end)
                    .into_par_iter()
                    .map(grow_one)
                    .collect::<Result<_>>()
            })?,
            None => (start..end).map(grow_one).collect::<Result<_>>()?,
        };

        for tree in batch {
            let mut next = acquired.clone();
            for (i, set) in next.iter_mut().enumerate() {
                tree.trace(validation.row(i), set);
            }
            let cost = next.iter().map(|s| costs.total(s)).sum::<f64>() / n_val as f64;
            if cost > config.budget {
                let stop = if forest.is_empty() {
                    StopReason::Infeasible {
                        first_tree_cost: Some(cost),
                    }
                } else {
                    StopReason::BudgetExceeded {
                        rejected_cost: cost,
                    }
                };
                log::info!(
                    "stopping at {} trees: next tree would cost {cost:.4} > budget {}",
                    forest.len(),
                    config.budget
                );
                return Ok(GrowReport {
                    forest,
                    stop,
                    validation_cost: accepted_cost,
                });
            }
            acquired = next;
            accepted_cost = cost;
            forest.trees.push(tree);
        }
    }
    Ok(GrowReport {
        forest,
        stop: StopReason::MaxTrees,
        validation_cost: accepted_cost,
    })
}

impl Forest {
    pub fn new(
        spec: ImpuritySpec,
        costs: CostVector,
        class_names: Vec<String>,
        budget: f64,
        seed: u64,
    ) -> Self {
        Forest {
            trees: Vec::new(),
            spec,
            costs,
            budget,
            seed,
            class_names,
            quantizer: None,
        }
    }

    pub fn set_quantizer(&mut self, quantizer: Option<Quantizer>) {
        self.quantizer = quantizer;
    }

    pub fn quantizer(&self) -> Option<&Quantizer> {
        self.quantizer.as_ref()
    }

    /// Appends a tree; it must read only features covered by the cost vector.
    pub fn push(&mut self, tree: Tree) -> Result<()> {
        if tree.costs.len() != self.costs.len() {
            return Err(Error::Schema(format!(
                "tree has {} features, forest {}",
                tree.costs.len(),
                self.costs.len()
            )));
        }
        if tree.root.counts().n_classes() != self.n_classes() {
            return Err(Error::Schema("tree class count differs from forest".into()));
        }
        self.trees.push(tree);
        Ok(())
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn spec(&self) -> &ImpuritySpec {
        &self.spec
    }

    pub fn costs(&self) -> &CostVector {
        &self.costs
    }

    pub fn n_features(&self) -> usize {
        self.costs.len()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Forest made of the first `n` trees.
    pub fn prefix(&self, n: usize) -> Forest {
        Forest {
            trees: self.trees[..n.min(self.trees.len())].to_vec(),
            ..self.clone()
        }
    }

    /// Union of features read by every tree for `row`.
    pub fn acquired(&self, row: &[f64]) -> FeatureSet {
        let mut set = FeatureSet::with_capacity(self.costs.len());
        for t in &self.trees {
            t.trace(row, &mut set);
        }
        set
    }

    /// Acquisition cost of `row` under `costs`, each feature paid once.
    pub fn example_cost(&self, row: &[f64], costs: &CostVector) -> f64 {
        costs.total(&self.acquired(row))
    }

    /// Sum of per-tree costs; an upper bound on [`Forest::example_cost`].
    pub fn example_cost_sum(&self, row: &[f64], costs: &CostVector) -> f64 {
        self.trees.iter().map(|t| t.example_cost(row, costs)).sum()
    }

    /// Mean of [`Forest::example_cost`] over the rows of `data`.
    pub fn average_cost(&self, data: &Dataset, costs: &CostVector) -> f64 {
        if self.trees.is_empty() {
            return 0.0;
        }
        data.rows()
            .map(|r| self.example_cost(r, costs))
            .sum::<f64>()
            / data.n_rows() as f64
    }

    /// Tree votes per class.
    pub fn votes(&self, row: &[f64]) -> Vec<usize> {
        let mut votes = vec![0; self.n_classes()];
        for t in &self.trees {
            votes[t.predict(row)] += 1;
        }
        votes
    }

    /// Majority vote; ties go to the lowest class index.
    pub fn predict(&self, row: &[f64]) -> Result<usize> {
        if self.trees.is_empty() {
            return Err(Error::EmptyForest);
        }
        let votes = self.votes(row);
        let mut best = 0;
        for (c, &v) in votes.iter().enumerate() {
            if v > votes[best] {
                best = c;
            }
        }
        Ok(best)
    }

    /// Share of class-1 training examples over all reached leaves.
    pub fn confidence(&self, row: &[f64]) -> Result<f64> {
        if self.n_classes() != 2 {
            return Err(Error::NotBinary(self.n_classes()));
        }
        if self.trees.is_empty() {
            return Err(Error::EmptyForest);
        }
        let (mut pos, mut total) = (0u64, 0u64);
        for t in &self.trees {
            let c = t.leaf_for(row).counts();
            pos += c.get(1);
            total += c.get(0) + c.get(1);
        }
        Ok(if total == 0 {
            0.0
        } else {
            pos as f64 / total as f64
        })
    }

    pub fn to_text(&self) -> Result<String> {
        let header = ForestHeader {
            format: FOREST_FORMAT.into(),
            version: FOREST_FORMAT_VERSION,
            spec: self.spec.clone(),
            costs: self.costs.clone(),
            budget: self.budget.is_finite().then_some(self.budget),
            seed: self.seed,
            n_trees: self.trees.len(),
            class_names: self.class_names.clone(),
            quantizer: self.quantizer.clone(),
        };
        let mut out = serde_json::to_string(&header).map_err(model_err)?;
        out.push('\n');
        for t in &self.trees {
            out.push_str(&encode_nodes(&t.root)?);
            out.push('\n');
        }
        Ok(out)
    }

    pub fn from_text(text: &str) -> Result<Forest> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let first = lines
            .next()
            .ok_or_else(|| Error::ModelFormat("empty model file".into()))?;
        let header: ForestHeader = serde_json::from_str(first).map_err(model_err)?;
        if header.format != FOREST_FORMAT {
            return Err(Error::ModelFormat(format!(
                "unexpected format tag {:?}",
                header.format
            )));
        }
        if header.version != FOREST_FORMAT_VERSION {
            return Err(Error::ModelVersion {
                found: header.version,
                expected: FOREST_FORMAT_VERSION,
            });
        }
        if header.class_names.len() < 2 {
            return Err(Error::ModelFormat("fewer than 2 classes".into()));
        }
        let mut forest = Forest::new(
            header.spec,
            header.costs,
            header.class_names,
            header.budget.unwrap_or(f64::INFINITY),
            header.seed,
        );
        forest.quantizer = header.quantizer;
        for line in lines {
            let root = decode_nodes(line, forest.costs.len())?;
            check_classes(&root, forest.n_classes())?;
            forest.trees.push(Tree {
                root,
                spec: forest.spec.clone(),
                costs: forest.costs.clone(),
            });
        }
        if forest.trees.len() != header.n_trees {
            return Err(Error::ModelFormat(format!(
                "header announces {} trees, file holds {}",
                header.n_trees,
                forest.trees.len()
            )));
        }
        Ok(forest)
    }
}

fn check_classes(node: &Node, k: usize) -> Result<()> {
    if node.counts().n_classes() != k {
        return Err(Error::ModelFormat(format!(
            "node counts have {} classes, model {k}",
            node.counts().n_classes()
        )));
    }
    if let Node::Internal { children, .. } = node {
        check_classes(&children[0], k)?;
        check_classes(&children[1], k)?;
    }
    Ok(())
}

fn model_err(e: serde_json::Error) -> Error {
    Error::ModelFormat(e.to_string())
}

#[derive(Serialize, Deserialize)]
struct ForestHeader {
    format: String,
    version: u32,
    spec: ImpuritySpec,
    costs: CostVector,
    /// `None` for an unbounded budget.
    budget: Option<f64>,
    seed: u64,
    n_trees: usize,
    class_names: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    quantizer: Option<Quantizer>,
}
