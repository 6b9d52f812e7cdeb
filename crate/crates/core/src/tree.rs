//! Greedy minimax tree induction.
//!
//! At a node holding example set `S` with impurity `F(S) > 0`, the risk of a
//! feature `t` is
//!
//! ```text
//! R(t) = min over stumps g on t of  max over outcomes i of  c(t) / (F(S) - F(S_i))
//! ```
//!
//! and the node splits on the feature (and stump) of smallest risk. A feature
//! can be picked again deeper in the tree; its cost is paid once per path.

use std::cmp::Ordering;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{ClassCounts, CostVector, Dataset, FeatureSet};
use crate::error::{Error, Result};
use crate::impurity::{impurity, Impurity, ImpuritySpec};
use crate::stumps::{Stump, StumpSearch};

pub const TREE_FORMAT: &str = "budgetrf-tree";
pub const TREE_FORMAT_VERSION: u32 = 1;

/// Deepest nesting accepted when decoding a serialized tree.
const MAX_DECODE_DEPTH: usize = 4096;

/// Cost per unit of worst-case impurity reduction.
///
/// Stored as the exact pair `(cost, reduction)` so worked examples can be
/// compared as rationals. `Infinite` means no candidate reduced the impurity
/// of every outcome.
#[derive(Debug, Clone, Copy)]
pub enum Risk {
    Finite { cost: f64, reduction: Impurity },
    Infinite,
}

impl Risk {
    pub fn value(&self) -> f64 {
        match *self {
            Risk::Finite { cost, reduction } => cost / reduction as f64,
            Risk::Infinite => f64::INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Risk::Finite { .. })
    }

    /// `(cost, reduction)` for finite risks.
    pub fn as_ratio(&self) -> Option<(f64, Impurity)> {
        match *self {
            Risk::Finite { cost, reduction } => Some((cost, reduction)),
            Risk::Infinite => None,
        }
    }
}

impl PartialEq for Risk {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Risk {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (*self, *other) {
            (Risk::Infinite, Risk::Infinite) => Some(Ordering::Equal),
            (Risk::Infinite, _) => Some(Ordering::Greater),
            (_, Risk::Infinite) => Some(Ordering::Less),
            (
                Risk::Finite {
                    cost: c1,
                    reduction: d1,
                },
                Risk::Finite {
                    cost: c2,
                    reduction: d2,
                },
            ) => (c1 * d2 as f64).partial_cmp(&(c2 * d1 as f64)),
        }
    }
}

/// Outcome of the inner minimisation for one feature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureRisk {
    pub risk: Risk,
    /// Best stump, `None` when the risk is infinite.
    pub stump: Option<Stump>,
}

/// Evaluates the risk of one feature over its candidate stumps.
///
/// `parent` is `F(S)` for the node's examples. Among equally good stumps the
/// first candidate wins.
pub fn risk(
    data: &Dataset,
    indices: &[usize],
    parent: Impurity,
    candidates: &[Stump],
    spec: &ImpuritySpec,
    cost: f64,
) -> Result<FeatureRisk> {
    let k = data.n_classes();
    let lefts = left_counts(data, indices, candidates);
    let total = data.counts(indices);
    let mut best: Option<(Impurity, Stump)> = None;
    let mut side = ClassCounts::zeros(k);
    for (stump, left) in candidates.iter().zip(lefts.chunks_exact(k)) {
        let mut worst = Impurity::MAX;
        side.0.copy_from_slice(left);
        worst = worst.min(parent.saturating_sub(impurity(spec, &side)?));
        for (r, (&t, &l)) in side.0.iter_mut().zip(total.as_slice().iter().zip(left)) {
            *r = t - l;
        }
        worst = worst.min(parent.saturating_sub(impurity(spec, &side)?));
        if worst > 0 && best.is_none_or(|(b, _)| worst > b) {
            best = Some((worst, *stump));
        }
    }
    Ok(match best {
        Some((reduction, stump)) => FeatureRisk {
            risk: Risk::Finite { cost, reduction },
            stump: Some(stump),
        },
        None => FeatureRisk {
            risk: Risk::Infinite,
            stump: None,
        },
    })
}

/// Outcome-0 class counts of every candidate, flattened `candidates × k`.
///
/// Candidates on a single feature share one sort of the node's values and a
/// sweep over thresholds in increasing order.
fn left_counts(data: &Dataset, indices: &[usize], candidates: &[Stump]) -> Vec<u64> {
    let k = data.n_classes();
    let mut out = vec![0u64; candidates.len() * k];
    let Some(first) = candidates.first() else {
        return out;
    };
    if candidates.iter().any(|s| s.feature != first.feature) {
        for (stump, left) in candidates.iter().zip(out.chunks_exact_mut(k)) {
            for &i in indices {
                if stump.outcome(data.row(i)) == 0 {
                    left[data.label(i)] += 1;
                }
            }
        }
        return out;
    }
    let mut values: Vec<(f64, usize)> = indices
        .iter()
        .map(|&i| (data.value(i, first.feature), data.label(i)))
        .collect();
    values.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_unstable_by(|&a, &b| candidates[a].threshold.total_cmp(&candidates[b].threshold));
    let mut running = vec![0u64; k];
    let mut next = 0;
    for c in order {
        let t = candidates[c].threshold;
        while next < values.len() && values[next].0 <= t {
            running[values[next].1] += 1;
            next += 1;
        }
        out[c * k..(c + 1) * k].copy_from_slice(&running);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowConfig {
    pub search: StumpSearch,
    /// Nodes at this depth become leaves regardless of impurity.
    pub max_depth: usize,
}

impl Default for GrowConfig {
    fn default() -> Self {
        GrowConfig {
            search: StumpSearch::default(),
            max_depth: 64,
        }
    }
}

impl GrowConfig {
    pub fn exhaustive() -> Self {
        GrowConfig {
            search: StumpSearch::Exhaustive,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Leaf {
        counts: ClassCounts,
        label: usize,
    },
    Internal {
        stump: Stump,
        /// Training counts at the node, used when the tree is truncated.
        counts: ClassCounts,
        children: Box<[Node; 2]>,
    },
}

impl Node {
    pub fn leaf(counts: ClassCounts) -> Self {
        let label = counts.majority();
        Node::Leaf { counts, label }
    }

    pub fn counts(&self) -> &ClassCounts {
        match self {
            Node::Leaf { counts, .. } | Node::Internal { counts, .. } => counts,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Leaf { .. })
    }

    fn depth(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Internal { children, .. } => 1 + children[0].depth().max(children[1].depth()),
        }
    }

    fn count_leaves(&self) -> usize {
        match self {
            Node::Leaf { .. } => 1,
            Node::Internal { children, .. } => {
                children[0].count_leaves() + children[1].count_leaves()
            }
        }
    }

    fn truncated(&self, depth: usize) -> Node {
        match self {
            Node::Internal { counts, .. } if depth == 0 => Node::leaf(counts.clone()),
            Node::Leaf { .. } => self.clone(),
            Node::Internal {
                stump,
                counts,
                children,
            } => Node::Internal {
                stump: *stump,
                counts: counts.clone(),
                children: Box::new([
                    children[0].truncated(depth - 1),
                    children[1].truncated(depth - 1),
                ]),
            },
        }
    }

    fn for_each_leaf<'a>(&'a self, f: &mut impl FnMut(&'a ClassCounts)) {
        match self {
            Node::Leaf { counts, .. } => f(counts),
            Node::Internal { children, .. } => {
                children[0].for_each_leaf(f);
                children[1].for_each_leaf(f);
            }
        }
    }
}

/// A grown tree with the impurity spec and costs it was trained under.
#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    pub root: Node,
    pub spec: ImpuritySpec,
    pub costs: CostVector,
}

impl Tree {
    /// Reached leaf for `row` and the distinct features read on the way.
    pub fn trace(&self, row: &[f64], acquired: &mut FeatureSet) -> &Node {
        let mut node = &self.root;
        while let Node::Internal {
            stump, children, ..
        } = node
        {
            acquired.insert(stump.feature);
            node = &children[stump.outcome(row)];
        }
        node
    }

    pub fn leaf_for(&self, row: &[f64]) -> &Node {
        let mut node = &self.root;
        while let Node::Internal {
            stump, children, ..
        } = node
        {
            node = &children[stump.outcome(row)];
        }
        node
    }

    /// Predicted label and set of acquired features.
    pub fn classify(&self, row: &[f64]) -> (usize, FeatureSet) {
        let mut acquired = FeatureSet::with_capacity(self.costs.len());
        let label = match self.trace(row, &mut acquired) {
            Node::Leaf { label, .. } => *label,
            Node::Internal { .. } => unreachable!(),
        };
        (label, acquired)
    }

    pub fn predict(&self, row: &[f64]) -> usize {
        match self.leaf_for(row) {
            Node::Leaf { label, .. } => *label,
            Node::Internal { .. } => unreachable!(),
        }
    }

    /// Sum of `costs` over the distinct features on the root-to-leaf path.
    pub fn example_cost(&self, row: &[f64], costs: &CostVector) -> f64 {
        costs.total(&self.classify(row).1)
    }

    /// Largest example cost over every row of `data`.
    pub fn max_cost(&self, data: &Dataset, costs: &CostVector) -> f64 {
        data.rows()
            .map(|r| self.example_cost(r, costs))
            .fold(0.0, f64::max)
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn n_leaves(&self) -> usize {
        self.root.count_leaves()
    }

    /// Copy of the tree with every node at `depth` turned into a majority leaf.
    pub fn truncated(&self, depth: usize) -> Tree {
        Tree {
            root: self.root.truncated(depth),
            spec: self.spec.clone(),
            costs: self.costs.clone(),
        }
    }

    /// Whether every leaf has zero impurity under the tree's spec.
    pub fn leaves_pure(&self) -> Result<bool> {
        let mut pure = true;
        let mut err = None;
        self.root
            .for_each_leaf(&mut |c| match impurity(&self.spec, c) {
                Ok(v) => pure &= v == 0,
                Err(e) => err = Some(e),
            });
        match err {
            Some(e) => Err(e),
            None => Ok(pure),
        }
    }

    pub fn to_text(&self) -> Result<String> {
        let header = TreeHeader {
            format: TREE_FORMAT.into(),
            version: TREE_FORMAT_VERSION,
            spec: self.spec.clone(),
            costs: self.costs.clone(),
        };
        let mut out = serde_json::to_string(&header).map_err(model_err)?;
        out.push('\n');
        out.push_str(&encode_nodes(&self.root)?);
        out.push('\n');
        Ok(out)
    }

    pub fn from_text(text: &str) -> Result<Tree> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: TreeHeader = serde_json::from_str(
            lines
                .next()
                .ok_or_else(|| Error::ModelFormat("empty tree file".into()))?,
        )
        .map_err(model_err)?;
        if header.format != TREE_FORMAT {
            return Err(Error::ModelFormat(format!(
                "unexpected format tag {:?}",
                header.format
            )));
        }
        if header.version != TREE_FORMAT_VERSION {
            return Err(Error::ModelVersion {
                found: header.version,
                expected: TREE_FORMAT_VERSION,
            });
        }
        let body = lines
            .next()
            .ok_or_else(|| Error::ModelFormat("missing node record line".into()))?;
        let root = decode_nodes(body, header.costs.len())?;
        Ok(Tree {
            root,
            spec: header.spec,
            costs: header.costs,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct TreeHeader {
    format: String,
    version: u32,
    spec: ImpuritySpec,
    costs: CostVector,
}

/// One node in preorder; an internal record is followed by its left subtree,
/// then its right subtree.
#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum NodeRecord {
    Internal {
        feature: usize,
        threshold: f64,
        counts: ClassCounts,
    },
    Leaf {
        counts: ClassCounts,
        label: usize,
    },
}

fn model_err(e: serde_json::Error) -> Error {
    Error::ModelFormat(e.to_string())
}

pub(crate) fn encode_nodes(root: &Node) -> Result<String> {
    fn walk(node: &Node, out: &mut Vec<NodeRecord>) {
        match node {
            Node::Leaf { counts, label } => out.push(NodeRecord::Leaf {
                counts: counts.clone(),
                label: *label,
            }),
            Node::Internal {
                stump,
                counts,
                children,
            } => {
                out.push(NodeRecord::Internal {
                    feature: stump.feature,
                    threshold: stump.threshold,
                    counts: counts.clone(),
                });
                walk(&children[0], out);
                walk(&children[1], out);
            }
        }
    }
    let mut records = Vec::new();
    walk(root, &mut records);
    serde_json::to_string(&records).map_err(model_err)
}

pub(crate) fn decode_nodes(line: &str, n_features: usize) -> Result<Node> {
    fn build(
        it: &mut std::vec::IntoIter<NodeRecord>,
        n_features: usize,
        depth: usize,
    ) -> Result<Node> {
        if depth > MAX_DECODE_DEPTH {
            return Err(Error::ModelFormat("tree nesting too deep".into()));
        }
        match it.next() {
            None => Err(Error::ModelFormat("truncated node list".into())),
            Some(NodeRecord::Leaf { counts, label }) => {
                if label >= counts.n_classes() {
                    return Err(Error::ModelFormat(format!(
                        "leaf label {label} out of range"
                    )));
                }
                Ok(Node::Leaf { counts, label })
            }
            Some(NodeRecord::Internal {
                feature,
                threshold,
                counts,
            }) => {
                if feature >= n_features {
                    return Err(Error::ModelFormat(format!(
                        "split feature {feature} out of range for {n_features} features"
                    )));
                }
                let left = build(it, n_features, depth + 1)?;
                let right = build(it, n_features, depth + 1)?;
                Ok(Node::Internal {
                    stump: Stump::new(feature, threshold),
                    counts,
                    children: Box::new([left, right]),
                })
            }
        }
    }
    let records: Vec<NodeRecord> = serde_json::from_str(line).map_err(model_err)?;
    let mut it = records.into_iter();
    let root = build(&mut it, n_features, 0)?;
    if it.next().is_some() {
        return Err(Error::ModelFormat("trailing node records".into()));
    }
    Ok(root)
}

struct Grower<'a, R: ?Sized> {
    data: &'a Dataset,
    spec: &'a ImpuritySpec,
    costs: &'a CostVector,
    config: &'a GrowConfig,
    rng: &'a mut R,
}

impl<R: Rng + ?Sized> Grower<'_, R> {
    fn node(&mut self, indices: Vec<usize>, depth: usize) -> Result<Node> {
        let counts = self.data.counts(&indices);
        let parent = impurity(self.spec, &counts)?;
        if parent == 0 {
            return Ok(Node::leaf(counts));
        }
        if depth >= self.config.max_depth {
            log::warn!(
                "depth limit {} reached with impurity {parent}; forcing a leaf",
                self.config.max_depth
            );
            return Ok(Node::leaf(counts));
        }

        let mut best: Option<(Risk, Stump)> = None;
        for feature in 0..self.data.n_features() {
            let candidates = self
                .config
                .search
                .candidates(self.data, &indices, feature, self.rng);
            let fr = risk(
                self.data,
                &indices,
                parent,
                &candidates,
                self.spec,
                self.costs.cost(feature),
            )?;
            if let Some(stump) = fr.stump {
                if best.is_none_or(|(r, _)| fr.risk < r) {
                    best = Some((fr.risk, stump));
                }
            }
        }

        let Some((_, stump)) = best else {
            log::debug!("no feature reduces impurity {parent} at depth {depth}; forcing a leaf");
            return Ok(Node::leaf(counts));
        };
        let (left, right) = crate::stumps::split(&stump, self.data, &indices);
        drop(indices);
        let left = self.node(left, depth + 1)?;
        let right = self.node(right, depth + 1)?;
        Ok(Node::Internal {
            stump,
            counts,
            children: Box::new([left, right]),
        })
    }
}

/// Grows a tree on the examples of `data` listed in `indices` (repeats allowed).
pub fn grow<R: Rng + ?Sized>(
    data: &Dataset,
    indices: &[usize],
    spec: &ImpuritySpec,
    costs: &CostVector,
    config: &GrowConfig,
    rng: &mut R,
) -> Result<Tree> {
    if indices.is_empty() {
        return Err(Error::InvalidDataset(
            "cannot grow a tree on no examples".into(),
        ));
    }
    if costs.len() != data.n_features() {
        return Err(Error::Schema(format!(
            "{} costs for {} features",
            costs.len(),
            data.n_features()
        )));
    }
    spec.validate()?;
    if let StumpSearch::Fixed(families) = &config.search {
        if families
            .iter()
            .flatten()
            .any(|s| s.feature >= data.n_features())
        {
            return Err(Error::InvalidConfig(
                "fixed stump on unknown feature".into(),
            ));
        }
    }
    let mut grower = Grower {
        data,
        spec,
        costs,
        config,
        rng,
    };
    let root = grower.node(indices.to_vec(), 0)?;
    Ok(Tree {
        root,
        spec: spec.clone(),
        costs: costs.clone(),
    })
}

/// Grows a tree on every row of `data`.
pub fn grow_all<R: Rng + ?Sized>(
    data: &Dataset,
    spec: &ImpuritySpec,
    costs: &CostVector,
    config: &GrowConfig,
    rng: &mut R,
) -> Result<Tree> {
    let indices: Vec<usize> = (0..data.n_rows()).collect();
    grow(data, &indices, spec, costs, config, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Stream};

    fn xor() -> Dataset {
        Dataset::from_rows(
            vec![
                vec![0.0, 0.0],
                vec![0.0, 1.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0],
            ],
            vec![0, 1, 1, 0],
            2,
        )
        .unwrap()
    }

    fn leaf_tree(counts: Vec<u64>, m: usize) -> Tree {
        Tree {
            root: Node::leaf(ClassCounts(counts)),
            spec: ImpuritySpec::pairs(0),
            costs: CostVector::uniform(m),
        }
    }

    #[test]
    fn risk_ordering_is_rational() {
        let a = Risk::Finite {
            cost: 1.0,
            reduction: 600,
        };
        let b = Risk::Finite {
            cost: 2.0,
            reduction: 1200,
        };
        let c = Risk::Finite {
            cost: 1.0,
            reduction: 675,
        };
        assert_eq!(a, b);
        assert!(c < a);
        assert!(a < Risk::Infinite);
    }

    #[test]
    fn degenerate_stump_has_infinite_risk() {
        let data = xor();
        let idx = [0, 1, 2, 3];
        let fr = risk(
            &data,
            &idx,
            4,
            &[Stump::new(0, 5.0)],
            &ImpuritySpec::pairs(0),
            1.0,
        )
        .unwrap();
        assert!(!fr.risk.is_finite());
        assert!(fr.stump.is_none());
    }

    #[test]
    fn pure_input_is_single_leaf() {
        let data = Dataset::from_rows(vec![vec![1.0], vec![2.0]], vec![1, 1], 2).unwrap();
        let t = grow_all(
            &data,
            &ImpuritySpec::pairs(0),
            &CostVector::uniform(1),
            &GrowConfig::default(),
            &mut stream(0, Stream::Tree, 0),
        )
        .unwrap();
        assert_eq!(t.root, Node::leaf(ClassCounts(vec![0, 2])));
        assert_eq!(t.classify(&[1.0]).0, 1);
        assert!(t.classify(&[1.0]).1.is_empty());
    }

    #[test]
    fn xor_needs_both_features() {
        let data = xor();
        let t = grow_all(
            &data,
            &ImpuritySpec::pairs(0),
            &CostVector::uniform(2),
            &GrowConfig::exhaustive(),
            &mut stream(0, Stream::Tree, 0),
        )
        .unwrap();
        assert_eq!(t.depth(), 2);
        assert!(t.leaves_pure().unwrap());
        assert_eq!(t.max_cost(&data, &CostVector::uniform(2)), 2.0);
        for i in 0..4 {
            assert_eq!(t.predict(data.row(i)), data.label(i));
        }
    }

    #[test]
    fn repeated_feature_is_paid_once() {
        let t = Tree {
            root: Node::Internal {
                stump: Stump::new(3, 0.5),
                counts: ClassCounts(vec![2, 1]),
                children: Box::new([
                    Node::leaf(ClassCounts(vec![1, 0])),
                    Node::Internal {
                        stump: Stump::new(3, 1.5),
                        counts: ClassCounts(vec![1, 1]),
                        children: Box::new([
                            Node::leaf(ClassCounts(vec![1, 0])),
                            Node::leaf(ClassCounts(vec![0, 1])),
                        ]),
                    },
                ]),
            },
            spec: ImpuritySpec::pairs(0),
            costs: CostVector::new(vec![1.0, 1.0, 1.0, 7.0]).unwrap(),
        };
        let (label, acquired) = t.classify(&[0.0, 0.0, 0.0, 2.0]);
        assert_eq!(label, 1);
        assert_eq!(acquired.iter().collect::<Vec<_>>(), vec![3]);
        assert_eq!(t.example_cost(&[0.0, 0.0, 0.0, 2.0], &t.costs), 7.0);
    }

    #[test]
    fn example_cost_sums_listed_costs() {
        let t = Tree {
            root: Node::Internal {
                stump: Stump::new(0, 0.5),
                counts: ClassCounts(vec![1, 1]),
                children: Box::new([
                    Node::leaf(ClassCounts(vec![1, 0])),
                    Node::Internal {
                        stump: Stump::new(1, 0.5),
                        counts: ClassCounts(vec![0, 1]),
                        children: Box::new([
                            Node::leaf(ClassCounts(vec![0, 1])),
                            Node::leaf(ClassCounts(vec![0, 1])),
                        ]),
                    },
                ]),
            },
            spec: ImpuritySpec::pairs(0),
            costs: CostVector::new(vec![1.0, 5.0]).unwrap(),
        };
        assert_eq!(t.example_cost(&[1.0, 1.0], &t.costs), 6.0);
        assert_eq!(t.example_cost(&[0.0, 1.0], &t.costs), 1.0);
        assert_eq!(t.example_cost(&[1.0, 1.0], &CostVector::uniform(2)), 2.0);
    }

    #[test]
    fn single_leaf_costs_nothing() {
        let t = leaf_tree(vec![3, 1], 4);
        let data = Dataset::from_rows(vec![vec![0.0; 4]], vec![0], 2).unwrap();
        assert_eq!(t.example_cost(data.row(0), &t.costs), 0.0);
        assert_eq!(t.max_cost(&data, &t.costs), 0.0);
    }

    #[test]
    fn unreducible_node_becomes_majority_leaf() {
        // identical rows, conflicting labels
        let data =
            Dataset::from_rows(vec![vec![1.0], vec![1.0], vec![1.0]], vec![0, 1, 1], 2).unwrap();
        let t = grow_all(
            &data,
            &ImpuritySpec::pairs(0),
            &CostVector::uniform(1),
            &GrowConfig::default(),
            &mut stream(0, Stream::Tree, 0),
        )
        .unwrap();
        assert_eq!(t.root, Node::leaf(ClassCounts(vec![1, 2])));
        assert!(!t.leaves_pure().unwrap());
    }

    #[test]
    fn depth_limit_forces_leaf() {
        let data = xor();
        let config = GrowConfig {
            search: StumpSearch::Exhaustive,
            max_depth: 1,
        };
        let t = grow_all(
            &data,
            &ImpuritySpec::pairs(0),
            &CostVector::uniform(2),
            &config,
            &mut stream(0, Stream::Tree, 0),
        )
        .unwrap();
        assert_eq!(t.depth(), 1);
    }

    #[test]
    fn text_round_trip_and_errors() {
        let data = xor();
        let t = grow_all(
            &data,
            &ImpuritySpec::powers(3).unwrap(),
            &CostVector::new(vec![1.5, 2.25]).unwrap(),
            &GrowConfig::exhaustive(),
            &mut stream(0, Stream::Tree, 0),
        )
        .unwrap();
        let text = t.to_text().unwrap();
        assert_eq!(Tree::from_text(&text).unwrap(), t);

        assert!(matches!(Tree::from_text(""), Err(Error::ModelFormat(_))));
        let bumped = text.replacen("\"version\":1", "\"version\":9", 1);
        assert!(matches!(
            Tree::from_text(&bumped),
            Err(Error::ModelVersion { found: 9, .. })
        ));
        let cut = &text[..text.len() - 20];
        assert!(Tree::from_text(cut).is_err());
    }

    proptest::proptest! {
        #[test]
        fn sweep_matches_direct_counting(
            values in proptest::collection::vec(-5i32..5, 1..40),
            labels in proptest::collection::vec(0usize..3, 40),
            thresholds in proptest::collection::vec(-6.0f64..6.0, 1..12),
            mixed in proptest::bool::ANY,
        ) {
            let rows: Vec<Vec<f64>> = values.iter().map(|&v| vec![v as f64, -v as f64]).collect();
            let n = rows.len();
            let data = Dataset::from_rows(rows, labels[..n].to_vec(), 3).unwrap();
            let idx: Vec<usize> = (0..n).chain(0..n / 2).collect();
            let cands: Vec<Stump> = thresholds
                .iter()
                .enumerate()
                .map(|(j, &t)| Stump::new(usize::from(mixed && j % 2 == 1), t))
                .collect();
            let got = left_counts(&data, &idx, &cands);
            for (c, s) in cands.iter().enumerate() {
                let mut want = [0u64; 3];
                for &i in &idx {
                    if s.outcome(data.row(i)) == 0 {
                        want[data.label(i)] += 1;
                    }
                }
                proptest::prop_assert_eq!(&got[c * 3..c * 3 + 3], &want[..]);
            }
        }
    }
}
