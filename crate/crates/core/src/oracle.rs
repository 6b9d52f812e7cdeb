//! Exact optimal max-cost on small binary instances, greedy-vs-optimal bound
//! checks, and the synthetic datasets used to exercise both.

use std::collections::HashMap;

use rand::Rng;

use crate::dataset::{CostVector, Dataset};
use crate::error::{Error, Result};
use crate::impurity::{impurity, ImpuritySpec};
use crate::rng::{stream, Stream};
use crate::stumps::Stump;
use crate::tree::{grow_all, GrowConfig, Tree};

pub const MAX_ORACLE_FEATURES: usize = 12;
pub const MAX_ORACLE_EXAMPLES: usize = 4096;

/// Binary-feature instance small enough for exhaustive search.
#[derive(Debug, Clone)]
pub struct SmallInstance {
    pub data: Dataset,
    pub costs: CostVector,
    pub spec: ImpuritySpec,
}

impl SmallInstance {
    pub fn new(data: Dataset, costs: CostVector, spec: ImpuritySpec) -> Result<Self> {
        if data.n_features() > MAX_ORACLE_FEATURES {
            return Err(Error::OracleLimits(format!(
                "{} features exceeds the limit of {MAX_ORACLE_FEATURES}",
                data.n_features()
            )));
        }
        if data.n_rows() > MAX_ORACLE_EXAMPLES {
            return Err(Error::OracleLimits(format!(
                "{} examples exceeds the limit of {MAX_ORACLE_EXAMPLES}",
                data.n_rows()
            )));
        }
        if data.rows().flatten().any(|&v| v != 0.0 && v != 1.0) {
            return Err(Error::OracleLimits("features must be 0/1 valued".into()));
        }
        if costs.len() != data.n_features() {
            return Err(Error::Schema(format!(
                "{} costs for {} features",
                costs.len(),
                data.n_features()
            )));
        }
        spec.validate()?;
        Ok(SmallInstance { data, costs, spec })
    }

    pub fn root_impurity(&self) -> Result<u128> {
        let all: Vec<usize> = (0..self.data.n_rows()).collect();
        impurity(&self.spec, &self.data.counts(&all))
    }
}

struct Search<'a> {
    inst: &'a SmallInstance,
    memo: HashMap<Vec<u64>, f64>,
}

impl Search<'_> {
    fn key(&self, indices: &[usize]) -> Vec<u64> {
        let mut bits = vec![0u64; self.inst.data.n_rows().div_ceil(64)];
        for &i in indices {
            bits[i / 64] |= 1 << (i % 64);
        }
        bits
    }

    fn opt(&mut self, indices: &[usize]) -> Result<f64> {
        let data = &self.inst.data;
        if impurity(&self.inst.spec, &data.counts(indices))? == 0 {
            return Ok(0.0);
        }
        let key = self.key(indices);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let mut best = f64::INFINITY;
        for t in 0..data.n_features() {
            let c = self.inst.costs.cost(t);
            if c >= best {
                continue;
            }
            let (zero, one): (Vec<usize>, Vec<usize>) =
                indices.iter().partition(|&&i| data.value(i, t) == 0.0);
            // a split with an empty side changes nothing
            if zero.is_empty() || one.is_empty() {
                continue;
            }
            let left = self.opt(&zero)?;
            if c + left >= best {
                continue;
            }
            let right = self.opt(&one)?;
            best = best.min(c + left.max(right));
        }
        self.memo.insert(key, best);
        Ok(best)
    }
}

/// Minimum max-cost over trees whose leaves all have zero impurity.
///
/// With binary features a feature is useful at most once per path, so the
/// search covers exactly the single-use trees. Returns infinity when no such
/// tree exists (identical rows whose labels keep the impurity positive).
pub fn opt_max_cost(instance: &SmallInstance) -> Result<f64> {
    let mut search = Search {
        inst: instance,
        memo: HashMap::new(),
    };
    let all: Vec<usize> = (0..instance.data.n_rows()).collect();
    search.opt(&all)
}

/// Greedy tree with every distinct split enumerated (exact inner minimisation).
pub fn greedy_exact(instance: &SmallInstance) -> Result<Tree> {
    grow_all(
        &instance.data,
        &instance.spec,
        &instance.costs,
        &GrowConfig::exhaustive(),
        &mut stream(0, Stream::Instance, 0),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub n_examples: usize,
    pub n_features: usize,
    pub root_impurity: u128,
    pub greedy_cost: f64,
    pub opt_cost: f64,
    /// `greedy / opt`, defined as 1 for pure instances.
    pub ratio: f64,
    /// Approximation factor `ln F(S) + 1` (1 for pure instances).
    pub factor: f64,
    /// False when greedy stopped with an impure leaf, or no zero-impurity tree exists.
    pub comparable: bool,
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        self.comparable && self.ratio <= self.factor * (1.0 + 1e-12)
    }
}

/// Compares the greedy max-cost with the optimum on one instance.
pub fn check_bound(instance: &SmallInstance) -> Result<BoundCheck> {
    let f = instance.root_impurity()?;
    let tree = greedy_exact(instance)?;
    let greedy_cost = tree.max_cost(&instance.data, &instance.costs);
    let opt_cost = opt_max_cost(instance)?;
    let comparable = opt_cost.is_finite() && tree.leaves_pure()?;
    let (ratio, factor) = if f == 0 {
        (1.0, 1.0)
    } else {
        (greedy_cost / opt_cost, (f as f64).ln() + 1.0)
    };
    Ok(BoundCheck {
        n_examples: instance.data.n_rows(),
        n_features: instance.data.n_features(),
        root_impurity: f,
        greedy_cost,
        opt_cost,
        ratio,
        factor,
        comparable,
    })
}

/// Limits for [`random_instance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceLimits {
    pub max_features: usize,
    pub max_examples: usize,
    pub max_cost: u32,
    pub max_classes: usize,
}

impl Default for InstanceLimits {
    fn default() -> Self {
        InstanceLimits {
            max_features: 4,
            max_examples: 32,
            max_cost: 5,
            max_classes: 3,
        }
    }
}

/// Random binary instance with labels that are a function of the row, so a
/// zero-impurity tree always exists.
pub fn random_instance<R: Rng + ?Sized>(
    rng: &mut R,
    limits: &InstanceLimits,
    spec: &ImpuritySpec,
) -> Result<SmallInstance> {
    if limits.max_features == 0 || limits.max_examples < 2 || limits.max_cost == 0 {
        return Err(Error::OracleLimits(
            "limits leave no instance to draw".into(),
        ));
    }
    let m = rng.gen_range(1..=limits.max_features.min(MAX_ORACLE_FEATURES));
    let n = rng.gen_range(2..=limits.max_examples.min(MAX_ORACLE_EXAMPLES));
    let k = rng.gen_range(2..=limits.max_classes.max(2));
    let patterns = 1usize << m;
    let table: Vec<usize> = (0..patterns).map(|_| rng.gen_range(0..k)).collect();
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let p = rng.gen_range(0..patterns);
        rows.push((0..m).map(|b| ((p >> b) & 1) as f64).collect());
        labels.push(table[p]);
    }
    let costs = (0..m)
        .map(|_| rng.gen_range(1..=limits.max_cost) as f64)
        .collect();
    SmallInstance::new(
        Dataset::from_rows(rows, labels, k)?,
        CostVector::new(costs)?,
        spec.clone(),
    )
}

/// Two distinct rows with different labels: the smallest positive impurity.
pub fn base_case_instance<R: Rng + ?Sized>(
    rng: &mut R,
    max_features: usize,
    max_cost: u32,
    spec: &ImpuritySpec,
) -> Result<SmallInstance> {
    let m = rng.gen_range(1..=max_features.clamp(1, MAX_ORACLE_FEATURES));
    let patterns = 1usize << m;
    let a = rng.gen_range(0..patterns);
    let mut b = rng.gen_range(0..patterns - 1);
    if b >= a {
        b += 1;
    }
    let row = |p: usize| {
        (0..m)
            .map(|bit| ((p >> bit) & 1) as f64)
            .collect::<Vec<_>>()
    };
    let costs = (0..m)
        .map(|_| rng.gen_range(1..=max_cost.max(1)) as f64)
        .collect();
    SmallInstance::new(
        Dataset::from_rows(vec![row(a), row(b)], vec![0, 1], 2)?,
        CostVector::new(costs)?,
        spec.clone(),
    )
}

/// Two-feature toy with one fixed stump per feature.
#[derive(Debug, Clone)]
pub struct Figure1Toy {
    pub data: Dataset,
    pub costs: CostVector,
    /// `families[t]` is the single stump available on feature `t`.
    pub families: Vec<Vec<Stump>>,
}

/// 30 + 30 examples. The stump on feature 0 isolates 20 examples of the second
/// class; the stump on feature 1 leaves 15 + 15 on each side.
pub fn gen_figure1_toy() -> Figure1Toy {
    let mut rows = Vec::with_capacity(60);
    let mut labels = Vec::with_capacity(60);
    // (class, feature 0, feature 1, how many)
    let groups = [
        (0, 0.0, 0.0, 15),
        (0, 0.0, 1.0, 15),
        (1, 0.0, 0.0, 5),
        (1, 0.0, 1.0, 5),
        (1, 1.0, 0.0, 10),
        (1, 1.0, 1.0, 10),
    ];
    for (class, f0, f1, n) in groups {
        for _ in 0..n {
            rows.push(vec![f0, f1]);
            labels.push(class);
        }
    }
    let data = Dataset::from_rows(rows, labels, 2)
        .and_then(|d| d.with_class_names(vec!["1".into(), "2".into()]))
        .expect("static toy data is valid");
    Figure1Toy {
        data,
        costs: CostVector::uniform(2),
        families: vec![vec![Stump::new(0, 0.5)], vec![Stump::new(1, 0.5)]],
    }
}

/// Class index (0-based) of integer `x` in the 1024-example construction.
fn synth_label(x: usize) -> usize {
    match x {
        0 => 1,
        256 => 2,
        512 => 3,
        768 => 0,
        _ => x / 256,
    }
}

/// The integers 0..1023 as 10 binary features, most significant bit first.
/// Four classes of 256 examples, with 0, 256, 512 and 768 relabelled to the
/// next block's class. Unit costs.
pub fn gen_synthetic_1024() -> (Dataset, CostVector) {
    let rows = (0..1024usize)
        .map(|x| (0..10).map(|j| ((x >> (9 - j)) & 1) as f64).collect())
        .collect();
    let labels = (0..1024).map(synth_label).collect();
    let data = Dataset::from_rows(rows, labels, 4)
        .and_then(|d| d.with_class_names((1..=4).map(|c| c.to_string()).collect()))
        .expect("static synthetic data is valid");
    (data, CostVector::uniform(10))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RedundantConfig {
    pub n: usize,
    /// Number of latent signals; each yields a cheap and an expensive twin.
    pub pairs: usize,
    /// Half-width of the uniform noise added to every twin.
    pub noise: f64,
    pub cheap_cost: f64,
    pub expensive_cost: f64,
}

impl Default for RedundantConfig {
    fn default() -> Self {
        RedundantConfig {
            n: 600,
            pairs: 4,
            noise: 0.02,
            cheap_cost: 1.0,
            expensive_cost: 100.0,
        }
    }
}

/// Binary task whose features come in twins of equal utility and very
/// different cost: feature `2k` (cheap) and `2k + 1` (expensive) both observe
/// latent signal `k` plus independent noise. The label is whether the latent
/// signals sum past half their range.
pub fn gen_redundant(seed: u64, config: &RedundantConfig) -> Result<(Dataset, CostVector)> {
    if config.pairs == 0 || config.n < 2 {
        return Err(Error::InvalidConfig(
            "redundant generator needs n >= 2 and pairs >= 1".into(),
        ));
    }
    let mut rng = stream(seed, Stream::Synthetic, 0);
    let mut rows = Vec::with_capacity(config.n);
    let mut labels = Vec::with_capacity(config.n);
    for _ in 0..config.n {
        let latent: Vec<f64> = (0..config.pairs).map(|_| rng.gen::<f64>()).collect();
        let mut row = Vec::with_capacity(2 * config.pairs);
        for &z in &latent {
            for _ in 0..2 {
                let eps = if config.noise > 0.0 {
                    rng.gen_range(-config.noise..=config.noise)
                } else {
                    0.0
                };
                row.push(z + eps);
            }
        }
        labels.push(usize::from(
            latent.iter().sum::<f64>() > config.pairs as f64 / 2.0,
        ));
        rows.push(row);
    }
    let costs = (0..2 * config.pairs)
        .map(|f| {
            if f % 2 == 0 {
                config.cheap_cost
            } else {
                config.expensive_cost
            }
        })
        .collect();
    Ok((
        Dataset::from_rows(rows, labels, 2)?,
        CostVector::new(costs)?,
    ))
}

pub fn gen_redundant_cost_synthetic(seed: u64) -> (Dataset, CostVector) {
    gen_redundant(seed, &RedundantConfig::default()).expect("default config is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(rows: Vec<Vec<f64>>, labels: Vec<usize>, costs: Vec<f64>) -> SmallInstance {
        SmallInstance::new(
            Dataset::from_rows(rows, labels, 2).unwrap(),
            CostVector::new(costs).unwrap(),
            ImpuritySpec::pairs(0),
        )
        .unwrap()
    }

    #[test]
    fn pure_instance_costs_nothing() {
        let i = inst(vec![vec![0.0], vec![1.0]], vec![1, 1], vec![3.0]);
        assert_eq!(opt_max_cost(&i).unwrap(), 0.0);
        let c = check_bound(&i).unwrap();
        assert_eq!((c.ratio, c.factor), (1.0, 1.0));
        assert!(c.holds());
    }

    #[test]
    fn xor_needs_both_features() {
        let i = inst(
            vec![
                vec![0.0, 0.0],
                vec![0.0, 1.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0],
            ],
            vec![0, 1, 1, 0],
            vec![1.0, 1.0],
        );
        assert_eq!(opt_max_cost(&i).unwrap(), 2.0);
        let c = check_bound(&i).unwrap();
        assert_eq!((c.greedy_cost, c.opt_cost, c.ratio), (2.0, 2.0, 1.0));
    }

    #[test]
    fn oracle_prefers_cheap_separating_feature() {
        let i = inst(
            vec![vec![0.0, 0.0], vec![1.0, 1.0]],
            vec![0, 1],
            vec![4.0, 2.0],
        );
        assert_eq!(opt_max_cost(&i).unwrap(), 2.0);
    }

    #[test]
    fn inconsistent_duplicates_are_infeasible() {
        let i = inst(vec![vec![0.0], vec![0.0]], vec![0, 1], vec![1.0]);
        assert!(opt_max_cost(&i).unwrap().is_infinite());
        assert!(!check_bound(&i).unwrap().holds());
    }

    #[test]
    fn rejects_out_of_limits() {
        let d = Dataset::from_rows(vec![vec![0.5]], vec![0], 2).unwrap();
        assert!(SmallInstance::new(d, CostVector::uniform(1), ImpuritySpec::pairs(0)).is_err());
        let d = Dataset::from_rows(vec![vec![0.0; 13]], vec![0], 2).unwrap();
        assert!(matches!(
            SmallInstance::new(d, CostVector::uniform(13), ImpuritySpec::pairs(0)),
            Err(Error::OracleLimits(_))
        ));
    }

    #[test]
    fn figure1_counts() {
        let toy = gen_figure1_toy();
        let all: Vec<usize> = (0..60).collect();
        assert_eq!(toy.data.counts(&all).0, vec![30, 30]);
        for (t, expect) in [(0, [[30, 10], [0, 20]]), (1, [[15, 15], [15, 15]])] {
            let (l, r) = crate::stumps::split(&toy.families[t][0], &toy.data, &all);
            assert_eq!(toy.data.counts(&l).0, expect[0]);
            assert_eq!(toy.data.counts(&r).0, expect[1]);
        }
    }

    #[test]
    fn synthetic_1024_labels() {
        let (d, costs) = gen_synthetic_1024();
        assert_eq!(d.n_rows(), 1024);
        assert_eq!(d.n_features(), 10);
        assert_eq!(costs.as_slice(), &[1.0; 10]);
        // class index i is label i + 1
        assert_eq!(d.label(0), 1);
        assert_eq!(d.label(100), 0);
        assert_eq!(d.label(256), 2);
        assert_eq!(d.label(512), 3);
        assert_eq!(d.label(768), 0);
        assert_eq!(d.label(1023), 3);
        let mut seen: Vec<&[f64]> = d.rows().collect();
        seen.sort_by(|a, b| a.partial_cmp(b).unwrap());
        seen.dedup();
        assert_eq!(seen.len(), 1024);
        assert_eq!(d.row(5), &[0., 0., 0., 0., 0., 0., 0., 1., 0., 1.]);
    }

    #[test]
    fn redundant_twins() {
        let (d, costs) = gen_redundant_cost_synthetic(3);
        assert_eq!(
            costs.as_slice(),
            &[1.0, 100.0, 1.0, 100.0, 1.0, 100.0, 1.0, 100.0]
        );
        assert_eq!(d.n_features(), 8);
        let noiseless = RedundantConfig {
            noise: 0.0,
            ..Default::default()
        };
        let (d, _) = gen_redundant(3, &noiseless).unwrap();
        assert!(d.rows().all(|r| r.chunks(2).all(|p| p[0] == p[1])));
    }

    #[test]
    fn random_instances_are_feasible() {
        let mut rng = stream(9, Stream::Instance, 0);
        for _ in 0..50 {
            let i = random_instance(
                &mut rng,
                &InstanceLimits::default(),
                &ImpuritySpec::pairs(0),
            )
            .unwrap();
            assert!(opt_max_cost(&i).unwrap().is_finite());
        }
    }
}
