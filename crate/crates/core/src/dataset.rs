//! Core data containers shared by every subsystem.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense row-major feature matrix with contiguous integer labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    values: Vec<f64>,
    n_rows: usize,
    n_features: usize,
    labels: Vec<usize>,
    n_classes: usize,
    feature_names: Option<Vec<String>>,
    class_names: Vec<String>,
    query_ids: Option<Vec<String>>,
}

impl Dataset {
    /// Builds a dataset from rows. Class names default to `"0".."k-1"`.
    pub fn from_rows(rows: Vec<Vec<f64>>, labels: Vec<usize>, n_classes: usize) -> Result<Self> {
        let n_features = rows.first().map(Vec::len).unwrap_or(0);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n_features) {
            return Err(Error::InvalidDataset(format!(
                "row {i} has {} values, expected {n_features}",
                r.len()
            )));
        }
        let n_rows = rows.len();
        let values = rows.into_iter().flatten().collect();
        Self::from_flat(values, n_rows, n_features, labels, n_classes)
    }

    pub fn from_flat(
        values: Vec<f64>,
        n_rows: usize,
        n_features: usize,
        labels: Vec<usize>,
        n_classes: usize,
    ) -> Result<Self> {
        if n_rows == 0 {
            return Err(Error::InvalidDataset("no rows".into()));
        }
        if n_features == 0 {
            return Err(Error::InvalidDataset("no feature columns".into()));
        }
        if n_classes < 2 {
            return Err(Error::InvalidDataset(format!(
                "need at least 2 classes, got {n_classes}"
            )));
        }
        if values.len() != n_rows * n_features {
            return Err(Error::InvalidDataset("matrix is not rectangular".into()));
        }
        if labels.len() != n_rows {
            return Err(Error::InvalidDataset(format!(
                "{} labels for {n_rows} rows",
                labels.len()
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= n_classes) {
            return Err(Error::InvalidDataset(format!(
                "label {bad} out of range for {n_classes} classes"
            )));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidDataset("NaN feature value".into()));
        }
        Ok(Dataset {
            values,
            n_rows,
            n_features,
            labels,
            n_classes,
            feature_names: None,
            class_names: (0..n_classes).map(|c| c.to_string()).collect(),
            query_ids: None,
        })
    }

    pub fn with_feature_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.n_features {
            return Err(Error::InvalidDataset(format!(
                "{} feature names for {} features",
                names.len(),
                self.n_features
            )));
        }
        self.feature_names = Some(names);
        Ok(self)
    }

    pub fn with_class_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.n_classes {
            return Err(Error::InvalidDataset(format!(
                "{} class names for {} classes",
                names.len(),
                self.n_classes
            )));
        }
        self.class_names = names;
        Ok(self)
    }

    pub fn with_query_ids(mut self, ids: Vec<String>) -> Result<Self> {
        if ids.len() != self.n_rows {
            return Err(Error::InvalidDataset(format!(
                "{} query ids for {} rows",
                ids.len(),
                self.n_rows
            )));
        }
        self.query_ids = Some(ids);
        Ok(self)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn value(&self, row: usize, feature: usize) -> f64 {
        self.values[row * self.n_features + feature]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.n_features)
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn feature_names(&self) -> Option<&[String]> {
        self.feature_names.as_deref()
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn query_ids(&self) -> Option<&[String]> {
        self.query_ids.as_deref()
    }

    /// Class counts of the examples at `indices`.
    pub fn counts(&self, indices: &[usize]) -> ClassCounts {
        let mut counts = vec![0u64; self.n_classes];
        for &i in indices {
            counts[self.labels[i]] += 1;
        }
        ClassCounts(counts)
    }

    /// New dataset holding the given rows in order (repeats allowed).
    pub fn select(&self, indices: &[usize]) -> Result<Dataset> {
        let mut values = Vec::with_capacity(indices.len() * self.n_features);
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        let labels = indices.iter().map(|&i| self.labels[i]).collect();
        let mut out = Dataset::from_flat(
            values,
            indices.len(),
            self.n_features,
            labels,
            self.n_classes,
        )?;
        out.feature_names = self.feature_names.clone();
        out.class_names = self.class_names.clone();
        out.query_ids = self
            .query_ids
            .as_ref()
            .map(|q| indices.iter().map(|&i| q[i].clone()).collect());
        Ok(out)
    }

    /// Same rows and labels with a replaced feature matrix of equal shape.
    pub(crate) fn with_values(&self, values: Vec<f64>) -> Dataset {
        debug_assert_eq!(values.len(), self.values.len());
        Dataset {
            values,
            ..self.clone()
        }
    }
}

/// Per-class example counts of a set of examples.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassCounts(pub Vec<u64>);

impl ClassCounts {
    pub fn zeros(k: usize) -> Self {
        ClassCounts(vec![0; k])
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn n_classes(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, class: usize) -> u64 {
        self.0.get(class).copied().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    /// Majority class; ties go to the lowest class index.
    pub fn majority(&self) -> usize {
        let mut best = 0;
        for (c, &n) in self.0.iter().enumerate() {
            if n > self.0[best] {
                best = c;
            }
        }
        best
    }

    /// Number of classes with a non-zero count.
    pub fn support(&self) -> usize {
        self.0.iter().filter(|&&n| n > 0).count()
    }
}

impl From<Vec<u64>> for ClassCounts {
    fn from(v: Vec<u64>) -> Self {
        ClassCounts(v)
    }
}

/// Per-feature acquisition costs; every entry is finite and strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct CostVector(Vec<f64>);

impl CostVector {
    pub fn new(costs: Vec<f64>) -> Result<Self> {
        if costs.is_empty() {
            return Err(Error::InvalidCosts("empty cost vector".into()));
        }
        if let Some((i, c)) = costs
            .iter()
            .enumerate()
            .find(|(_, c)| !(c.is_finite() && **c > 0.0))
        {
            return Err(Error::InvalidCosts(format!(
                "cost of feature {i} is {c}, must be finite and > 0"
            )));
        }
        Ok(CostVector(costs))
    }

    pub fn uniform(m: usize) -> Self {
        CostVector(vec![1.0; m.max(1)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn cost(&self, feature: usize) -> f64 {
        self.0[feature]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Sum of costs over a set of features, each counted once.
    pub fn total(&self, features: &FeatureSet) -> f64 {
        features.iter().map(|f| self.0[f]).sum()
    }

    /// Every cost multiplied by `factor` (> 0).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        CostVector::new(self.0.iter().map(|c| c * factor).collect())
    }
}

impl TryFrom<Vec<f64>> for CostVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        CostVector::new(v)
    }
}

impl From<CostVector> for Vec<f64> {
    fn from(c: CostVector) -> Self {
        c.0
    }
}

/// Fixed-capacity bitset of feature indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FeatureSet {
    words: Vec<u64>,
}

impl FeatureSet {
    pub fn with_capacity(m: usize) -> Self {
        FeatureSet {
            words: vec![0; m.div_ceil(64)],
        }
    }

    pub fn insert(&mut self, f: usize) -> bool {
        let (w, b) = (f / 64, f % 64);
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn contains(&self, f: usize) -> bool {
        self.words
            .get(f / 64)
            .is_some_and(|w| w & (1 << (f % 64)) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &FeatureSet) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    /// Features in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64)
                .filter(move |b| w & (1 << b) != 0)
                .map(move |b| wi * 64 + b)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_ragged_and_bad_labels() {
        assert!(Dataset::from_rows(vec![vec![1.0, 2.0], vec![1.0]], vec![0, 1], 2).is_err());
        assert!(Dataset::from_rows(vec![vec![1.0]], vec![2], 2).is_err());
        assert!(Dataset::from_rows(vec![vec![1.0]], vec![0], 1).is_err());
    }

    #[test]
    fn majority_ties_to_lowest_index() {
        assert_eq!(ClassCounts(vec![3, 5, 5]).majority(), 1);
        assert_eq!(ClassCounts(vec![0, 0]).majority(), 0);
    }

    #[test]
    fn cost_vector_positivity() {
        assert!(CostVector::new(vec![1.0, -1.0]).is_err());
        assert!(CostVector::new(vec![1.0, 0.0]).is_err());
        assert!(CostVector::new(vec![1.0, f64::INFINITY]).is_err());
        assert_eq!(CostVector::uniform(3).as_slice(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn feature_set_counts_once() {
        let mut s = FeatureSet::with_capacity(10);
        assert!(s.insert(3));
        assert!(!s.insert(3));
        s.insert(70);
        assert_eq!(s.len(), 2);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 70]);
        let costs = CostVector::new((0..71).map(|i| i as f64 + 1.0).collect()).unwrap();
        assert_eq!(costs.total(&s), 4.0 + 71.0);
    }
}
