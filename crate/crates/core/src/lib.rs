//! Feature-budgeted random forests.
//!
//! Trees are grown greedily by picking, at every node, the feature whose best
//! threshold stump minimises acquisition cost per worst-case impurity
//! reduction. Forests keep adding bootstrap trees until the average
//! per-example acquisition cost on a validation set would exceed a budget.
//!
//! The crate is organised by subsystem:
//!
//! * [`impurity`] admissible impurity functions over class counts
//! * [`stumps`] threshold stumps and candidate generation
//! * [`tree`] greedy minimax tree induction and per-tree cost accounting
//! * [`forest`] budget-gated forest growth, voting and forest cost
//! * [`oracle`] brute-force optimal max-cost and synthetic generators
//! * [`dataio`] CSV/cost-file ingestion, preprocessing and model files
//! * [`metrics`] error, cost, feature fraction, AP@5 and alpha sweeps

pub mod dataio;
pub mod dataset;
pub mod error;
pub mod forest;
pub mod impurity;
pub mod metrics;
pub mod oracle;
pub mod rng;
pub mod stumps;
pub mod tree;

pub use dataset::{ClassCounts, CostVector, Dataset, FeatureSet};
pub use error::{Error, Result};
pub use forest::{BudgetConfig, Forest, GrowReport, StopReason};
pub use impurity::{Impurity, ImpuritySpec, PolyTerm};
pub use stumps::{Stump, StumpBudgetPolicy, StumpSearch};
pub use tree::{GrowConfig, Node, Risk, Tree};
