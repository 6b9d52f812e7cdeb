use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "budgetrf", version, about = "Feature-budgeted random forests")]
pub struct Cli {
    /// Log verbosity (error, warn, info, debug, trace); RUST_LOG overrides.
    #[arg(long, global = true, default_value = "warn")]
    pub log_level: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Grow a forest under a validation cost budget.
    Train(TrainArgs),
    /// Label the rows of a CSV file with a trained model.
    Predict(PredictArgs),
    /// Score a trained model on labelled data.
    Eval(EvalArgs),
    /// Trace error/cost curves over alphas and tree counts.
    Sweep(SweepArgs),
    /// Write one of the built-in synthetic datasets.
    Gen(GenArgs),
    /// Compare greedy trees with the exact optimum on random small instances.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ImpurityKind {
    /// Thresholded class-pair products.
    Pairs,
    /// Thresholded class-pair products, each reduced by alpha squared.
    PairsOffset,
    /// (sum n)^l - sum n^l.
    Powers,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SearchKind {
    /// Random thresholds, 20/40/80 per feature depending on node size.
    Random,
    /// Every midpoint between distinct values.
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Error,
    Ap5,
    Cost,
    Fraction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Synthetic {
    /// 60-example two-feature toy with one stump per feature.
    Figure1,
    /// The integers 0..1023 as ten bits, four classes.
    Synth1024,
    /// Cheap/expensive feature twins observing the same signals.
    Redundant,
}

/// How a CSV file is read.
#[derive(Debug, Clone, Args)]
pub struct CsvArgs {
    /// Label column: zero-based index, header name or "last".
    #[arg(long, default_value = "last")]
    pub labels_col: String,
    /// Query id column (index or name), excluded from the features.
    #[arg(long)]
    pub query_col: Option<String>,
    /// The first row holds data, not column names.
    #[arg(long)]
    pub no_header: bool,
    /// File of `from,to` label pairs applied before classes are formed.
    #[arg(long)]
    pub label_map: Option<PathBuf>,
}

/// Explicit splits as files of zero-based row indices into --data; they win
/// over fractions.
#[derive(Debug, Clone, Args)]
pub struct RowArgs {
    #[arg(long, requires = "validation_rows")]
    pub train_rows: Option<PathBuf>,
    #[arg(long, requires = "train_rows")]
    pub validation_rows: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
#[group(id = "cost_source", required = true, multiple = false)]
pub struct CostArgs {
    /// Per-feature acquisition costs, separated by commas, whitespace or newlines.
    #[arg(long, group = "cost_source")]
    pub costs: Option<PathBuf>,
    /// Give every feature cost 1.
    #[arg(long, group = "cost_source")]
    pub uniform_costs: bool,
}

#[derive(Debug, Clone, Args)]
pub struct GrowArgs {
    #[arg(long, value_enum, default_value = "random")]
    pub search: SearchKind,
    /// Nodes at this depth become leaves.
    #[arg(long, default_value_t = 64)]
    pub max_depth: usize,
    #[arg(long, default_value_t = 40)]
    pub max_trees: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, env = "BUDGETRF_THREADS", default_value_t = 1)]
    pub threads: usize,
}

/// Training-set preprocessing.
#[derive(Debug, Clone, Args)]
pub struct PrepArgs {
    /// Bin every feature into this many uniform levels (fitted on training data).
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    pub quantize: Option<u32>,
    /// Merge identical training rows, keeping their majority label.
    #[arg(long)]
    pub dedup: bool,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[command(flatten)]
    pub csv: CsvArgs,
    #[command(flatten)]
    pub costs: CostArgs,
    /// Cap on the average validation acquisition cost ("inf" for none).
    #[arg(long)]
    pub budget: f64,
    #[arg(long, value_enum, default_value = "pairs")]
    pub impurity: ImpurityKind,
    /// Threshold of the pairs impurities.
    #[arg(long, default_value_t = 0)]
    pub alpha: u64,
    /// Exponent of the powers impurity.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    pub power_l: u32,
    /// Validation CSV (same layout as --data).
    #[arg(long, conflicts_with = "validation_fraction")]
    pub validation: Option<PathBuf>,
    /// Hold out this fraction of --data for validation instead.
    #[arg(long)]
    pub validation_fraction: Option<f64>,
    #[command(flatten)]
    pub rows: RowArgs,
    #[command(flatten)]
    pub prep: PrepArgs,
    #[command(flatten)]
    pub grow: GrowArgs,
    /// Model file to write.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    /// Column to drop as the label. By default the last column is dropped
    /// when the file has one column more than the model has features.
    #[arg(long)]
    pub labels_col: Option<String>,
    #[arg(long)]
    pub query_col: Option<String>,
    #[arg(long)]
    pub no_header: bool,
    /// Output CSV (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    #[command(flatten)]
    pub csv: CsvArgs,
    /// Metrics to report, comma separated.
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "error,cost,fraction"
    )]
    pub metric: Vec<Metric>,
    /// Price features with this cost file instead of the model's costs.
    #[arg(long)]
    pub costs: Option<PathBuf>,
    /// One row per tree-count prefix instead of the whole forest only.
    #[arg(long)]
    pub per_prefix: bool,
    /// Output CSV (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[command(flatten)]
    pub csv: CsvArgs,
    #[command(flatten)]
    pub costs: CostArgs,
    /// Alpha values, comma separated (default: 0,2,4,6,8,10,15,25,35,45).
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<u64>>,
    /// Budgets at which to pick the best (alpha, trees) point by validation error.
    #[arg(long, value_delimiter = ',')]
    pub budgets: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub repeats: u64,
    #[arg(long, conflicts_with = "validation_fraction")]
    pub validation: Option<PathBuf>,
    #[arg(long, default_value_t = 0.2)]
    pub validation_fraction: f64,
    #[arg(long, conflicts_with = "test_fraction")]
    pub test: Option<PathBuf>,
    #[arg(long, default_value_t = 0.2)]
    pub test_fraction: f64,
    #[command(flatten)]
    pub rows: RowArgs,
    /// Test rows, used together with --train-rows/--validation-rows.
    #[arg(long, requires = "train_rows")]
    pub test_rows: Option<PathBuf>,
    #[command(flatten)]
    pub prep: PrepArgs,
    #[command(flatten)]
    pub grow: GrowArgs,
    /// Curve CSV to write.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub dataset: Synthetic,
    /// Writes PREFIX.csv and PREFIX.costs.
    #[arg(long)]
    pub out_prefix: PathBuf,
    /// Seed of the redundant generator.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Rows of the redundant generator.
    #[arg(long, default_value_t = 600)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 500)]
    pub instances: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub max_features: usize,
    #[arg(long, default_value_t = 32)]
    pub max_examples: usize,
    /// Largest integer feature cost.
    #[arg(long, default_value_t = 5)]
    pub max_cost: u32,
    #[arg(long, default_value_t = 3)]
    pub max_classes: usize,
    #[arg(long, value_enum, default_value = "pairs")]
    pub impurity: ImpurityKind,
    #[arg(long, default_value_t = 0)]
    pub alpha: u64,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    pub power_l: u32,
    /// Per-instance report CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
