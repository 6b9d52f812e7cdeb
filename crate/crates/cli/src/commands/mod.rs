mod eval;
mod gen;
mod oracle;
mod predict;
mod sweep;
mod train;

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use budgetrf::dataio::{self, ColumnRef, CsvOptions, Quantizer, SplitSpec};
use budgetrf::{
    CostVector, Dataset, Forest, GrowConfig, ImpuritySpec, StumpBudgetPolicy, StumpSearch,
};

use crate::args::{
    Command, CostArgs, CsvArgs, GrowArgs, ImpurityKind, PrepArgs, RowArgs, SearchKind,
};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Train(a) => train::run(a),
        Command::Predict(a) => predict::run(a),
        Command::Eval(a) => eval::run(a),
        Command::Sweep(a) => sweep::run(a),
        Command::Gen(a) => gen::run(a),
        Command::OracleCheck(a) => oracle::run(a),
    }
}

fn csv_options(csv: &CsvArgs, classes: Option<Vec<String>>) -> Result<CsvOptions> {
    Ok(CsvOptions {
        label: Some(ColumnRef::parse(&csv.labels_col)),
        header: !csv.no_header,
        query: csv.query_col.as_deref().map(ColumnRef::parse),
        classes,
        label_map: csv
            .label_map
            .as_deref()
            .map(dataio::load_label_map)
            .transpose()?,
    })
}

/// Row-index split from files, when given.
fn index_split(rows: &RowArgs, test: Option<&Path>) -> Result<Option<SplitSpec>> {
    let (Some(train), Some(validation)) = (&rows.train_rows, &rows.validation_rows) else {
        return Ok(None);
    };
    Ok(Some(SplitSpec::Indices {
        train: dataio::read_indices(train)?,
        validation: dataio::read_indices(validation)?,
        test: test
            .map(dataio::read_indices)
            .transpose()?
            .unwrap_or_default(),
    }))
}

fn costs(args: &CostArgs, m: usize) -> Result<CostVector> {
    let path = if args.uniform_costs {
        None
    } else {
        args.costs.as_deref()
    };
    Ok(dataio::load_costs(path, m)?)
}

fn impurity_spec(kind: ImpurityKind, alpha: u64, l: u32) -> Result<ImpuritySpec> {
    Ok(match kind {
        ImpurityKind::Pairs => ImpuritySpec::pairs(alpha),
        ImpurityKind::PairsOffset => ImpuritySpec::OffsetPairs { alpha },
        ImpurityKind::Powers => ImpuritySpec::powers(l)?,
    })
}

fn grow_config(args: &GrowArgs) -> GrowConfig {
    GrowConfig {
        search: match args.search {
            SearchKind::Random => StumpSearch::Random(StumpBudgetPolicy::default()),
            SearchKind::Exhaustive => StumpSearch::Exhaustive,
        },
        max_depth: args.max_depth,
    }
}

/// Dedups the training set and fits the quantizer on it, applying the same
/// binning to every other split.
fn prepare(
    args: &PrepArgs,
    train: Dataset,
    others: Vec<Dataset>,
) -> Result<(Dataset, Vec<Dataset>, Option<Quantizer>)> {
    let mut train = train;
    let mut others = others;
    let quantizer = match args.quantize {
        Some(levels) => {
            let q = Quantizer::fit(&train, levels)?;
            train = q.apply(&train)?;
            others = others
                .iter()
                .map(|d| q.apply(d))
                .collect::<budgetrf::Result<_>>()?;
            Some(q)
        }
        None => None,
    };
    if args.dedup {
        let before = train.n_rows();
        train = dataio::dedup(&train)?;
        log::info!("dedup: {before} -> {} training rows", train.n_rows());
    }
    Ok((train, others, quantizer))
}

/// Brings `data` into the feature space the model was trained in.
fn model_input(forest: &Forest, data: Dataset) -> Result<Dataset> {
    let data = match forest.quantizer() {
        Some(q) => q.apply(&data)?,
        None => data,
    };
    if data.n_features() != forest.n_features() {
        return Err(budgetrf::Error::Schema(format!(
            "model expects {} features, data has {}",
            forest.n_features(),
            data.n_features()
        ))
        .into());
    }
    Ok(data)
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}
