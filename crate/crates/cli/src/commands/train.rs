use std::time::Instant;

use anyhow::Result;
use budgetrf::dataio::{self, split, SplitSpec};
use budgetrf::forest::grow_forest;
use budgetrf::rng::{derive_seed, Stream};
use budgetrf::{BudgetConfig, StopReason};

use crate::args::TrainArgs;
use crate::exit::Failure;

pub fn run(args: TrainArgs) -> Result<()> {
    let started = Instant::now();
    let data = dataio::load_csv(&args.data, &super::csv_options(&args.csv, None)?)?;
    let costs = super::costs(&args.costs, data.n_features())?;
    let spec = super::impurity_spec(args.impurity, args.alpha, args.power_l)?;

    let by_rows = super::index_split(&args.rows, None)?;
    let (train, validation) = match (by_rows, &args.validation, args.validation_fraction) {
        (Some(rows), _, _) => {
            let parts = split(&data, &rows)?;
            let validation = parts
                .validation
                .ok_or_else(|| Failure::Usage("validation row file is empty".into()))?;
            (parts.train, validation)
        }
        (None, Some(path), _) => {
            let opts = super::csv_options(&args.csv, Some(data.class_names().to_vec()))?;
            let validation = dataio::load_csv(path, &opts)?;
            (data, validation)
        }
        (None, None, Some(fraction)) => {
            let parts = split(
                &data,
                &SplitSpec::Fractions {
                    validation: fraction,
                    test: 0.0,
                    seed: derive_seed(args.grow.seed, Stream::Split, 0),
                },
            )?;
            let validation = parts
                .validation
                .ok_or_else(|| Failure::Usage("validation fraction selects no rows".into()))?;
            (parts.train, validation)
        }
        (None, None, None) => {
            log::warn!("no validation set given; budgeting against the training data");
            (data.clone(), data)
        }
    };
    let (train, mut others, quantizer) = super::prepare(&args.prep, train, vec![validation])?;
    let validation = others.remove(0);

    let config = BudgetConfig {
        budget: args.budget,
        max_trees: args.grow.max_trees,
        seed: args.grow.seed,
        threads: args.grow.threads,
        grow: super::grow_config(&args.grow),
    };
    let report = grow_forest(&train, &validation, &config, &spec, &costs)?;
    if let StopReason::Infeasible { first_tree_cost } = report.stop {
        let why = match first_tree_cost {
            Some(c) => format!("a single tree already costs {c} per validation example"),
            None => "no tree fits a zero budget".to_string(),
        };
        return Err(
            Failure::Infeasible(format!("budget {} is infeasible: {why}", args.budget)).into(),
        );
    }

    let mut forest = report.forest;
    forest.set_quantizer(quantizer);
    dataio::save_model(&forest, &args.out)?;

    let stop = match report.stop {
        StopReason::BudgetExceeded { rejected_cost } => {
            format!("budget reached (next tree would cost {rejected_cost:.6})")
        }
        StopReason::MaxTrees => "tree limit reached".to_string(),
        StopReason::Infeasible { .. } => unreachable!(),
    };
    eprintln!("trees: {}", forest.len());
    eprintln!("stop: {stop}");
    eprintln!(
        "validation average cost: {:.6} (budget {})",
        report.validation_cost, args.budget
    );
    eprintln!(
        "train rows: {}, validation rows: {}",
        train.n_rows(),
        validation.n_rows()
    );
    eprintln!("wall time: {:.3}s", started.elapsed().as_secs_f64());
    eprintln!("model: {}", args.out.display());
    Ok(())
}
