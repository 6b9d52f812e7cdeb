use std::fmt::Write;
use std::fs;

use anyhow::{Context, Result};
use budgetrf::dataio::{self, split, SplitSpec};
use budgetrf::metrics::{
    select_for_budgets, summarize, sweep_alpha, write_curve_csv, SweepConfig, DEFAULT_ALPHAS,
};
use budgetrf::rng::{derive_seed, Stream};
use budgetrf::Dataset;

use crate::args::SweepArgs;
use crate::exit::Failure;

pub fn run(args: SweepArgs) -> Result<()> {
    let data = dataio::load_csv(&args.data, &super::csv_options(&args.csv, None)?)?;
    let costs = super::costs(&args.costs, data.n_features())?;
    let alphas = args
        .alphas
        .clone()
        .unwrap_or_else(|| DEFAULT_ALPHAS.to_vec());
    let classes = Some(data.class_names().to_vec());
    let opts = super::csv_options(&args.csv, classes)?;
    let load = |p: &std::path::Path| dataio::load_csv(p, &opts);
    let by_rows = super::index_split(&args.rows, args.test_rows.as_deref())?;
    let fixed_validation = args.validation.as_deref().map(load).transpose()?;
    let fixed_test = args.test.as_deref().map(load).transpose()?;

    let mut runs = Vec::new();
    let mut selections = String::new();
    if args.budgets.is_some() {
        selections.push_str(
            "repeat,budget,alpha,trees,validation_cost,validation_error,avg_cost,error\n",
        );
    }
    for r in 0..args.repeats {
        let seed = derive_seed(args.grow.seed, Stream::Repeat, r);
        let spec = by_rows.clone().unwrap_or(SplitSpec::Fractions {
            validation: if fixed_validation.is_some() {
                0.0
            } else {
                args.validation_fraction
            },
            test: if fixed_test.is_some() {
                0.0
            } else {
                args.test_fraction
            },
            seed: derive_seed(seed, Stream::Split, 0),
        });
        let parts = split(&data, &spec)?;
        let pick = |fixed: &Option<Dataset>, part: Option<Dataset>, what: &str| {
            fixed
                .clone()
                .or(part)
                .ok_or_else(|| Failure::Usage(format!("the {what} split is empty")))
        };
        let validation = pick(&fixed_validation, parts.validation, "validation")?;
        let test = pick(&fixed_test, parts.test, "test")?;
        let (train, others, _) = super::prepare(&args.prep, parts.train, vec![validation, test])?;
        let config = SweepConfig {
            max_trees: args.grow.max_trees,
            seed,
            threads: args.grow.threads,
            grow: super::grow_config(&args.grow),
        };
        let sweep = sweep_alpha(&train, &others[0], &others[1], &costs, &alphas, &config)?;
        for f in &sweep.failures {
            eprintln!("repeat {r}: alpha {} failed: {}", f.alpha, f.reason);
        }
        if let Some(budgets) = &args.budgets {
            for s in select_for_budgets(&sweep.points, budgets) {
                match s.point {
                    Some(p) => writeln!(
                        selections,
                        "{r},{},{},{},{},{},{},{}",
                        s.budget,
                        p.alpha,
                        p.trees,
                        p.validation_cost,
                        p.validation_error,
                        p.avg_cost,
                        p.error
                    )?,
                    None => writeln!(selections, "{r},{},,,,,,", s.budget)?,
                }
            }
        }
        eprintln!("repeat {r}: {} curve points", sweep.points.len());
        runs.push(sweep.points);
    }

    let mut curve = Vec::new();
    write_curve_csv(&summarize(&runs), &mut curve)?;
    fs::write(&args.out, curve).with_context(|| format!("writing {}", args.out.display()))?;
    if args.budgets.is_some() {
        super::write_out(None, selections.as_bytes())?;
    }
    Ok(())
}
