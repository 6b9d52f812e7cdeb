use std::fmt::Write;

use anyhow::Result;
use budgetrf::dataio;
use budgetrf::metrics::{avg_feature_fraction, forest_ap5, test_error};

use crate::args::{EvalArgs, Metric};

fn name(metric: Metric) -> &'static str {
    match metric {
        Metric::Error => "error",
        Metric::Ap5 => "ap5",
        Metric::Cost => "cost",
        Metric::Fraction => "fraction",
    }
}

pub fn run(args: EvalArgs) -> Result<()> {
    let forest = dataio::load_model(&args.model)?;
    let opts = super::csv_options(&args.csv, Some(forest.class_names().to_vec()))?;
    let data = super::model_input(&forest, dataio::load_csv(&args.data, &opts)?)?;
    let costs = match &args.costs {
        Some(p) => dataio::load_costs(Some(p), forest.n_features())?,
        None => forest.costs().clone(),
    };

    let sizes: Vec<usize> = if args.per_prefix {
        (1..=forest.len()).collect()
    } else {
        vec![forest.len()]
    };
    let mut out = String::from("trees");
    for &m in &args.metric {
        write!(out, ",{}", name(m))?;
    }
    out.push('\n');
    for n in sizes {
        let f = forest.prefix(n);
        write!(out, "{n}")?;
        for &m in &args.metric {
            let v = match m {
                Metric::Error => test_error(&f, &data)?,
                Metric::Ap5 => forest_ap5(&f, &data)?,
                Metric::Cost => f.average_cost(&data, &costs),
                Metric::Fraction => avg_feature_fraction(&f, &data),
            };
            write!(out, ",{v}")?;
        }
        out.push('\n');
    }
    super::write_out(args.out.as_deref(), out.as_bytes())
}
