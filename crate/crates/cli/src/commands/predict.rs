use std::fmt::Write;

use anyhow::Result;
use budgetrf::dataio::{self, ColumnRef, CsvOptions};

use crate::args::PredictArgs;

pub fn run(args: PredictArgs) -> Result<()> {
    let forest = dataio::load_model(&args.model)?;
    let m = forest.n_features();
    let opts = |label: Option<ColumnRef>| CsvOptions {
        label,
        header: !args.no_header,
        query: args.query_col.as_deref().map(ColumnRef::parse),
        classes: None,
        label_map: None,
    };
    let data = match &args.labels_col {
        Some(col) => dataio::load_csv(&args.data, &opts(Some(ColumnRef::parse(col))))?,
        None => {
            // a trailing label column is recognised by the width alone
            match dataio::load_csv(&args.data, &opts(Some(ColumnRef::Last))) {
                Ok(d) if d.n_features() == m => d,
                _ => dataio::load_csv(&args.data, &opts(None))?,
            }
        }
    };
    let data = super::model_input(&forest, data)?;

    let binary = forest.n_classes() == 2;
    let mut out = String::from(if binary {
        "prediction,confidence,cost\n"
    } else {
        "prediction,cost\n"
    });
    for row in data.rows() {
        let label = &forest.class_names()[forest.predict(row)?];
        let cost = forest.example_cost(row, forest.costs());
        if binary {
            writeln!(out, "{label},{},{cost}", forest.confidence(row)?)?;
        } else {
            writeln!(out, "{label},{cost}")?;
        }
    }
    super::write_out(args.out.as_deref(), out.as_bytes())
}
