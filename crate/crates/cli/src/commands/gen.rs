use std::ffi::OsString;
use std::path::{Path, PathBuf};

use anyhow::Result;
use budgetrf::dataio;
use budgetrf::oracle::{gen_figure1_toy, gen_redundant, gen_synthetic_1024, RedundantConfig};

use crate::args::{GenArgs, Synthetic};

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = OsString::from(prefix.as_os_str());
    s.push(suffix);
    s.into()
}

pub fn run(args: GenArgs) -> Result<()> {
    let (data, costs) = match args.dataset {
        Synthetic::Figure1 => {
            let toy = gen_figure1_toy();
            (toy.data, toy.costs)
        }
        Synthetic::Synth1024 => gen_synthetic_1024(),
        Synthetic::Redundant => gen_redundant(
            args.seed,
            &RedundantConfig {
                n: args.n,
                ..Default::default()
            },
        )?,
    };
    let csv = with_suffix(&args.out_prefix, ".csv");
    let cost_file = with_suffix(&args.out_prefix, ".costs");
    dataio::save_csv(&data, &csv)?;
    let mut buf = Vec::new();
    dataio::write_costs(&costs, &mut buf)?;
    super::write_out(Some(&cost_file), &buf)?;
    eprintln!(
        "wrote {} rows x {} features to {} and costs to {}",
        data.n_rows(),
        data.n_features(),
        csv.display(),
        cost_file.display()
    );
    Ok(())
}
