use std::fmt::Write;

use anyhow::Result;
use budgetrf::oracle::{
    check_bound, random_instance, InstanceLimits, MAX_ORACLE_EXAMPLES, MAX_ORACLE_FEATURES,
};
use budgetrf::rng::{stream, Stream};

use crate::args::OracleArgs;
use crate::exit::Failure;

pub fn run(args: OracleArgs) -> Result<()> {
    if !(1..=MAX_ORACLE_FEATURES).contains(&args.max_features) {
        return Err(Failure::Usage(format!(
            "--max-features must be in 1..={MAX_ORACLE_FEATURES}"
        ))
        .into());
    }
    if !(2..=MAX_ORACLE_EXAMPLES).contains(&args.max_examples) {
        return Err(Failure::Usage(format!(
            "--max-examples must be in 2..={MAX_ORACLE_EXAMPLES}"
        ))
        .into());
    }
    if args.max_cost == 0 || args.max_classes < 2 {
        return Err(Failure::Usage("--max-cost must be >= 1 and --max-classes >= 2".into()).into());
    }
    let spec = super::impurity_spec(args.impurity, args.alpha, args.power_l)?;
    let limits = InstanceLimits {
        max_features: args.max_features,
        max_examples: args.max_examples,
        max_cost: args.max_cost,
        max_classes: args.max_classes,
    };

    let mut rng = stream(args.seed, Stream::Instance, 0);
    let mut report = String::from(
        "instance,examples,features,root_impurity,greedy_cost,opt_cost,ratio,bound,comparable,holds\n",
    );
    let (mut violations, mut skipped, mut worst) = (0usize, 0usize, 0.0f64);
    for i in 0..args.instances {
        let b = check_bound(&random_instance(&mut rng, &limits, &spec)?)?;
        writeln!(
            report,
            "{i},{},{},{},{},{},{},{},{},{}",
            b.n_examples,
            b.n_features,
            b.root_impurity,
            b.greedy_cost,
            b.opt_cost,
            b.ratio,
            b.factor,
            b.comparable,
            b.holds()
        )?;
        if !b.comparable {
            skipped += 1;
            log::info!("instance {i}: greedy stopped on an impure leaf, not compared");
        } else if !b.holds() {
            violations += 1;
            eprintln!(
                "instance {i}: greedy {} > ({:.4}) x OPT {}",
                b.greedy_cost, b.factor, b.opt_cost
            );
        } else if b.root_impurity > 0 {
            worst = worst.max(b.ratio / b.factor);
        }
    }
    if let Some(path) = &args.out {
        super::write_out(Some(path), report.as_bytes())?;
    }
    eprintln!(
        "{} instances with {spec}: {} compared, {skipped} not comparable, {violations} violations, largest ratio/bound {worst:.4}",
        args.instances,
        args.instances - skipped
    );
    if violations > 0 {
        return Err(Failure::BoundViolation(format!(
            "{violations} instance(s) violate the approximation bound"
        ))
        .into());
    }
    Ok(())
}
