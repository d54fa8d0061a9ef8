use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use sptdiff::RngSeed;

use crate::util::{load_or_build_table, MethodArg};

#[derive(Args)]
pub struct TableArgs {
    /// Trajectory increment count the table calibrates
    #[arg(short = 'n', long)]
    increments: usize,

    /// Monte Carlo sample size
    #[arg(short = 'N', long, default_value_t = 100_001)]
    replicates: usize,

    /// Base seed of the calibration sample
    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Sigma estimator the statistic standardizes with
    #[arg(long, value_enum, default_value = "first-diff")]
    method: MethodArg,

    /// Directory the table file is written to
    #[arg(long, default_value = "tables")]
    out_dir: PathBuf,
}

pub fn run(args: TableArgs) -> Result<()> {
    let table = load_or_build_table(
        &args.out_dir,
        args.increments,
        args.replicates,
        RngSeed::new(args.seed),
        args.method.into(),
    )?;
    println!(
        "table n={} N={} q(0.025)={:.4} q(0.5)={:.4} q(0.975)={:.4}",
        table.n(),
        table.sample_size(),
        table.quantile(0.025)?,
        table.quantile(0.5)?,
        table.quantile(0.975)?,
    );
    Ok(())
}
