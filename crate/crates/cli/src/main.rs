//! `sptdiff`: simulate particle trajectories, classify them into diffusion
//! modes, and reproduce the benchmark tables and curves.

mod bench;
mod classify;
mod mixture;
mod simulate;
mod table;
mod util;

use clap::{Parser, Subcommand};
use sptdiff::Error;

#[derive(Parser)]
#[command(
    name = "sptdiff",
    version,
    about = "Trajectory simulation and diffusion-mode classification",
    after_help = "Exit codes: 0 success, 2 parameter error, 3 input parse error, 4 I/O error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate trajectories of one process, or a labelled benchmark mixture
    Simulate(simulate::SimulateArgs),
    /// Build and persist a null calibration table
    Table(table::TableArgs),
    /// Classify the trajectories of a file and emit reports
    Classify(classify::ClassifyArgs),
    /// Reproduce benchmark tables and curves as data files
    Bench(bench::BenchArgs),
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => simulate::run(args),
        Command::Table(args) => table::run(args),
        Command::Classify(args) => classify::run(args),
        Command::Bench(args) => bench::run(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err:#}");
        std::process::exit(exit_code(&err));
    }
}

fn exit_code(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<Error>() {
        Some(Error::InvalidParameter(_))
        | Some(Error::InsufficientData(_))
        | Some(Error::TableMismatch(_)) => 2,
        Some(Error::Parse { .. }) | Some(Error::Format(_)) | Some(Error::InvalidTrajectory { .. }) => 3,
        Some(Error::Io(_)) => 4,
        Some(_) => 1,
        None => {
            if err.downcast_ref::<std::io::Error>().is_some() {
                4
            } else {
                1
            }
        }
    }
}
