use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use sptdiff::io::write_trajectories;
use sptdiff::processes::{simulate, ProcessSpec, Start};
use sptdiff::RngSeed;

use crate::mixture;
use crate::util::parse_pair;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ProcessArg {
    Brownian,
    Drift,
    Ou,
    Fbm,
}

#[derive(Args)]
pub struct SimulateArgs {
    /// Process to simulate (omit when using --mixture)
    #[arg(long, value_enum, conflicts_with = "mixture")]
    process: Option<ProcessArg>,

    /// Diffusion coefficient
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,

    /// Drift velocity `vx,vy` (drift process)
    #[arg(long)]
    velocity: Option<String>,

    /// Restoring rate (Ornstein-Uhlenbeck)
    #[arg(long)]
    lambda: Option<f64>,

    /// Equilibrium position `x,y` (Ornstein-Uhlenbeck)
    #[arg(long, default_value = "0,0")]
    theta: String,

    /// Draw the start from the stationary law (Ornstein-Uhlenbeck only)
    #[arg(long)]
    stationary: bool,

    /// Hurst exponent in (0,1) (fractional Brownian motion)
    #[arg(long)]
    hurst: Option<f64>,

    /// Emit a labelled benchmark mixture instead of a single process
    #[arg(long)]
    mixture: bool,

    /// Number of tracks in the mixture
    #[arg(long, default_value_t = 100)]
    m: usize,

    /// Fraction of free-diffusion tracks in the mixture
    #[arg(long = "m0-frac", default_value_t = 0.4)]
    m0_frac: f64,

    /// Increments per track
    #[arg(short = 'n', long, default_value_t = 30)]
    increments: usize,

    /// Number of tracks (single-process mode)
    #[arg(long, default_value_t = 1)]
    count: usize,

    /// Lag between observations, seconds
    #[arg(long, default_value_t = 1.0)]
    dt: f64,

    /// Start position `x,y`
    #[arg(long, default_value = "0,0")]
    x0: String,

    /// Base seed; track k draws from stream k
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output trajectory file
    #[arg(short, long)]
    out: PathBuf,
}

pub fn run(args: SimulateArgs) -> Result<()> {
    let base = RngSeed::new(args.seed);
    if args.mixture {
        if !(0.0..=1.0).contains(&args.m0_frac) {
            bail!(sptdiff::Error::InvalidParameter(format!(
                "m0-frac must lie in [0,1], got {}",
                args.m0_frac
            )));
        }
        let (tracks, truth) =
            mixture::corpus(args.m, args.m0_frac, args.increments, args.dt, args.sigma, base);
        write_trajectories(&args.out, &tracks, Some(&truth))?;
        eprintln!(
            "wrote {} labelled tracks ({} increments each) to {}",
            tracks.len(),
            args.increments,
            args.out.display()
        );
        return Ok(());
    }

    let spec = match args.process {
        None => bail!("choose --process or --mixture"),
        Some(ProcessArg::Brownian) => ProcessSpec::brownian(args.sigma)?,
        Some(ProcessArg::Drift) => {
            let v = args
                .velocity
                .as_deref()
                .context("drift process needs --velocity vx,vy")?;
            ProcessSpec::drift_brownian(args.sigma, parse_pair(v)?)?
        }
        Some(ProcessArg::Ou) => {
            let lambda = args.lambda.context("ornstein-uhlenbeck needs --lambda")?;
            ProcessSpec::ornstein_uhlenbeck(args.sigma, lambda, parse_pair(&args.theta)?)?
        }
        Some(ProcessArg::Fbm) => {
            let hurst = args.hurst.context("fbm needs --hurst")?;
            ProcessSpec::fractional_brownian(args.sigma, hurst)?
        }
    };
    let start = if args.stationary {
        Start::Stationary
    } else {
        Start::At(parse_pair(&args.x0)?)
    };
    let tracks: Vec<_> = (0..args.count)
        .map(|k| {
            simulate(&spec, args.increments, args.dt, 0.0, start, base.stream(k as u64))
                .map(|t| t.with_track_id(format!("t{k:05}")))
        })
        .collect::<sptdiff::Result<_>>()?;
    write_trajectories(&args.out, &tracks, None)?;
    eprintln!("wrote {} tracks to {}", tracks.len(), args.out.display());
    Ok(())
}
