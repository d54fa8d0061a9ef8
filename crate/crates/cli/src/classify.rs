use std::collections::HashMap;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use sptdiff::estimators::{msd_classify, MsdClassifyConfig};
use sptdiff::io::{
    apply_filters, load_trajectories, write_classification_map, write_report_delimited,
    write_summary_text, FilterPolicy, ReportEntry, SkippedTrack, TrajectoryFile,
};
use sptdiff::multitest::{procedure1, BhMode, PValueRecord};
use sptdiff::teststat::{decide, t_statistic, NullTable};
use sptdiff::{Error, MotionClass, RngSeed, Trajectory};

use crate::util::{load_or_build_table, MethodArg};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ModeArg {
    /// Three-decision test per track at level alpha
    Single,
    /// Step-up FDR control across the collection
    Bh,
    /// Step-up with the estimated true-null count
    AdaptiveBh,
    /// MSD log-log-slope baseline
    Msd,
}

#[derive(Args)]
pub struct ClassifyArgs {
    /// Input trajectory file
    #[arg(short, long)]
    input: PathBuf,

    /// Test level (single) or FDR target (bh modes)
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,

    #[arg(long, value_enum, default_value = "bh")]
    mode: ModeArg,

    /// Sigma estimator used by the statistic
    #[arg(long, value_enum, default_value = "first-diff")]
    method: MethodArg,

    /// Calibration table cache (tables are built on demand per track length)
    #[arg(long, default_value = "tables")]
    table_dir: PathBuf,

    /// Monte Carlo sample size of on-demand tables
    #[arg(long, default_value_t = 100_001)]
    table_replicates: usize,

    /// Base seed of on-demand tables
    #[arg(long, default_value_t = 1)]
    table_seed: u64,

    /// Override the lag of the input file (seconds)
    #[arg(long)]
    dt: Option<f64>,

    /// Override the coordinate scale of the input file
    #[arg(long)]
    scale: Option<f64>,

    /// Keep only tracks with at least this many distinct positions
    #[arg(long, default_value_t = 20)]
    min_distinct: usize,

    /// Drop tracks shorter than this many observations
    #[arg(long)]
    min_length: Option<usize>,

    /// Drop tracks longer than this many observations
    #[arg(long)]
    max_length: Option<usize>,

    /// MSD mode: number of fitted lags (default: the whole curve)
    #[arg(long)]
    fit_lags: Option<usize>,

    /// MSD mode: lower slope threshold
    #[arg(long, default_value_t = 0.9)]
    beta_low: f64,

    /// MSD mode: upper slope threshold
    #[arg(long, default_value_t = 1.1)]
    beta_high: f64,

    /// MSD mode: immobility radius (default: 3.5 sigma1 sqrt(dt))
    #[arg(long)]
    immobile_radius: Option<f64>,

    /// Directory the reports are written to
    #[arg(long, default_value = "results")]
    out_dir: PathBuf,
}

pub fn run(args: ClassifyArgs) -> Result<()> {
    let mut file = TrajectoryFile::read(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    if args.dt.is_some() {
        file.dt = args.dt;
    }
    if args.scale.is_some() {
        file.scale = args.scale;
    }
    let loaded = load_trajectories(&file);
    if loaded.trajectories.is_empty() && loaded.skipped.is_empty() {
        eprintln!("warning: {} holds no data rows", args.input.display());
    }
    let policy = FilterPolicy {
        min_distinct_positions: args.min_distinct,
        min_length: args.min_length,
        max_length: args.max_length,
    };
    let (kept, filtered) = apply_filters(loaded.trajectories, &policy);
    let mut skipped = loaded.skipped;
    skipped.extend(filtered);

    let entries = match args.mode {
        ModeArg::Msd => msd_entries(&args, &kept)?,
        ModeArg::Single => single_entries(&args, &kept)?,
        ModeArg::Bh | ModeArg::AdaptiveBh => {
            let mode = if args.mode == ModeArg::Bh {
                BhMode::Standard
            } else {
                BhMode::Adaptive
            };
            bh_entries(&args, &kept, mode)?
        }
    };

    fs::create_dir_all(&args.out_dir)?;
    write_report_delimited(args.out_dir.join("decisions.csv"), &entries)?;
    write_summary_text(
        args.out_dir.join("summary.txt"),
        &format!(
            "sptdiff classify mode={:?} alpha={} input={}",
            args.mode,
            args.alpha,
            args.input.display()
        ),
        &entries,
    )?;
    let by_id: HashMap<&str, MotionClass> =
        entries.iter().map(|e| (e.track_id.as_str(), e.label)).collect();
    let items: Vec<(&Trajectory, MotionClass)> = kept
        .iter()
        .filter_map(|t| by_id.get(t.track_id()).map(|&c| (t, c)))
        .collect();
    write_classification_map(args.out_dir.join("map.svg"), &items)?;
    write_skip_report(args.out_dir.join("skipped.txt"), &skipped)?;

    println!(
        "classified {} tracks ({} skipped); reports in {}",
        entries.len(),
        skipped.len(),
        args.out_dir.display()
    );
    for (class, count, pct) in sptdiff::io::summary_percentages(&entries) {
        println!("{:>15}: {:>5}  {:5.1}%", class.name(), count, pct);
    }
    Ok(())
}

fn write_skip_report(path: PathBuf, skipped: &[SkippedTrack]) -> Result<()> {
    let mut out = fs::File::create(path)?;
    for s in skipped {
        writeln!(out, "{}\t{}", s.track_id, s.reason)?;
    }
    Ok(())
}

fn msd_entries(args: &ClassifyArgs, kept: &[Trajectory]) -> Result<Vec<ReportEntry>> {
    let cfg = MsdClassifyConfig {
        fit_lags: args.fit_lags,
        beta_low: args.beta_low,
        beta_high: args.beta_high,
        immobile_radius: args.immobile_radius,
    };
    kept.iter()
        .map(|t| {
            let c = msd_classify(t, &cfg)
                .with_context(|| format!("classifying track `{}`", t.track_id()))?;
            Ok(ReportEntry {
                track_id: t.track_id().to_string(),
                n_increments: t.n_increments(),
                t_stat: None,
                p_sub: None,
                p_sup: None,
                p_two_sided: None,
                beta_hat: c.beta_hat,
                label: c.label,
            })
        })
        .collect()
}

/// Tables are exact per track length and cached on disk.
fn tables_for<'a>(
    args: &ClassifyArgs,
    kept: impl Iterator<Item = &'a Trajectory>,
) -> Result<HashMap<usize, NullTable>> {
    let mut tables = HashMap::new();
    for n in kept.map(Trajectory::n_increments) {
        if let std::collections::hash_map::Entry::Vacant(slot) = tables.entry(n) {
            slot.insert(load_or_build_table(
                &args.table_dir,
                n,
                args.table_replicates,
                RngSeed::new(args.table_seed),
                args.method.into(),
            )?);
        }
    }
    Ok(tables)
}

fn blank_entry(t: &Trajectory, label: MotionClass) -> ReportEntry {
    ReportEntry {
        track_id: t.track_id().to_string(),
        n_increments: t.n_increments(),
        t_stat: None,
        p_sub: None,
        p_sup: None,
        p_two_sided: None,
        beta_hat: None,
        label,
    }
}

fn single_entries(args: &ClassifyArgs, kept: &[Trajectory]) -> Result<Vec<ReportEntry>> {
    let tables = tables_for(args, kept.iter())?;
    kept.iter()
        .map(|t| {
            match decide(t, &tables[&t.n_increments()], args.alpha) {
                Ok(r) => Ok(ReportEntry {
                    track_id: t.track_id().to_string(),
                    n_increments: t.n_increments(),
                    t_stat: Some(r.t_stat),
                    p_sub: Some(r.p_sub),
                    p_sup: Some(r.p_sup),
                    p_two_sided: Some(r.p_two_sided),
                    beta_hat: None,
                    label: r.decision.into(),
                }),
                // motionless tracks carry no testable signal
                Err(Error::DegenerateTrajectory(_)) => Ok(blank_entry(t, MotionClass::NotMoving)),
                Err(e) => Err(e).with_context(|| format!("testing track `{}`", t.track_id())),
            }
        })
        .collect()
}

fn bh_entries(args: &ClassifyArgs, kept: &[Trajectory], mode: BhMode) -> Result<Vec<ReportEntry>> {
    let tables = tables_for(args, kept.iter())?;
    let mut entries: Vec<ReportEntry> = Vec::with_capacity(kept.len());
    let mut records: Vec<PValueRecord> = Vec::with_capacity(kept.len());
    for t in kept {
        match t_statistic(t, args.method.into()) {
            Ok(stat) => {
                let p = tables[&t.n_increments()].p_values(stat);
                records.push(PValueRecord {
                    track_id: t.track_id().to_string(),
                    p: p.p_two_sided,
                    p_sub: p.p_sub,
                    p_sup: p.p_sup,
                });
                let mut e = blank_entry(t, MotionClass::Brownian);
                e.t_stat = Some(stat);
                e.p_sub = Some(p.p_sub);
                e.p_sup = Some(p.p_sup);
                e.p_two_sided = Some(p.p_two_sided);
                entries.push(e);
            }
            Err(Error::DegenerateTrajectory(_)) => entries.push(blank_entry(t, MotionClass::NotMoving)),
            Err(e) => return Err(e).with_context(|| format!("testing track `{}`", t.track_id())),
        }
    }
    if !records.is_empty() {
        let report = procedure1(&records, args.alpha, mode)?;
        let mut label_of: HashMap<&str, MotionClass> = HashMap::new();
        for id in &report.rejected_sub {
            label_of.insert(id, MotionClass::Subdiffusion);
        }
        for id in &report.rejected_sup {
            label_of.insert(id, MotionClass::Superdiffusion);
        }
        for e in &mut entries {
            if let Some(&label) = label_of.get(e.track_id.as_str()) {
                e.label = label;
            }
        }
        if let Some(m0) = report.m0_hat {
            eprintln!("estimated true-null count: {m0} of {}", report.m);
        }
    }
    Ok(entries)
}
