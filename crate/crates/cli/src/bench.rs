//! Benchmark scenarios: each emits machine-readable data files plus a short
//! human summary, all seeded and byte-reproducible.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Subcommand};
use rand::Rng;
use rayon::prelude::*;
use sptdiff::estimators::{msd_classify, MsdClassifyConfig, SigmaMethod};
use sptdiff::multitest::{procedure1, score_against_truth, BhMode};
use sptdiff::processes::{simulate, ProcessSpec, Start};
use sptdiff::teststat::{asymptotic_cdf_s0, build_null_table, t_statistic};
use sptdiff::{Hypothesis, MotionClass, RngSeed, Trajectory};

use crate::mixture;
use crate::util::{load_or_build_table, provenance};

#[derive(Args)]
pub struct BenchArgs {
    #[command(subcommand)]
    scenario: Scenario,

    /// Base seed; every scenario is bit-reproducible given it
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Divide replicate counts by 100 for a quick run (tolerances widen
    /// accordingly)
    #[arg(long, global = true)]
    fast: bool,

    /// Directory benchmark data files are written to
    #[arg(long, global = true, default_value = "bench-out")]
    out_dir: PathBuf,

    /// Calibration table cache
    #[arg(long, global = true, default_value = "tables")]
    table_dir: PathBuf,

    /// Sample size of calibration tables used by power/fdr/confusion runs
    #[arg(long, global = true, default_value_t = 100_001)]
    table_replicates: usize,

    /// Seed of those calibration tables
    #[arg(long, global = true, default_value_t = 1)]
    table_seed: u64,
}

#[derive(Subcommand)]
enum Scenario {
    /// Small-sample null quantiles per trajectory size, with the asymptote
    QuantileTable {
        /// Trajectory sizes in observations (a size-s track has s-1 increments)
        #[arg(long, value_delimiter = ',', default_values_t = vec![10usize, 30, 100])]
        sizes: Vec<usize>,
        #[arg(short = 'N', long, default_value_t = 1_000_001)]
        replicates: usize,
    },
    /// Power of the single test across a parameter grid and track lengths
    PowerSingle {
        #[arg(long, value_enum)]
        model: PowerModel,
        /// Model parameter grid (lambda, hurst, or drift speed)
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
        /// Track lengths in increments
        #[arg(long, value_delimiter = ',', default_values_t = vec![10usize, 30, 50])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 10_001)]
        replicates: usize,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Confined sampler: the exact law, or the reference convention the
        /// published power curves use (mean reversion e^{-lambda dt} with
        /// unit-lag noise, start N(theta, sigma^2/(2 lambda)))
        #[arg(long, value_enum, default_value = "reference")]
        ou_sampler: OuSampler,
    },
    /// FDR / mdFDR / average power of the directional step-up procedures
    /// across the true-null fraction sweep
    FdrSweep {
        #[arg(long, default_value_t = 100)]
        m: usize,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 0.2, 0.4, 0.6, 0.8])]
        m0_fracs: Vec<f64>,
        #[arg(short = 'n', long, default_value_t = 30)]
        increments: usize,
        #[arg(long, default_value_t = 10_001)]
        replicates: usize,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Confusion matrices of the adaptive procedure and the MSD baseline on
    /// one labelled corpus
    Confusion {
        #[arg(long, default_value_t = 200)]
        m: usize,
        #[arg(long = "m0-frac", default_value_t = 0.4)]
        m0_frac: f64,
        #[arg(short = 'n', long, default_value_t = 30)]
        increments: usize,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Distance between the empirical null law and its asymptote
    Donsker {
        #[arg(short = 'n', long, default_value_t = 1000)]
        increments: usize,
        #[arg(long, default_value_t = 10_000)]
        replicates: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum PowerModel {
    Ou,
    Fbm,
    Drift,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OuSampler {
    Exact,
    Reference,
}

pub fn run(args: BenchArgs) -> Result<()> {
    fs::create_dir_all(&args.out_dir)?;
    match &args.scenario {
        Scenario::QuantileTable { sizes, replicates } => {
            quantile_table(&args, sizes, scaled(*replicates, args.fast))
        }
        Scenario::PowerSingle {
            model,
            grid,
            sizes,
            replicates,
            alpha,
            ou_sampler,
        } => power_single(
            &args,
            *model,
            grid.clone(),
            sizes,
            scaled(*replicates, args.fast),
            *alpha,
            *ou_sampler,
        ),
        Scenario::FdrSweep {
            m,
            m0_fracs,
            increments,
            replicates,
            alpha,
        } => fdr_sweep(&args, *m, m0_fracs, *increments, scaled(*replicates, args.fast), *alpha),
        Scenario::Confusion {
            m,
            m0_frac,
            increments,
            alpha,
        } => confusion(&args, *m, *m0_frac, *increments, *alpha),
        Scenario::Donsker {
            increments,
            replicates,
        } => donsker(&args, *increments, scaled(*replicates, args.fast)),
    }
}

fn scaled(replicates: usize, fast: bool) -> usize {
    if fast {
        (replicates / 100).max(1001)
    } else {
        replicates
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(path)
}

/// Invert the series CDF by bisection (it is continuous and increasing).
fn asymptotic_quantile(order: f64) -> f64 {
    let (mut lo, mut hi) = (1e-3, 20.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if asymptotic_cdf_s0(mid, 80).expect("positive argument").value < order {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn quantile_table(args: &BenchArgs, sizes: &[usize], replicates: usize) -> Result<()> {
    let mut csv = provenance(
        "bench quantile-table",
        &[
            ("sizes", format!("{sizes:?}")),
            ("replicates", replicates.to_string()),
            ("seed", args.seed.to_string()),
        ],
    );
    csv.push_str("size,n_increments,q025,q975\n");
    let mut summary = String::from("null quantiles of the standardized maximal distance\n");
    for (i, &size) in sizes.iter().enumerate() {
        anyhow::ensure!(size >= 3, "size must be at least 3 observations");
        let table = build_null_table(
            size - 1,
            replicates,
            RngSeed::with_stream(args.seed, (i as u64) << 40),
            SigmaMethod::FirstDiff,
        )?;
        let (lo, hi) = (table.quantile(0.025)?, table.quantile(0.975)?);
        let _ = writeln!(csv, "{size},{},{lo},{hi}", size - 1);
        let _ = writeln!(summary, "size {size:>4}: q(2.5%) = {lo:.3}  q(97.5%) = {hi:.3}");
    }
    let (alo, ahi) = (asymptotic_quantile(0.025), asymptotic_quantile(0.975));
    let _ = writeln!(csv, "asymptotic,,{alo},{ahi}");
    let _ = writeln!(summary, "asymptote : q(2.5%) = {alo:.3}  q(97.5%) = {ahi:.3}");
    write_file(&args.out_dir, "quantile_table.csv", &csv)?;
    write_file(&args.out_dir, "quantile_table_summary.txt", &summary)?;
    Ok(())
}

fn reference_confined_track(
    n: usize,
    lambda: f64,
    x0_seed: RngSeed,
    path_seed: RngSeed,
) -> Trajectory {
    let sigma_eff = (2.0 * lambda / (1.0 - (-2.0 * lambda).exp())).sqrt();
    let spec = ProcessSpec::ornstein_uhlenbeck(sigma_eff, lambda, [0.0, 0.0]).expect("valid");
    let sd0 = 1.0 / (2.0 * lambda).sqrt();
    let mut rng = x0_seed.rng();
    let x0 = [
        sd0 * rng.sample::<f64, _>(rand_distr::StandardNormal),
        sd0 * rng.sample::<f64, _>(rand_distr::StandardNormal),
    ];
    simulate(&spec, n, 1.0, 0.0, Start::At(x0), path_seed).expect("valid spec")
}

#[allow(clippy::too_many_arguments)]
fn power_single(
    args: &BenchArgs,
    model: PowerModel,
    grid: Option<Vec<f64>>,
    sizes: &[usize],
    replicates: usize,
    alpha: f64,
    ou_sampler: OuSampler,
) -> Result<()> {
    let grid = grid.unwrap_or_else(|| match model {
        PowerModel::Ou => (1..=10).map(|i| 0.1 * i as f64).collect(),
        PowerModel::Fbm => vec![0.05, 0.13, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85, 0.95],
        PowerModel::Drift => (1..=10).map(|i| 0.1 * i as f64).collect(),
    });
    let model_name = match model {
        PowerModel::Ou => "ou",
        PowerModel::Fbm => "fbm",
        PowerModel::Drift => "drift",
    };
    let mut csv = provenance(
        "bench power-single",
        &[
            ("model", model_name.to_string()),
            ("grid", format!("{grid:?}")),
            ("sizes", format!("{sizes:?}")),
            ("replicates", replicates.to_string()),
            ("alpha", alpha.to_string()),
            ("ou_sampler", format!("{ou_sampler:?}")),
            ("seed", args.seed.to_string()),
        ],
    );
    csv.push_str("param,n,reject_sub,reject_sup\n");

    let mut rates: HashMap<(usize, usize), (f64, f64)> = HashMap::new();
    for (gi, &param) in grid.iter().enumerate() {
        for (si, &n) in sizes.iter().enumerate() {
            let table = load_or_build_table(
                &args.table_dir,
                n,
                args.table_replicates,
                RngSeed::new(args.table_seed),
                SigmaMethod::FirstDiff,
            )?;
            let lo = table.quantile(alpha / 2.0)?;
            let hi = table.quantile(1.0 - alpha / 2.0)?;
            let cfg = ((gi * sizes.len() + si) as u64) << 40;
            let seed = RngSeed::with_stream(args.seed, cfg);
            let x0_seed = RngSeed::with_stream(args.seed.wrapping_add(0x5EED), cfg);
            let (nsub, nsup) = (0..replicates as u64)
                .into_par_iter()
                .map(|r| {
                    let track = match model {
                        PowerModel::Ou => match ou_sampler {
                            OuSampler::Exact => {
                                let spec =
                                    ProcessSpec::ornstein_uhlenbeck(1.0, param, [0.0; 2]).expect("valid");
                                simulate(&spec, n, 1.0, 0.0, Start::Stationary, seed.stream(r))
                                    .expect("valid spec")
                            }
                            OuSampler::Reference => reference_confined_track(
                                n,
                                param,
                                x0_seed.stream(r),
                                seed.stream(r),
                            ),
                        },
                        PowerModel::Fbm => {
                            let spec =
                                ProcessSpec::fractional_brownian(1.0, param).expect("valid hurst");
                            simulate(&spec, n, 1.0, 0.0, Start::At([0.0; 2]), seed.stream(r))
                                .expect("valid spec")
                        }
                        PowerModel::Drift => {
                            let v = param / 2f64.sqrt();
                            let spec = ProcessSpec::drift_brownian(1.0, [v, v]).expect("valid");
                            simulate(&spec, n, 1.0, 0.0, Start::At([0.0; 2]), seed.stream(r))
                                .expect("valid spec")
                        }
                    };
                    let t = t_statistic(&track, SigmaMethod::FirstDiff).expect("moving track");
                    ((t < lo) as usize, (t > hi) as usize)
                })
                .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
            let (psub, psup) = (
                nsub as f64 / replicates as f64,
                nsup as f64 / replicates as f64,
            );
            rates.insert((gi, si), (psub, psup));
            let _ = writeln!(csv, "{param},{n},{psub},{psup}");
        }
    }
    write_file(&args.out_dir, &format!("power_{model_name}.csv"), &csv)?;

    // monotonicity report: power should grow with n at a fixed alternative
    let mut summary = format!("power of the single test, model {model_name}\n");
    let direction = |param: f64| -> fn(&(f64, f64)) -> f64 {
        match model {
            PowerModel::Ou => |r| r.0,
            PowerModel::Drift => |r| r.1,
            PowerModel::Fbm => {
                if param < 0.5 {
                    |r: &(f64, f64)| r.0
                } else {
                    |r: &(f64, f64)| r.1
                }
            }
        }
    };
    for (gi, &param) in grid.iter().enumerate() {
        if matches!(model, PowerModel::Fbm) && (param - 0.5).abs() < 0.05 {
            continue;
        }
        let pick = direction(param);
        let series: Vec<f64> = (0..sizes.len()).map(|si| pick(&rates[&(gi, si)])).collect();
        let monotone = series.windows(2).all(|w| w[1] >= w[0] - 0.02);
        let _ = writeln!(
            summary,
            "param {param:>6}: power {series:?} {}",
            if monotone { "(increases with n)" } else { "(NOT monotone in n)" }
        );
    }
    write_file(&args.out_dir, &format!("power_{model_name}_summary.txt"), &summary)?;
    Ok(())
}

fn fdr_sweep(
    args: &BenchArgs,
    m: usize,
    m0_fracs: &[f64],
    n: usize,
    replicates: usize,
    alpha: f64,
) -> Result<()> {
    let table = load_or_build_table(
        &args.table_dir,
        n,
        args.table_replicates,
        RngSeed::new(args.table_seed),
        SigmaMethod::FirstDiff,
    )?;
    let mut csv = provenance(
        "bench fdr-sweep",
        &[
            ("m", m.to_string()),
            ("m0_fracs", format!("{m0_fracs:?}")),
            ("increments", n.to_string()),
            ("replicates", replicates.to_string()),
            ("alpha", alpha.to_string()),
            ("seed", args.seed.to_string()),
        ],
    );
    csv.push_str("m,m0_frac,mode,fdr_pct,mdfdr_pct,avg_power_sub,avg_power_sup\n");
    let mut summary = String::from("directional step-up error rates (percent)\n");
    // pooled two-sided p-values per true hypothesis for the quartile file,
    // captured at the first fraction with both alternatives present
    let mut quartile_pool: Option<(f64, HashMap<Hypothesis, Vec<f64>>)> = None;

    // per replicate: [fdr, mdfdr, power_sub, power_sup] per mode
    struct Replicate {
        standard: [f64; 4],
        adaptive: [f64; 4],
        pooled_p: Vec<(Hypothesis, f64)>,
    }

    for (fi, &frac) in m0_fracs.iter().enumerate() {
        let seed = RngSeed::with_stream(args.seed, (fi as u64) << 40);
        let cells: Vec<Replicate> = (0..replicates as u64)
            .into_par_iter()
            .map(|r| {
                let (corpus, truth) =
                    mixture::corpus(m, frac, n, 1.0, 1.0, seed.stream(r * m as u64));
                let records: Vec<sptdiff::multitest::PValueRecord> = corpus
                    .iter()
                    .map(|t| {
                        let stat = t_statistic(t, SigmaMethod::FirstDiff).expect("moving");
                        let p = table.p_values(stat);
                        sptdiff::multitest::PValueRecord {
                            track_id: t.track_id().to_string(),
                            p: p.p_two_sided,
                            p_sub: p.p_sub,
                            p_sup: p.p_sup,
                        }
                    })
                    .collect();
                let mut by_mode = [[0.0f64; 4]; 2];
                for (j, mode) in [BhMode::Standard, BhMode::Adaptive].into_iter().enumerate() {
                    let report = procedure1(&records, alpha, mode).expect("valid records");
                    let c = score_against_truth(&report, &truth).expect("complete truth");
                    by_mode[j] = [
                        c.fdr_realized(),
                        c.mdfdr_realized(),
                        c.avg_power_sub(),
                        c.avg_power_sup(),
                    ];
                }
                let pooled_p = if r < 200 {
                    records.iter().map(|rec| (truth[&rec.track_id], rec.p)).collect()
                } else {
                    Vec::new()
                };
                Replicate {
                    standard: by_mode[0],
                    adaptive: by_mode[1],
                    pooled_p,
                }
            })
            .collect();
        let mean_of = |pick: &dyn Fn(&Replicate) -> [f64; 4]| -> [f64; 4] {
            let mut acc = [0.0f64; 4];
            for c in &cells {
                let v = pick(c);
                for (a, x) in acc.iter_mut().zip(v) {
                    *a += x;
                }
            }
            acc.map(|a| a / cells.len() as f64)
        };
        let rows = [
            ("standard", mean_of(&|c| c.standard)),
            ("adaptive", mean_of(&|c| c.adaptive)),
        ];
        for (mode, [fdr, mdfdr, ps, pp]) in rows {
            let _ = writeln!(
                csv,
                "{m},{frac},{mode},{},{},{ps},{pp}",
                100.0 * fdr,
                100.0 * mdfdr
            );
            let _ = writeln!(
                summary,
                "m0/m={frac:<4} {mode:<9} FDR={:<6.2} mdFDR={:<6.2} power(sub)={ps:.3} power(sup)={pp:.3}",
                100.0 * fdr,
                100.0 * mdfdr
            );
        }
        if quartile_pool.is_none() && frac > 0.0 && frac < 1.0 {
            let mut by_hyp: HashMap<Hypothesis, Vec<f64>> = HashMap::new();
            for cell in &cells {
                for (h, p) in &cell.pooled_p {
                    by_hyp.entry(*h).or_default().push(*p);
                }
            }
            quartile_pool = Some((frac, by_hyp));
        }
    }
    write_file(&args.out_dir, "fdr_sweep.csv", &csv)?;
    write_file(&args.out_dir, "fdr_sweep_summary.txt", &summary)?;

    if let Some((frac, mut by_hyp)) = quartile_pool {
        let mut qcsv = provenance(
            "bench fdr-sweep (p-value quartiles)",
            &[("m", m.to_string()), ("m0_frac", frac.to_string())],
        );
        qcsv.push_str("hypothesis,min,q1,median,q3,max\n");
        for h in [Hypothesis::Null, Hypothesis::Sub, Hypothesis::Sup] {
            if let Some(ps) = by_hyp.get_mut(&h) {
                ps.sort_unstable_by(f64::total_cmp);
                let q = |x: f64| ps[((x * (ps.len() - 1) as f64).round() as usize).min(ps.len() - 1)];
                let _ = writeln!(
                    qcsv,
                    "{},{},{},{},{},{}",
                    h.tag(),
                    ps[0],
                    q(0.25),
                    q(0.5),
                    q(0.75),
                    ps[ps.len() - 1]
                );
            }
        }
        write_file(&args.out_dir, "pvalue_quartiles.csv", &qcsv)?;
    }
    Ok(())
}

fn confusion(args: &BenchArgs, m: usize, m0_frac: f64, n: usize, alpha: f64) -> Result<()> {
    let table = load_or_build_table(
        &args.table_dir,
        n,
        args.table_replicates,
        RngSeed::new(args.table_seed),
        SigmaMethod::FirstDiff,
    )?;
    let (corpus, truth) = mixture::corpus(m, m0_frac, n, 1.0, 1.0, RngSeed::new(args.seed));
    let records: Vec<sptdiff::multitest::PValueRecord> = corpus
        .iter()
        .map(|t| {
            let stat = t_statistic(t, SigmaMethod::FirstDiff).expect("moving");
            let p = table.p_values(stat);
            sptdiff::multitest::PValueRecord {
                track_id: t.track_id().to_string(),
                p: p.p_two_sided,
                p_sub: p.p_sub,
                p_sup: p.p_sup,
            }
        })
        .collect();
    let report = procedure1(&records, alpha, BhMode::Adaptive)?;
    let mut label_of: HashMap<&str, MotionClass> = HashMap::new();
    for id in &report.rejected_sub {
        label_of.insert(id.as_str(), MotionClass::Subdiffusion);
    }
    for id in &report.rejected_sup {
        label_of.insert(id.as_str(), MotionClass::Superdiffusion);
    }

    let hyp_index = |h: Hypothesis| match h {
        Hypothesis::Null => 0usize,
        Hypothesis::Sub => 1,
        Hypothesis::Sup => 2,
    };
    let mut proc_counts = [[0usize; 3]; 3];
    let mut msd_counts = [[0usize; 4]; 3];
    let msd_cfg = MsdClassifyConfig::default();
    for t in &corpus {
        let row = hyp_index(truth[t.track_id()]);
        let proc_label = label_of
            .get(t.track_id())
            .copied()
            .unwrap_or(MotionClass::Brownian);
        let pc = match proc_label {
            MotionClass::Brownian => 0,
            MotionClass::Subdiffusion => 1,
            _ => 2,
        };
        proc_counts[row][pc] += 1;
        let mc = match msd_classify(t, &msd_cfg)?.label {
            MotionClass::Brownian => 0,
            MotionClass::Subdiffusion => 1,
            MotionClass::Superdiffusion => 2,
            MotionClass::NotMoving => 3,
        };
        msd_counts[row][mc] += 1;
    }

    let header = [
        ("m", m.to_string()),
        ("m0_frac", m0_frac.to_string()),
        ("increments", n.to_string()),
        ("alpha", alpha.to_string()),
        ("seed", args.seed.to_string()),
    ];
    let rows = ["brownian", "subdiffusion", "superdiffusion"];
    let mut csv = provenance("bench confusion (adaptive directional step-up)", &header);
    csv.push_str("truth,decided_brownian,decided_subdiffusion,decided_superdiffusion\n");
    for (r, row) in rows.iter().enumerate() {
        let _ = writeln!(
            csv,
            "{row},{},{},{}",
            proc_counts[r][0], proc_counts[r][1], proc_counts[r][2]
        );
    }
    write_file(&args.out_dir, "confusion_procedure.csv", &csv)?;

    let mut csv = provenance("bench confusion (MSD baseline)", &header);
    csv.push_str("truth,decided_brownian,decided_subdiffusion,decided_superdiffusion,decided_not_moving\n");
    for (r, row) in rows.iter().enumerate() {
        let _ = writeln!(
            csv,
            "{row},{},{},{},{}",
            msd_counts[r][0], msd_counts[r][1], msd_counts[r][2], msd_counts[r][3]
        );
    }
    write_file(&args.out_dir, "confusion_msd.csv", &csv)?;

    let mut summary = String::from("confusion rows (truth: brownian/sub/sup)\n");
    let _ = writeln!(summary, "adaptive procedure: {proc_counts:?}");
    let _ = writeln!(summary, "msd baseline      : {msd_counts:?}");
    if let Some(m0) = report.m0_hat {
        let _ = writeln!(summary, "estimated true-null count: {m0} of {m}");
    }
    write_file(&args.out_dir, "confusion_summary.txt", &summary)?;
    Ok(())
}

fn donsker(args: &BenchArgs, n: usize, replicates: usize) -> Result<()> {
    let spec = ProcessSpec::brownian(1.0).unwrap();
    let seed = RngSeed::new(args.seed);
    let mut stats: Vec<f64> = (0..replicates as u64)
        .into_par_iter()
        .map(|r| {
            let t = simulate(&spec, n, 1.0, 0.0, Start::At([0.0; 2]), seed.stream(r))
                .expect("valid spec");
            t_statistic(&t, SigmaMethod::FirstDiff).expect("moving track")
        })
        .collect();
    stats.sort_unstable_by(f64::total_cmp);

    let mut csv = provenance(
        "bench donsker",
        &[
            ("increments", n.to_string()),
            ("replicates", replicates.to_string()),
            ("seed", args.seed.to_string()),
        ],
    );
    csv.push_str("t,ecdf,asymptotic_cdf\n");
    let mut kdist: f64 = 0.0;
    for (i, &t) in stats.iter().enumerate() {
        let f = asymptotic_cdf_s0(t, 80)?.value;
        let ecdf = (i + 1) as f64 / replicates as f64;
        kdist = kdist
            .max((f - i as f64 / replicates as f64).abs())
            .max((ecdf - f).abs());
        let _ = writeln!(csv, "{t},{ecdf},{f}");
    }
    write_file(&args.out_dir, "donsker_cdf.csv", &csv)?;
    let summary = format!(
        "empirical null law at n = {n} vs the asymptotic series\nKolmogorov distance = {kdist:.5} over {replicates} replicates\n"
    );
    write_file(&args.out_dir, "donsker_summary.txt", &summary)?;
    Ok(())
}
