//! Shared helpers for the integration suites: the benchmark mixture of the
//! four reference processes and a few summary utilities.

#![allow(dead_code)]

use std::collections::HashMap;

use sptdiff::multitest::PValueRecord;
use sptdiff::processes::{simulate, ProcessSpec, Start};
use sptdiff::teststat::NullTable;
use sptdiff::{Hypothesis, RngSeed, Trajectory};

/// Benchmark alternative parameters: each gives the single test about 80%
/// power at n = 30, alpha = 0.05 (see the acceptance suite).
pub const OU_LAMBDA: f64 = 0.53;
pub const FBM_SUB_HURST: f64 = 0.13;
pub const DRIFT_SPEED: f64 = 0.66;
pub const FBM_SUP_HURST: f64 = 0.85;

/// Composition of the labelled benchmark corpus: `m0` free-diffusion tracks,
/// the rest split evenly between the two alternatives, each alternative
/// split evenly between its two models.
pub fn mixture_composition(m: usize, m0_frac: f64) -> [usize; 5] {
    let m0 = (m0_frac * m as f64).round() as usize;
    let k1 = (m - m0) / 2;
    let k2 = m - m0 - k1;
    let n_ou = k1 / 2;
    let n_drift = k2 / 2;
    [m0, n_ou, k1 - n_ou, n_drift, k2 - n_drift]
}

pub fn mixture_specs() -> [(ProcessSpec, Start, Hypothesis); 5] {
    let v = DRIFT_SPEED / 2f64.sqrt();
    [
        (
            ProcessSpec::brownian(1.0).unwrap(),
            Start::At([0.0, 0.0]),
            Hypothesis::Null,
        ),
        (
            ProcessSpec::ornstein_uhlenbeck(1.0, OU_LAMBDA, [0.0, 0.0]).unwrap(),
            Start::Stationary,
            Hypothesis::Sub,
        ),
        (
            ProcessSpec::fractional_brownian(1.0, FBM_SUB_HURST).unwrap(),
            Start::At([0.0, 0.0]),
            Hypothesis::Sub,
        ),
        (
            ProcessSpec::drift_brownian(1.0, [v, v]).unwrap(),
            Start::At([0.0, 0.0]),
            Hypothesis::Sup,
        ),
        (
            ProcessSpec::fractional_brownian(1.0, FBM_SUP_HURST).unwrap(),
            Start::At([0.0, 0.0]),
            Hypothesis::Sup,
        ),
    ]
}

/// One labelled benchmark corpus; track k draws from `seed.stream(k)`.
pub fn mixture_corpus(
    m: usize,
    m0_frac: f64,
    n: usize,
    seed: RngSeed,
) -> (Vec<Trajectory>, HashMap<String, Hypothesis>) {
    let counts = mixture_composition(m, m0_frac);
    let specs = mixture_specs();
    let mut trajectories = Vec::with_capacity(m);
    let mut truth = HashMap::with_capacity(m);
    let mut k = 0u64;
    for (group, &count) in counts.iter().enumerate() {
        let (spec, start, hypothesis) = &specs[group];
        for _ in 0..count {
            let id = format!("t{k:05}");
            let traj = simulate(spec, n, 1.0, 0.0, *start, seed.stream(k))
                .expect("valid spec")
                .with_track_id(&id);
            truth.insert(id, *hypothesis);
            trajectories.push(traj);
            k += 1;
        }
    }
    (trajectories, truth)
}

/// p-value records for a corpus against a calibration table.
pub fn records_for(corpus: &[Trajectory], table: &NullTable) -> Vec<PValueRecord> {
    corpus
        .iter()
        .map(|t| {
            let stat = sptdiff::teststat::t_statistic(t, table.method()).expect("moving track");
            let p = table.p_values(stat);
            PValueRecord {
                track_id: t.track_id().to_string(),
                p: p.p_two_sided,
                p_sub: p.p_sub,
                p_sup: p.p_sup,
            }
        })
        .collect()
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Standard error of the mean.
pub fn sem(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
    (var / xs.len() as f64).sqrt()
}

pub fn median(xs: &mut [f64]) -> f64 {
    xs.sort_unstable_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}
