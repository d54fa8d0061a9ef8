//! The four-process benchmark mixture used by `simulate --mixture` and the
//! FDR/confusion benchmarks.

use std::collections::HashMap;

use sptdiff::processes::{simulate, ProcessSpec, Start};
use sptdiff::{Hypothesis, RngSeed, Trajectory};

/// Benchmark alternative parameters; each gives the single test roughly 80%
/// power at n = 30, alpha = 0.05.
pub const OU_LAMBDA: f64 = 0.53;
pub const FBM_SUB_HURST: f64 = 0.13;
pub const DRIFT_SPEED: f64 = 0.66;
pub const FBM_SUP_HURST: f64 = 0.85;

/// `m0` free-diffusion tracks, the remainder split evenly between the two
/// alternatives, each alternative split evenly between its two models.
pub fn composition(m: usize, m0_frac: f64) -> [usize; 5] {
    let m0 = (m0_frac * m as f64).round() as usize;
    let k1 = (m - m0) / 2;
    let k2 = m - m0 - k1;
    [m0, k1 / 2, k1 - k1 / 2, k2 / 2, k2 - k2 / 2]
}

pub fn specs(sigma: f64) -> [(ProcessSpec, Start, Hypothesis); 5] {
    let v = sigma * DRIFT_SPEED / 2f64.sqrt();
    [
        (
            ProcessSpec::brownian(sigma).expect("sigma validated by caller"),
            Start::At([0.0, 0.0]),
            Hypothesis::Null,
        ),
        (
            ProcessSpec::ornstein_uhlenbeck(sigma, OU_LAMBDA, [0.0, 0.0]).expect("valid"),
            Start::Stationary,
            Hypothesis::Sub,
        ),
        (
            ProcessSpec::fractional_brownian(sigma, FBM_SUB_HURST).expect("valid"),
            Start::At([0.0, 0.0]),
            Hypothesis::Sub,
        ),
        (
            ProcessSpec::drift_brownian(sigma, [v, v]).expect("valid"),
            Start::At([0.0, 0.0]),
            Hypothesis::Sup,
        ),
        (
            ProcessSpec::fractional_brownian(sigma, FBM_SUP_HURST).expect("valid"),
            Start::At([0.0, 0.0]),
            Hypothesis::Sup,
        ),
    ]
}

/// One labelled corpus; track k draws from `seed.stream(k)`.
pub fn corpus(
    m: usize,
    m0_frac: f64,
    n: usize,
    dt: f64,
    sigma: f64,
    seed: RngSeed,
) -> (Vec<Trajectory>, HashMap<String, Hypothesis>) {
    let mut tracks = Vec::with_capacity(m);
    let mut truth = HashMap::with_capacity(m);
    let mut k = 0u64;
    for (group, &count) in composition(m, m0_frac).iter().enumerate() {
        let (spec, start, hypothesis) = specs(sigma)[group];
        for _ in 0..count {
            let id = format!("t{k:05}");
            let traj = simulate(&spec, n, dt, 0.0, start, seed.stream(k))
                .expect("validated spec")
                .with_track_id(&id);
            truth.insert(id, hypothesis);
            tracks.push(traj);
            k += 1;
        }
    }
    (tracks, truth)
}
