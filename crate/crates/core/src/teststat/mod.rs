//! The single-trajectory three-decision test.
//!
//! The statistic is the standardized maximal distance of the track from its
//! starting point,
//!
//! `T_n = max_{i=1..n} ||X_{t_i} - X_{t_0}|| / sqrt((t_n - t_0) sigma_hat^2)`,
//!
//! whose law under free diffusion does not depend on sigma. Its null
//! distribution is calibrated by Monte Carlo ([`build_null_table`]); the
//! fitted quantiles drive a three-decision rule: subdiffusion below the
//! alpha/2 quantile, superdiffusion above the 1 - alpha/2 quantile, free
//! diffusion otherwise. For large n the null law approaches that of the
//! supremum of a standard planar Wiener process over the unit interval
//! ([`asymptotic_cdf_s0`]).

pub mod bessel;
mod table;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::{sigma_sq_from_positions, SigmaMethod};
use crate::rng::RngSeed;
use crate::trajectory::Trajectory;
use crate::MotionClass;

pub use bessel::{asymptotic_cdf_s0, bessel_j0, bessel_j1, j0_zero, SeriesCdf};

/// Outcome of the three-decision rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Subdiffusion,
    Brownian,
    Superdiffusion,
}

impl From<Decision> for MotionClass {
    fn from(d: Decision) -> Self {
        match d {
            Decision::Subdiffusion => MotionClass::Subdiffusion,
            Decision::Brownian => MotionClass::Brownian,
            Decision::Superdiffusion => MotionClass::Superdiffusion,
        }
    }
}

/// `T_n` for a trajectory, using the given sigma estimator.
///
/// Fails with [`Error::DegenerateTrajectory`] when the estimate is zero
/// (motionless track); callers usually surface that as "not moving".
pub fn t_statistic(traj: &Trajectory, method: SigmaMethod) -> Result<f64> {
    t_statistic_positions(traj.positions(), traj.dt(), method)
}

pub(crate) fn t_statistic_positions(
    positions: &[[f64; 2]],
    dt: f64,
    method: SigmaMethod,
) -> Result<f64> {
    let n = positions.len() - 1;
    if n < 2 {
        return Err(Error::InsufficientData(
            "the test statistic needs at least 2 increments".into(),
        ));
    }
    let sigma_sq = sigma_sq_from_positions(positions, dt, method)?;
    if sigma_sq == 0.0 {
        return Err(Error::DegenerateTrajectory(
            "motionless trajectory: sigma estimate is zero".into(),
        ));
    }
    let [x0, y0] = positions[0];
    let max_d2 = positions[1..]
        .iter()
        .map(|&[x, y]| {
            let (dx, dy) = (x - x0, y - y0);
            dx * dx + dy * dy
        })
        .fold(0.0, f64::max);
    let span = n as f64 * dt;
    Ok(max_d2.sqrt() / (span * sigma_sq).sqrt())
}

/// Monte Carlo sample of `T_n` under free diffusion, sorted ascending.
///
/// Rebuilding with the same `(n, N, seed, method)` reproduces the table
/// bit-exactly, on any worker count.
#[derive(Clone, Debug, PartialEq)]
pub struct NullTable {
    n: usize,
    seed: RngSeed,
    method: SigmaMethod,
    sorted: Vec<f64>,
}

/// Simulate `replicates` standard Brownian tracks of `n` increments
/// (sigma = 1, dt = 1, which is sufficient because the null law of `T_n` is
/// sigma-free) and collect the sorted statistics.
///
/// Replicate `i` draws from `seed.stream(i)`, so the work parallelizes over
/// chunks without affecting the result.
pub fn build_null_table(
    n: usize,
    replicates: usize,
    seed: RngSeed,
    method: SigmaMethod,
) -> Result<NullTable> {
    if n < 2 {
        return Err(Error::InvalidParameter(
            "null table needs n >= 2 increments".into(),
        ));
    }
    if replicates < 1000 {
        return Err(Error::InvalidParameter(
            "null table needs at least 1000 replicates".into(),
        ));
    }
    let mut sorted = vec![0.0f64; replicates];
    sorted
        .par_chunks_mut(4096)
        .enumerate()
        .for_each(|(chunk_idx, chunk)| {
            let mut positions: Vec<[f64; 2]> = Vec::with_capacity(n + 1);
            for (j, slot) in chunk.iter_mut().enumerate() {
                let i = chunk_idx * 4096 + j;
                let mut rng = seed.stream(i as u64).rng();
                positions.clear();
                let mut p = [0.0f64, 0.0f64];
                positions.push(p);
                for _ in 0..n {
                    let ex: f64 = rng.sample(StandardNormal);
                    let ey: f64 = rng.sample(StandardNormal);
                    p = [p[0] + ex, p[1] + ey];
                    positions.push(p);
                }
                *slot = t_statistic_positions(&positions, 1.0, method)
                    .expect("continuous Gaussian path cannot be degenerate");
            }
        });
    sorted.sort_unstable_by(f64::total_cmp);
    Ok(NullTable {
        n,
        seed,
        method,
        sorted,
    })
}

/// One-tailed and two-tailed empirical p-values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PValues {
    /// `F_hat(t)`: fraction of null statistics <= t (subdiffusion tail).
    pub p_sub: f64,
    /// Fraction of null statistics >= t (superdiffusion tail).
    pub p_sup: f64,
    /// `min(1, 2 min(p_sub, p_sup))`.
    pub p_two_sided: f64,
}

impl NullTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sample_size(&self) -> usize {
        self.sorted.len()
    }

    pub fn seed(&self) -> RngSeed {
        self.seed
    }

    pub fn method(&self) -> SigmaMethod {
        self.method
    }

    pub fn sorted_sample(&self) -> &[f64] {
        &self.sorted
    }

    /// Monte Carlo quantile of order `x` in (0,1): the `ceil(x N)`-th order
    /// statistic (1-based).
    pub fn quantile(&self, x: f64) -> Result<f64> {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "quantile order must lie in (0,1), got {x}"
            )));
        }
        let n = self.sorted.len();
        let idx = ((x * n as f64).ceil() as usize).clamp(1, n);
        Ok(self.sorted[idx - 1])
    }

    /// Empirical p-values of an observed statistic against this table.
    ///
    /// Ties count toward both tails (`p_sup` uses >=), so
    /// `p_sub + p_sup >= 1` and the doubled two-sided value is conservative.
    pub fn p_values(&self, t: f64) -> PValues {
        let n = self.sorted.len() as f64;
        let count_le = self.sorted.partition_point(|&v| v <= t);
        let count_lt = self.sorted.partition_point(|&v| v < t);
        let p_sub = count_le as f64 / n;
        let p_sup = (self.sorted.len() - count_lt) as f64 / n;
        PValues {
            p_sub,
            p_sup,
            p_two_sided: (2.0 * p_sub.min(p_sup)).min(1.0),
        }
    }
}

/// Result of the three-decision test for one trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct TestResult {
    pub t_stat: f64,
    pub p_sub: f64,
    pub p_sup: f64,
    pub p_two_sided: f64,
    pub decision: Decision,
    pub alpha: f64,
}

/// Apply the three-decision rule at level `alpha`: subdiffusion if
/// `T_n < q_n(alpha/2)`, superdiffusion if `T_n > q_n(1 - alpha/2)`, free
/// diffusion otherwise.
pub fn decide(traj: &Trajectory, table: &NullTable, alpha: f64) -> Result<TestResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0,1), got {alpha}"
        )));
    }
    if table.n != traj.n_increments() {
        return Err(Error::TableMismatch(format!(
            "table is calibrated for n = {} increments, trajectory `{}` has {}",
            table.n,
            traj.track_id(),
            traj.n_increments()
        )));
    }
    let t = t_statistic(traj, table.method)?;
    let lo = table.quantile(alpha / 2.0)?;
    let hi = table.quantile(1.0 - alpha / 2.0)?;
    let decision = if t < lo {
        Decision::Subdiffusion
    } else if t > hi {
        Decision::Superdiffusion
    } else {
        Decision::Brownian
    };
    let p = table.p_values(t);
    Ok(TestResult {
        t_stat: t,
        p_sub: p.p_sub,
        p_sup: p.p_sup,
        p_two_sided: p.p_two_sided,
        decision,
        alpha,
    })
}
