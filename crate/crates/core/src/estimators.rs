//! Diffusion-coefficient estimators and the MSD baseline classifier.

use crate::error::{Error, Result};
use crate::trajectory::Trajectory;
use crate::MotionClass;

/// Which difference order the sigma estimator uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SigmaMethod {
    /// First-order differences: consistent under free diffusion, biased under
    /// the alternatives (the bias limits are closed-form).
    FirstDiff,
    /// Second-order differences: removes the bias of directed motion.
    SecondDiff,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SigmaEstimate {
    /// Estimated sigma, in length per sqrt(second). Zero only for a
    /// motionless trajectory.
    pub value: f64,
    pub method: SigmaMethod,
    pub n_increments: usize,
}

/// Squared sigma estimate straight from a position slice; shared with the
/// null-table builder so both routes use identical arithmetic.
pub(crate) fn sigma_sq_from_positions(
    positions: &[[f64; 2]],
    dt: f64,
    method: SigmaMethod,
) -> Result<f64> {
    let n = positions.len() - 1;
    match method {
        SigmaMethod::FirstDiff => {
            if n < 1 {
                return Err(Error::InsufficientData(
                    "sigma1 needs at least 2 points".into(),
                ));
            }
            let sum: f64 = positions
                .windows(2)
                .map(|w| {
                    let dx = w[1][0] - w[0][0];
                    let dy = w[1][1] - w[0][1];
                    dx * dx + dy * dy
                })
                .sum();
            Ok(sum / (2.0 * n as f64 * dt))
        }
        SigmaMethod::SecondDiff => {
            if n < 2 {
                return Err(Error::InsufficientData(
                    "sigma2 needs at least 3 points".into(),
                ));
            }
            let sum: f64 = positions
                .windows(3)
                .map(|w| {
                    let dx = (w[2][0] - w[1][0]) - (w[1][0] - w[0][0]);
                    let dy = (w[2][1] - w[1][1]) - (w[1][1] - w[0][1]);
                    dx * dx + dy * dy
                })
                .sum();
            Ok(sum / (4.0 * n as f64 * dt))
        }
    }
}

/// First-difference estimator:
/// `sigma1^2 = sum_j ||X_{t_j} - X_{t_{j-1}}||^2 / (2 n dt)`.
pub fn sigma1(traj: &Trajectory) -> Result<SigmaEstimate> {
    let sq = sigma_sq_from_positions(traj.positions(), traj.dt(), SigmaMethod::FirstDiff)?;
    Ok(SigmaEstimate {
        value: sq.sqrt(),
        method: SigmaMethod::FirstDiff,
        n_increments: traj.n_increments(),
    })
}

/// Second-difference estimator:
/// `sigma2^2 = sum_j ||(X_{t_{j+1}}-X_{t_j}) - (X_{t_j}-X_{t_{j-1}})||^2 / (4 n dt)`.
///
/// Each second difference has per-axis variance `2 sigma^2 dt` under free
/// diffusion, hence the extra factor of two in the denominator relative to
/// [`sigma1`]; with it `sigma2^2 / sigma^2 -> (n-1)/n` under free diffusion.
/// Constant drift cancels in the differences.
pub fn sigma2(traj: &Trajectory) -> Result<SigmaEstimate> {
    let sq = sigma_sq_from_positions(traj.positions(), traj.dt(), SigmaMethod::SecondDiff)?;
    Ok(SigmaEstimate {
        value: sq.sqrt(),
        method: SigmaMethod::SecondDiff,
        n_increments: traj.n_increments(),
    })
}

pub fn sigma_estimate(traj: &Trajectory, method: SigmaMethod) -> Result<SigmaEstimate> {
    match method {
        SigmaMethod::FirstDiff => sigma1(traj),
        SigmaMethod::SecondDiff => sigma2(traj),
    }
}

/// Pathwise mean square displacement at lags `1..=J`.
#[derive(Clone, Debug, PartialEq)]
pub struct MsdCurve {
    pub lags: Vec<usize>,
    pub values: Vec<f64>,
    /// Increment count of the underlying trajectory.
    pub n: usize,
}

/// `MSD(j dt) = mean over k of ||X_{t_{k+j}} - X_{t_k}||^2`, j = 1..=max_lag.
pub fn msd_curve(traj: &Trajectory, max_lag: usize) -> Result<MsdCurve> {
    let n = traj.n_increments();
    if max_lag < 1 || max_lag > n {
        return Err(Error::InvalidParameter(format!(
            "max_lag must lie in 1..={n}, got {max_lag}"
        )));
    }
    let pos = traj.positions();
    let mut lags = Vec::with_capacity(max_lag);
    let mut values = Vec::with_capacity(max_lag);
    for j in 1..=max_lag {
        let mut sum = 0.0;
        for k in 0..=(n - j) {
            let dx = pos[k + j][0] - pos[k][0];
            let dy = pos[k + j][1] - pos[k][1];
            sum += dx * dx + dy * dy;
        }
        lags.push(j);
        values.push(sum / (n - j + 1) as f64);
    }
    Ok(MsdCurve { lags, values, n })
}

/// Default multiplier for the immobility radius: a trajectory whose largest
/// excursion from its start stays below `3.5 * sigma1 * sqrt(dt)` (a few
/// typical step lengths) is labelled `NotMoving`.
pub const DEFAULT_IMMOBILE_FACTOR: f64 = 3.5;

/// Settings for [`msd_classify`].
#[derive(Clone, Copy, Debug)]
pub struct MsdClassifyConfig {
    /// Number of fitted lags; `None` fits the whole curve (all `n` lags).
    pub fit_lags: Option<usize>,
    /// Label Subdiffusion below this fitted exponent (default 0.9).
    pub beta_low: f64,
    /// Label Superdiffusion above this fitted exponent (default 1.1).
    pub beta_high: f64,
    /// Immobility radius; `None` uses `DEFAULT_IMMOBILE_FACTOR * sigma1 * sqrt(dt)`.
    pub immobile_radius: Option<f64>,
}

impl Default for MsdClassifyConfig {
    fn default() -> Self {
        Self {
            fit_lags: None,
            beta_low: 0.9,
            beta_high: 1.1,
            immobile_radius: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MsdClassification {
    /// Log-log least-squares slope; `None` when the track is `NotMoving`
    /// (no fit is attempted).
    pub beta_hat: Option<f64>,
    pub label: MotionClass,
}

/// Classify a trajectory from the log-log slope of its MSD curve.
///
/// The slope `beta_hat` is the unweighted least-squares fit of
/// `log MSD(j dt)` on `log(j dt)` over the fitted lags. Labels:
/// `NotMoving` if the maximal displacement from the start is below the
/// immobility radius, otherwise `Subdiffusion` / `Brownian` /
/// `Superdiffusion` by comparing `beta_hat` with the two thresholds.
pub fn msd_classify(traj: &Trajectory, config: &MsdClassifyConfig) -> Result<MsdClassification> {
    let n = traj.n_increments();
    let fit_lags = config.fit_lags.unwrap_or(n);
    if fit_lags < 2 {
        return Err(Error::InvalidParameter(
            "need at least 2 fitted lags".into(),
        ));
    }
    if config.beta_low.is_nan() || config.beta_high.is_nan() || config.beta_low > config.beta_high {
        return Err(Error::InvalidParameter(
            "beta_low must not exceed beta_high".into(),
        ));
    }

    let dmax = traj.max_displacement();
    let radius = match config.immobile_radius {
        Some(r) => {
            if r.is_nan() || r < 0.0 {
                return Err(Error::InvalidParameter(
                    "immobile_radius must be nonnegative".into(),
                ));
            }
            r
        }
        None => DEFAULT_IMMOBILE_FACTOR * sigma1(traj)?.value * traj.dt().sqrt(),
    };
    // A motionless track is NotMoving no matter the radius.
    if dmax == 0.0 || dmax < radius {
        return Ok(MsdClassification {
            beta_hat: None,
            label: MotionClass::NotMoving,
        });
    }

    let curve = msd_curve(traj, fit_lags)?;
    if curve.values.iter().any(|&v| v <= 0.0) {
        return Err(Error::DegenerateFit(format!(
            "zero MSD value within the first {fit_lags} lags of track `{}`",
            traj.track_id()
        )));
    }
    let xs: Vec<f64> = curve
        .lags
        .iter()
        .map(|&j| (j as f64 * traj.dt()).ln())
        .collect();
    let ys: Vec<f64> = curve.values.iter().map(|&v| v.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / xs.len() as f64;
    let ybar = ys.iter().sum::<f64>() / ys.len() as f64;
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum();
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    let beta = sxy / sxx;

    let label = if beta < config.beta_low {
        MotionClass::Subdiffusion
    } else if beta > config.beta_high {
        MotionClass::Superdiffusion
    } else {
        MotionClass::Brownian
    };
    Ok(MsdClassification {
        beta_hat: Some(beta),
        label,
    })
}
