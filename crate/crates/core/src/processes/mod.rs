//! Exact simulation of the four reference diffusion models and their
//! theoretical mean square displacement curves.
//!
//! Each planar process solves a per-axis SDE driven by independent noises, so
//! the two coordinates are simulated independently:
//!
//! * Brownian motion: increments `N(0, sigma^2 dt)` per axis;
//! * Brownian motion with drift: adds `v * dt` per step;
//! * Ornstein-Uhlenbeck: exact Gaussian transition with mean
//!   `x + (x - theta)(e^{-lambda dt} - 1)` and variance
//!   `sigma^2 (1 - e^{-2 lambda dt}) / (2 lambda)` per axis;
//! * fractional Brownian motion: increments are `sigma * dt^h` times
//!   fractional Gaussian noise (see [`fgn`]).
//!
//! All samplers are pure functions of `(spec, n, dt, t0, start, seed)`: the
//! same inputs give bitwise-identical trajectories on any thread count.

pub mod fgn;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rng::RngSeed;
use crate::trajectory::Trajectory;

pub use fgn::{fgn_autocovariance, sample_fgn, FgnMethod, CHOLESKY_MAX};

/// One of the four reference diffusion models.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProcessSpec {
    /// Free diffusion with coefficient `sigma > 0`.
    Brownian { sigma: f64 },
    /// Directed motion: Brownian with constant drift velocity.
    DriftBrownian { sigma: f64, velocity: [f64; 2] },
    /// Confined motion in a quadratic well centred at `theta`, restoring rate
    /// `lambda > 0`.
    OrnsteinUhlenbeck {
        sigma: f64,
        lambda: f64,
        theta: [f64; 2],
    },
    /// Anomalous motion with Hurst exponent `hurst` in (0,1).
    FractionalBrownian { sigma: f64, hurst: f64 },
}

impl ProcessSpec {
    pub fn brownian(sigma: f64) -> Result<Self> {
        let spec = Self::Brownian { sigma };
        spec.validate()?;
        Ok(spec)
    }

    pub fn drift_brownian(sigma: f64, velocity: [f64; 2]) -> Result<Self> {
        let spec = Self::DriftBrownian { sigma, velocity };
        spec.validate()?;
        Ok(spec)
    }

    pub fn ornstein_uhlenbeck(sigma: f64, lambda: f64, theta: [f64; 2]) -> Result<Self> {
        let spec = Self::OrnsteinUhlenbeck {
            sigma,
            lambda,
            theta,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn fractional_brownian(sigma: f64, hurst: f64) -> Result<Self> {
        let spec = Self::FractionalBrownian { sigma, hurst };
        spec.validate()?;
        Ok(spec)
    }

    pub fn sigma(&self) -> f64 {
        match *self {
            Self::Brownian { sigma }
            | Self::DriftBrownian { sigma, .. }
            | Self::OrnsteinUhlenbeck { sigma, .. }
            | Self::FractionalBrownian { sigma, .. } => sigma,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        let sigma = self.sigma();
        if !(sigma > 0.0 && sigma.is_finite()) {
            return bad(format!("sigma must be positive and finite, got {sigma}"));
        }
        match *self {
            Self::DriftBrownian { velocity, .. } => {
                if !(velocity[0].is_finite() && velocity[1].is_finite()) {
                    return bad("drift velocity must be finite".into());
                }
            }
            Self::OrnsteinUhlenbeck { lambda, theta, .. } => {
                if !(lambda > 0.0 && lambda.is_finite()) {
                    return bad(format!("lambda must be positive and finite, got {lambda}"));
                }
                if !(theta[0].is_finite() && theta[1].is_finite()) {
                    return bad("theta must be finite".into());
                }
            }
            Self::FractionalBrownian { hurst, .. } => {
                if !(hurst > 0.0 && hurst < 1.0) {
                    return bad(format!("hurst must lie in (0,1), got {hurst}"));
                }
            }
            Self::Brownian { .. } => {}
        }
        Ok(())
    }
}

/// Initial position for [`simulate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Start {
    At([f64; 2]),
    /// Draw the start from the stationary law; only the Ornstein-Uhlenbeck
    /// process has one (`N(theta, sigma^2/(2 lambda) I)` per axis).
    Stationary,
}

/// Simulate `n >= 1` increments of `spec` at lag `dt`, exactly.
///
/// The returned trajectory has `n + 1` positions and `track_id` set to the
/// stream id of `seed` (rename with [`Trajectory::with_track_id`]).
pub fn simulate(
    spec: &ProcessSpec,
    n: usize,
    dt: f64,
    t0: f64,
    start: Start,
    seed: RngSeed,
) -> Result<Trajectory> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::InvalidParameter(
            "need at least one increment".into(),
        ));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "dt must be positive and finite, got {dt}"
        )));
    }
    let mut rng = seed.rng();

    let x0 = match (start, spec) {
        (Start::At(p), _) => p,
        (Start::Stationary, ProcessSpec::OrnsteinUhlenbeck { sigma, lambda, theta }) => {
            let sd = sigma / (2.0 * lambda).sqrt();
            let ex: f64 = rng.sample(StandardNormal);
            let ey: f64 = rng.sample(StandardNormal);
            [theta[0] + sd * ex, theta[1] + sd * ey]
        }
        (Start::Stationary, _) => {
            return Err(Error::InvalidParameter(
                "stationary start is only defined for the Ornstein-Uhlenbeck process".into(),
            ));
        }
    };

    let mut positions = Vec::with_capacity(n + 1);
    positions.push(x0);

    match *spec {
        ProcessSpec::Brownian { sigma } => {
            let sd = sigma * dt.sqrt();
            let mut p = x0;
            for _ in 0..n {
                let ex: f64 = rng.sample(StandardNormal);
                let ey: f64 = rng.sample(StandardNormal);
                p = [p[0] + sd * ex, p[1] + sd * ey];
                positions.push(p);
            }
        }
        ProcessSpec::DriftBrownian { sigma, velocity } => {
            let sd = sigma * dt.sqrt();
            let step = [velocity[0] * dt, velocity[1] * dt];
            let mut p = x0;
            for _ in 0..n {
                let ex: f64 = rng.sample(StandardNormal);
                let ey: f64 = rng.sample(StandardNormal);
                p = [p[0] + step[0] + sd * ex, p[1] + step[1] + sd * ey];
                positions.push(p);
            }
        }
        ProcessSpec::OrnsteinUhlenbeck {
            sigma,
            lambda,
            theta,
        } => {
            let decay = (-lambda * dt).exp();
            let sd = sigma * ((1.0 - (-2.0 * lambda * dt).exp()) / (2.0 * lambda)).sqrt();
            let mut p = x0;
            for _ in 0..n {
                let ex: f64 = rng.sample(StandardNormal);
                let ey: f64 = rng.sample(StandardNormal);
                p = [
                    theta[0] + (p[0] - theta[0]) * decay + sd * ex,
                    theta[1] + (p[1] - theta[1]) * decay + sd * ey,
                ];
                positions.push(p);
            }
        }
        ProcessSpec::FractionalBrownian { sigma, hurst } => {
            // One fGn series per axis, x first.
            let scale = sigma * dt.powf(hurst);
            let gx = sample_fgn(n, hurst, FgnMethod::Auto, &mut rng)?;
            let gy = sample_fgn(n, hurst, FgnMethod::Auto, &mut rng)?;
            let mut p = x0;
            for (ex, ey) in gx.into_iter().zip(gy) {
                p = [p[0] + scale * ex, p[1] + scale * ey];
                positions.push(p);
            }
        }
    }

    Trajectory::new(seed.stream_id.to_string(), t0, dt, positions)
}

/// Theoretical mean square displacement of `spec` at elapsed time `t >= 0`.
pub fn theoretical_msd(spec: &ProcessSpec, t: f64) -> f64 {
    assert!(t >= 0.0, "elapsed time must be nonnegative");
    match *spec {
        ProcessSpec::Brownian { sigma } => 2.0 * sigma * sigma * t,
        ProcessSpec::DriftBrownian { sigma, velocity } => {
            let v2 = velocity[0] * velocity[0] + velocity[1] * velocity[1];
            v2 * t * t + 2.0 * sigma * sigma * t
        }
        ProcessSpec::OrnsteinUhlenbeck { sigma, lambda, .. } => {
            2.0 * sigma * sigma * (1.0 - (-lambda * t).exp()) / lambda
        }
        ProcessSpec::FractionalBrownian { sigma, hurst } => {
            2.0 * sigma * sigma * t.powf(2.0 * hurst)
        }
    }
}
