//! Classification of single-particle trajectories into diffusion modes.
//!
//! A particle track is tested against the free-diffusion null hypothesis
//! with the standardized maximal-distance statistic; rejections name the
//! direction (subdiffusion or superdiffusion). The crate provides:
//!
//! * [`processes`]: exact simulators for Brownian motion, Brownian motion
//!   with drift, the Ornstein-Uhlenbeck process and fractional Brownian
//!   motion, with their theoretical MSD curves;
//! * [`estimators`]: diffusion-coefficient estimators and the classical
//!   MSD log-log-slope classifier used as a baseline;
//! * [`teststat`]: the test statistic, Monte Carlo calibration tables,
//!   p-values, the three-decision rule, and the asymptotic law of the
//!   statistic (a Bessel series);
//! * [`multitest`]: Benjamini-Hochberg and adaptive Benjamini-Hochberg
//!   multiple testing with directional splitting and error accounting;
//! * [`io`]: trajectory file parsing, track filters, and report/map
//!   emission.
//!
//! Everything that draws randomness takes an explicit [`RngSeed`]; equal
//! seeds give bit-identical results regardless of thread count.

pub mod error;
pub mod estimators;
pub mod io;
pub mod multitest;
pub mod processes;
pub mod rng;
pub mod teststat;
pub mod trajectory;

pub use error::{Error, Result};
pub use rng::RngSeed;
pub use trajectory::Trajectory;

/// The four labels a track can receive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MotionClass {
    Brownian,
    Subdiffusion,
    Superdiffusion,
    /// Used by the MSD baseline for tracks that never leave a small
    /// neighbourhood of their start.
    NotMoving,
}

impl MotionClass {
    pub fn name(self) -> &'static str {
        match self {
            MotionClass::Brownian => "brownian",
            MotionClass::Subdiffusion => "subdiffusion",
            MotionClass::Superdiffusion => "superdiffusion",
            MotionClass::NotMoving => "not_moving",
        }
    }
}

/// Ground-truth tag for labelled corpora: the null (free diffusion) or one
/// of the two alternatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    /// H0: free diffusion.
    Null,
    /// H1: subdiffusion.
    Sub,
    /// H2: superdiffusion.
    Sup,
}

impl Hypothesis {
    pub fn tag(self) -> &'static str {
        match self {
            Hypothesis::Null => "h0",
            Hypothesis::Sub => "h1",
            Hypothesis::Sup => "h2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "h0" | "null" | "brownian" => Some(Hypothesis::Null),
            "h1" | "sub" | "subdiffusion" => Some(Hypothesis::Sub),
            "h2" | "sup" | "superdiffusion" => Some(Hypothesis::Sup),
            _ => None,
        }
    }
}
