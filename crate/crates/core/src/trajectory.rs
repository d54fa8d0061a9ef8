use crate::error::{Error, Result};

/// A uniformly sampled planar track: positions observed at `t0 + i*dt`.
///
/// A trajectory of `n` increments holds `n + 1` positions. Construction
/// enforces the structural invariants (at least one increment, finite
/// coordinates, positive lag); statistical operations can therefore assume
/// them.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    track_id: String,
    t0: f64,
    dt: f64,
    positions: Vec<[f64; 2]>,
}

impl Trajectory {
    pub fn new(
        track_id: impl Into<String>,
        t0: f64,
        dt: f64,
        positions: Vec<[f64; 2]>,
    ) -> Result<Self> {
        let track_id = track_id.into();
        let invalid = |reason: &str| Error::InvalidTrajectory {
            id: track_id.clone(),
            reason: reason.to_string(),
        };
        if positions.len() < 2 {
            return Err(invalid("fewer than 2 positions"));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(invalid("lag dt must be positive and finite"));
        }
        if !t0.is_finite() {
            return Err(invalid("start time must be finite"));
        }
        if positions.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(invalid("non-finite coordinate"));
        }
        Ok(Self {
            track_id,
            t0,
            dt,
            positions,
        })
    }

    pub fn track_id(&self) -> &str {
        &self.track_id
    }

    pub fn with_track_id(mut self, id: impl Into<String>) -> Self {
        self.track_id = id.into();
        self
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn positions(&self) -> &[[f64; 2]] {
        &self.positions
    }

    /// Number of increments `n` (one less than the number of positions).
    pub fn n_increments(&self) -> usize {
        self.positions.len() - 1
    }

    /// Observation span `t_n - t_0 = n * dt`.
    pub fn duration(&self) -> f64 {
        self.n_increments() as f64 * self.dt
    }

    pub fn increments(&self) -> impl Iterator<Item = [f64; 2]> + '_ {
        self.positions
            .windows(2)
            .map(|w| [w[1][0] - w[0][0], w[1][1] - w[0][1]])
    }

    /// Largest Euclidean distance from the starting point over i = 1..n.
    pub fn max_displacement(&self) -> f64 {
        let [x0, y0] = self.positions[0];
        self.positions[1..]
            .iter()
            .map(|&[x, y]| {
                let (dx, dy) = (x - x0, y - y0);
                dx * dx + dy * dy
            })
            .fold(0.0, f64::max)
            .sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_short_and_nonfinite() {
        assert!(Trajectory::new("a", 0.0, 1.0, vec![[0.0, 0.0]]).is_err());
        assert!(Trajectory::new("a", 0.0, 0.0, vec![[0.0, 0.0]; 2]).is_err());
        assert!(Trajectory::new("a", 0.0, -1.0, vec![[0.0, 0.0]; 2]).is_err());
        assert!(Trajectory::new("a", 0.0, 1.0, vec![[0.0, 0.0], [f64::NAN, 0.0]]).is_err());
    }

    #[test]
    fn basic_accessors() {
        let t = Trajectory::new("t1", 2.0, 0.5, vec![[0.0, 0.0], [1.0, 0.0], [1.0, 2.0]]).unwrap();
        assert_eq!(t.n_increments(), 2);
        assert_eq!(t.duration(), 1.0);
        let incs: Vec<_> = t.increments().collect();
        assert_eq!(incs, vec![[1.0, 0.0], [0.0, 2.0]]);
        assert!((t.max_displacement() - 5.0f64.sqrt()).abs() < 1e-15);
    }
}
