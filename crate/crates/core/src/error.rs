use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its admissible range (sigma <= 0, alpha not in
    /// (0,1), quantile order outside (0,1), ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A trajectory violates a structural invariant (too short, non-finite
    /// coordinates, non-positive lag).
    #[error("invalid trajectory `{id}`: {reason}")]
    InvalidTrajectory { id: String, reason: String },

    /// Not enough observations for the requested statistic.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// The trajectory carries no usable signal (motionless: sigma estimate is
    /// zero). Callers typically surface this as a "not moving" label.
    #[error("degenerate trajectory: {0}")]
    DegenerateTrajectory(String),

    /// A least-squares fit cannot be formed (zero MSD value at a fitted lag).
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    /// A calibration table does not match the trajectory it is applied to.
    #[error("table mismatch: {0}")]
    TableMismatch(String),

    /// A persisted artifact is malformed (bad magic, version, checksum, ...).
    #[error("format error: {0}")]
    Format(String),

    /// A text input could not be parsed.
    #[error("parse error at {path}:{line}: {reason}")]
    Parse {
        path: String,
        line: usize,
        reason: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// An internal consistency guarantee was violated.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
