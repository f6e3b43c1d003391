//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Step size outside (0, 1]; dyadic rounding is undefined there.
    #[error("step size {0} outside (0, 1]")]
    InvalidStepSize(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A restricted oracle call found no vertex inside the allowed support.
    #[error("restricted oracle found no vertex inside the given support")]
    EmptySupport,

    /// The graph instance cannot carry a feasible point (no s-t path, no
    /// perfect matching, cycle in a DAG, ...).
    #[error("infeasible graph: {0}")]
    InfeasibleGraph(String),

    /// An iterate or tight face that should be feasible is not.
    #[error("infeasible state: {0}")]
    InfeasibleState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A solver-internal bookkeeping structure drifted from the iterate.
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    /// A runtime invariant check failed during a solver run.
    #[error("invariant violated at iteration {t}: {detail}")]
    InvariantViolation { t: usize, detail: String },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Shorthand used by solvers when an invariant check trips.
    pub fn invariant(t: usize, detail: impl Into<String>) -> Self {
        Error::InvariantViolation {
            t,
            detail: detail.into(),
        }
    }
}
