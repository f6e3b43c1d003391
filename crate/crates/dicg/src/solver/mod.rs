//! Conditional-gradient solvers sharing one configuration surface.
//!
//! All runs are vertex-initialized the same deterministic way: x0 is the
//! oracle vertex for the all-ones cost and the first iterate x1 is the
//! oracle vertex for the gradient at x0. Each iteration records one trace
//! row before the step it takes; the terminating row carries eta = 0.

mod arbitrary;
mod away;
mod cg;
mod dicg;
mod pairwise;
pub mod store;

pub use arbitrary::run_dicg_arbitrary;
pub use away::run_acg;
pub use cg::run_cg;
pub use dicg::{run_dicg, run_dicg_inspected, DicgIteration};
pub use pairwise::run_pcg;
pub use store::DecompositionStore;

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::point::DensePoint;
use crate::polytope::{EnumPolytope, PolytopeOracle};
use crate::schedule::ScheduleParams;
use crate::trace::RunTrace;
use crate::vertex::Vertex;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    /// Classical conditional gradient (Frank-Wolfe).
    Cg,
    /// Away-step conditional gradient with an explicit store.
    Acg,
    /// Pairwise conditional gradient with an explicit store.
    Pcg,
    /// Decomposition-invariant pairwise conditional gradient.
    Dicg,
    /// Decomposition-invariant variant for polytopes given by an explicit
    /// vertex list and inequality description.
    DicgArbitrary,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Cg => "cg",
            Algorithm::Acg => "acg",
            Algorithm::Pcg => "pcg",
            Algorithm::Dicg => "dicg",
            Algorithm::DicgArbitrary => "dicg_arbitrary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepRule {
    /// Predefined decaying schedule, dyadically rounded each iteration.
    /// Needs `ScheduleParams` and a strongly convex objective.
    Schedule,
    /// Exact or golden-section line search along the step direction.
    LineSearch,
    /// Parameter-free 2/(t+2) decay; dyadically rounded by the
    /// decomposition-invariant solver.
    HarmonicDecay,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub step_rule: StepRule,
    /// Required by `StepRule::Schedule`; ignored otherwise.
    #[serde(default)]
    pub schedule: Option<ScheduleParams>,
    pub max_iters: usize,
    /// Run stops once the duality gap reaches this value.
    #[serde(default)]
    pub gap_tolerance: f64,
    /// Turns on per-iteration invariant checks (feasibility residual,
    /// lattice exactness, step-cap dominance). Runs fail loudly instead
    /// of producing a suspect trace.
    #[serde(default)]
    pub assert_invariants: bool,
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be >= 1".into()));
        }
        if !(self.gap_tolerance.is_finite() && self.gap_tolerance >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gap_tolerance must be finite and >= 0, got {}",
                self.gap_tolerance
            )));
        }
        match (self.algorithm, self.step_rule) {
            (Algorithm::Cg, StepRule::Schedule) => {
                return Err(Error::InvalidParameter(
                    "the predefined schedule applies to the decomposition-invariant solver only"
                        .into(),
                ))
            }
            (Algorithm::Acg | Algorithm::Pcg, rule) if rule != StepRule::LineSearch => {
                return Err(Error::InvalidParameter(
                    "away-step and pairwise baselines run with line search only".into(),
                ))
            }
            (Algorithm::DicgArbitrary, rule) if rule != StepRule::LineSearch => {
                return Err(Error::InvalidParameter(
                    "the arbitrary-polytope solver runs with line search only".into(),
                ))
            }
            _ => {}
        }
        if self.step_rule == StepRule::Schedule {
            match &self.schedule {
                Some(s) => s.validate()?,
                None => {
                    return Err(Error::InvalidParameter(
                        "schedule step rule needs schedule parameters".into(),
                    ))
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub trace: RunTrace,
    pub x_final: DensePoint,
    /// Decomposition-store size after each recorded iteration; 1 for the
    /// storeless solvers.
    pub store_sizes: Vec<usize>,
}

impl RunResult {
    pub fn peak_store(&self) -> usize {
        self.store_sizes.iter().copied().max().unwrap_or(0)
    }
}

/// Runs the configured algorithm against any oracle-backed polytope.
/// `DicgArbitrary` needs the explicit description of an [`EnumPolytope`];
/// route it through [`run_on_enum`].
pub fn run(
    obj: &dyn Objective,
    oracle: &dyn PolytopeOracle,
    config: &SolverConfig,
) -> Result<RunResult> {
    match config.algorithm {
        Algorithm::Cg => run_cg(obj, oracle, config),
        Algorithm::Acg => run_acg(obj, oracle, config),
        Algorithm::Pcg => run_pcg(obj, oracle, config),
        Algorithm::Dicg => run_dicg(obj, oracle, config),
        Algorithm::DicgArbitrary => Err(Error::InvalidParameter(
            "dicg_arbitrary needs an enumerated polytope with an inequality description".into(),
        )),
    }
}

/// Runs any of the five algorithms on an enumerated polytope.
pub fn run_on_enum(
    obj: &dyn Objective,
    polytope: &EnumPolytope,
    config: &SolverConfig,
) -> Result<RunResult> {
    match config.algorithm {
        Algorithm::DicgArbitrary => run_dicg_arbitrary(obj, polytope, config),
        _ => run(obj, polytope, config),
    }
}

/// Exit code contract of the CLI: 0 converged, 2 budget exhausted,
/// 3 invariant violation.
pub fn exit_code(outcome: &Result<RunResult>) -> i32 {
    match outcome {
        Ok(res) => match res.trace.termination {
            Some(crate::trace::TerminationReason::MaxIters) => 2,
            _ => 0,
        },
        Err(Error::InvariantViolation { .. }) | Err(Error::InternalConsistency(_)) => 3,
        Err(_) => 1,
    }
}

pub(crate) fn check_problem(obj: &dyn Objective, oracle: &dyn PolytopeOracle) -> Result<()> {
    if obj.dim() != oracle.dim() {
        return Err(Error::DimensionMismatch {
            expected: oracle.dim(),
            got: obj.dim(),
        });
    }
    Ok(())
}

/// Deterministic vertex initialization shared by every solver.
pub(crate) fn initial_iterate(
    obj: &dyn Objective,
    oracle: &dyn PolytopeOracle,
) -> Result<(Vec<f64>, Vertex)> {
    let ones = vec![1.0; oracle.dim()];
    let x0 = oracle.lmo(&ones)?;
    let g0 = obj.gradient(&x0.to_dense());
    let x1 = oracle.lmo(&g0)?;
    Ok((x1.to_dense(), x1))
}

/// Dense v_plus - v_minus; shared support indices cancel to exact zero.
pub(crate) fn dense_direction(v_plus: &Vertex, v_minus: &Vertex, dim: usize) -> Vec<f64> {
    let mut dir = vec![0.0; dim];
    for &i in v_plus.support() {
        dir[i] += 1.0;
    }
    for &i in v_minus.support() {
        dir[i] -= 1.0;
    }
    dir
}
