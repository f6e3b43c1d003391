//! Decomposition-invariant pairwise steps. The away vertex comes from the
//! restricted oracle on the support of the current iterate, so no vertex
//! store is carried at all. With the predefined schedule every step is a
//! power of two, which keeps all coordinates on a dyadic lattice and makes
//! feasibility exact in floating point rather than approximate.

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::point::{gap_on_slices, DensePoint};
use crate::polytope::{feasibility_residual, PolytopeOracle};
use crate::schedule::dyadic_round;
use crate::solver::{check_problem, dense_direction, initial_iterate, RunResult, SolverConfig, StepRule};
use crate::trace::{RunTrace, TerminationReason, TraceRow};
use crate::vertex::{apply_pairwise_step, support_mask, Vertex};
use crate::EPS_NUM;
use std::time::Instant;

/// Snapshot of one iteration, handed to the inspection callback just before
/// the step is applied. `x` and `grad` describe the pre-step iterate.
pub struct DicgIteration<'a> {
    pub t: usize,
    pub x: &'a [f64],
    pub grad: &'a [f64],
    pub v_plus: &'a Vertex,
    pub v_minus: &'a Vertex,
    /// Step actually taken.
    pub eta: f64,
    /// Step before dyadic rounding (schedule) or capping (harmonic decay).
    pub eta_raw: f64,
    /// Lattice exponent of the rounded step: eta = 2^-delta. Schedule only.
    pub delta: Option<u32>,
    /// Largest feasible step along the pairwise direction. Not set for the
    /// schedule rule, which guarantees feasibility through the lattice.
    pub gamma_cap: Option<f64>,
}

pub fn run_dicg(
    obj: &dyn Objective,
    oracle: &dyn PolytopeOracle,
    config: &SolverConfig,
) -> Result<RunResult> {
    run_dicg_inspected(obj, oracle, config, |_| Ok(()))
}

/// Same solver, but every applied step is first shown to `inspect`. An error
/// from the callback aborts the run.
pub fn run_dicg_inspected<F>(
    obj: &dyn Objective,
    oracle: &dyn PolytopeOracle,
    config: &SolverConfig,
    mut inspect: F,
) -> Result<RunResult>
where
    F: FnMut(&DicgIteration) -> Result<()>,
{
    config.validate()?;
    check_problem(obj, oracle)?;
    if config.step_rule == StepRule::Schedule && obj.relaxed_class() {
        return Err(Error::InvalidParameter(
            "the predefined schedule needs a strong convexity constant; \
             use line search for objectives without one"
                .into(),
        ));
    }
    let (mut x, _) = initial_iterate(obj, oracle)?;
    let fstar = obj.fstar();
    let start = Instant::now();
    let mut trace = RunTrace::new();
    let mut store_sizes = Vec::new();
    let mut termination = TerminationReason::MaxIters;
    // Coarsest lattice every past iterate lives on; grows monotonically.
    let mut max_delta: u32 = 0;

    for t in 1..=config.max_iters {
        let grad = obj.gradient(&x);
        let v_plus = oracle.lmo(&grad)?;
        let f_val = obj.value(&x);
        let gap = gap_on_slices(&x, &v_plus, &grad);
        let feas = feasibility_residual(oracle, &x);
        let mut row = TraceRow {
            t,
            f_val,
            gap,
            h: fstar.map(|fs| f_val - fs),
            eta: 0.0,
            eta_raw: 0.0,
            time_ns: start.elapsed().as_nanos() as u64,
            feas_residual: feas,
        };
        if config.assert_invariants {
            if !f_val.is_finite() || !gap.is_finite() {
                return Err(Error::invariant(t, "non-finite objective or gap"));
            }
            if feas > EPS_NUM {
                return Err(Error::invariant(t, format!("feasibility residual {feas}")));
            }
            if let Some(i) = x.iter().position(|v| *v < 0.0) {
                return Err(Error::invariant(t, format!("negative coordinate {i}")));
            }
            if config.step_rule == StepRule::Schedule {
                let scale = f64::exp2(max_delta as f64);
                if let Some(i) = x.iter().position(|v| (v * scale).fract() != 0.0) {
                    return Err(Error::invariant(
                        t,
                        format!("coordinate {i} off the 2^-{max_delta} lattice"),
                    ));
                }
            }
        }
        if gap <= config.gap_tolerance {
            trace.rows.push(row);
            store_sizes.push(1);
            termination = TerminationReason::GapConverged;
            break;
        }

        let mask = support_mask(&x);
        let neg_grad: Vec<f64> = grad.iter().map(|g| -g).collect();
        let v_minus = oracle.restricted_lmo(&neg_grad, &mask).map_err(|e| match e {
            Error::EmptySupport => Error::invariant(t, "iterate has empty support"),
            other => other,
        })?;
        if v_minus == v_plus {
            trace.rows.push(row);
            store_sizes.push(1);
            termination = TerminationReason::ZeroDirection;
            break;
        }

        let (eta, eta_raw, delta, gamma_cap) = match config.step_rule {
            StepRule::Schedule => {
                let params = config.schedule.as_ref().expect("checked by validate");
                let raw = params.eta(t);
                let (d, rounded) = dyadic_round(raw)?;
                (rounded, raw, Some(d), None)
            }
            StepRule::LineSearch => {
                let cap = drainable_cap(&x, &v_plus, &v_minus);
                let dir = dense_direction(&v_plus, &v_minus, x.len());
                let eta = obj.line_search(&x, &dir, cap)?;
                (eta, eta, None, Some(cap))
            }
            StepRule::HarmonicDecay => {
                let cap = drainable_cap(&x, &v_plus, &v_minus);
                let raw = 2.0 / (t as f64 + 2.0);
                (raw.min(cap), raw, None, Some(cap))
            }
        };
        if config.assert_invariants {
            if let Some(cap) = gamma_cap {
                // The drain cap can never undercut the smallest positive
                // coordinate, because the away support is inside supp(x).
                let min_pos = x.iter().copied().filter(|v| *v > 0.0).fold(1.0, f64::min);
                if cap + EPS_NUM < min_pos {
                    return Err(Error::invariant(
                        t,
                        format!("step cap {cap} below smallest positive coordinate {min_pos}"),
                    ));
                }
            }
        }
        if eta == 0.0 {
            trace.rows.push(row);
            store_sizes.push(1);
            termination = TerminationReason::ZeroDirection;
            break;
        }
        inspect(&DicgIteration {
            t,
            x: &x,
            grad: &grad,
            v_plus: &v_plus,
            v_minus: &v_minus,
            eta,
            eta_raw,
            delta,
            gamma_cap,
        })?;
        apply_pairwise_step(&mut x, &v_plus, &v_minus, eta);
        if let Some(d) = delta {
            max_delta = max_delta.max(d);
        }
        row.eta = eta;
        row.eta_raw = eta_raw;
        trace.rows.push(row);
        store_sizes.push(1);
    }

    trace.termination = Some(termination);
    Ok(RunResult {
        trace,
        x_final: DensePoint(x),
        store_sizes,
    })
}

/// Largest step that keeps every coordinate drained by the away vertex
/// nonnegative. Coordinates the incoming vertex also covers do not move.
fn drainable_cap(x: &[f64], v_plus: &Vertex, v_minus: &Vertex) -> f64 {
    let mut cap = 1.0f64;
    for &i in v_minus.support() {
        if !v_plus.contains(i) {
            cap = cap.min(x[i]);
        }
    }
    cap
}
