//! Classical conditional gradient: step toward the oracle vertex.

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::point::{gap_on_slices, DensePoint};
use crate::polytope::{feasibility_residual, PolytopeOracle};
use crate::solver::{check_problem, initial_iterate, RunResult, SolverConfig, StepRule};
use crate::trace::{RunTrace, TerminationReason, TraceRow};
use crate::EPS_NUM;
use std::time::Instant;

pub fn run_cg(
    obj: &dyn Objective,
    oracle: &dyn PolytopeOracle,
    config: &SolverConfig,
) -> Result<RunResult> {
    config.validate()?;
    check_problem(obj, oracle)?;
    let (mut x, _) = initial_iterate(obj, oracle)?;
    let fstar = obj.fstar();
    let start = Instant::now();
    let mut trace = RunTrace::new();
    let mut store_sizes = Vec::new();
    let mut termination = TerminationReason::MaxIters;

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
        }
        if gap <= config.gap_tolerance {
            trace.rows.push(row);
            store_sizes.push(1);
            termination = TerminationReason::GapConverged;
            break;
        }

        let v_dense = v_plus.to_dense();
        let dir: Vec<f64> = v_dense.iter().zip(&x).map(|(v, xi)| v - xi).collect();
        let eta = match config.step_rule {
            StepRule::LineSearch => obj.line_search(&x, &dir, 1.0)?,
            StepRule::HarmonicDecay => 2.0 / (t as f64 + 2.0),
            StepRule::Schedule => unreachable!("rejected by validate"),
        };
        if eta == 0.0 {
            trace.rows.push(row);
            store_sizes.push(1);
            termination = TerminationReason::ZeroDirection;
            break;
        }
        for (xi, vi) in x.iter_mut().zip(&v_dense) {
            *xi = (1.0 - eta) * *xi + eta * vi;
        }
        row.eta = eta;
        row.eta_raw = eta;
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
