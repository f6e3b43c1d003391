//! Pairwise steps on an explicitly enumerated polytope. The away vertex is
//! chosen among vertices lying on every inequality that is tight at the
//! iterate, and the step is capped by a ratio test instead of a lattice.

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::point::{gap_on_slices, DensePoint};
use crate::polytope::{feasibility_residual, EnumPolytope, PolytopeOracle};
use crate::solver::{check_problem, dense_direction, initial_iterate, RunResult, SolverConfig, StepRule};
use crate::trace::{RunTrace, TerminationReason, TraceRow};
use crate::vertex::apply_pairwise_step;
use crate::EPS_NUM;
use std::time::Instant;

pub fn run_dicg_arbitrary(
    obj: &dyn Objective,
    poly: &EnumPolytope,
    config: &SolverConfig,
) -> Result<RunResult> {
    config.validate()?;
    if config.step_rule != StepRule::LineSearch {
        return Err(Error::InvalidParameter(
            "the enumerated-polytope solver only supports line search".into(),
        ));
    }
    check_problem(obj, poly)?;
    let (mut x, _) = initial_iterate(obj, poly)?;
    let fstar = obj.fstar();
    let start = Instant::now();
    let mut trace = RunTrace::new();
    let mut store_sizes = Vec::new();
    let mut termination = TerminationReason::MaxIters;

    for t in 1..=config.max_iters {
        let grad = obj.gradient(&x);
        let v_plus = poly.lmo(&grad)?;
        let f_val = obj.value(&x);
        let gap = gap_on_slices(&x, &v_plus, &grad);
        let feas = feasibility_residual(poly, &x).max(poly.inequality_residual(&x));
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

        let v_minus = poly.away_lmo(&grad, &x)?;
        if v_minus == v_plus {
            trace.rows.push(row);
            store_sizes.push(1);
            termination = TerminationReason::ZeroDirection;
            break;
        }
        let dir = dense_direction(&v_plus, &v_minus, x.len());
        let cap = poly.max_step(&x, &dir)?;
        let eta = obj.line_search(&x, &dir, cap)?;
        if eta == 0.0 {
            trace.rows.push(row);
            store_sizes.push(1);
            termination = TerminationReason::ZeroDirection;
            break;
        }
        apply_pairwise_step(&mut x, &v_plus, &v_minus, eta);
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
