//! Away-step conditional gradient with an explicit decomposition store.

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::point::{gap_on_slices, DensePoint};
use crate::polytope::{feasibility_residual, PolytopeOracle};
use crate::solver::store::DecompositionStore;
use crate::solver::{check_problem, initial_iterate, RunResult, SolverConfig};
use crate::trace::{RunTrace, TerminationReason, TraceRow};
use crate::EPS_NUM;
use std::time::Instant;

/// Weights this close to one make the away cap lambda/(1-lambda) blow up;
/// the iterate is then a single vertex and the away direction is useless.
const WEIGHT_GUARD: f64 = 1e-15;

pub fn run_acg(
    obj: &dyn Objective,
    oracle: &dyn PolytopeOracle,
    config: &SolverConfig,
) -> Result<RunResult> {
    config.validate()?;
    check_problem(obj, oracle)?;
    let (mut x, x1) = initial_iterate(obj, oracle)?;
    let mut store = DecompositionStore::new(x1);
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
            store.validate_against(&x, t)?;
        }
        if gap <= config.gap_tolerance {
            trace.rows.push(row);
            store_sizes.push(store.len());
            termination = TerminationReason::GapConverged;
            break;
        }

        let x_dot_g: f64 = x.iter().zip(&grad).map(|(a, b)| a * b).sum();
        let (away_idx, away_dot) = store
            .max_dot(&grad)
            .ok_or_else(|| Error::invariant(t, "empty decomposition store"))?;
        let away_score = away_dot - x_dot_g;
        let away_weight = store.weight(away_idx);
        let take_away = away_score > gap && away_weight < 1.0 - WEIGHT_GUARD;

        let eta = if take_away {
            let v_away = store.vertex(away_idx).clone();
            let dir: Vec<f64> = x
                .iter()
                .enumerate()
                .map(|(i, xi)| xi - if v_away.contains(i) { 1.0 } else { 0.0 })
                .collect();
            let cap = away_weight / (1.0 - away_weight);
            let eta = obj.line_search(&x, &dir, cap)?;
            if eta > 0.0 {
                for (i, xi) in x.iter_mut().enumerate() {
                    let vi = if v_away.contains(i) { 1.0 } else { 0.0 };
                    *xi = (1.0 + eta) * *xi - eta * vi;
                }
                store.away_scale(away_idx, eta);
                store.purge();
            }
            eta
        } else {
            let dir: Vec<f64> = x
                .iter()
                .enumerate()
                .map(|(i, xi)| if v_plus.contains(i) { 1.0 } else { 0.0 } - xi)
                .collect();
            let eta = obj.line_search(&x, &dir, 1.0)?;
            if eta > 0.0 {
                for (i, xi) in x.iter_mut().enumerate() {
                    let vi = if v_plus.contains(i) { 1.0 } else { 0.0 };
                    *xi = (1.0 - eta) * *xi + eta * vi;
                }
                store.scale_and_add(&v_plus, eta);
                store.purge();
            }
            eta
        };

        if eta == 0.0 {
            trace.rows.push(row);
            store_sizes.push(store.len());
            termination = TerminationReason::ZeroDirection;
            break;
        }
        row.eta = eta;
        row.eta_raw = eta;
        trace.rows.push(row);
        store_sizes.push(store.len());
    }

    trace.termination = Some(termination);
    Ok(RunResult {
        trace,
        x_final: DensePoint(x),
        store_sizes,
    })
}
