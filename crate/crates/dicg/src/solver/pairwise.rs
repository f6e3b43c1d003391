//! Pairwise conditional gradient: move weight from the worst store vertex
//! onto the oracle vertex, leaving every other coordinate untouched.

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::point::{gap_on_slices, DensePoint};
use crate::polytope::{feasibility_residual, PolytopeOracle};
use crate::solver::store::DecompositionStore;
use crate::solver::{check_problem, dense_direction, initial_iterate, RunResult, SolverConfig};
use crate::trace::{RunTrace, TerminationReason, TraceRow};
use crate::vertex::apply_pairwise_step;
use crate::EPS_NUM;
use std::time::Instant;

pub fn run_pcg(
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

        let (away_idx, _) = store
            .max_dot(&grad)
            .ok_or_else(|| Error::invariant(t, "empty decomposition store"))?;
        let v_away = store.vertex(away_idx).clone();
        if v_away == v_plus {
            trace.rows.push(row);
            store_sizes.push(store.len());
            termination = TerminationReason::ZeroDirection;
            break;
        }

        let dir = dense_direction(&v_plus, &v_away, x.len());
        let cap = store.weight(away_idx);
        let eta = obj.line_search(&x, &dir, cap)?;
        if eta == 0.0 {
            trace.rows.push(row);
            store_sizes.push(store.len());
            termination = TerminationReason::ZeroDirection;
            break;
        }
        apply_pairwise_step(&mut x, &v_plus, &v_away, eta);
        store.transfer(away_idx, &v_plus, eta);
        store.purge();
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::DistanceObjective;
    use crate::polytope::UnitSimplex;
    use crate::solver::{Algorithm, StepRule};

    fn config(max_iters: usize, tol: f64) -> SolverConfig {
        SolverConfig {
            algorithm: Algorithm::Pcg,
            step_rule: StepRule::LineSearch,
            schedule: None,
            max_iters,
            gap_tolerance: tol,
            assert_invariants: true,
        }
    }

    #[test]
    fn first_step_matches_the_hand_computed_transfer() {
        // Start rule gives x1 = e3 for this center; the first pairwise
        // direction is e2 - e3 with exact step 0.35.
        let simplex = UnitSimplex::new(3).unwrap();
        let obj = DistanceObjective::with_fstar(vec![0.1, 0.3, 0.6], 0.0);
        let res = run_pcg(&obj, &simplex, &config(1, 0.0)).unwrap();
        let row = &res.trace.rows[0];
        assert!((row.eta - 0.35).abs() < 1e-12, "eta = {}", row.eta);
        let x = res.x_final.as_slice();
        assert_eq!(x[0], 0.0);
        assert!((x[1] - 0.35).abs() < 1e-12);
        assert!((x[2] - 0.65).abs() < 1e-12);
    }

    #[test]
    fn converges_to_an_interior_optimum() {
        let simplex = UnitSimplex::new(3).unwrap();
        let center = vec![0.1, 0.3, 0.6];
        let obj = DistanceObjective::with_fstar(center.clone(), 0.0);
        let res = run_pcg(&obj, &simplex, &config(200, 1e-12)).unwrap();
        assert_eq!(
            res.trace.termination,
            Some(TerminationReason::GapConverged)
        );
        for (xi, ci) in res.x_final.as_slice().iter().zip(&center) {
            assert!((xi - ci).abs() < 1e-6);
        }
        // The store can never exceed one entry per step plus the seed.
        for (row, size) in res.trace.rows.iter().zip(&res.store_sizes) {
            assert!(*size <= row.t + 1);
        }
    }
}
