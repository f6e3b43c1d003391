//! Prebuilt verification suites behind the `verify` CLI subcommand. Each
//! suite returns printable check lines; any Fail line means a broken build.

use crate::error::{Error, Result};
use crate::objective::DistanceObjective;
use crate::polytope::{
    BipartiteGraph, ChainMarginalPolytope, ChainModel, FlowPolytope, PolytopeOracle, UnitSimplex,
};
use crate::schedule::ScheduleParams;
use crate::solver::{run_dicg, run_dicg_inspected, Algorithm, SolverConfig, StepRule};
use crate::verify::{
    brute_lmo, brute_restricted_lmo, check_away_dominance, check_convergence_bounds,
    check_simplex_transfer_bound, check_sparsity_floor, lower_bound_instance,
    sparse_points_floor_margin, CheckLine, VertexEnumeration,
};
use crate::EPS_NUM;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Oracles,
    Lemmas,
    LowerBound,
}

pub fn run_suite(suite: Suite) -> Result<Vec<CheckLine>> {
    let mut lines = Vec::new();
    if matches!(suite, Suite::All | Suite::Oracles) {
        oracle_suite(&mut lines)?;
    }
    if matches!(suite, Suite::All | Suite::Lemmas) {
        lemma_suite(&mut lines)?;
    }
    if matches!(suite, Suite::All | Suite::LowerBound) {
        lower_bound_suite(&mut lines)?;
    }
    Ok(lines)
}

use crate::harness::gen::layered_dag;

fn complete_bipartite(n: usize) -> Result<BipartiteGraph> {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|l| (0..n).map(move |r| (l, r)))
        .collect();
    BipartiteGraph::new(n, edges)
}

/// Compares a specialized oracle against exhaustive enumeration on random
/// costs and random support masks. Ties count as agreement when the two
/// vertices have bit-identical cost.
fn compare_oracles(
    family: &str,
    oracle: &dyn PolytopeOracle,
    enumeration: &VertexEnumeration,
    trials: usize,
    rng: &mut ChaCha8Rng,
    lines: &mut Vec<CheckLine>,
) -> Result<()> {
    let dim = oracle.dim();
    let mut lmo_mismatches = 0usize;
    let mut restricted_mismatches = 0usize;
    for _ in 0..trials {
        let cost: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let fast = oracle.lmo(&cost)?;
        let slow = brute_lmo(enumeration, &cost)?;
        if fast != slow && fast.dot(&cost) != slow.dot(&cost) {
            lmo_mismatches += 1;
        }

        let mask: Vec<bool> = (0..dim).map(|_| rng.random::<f64>() < 0.75).collect();
        let fast = oracle.restricted_lmo(&cost, &mask);
        let slow = brute_restricted_lmo(enumeration, &cost, &mask);
        match (fast, slow) {
            (Ok(a), Ok(b)) => {
                if a != b && a.dot(&cost) != b.dot(&cost) {
                    restricted_mismatches += 1;
                }
            }
            (Err(Error::EmptySupport), Err(Error::EmptySupport)) => {}
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    let detail = format!("{trials} random costs, {} vertices", enumeration.len());
    lines.push(if lmo_mismatches == 0 {
        CheckLine::pass(format!("lmo_{family}"), None, detail.clone())
    } else {
        CheckLine::fail(
            format!("lmo_{family}"),
            None,
            format!("{lmo_mismatches} mismatches over {trials} costs"),
        )
    });
    lines.push(if restricted_mismatches == 0 {
        CheckLine::pass(format!("restricted_lmo_{family}"), None, detail)
    } else {
        CheckLine::fail(
            format!("restricted_lmo_{family}"),
            None,
            format!("{restricted_mismatches} mismatches over {trials} costs"),
        )
    });
    Ok(())
}

fn oracle_suite(lines: &mut Vec<CheckLine>) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0acc1e);

    for n in 1..=10 {
        let simplex = UnitSimplex::new(n)?;
        let enumeration = VertexEnumeration::simplex_basis(n)?;
        compare_oracles(
            &format!("simplex_n{n}"),
            &simplex,
            &enumeration,
            100,
            &mut rng,
            lines,
        )?;
    }

    let graph = layered_dag(4, 3)?;
    let enumeration = VertexEnumeration::dag_paths(&graph, 100)?;
    let flow = FlowPolytope::new(graph)?;
    compare_oracles("flow_3x4", &flow, &enumeration, 1000, &mut rng, lines)?;

    let graph = complete_bipartite(4)?;
    let enumeration = VertexEnumeration::perfect_matchings(&graph, 24)?;
    let matching = crate::polytope::MatchingPolytope::new(graph);
    compare_oracles("matching_4x4", &matching, &enumeration, 1000, &mut rng, lines)?;

    let model = ChainModel::new(vec![3, 2, 4, 3])?;
    let enumeration = VertexEnumeration::chain_assignments(&model, 256)?;
    let chain = ChainMarginalPolytope::new(model);
    compare_oracles("chain_l4", &chain, &enumeration, 1000, &mut rng, lines)?;

    Ok(())
}

/// Random point on the simplex; roughly half the draws get a sparsified
/// support so the bound is exercised away from full support too.
fn random_simplex_point(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let mut x: Vec<f64> = (0..n).map(|_| -rng.random::<f64>().max(1e-12).ln()).collect();
        if rng.random::<f64>() < 0.5 && n > 1 {
            let keep = rng.random_range(1..=n);
            for v in x.iter_mut().skip(keep) {
                *v = 0.0;
            }
            x.shuffle(rng);
        }
        let total: f64 = x.iter().sum();
        if total > 0.0 {
            x.iter_mut().for_each(|v| *v /= total);
            return x;
        }
    }
}

fn dominance_line(
    family: &str,
    oracle: &dyn PolytopeOracle,
    enumeration: &VertexEnumeration,
    center_vertices: usize,
    lines: &mut Vec<CheckLine>,
) -> Result<()> {
    let dim = oracle.dim();
    let used = center_vertices.min(enumeration.len());
    let mut center = vec![0.0; dim];
    for v in &enumeration.vertices()[..used] {
        for &i in v.support() {
            center[i] += 1.0 / used as f64;
        }
    }
    let obj = DistanceObjective::with_fstar(center, 0.0);
    let config = SolverConfig {
        algorithm: Algorithm::Dicg,
        step_rule: StepRule::LineSearch,
        schedule: None,
        max_iters: 60,
        gap_tolerance: 1e-12,
        assert_invariants: true,
    };
    let mut steps = 0usize;
    let outcome = run_dicg_inspected(&obj, oracle, &config, |it| {
        steps += 1;
        if check_away_dominance(enumeration, it.x, it.grad, it.v_minus) {
            Ok(())
        } else {
            Err(Error::invariant(it.t, "away vertex dominated by a support vertex"))
        }
    });
    lines.push(match outcome {
        Ok(_) => CheckLine::pass(
            format!("away_dominance_{family}"),
            None,
            format!("{steps} steps inspected"),
        ),
        Err(e) => CheckLine::fail(format!("away_dominance_{family}"), None, e.to_string()),
    });
    Ok(())
}

fn lemma_suite(lines: &mut Vec<CheckLine>) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1e44a);

    // Weight-transfer bound on 10^4 random simplex pairs, n up to 10.
    let mut failures = 0usize;
    let mut pairs = 0usize;
    for n in 1..=10 {
        for _ in 0..1000 {
            let x = random_simplex_point(n, &mut rng);
            let y = random_simplex_point(n, &mut rng);
            pairs += 1;
            if !check_simplex_transfer_bound(&x, &y) {
                failures += 1;
            }
        }
    }
    lines.push(if failures == 0 {
        CheckLine::pass("simplex_transfer_bound", None, format!("{pairs} pairs"))
    } else {
        CheckLine::fail(
            "simplex_transfer_bound",
            None,
            format!("{failures} of {pairs} pairs violate the bound"),
        )
    });

    // Away-vertex dominance along line-search runs on each polytope family.
    let simplex = UnitSimplex::new(6)?;
    let enumeration = VertexEnumeration::simplex_basis(6)?;
    dominance_line("simplex", &simplex, &enumeration, 3, lines)?;

    let graph = layered_dag(3, 2)?;
    let enumeration = VertexEnumeration::dag_paths(&graph, 100)?;
    let flow = FlowPolytope::new(graph)?;
    dominance_line("flow", &flow, &enumeration, 3, lines)?;

    let graph = complete_bipartite(3)?;
    let enumeration = VertexEnumeration::perfect_matchings(&graph, 24)?;
    let matching = crate::polytope::MatchingPolytope::new(graph);
    dominance_line("matching", &matching, &enumeration, 3, lines)?;

    let model = ChainModel::new(vec![2, 2, 2])?;
    let enumeration = VertexEnumeration::chain_assignments(&model, 256)?;
    let chain = ChainMarginalPolytope::new(model);
    dominance_line("chain", &chain, &enumeration, 3, lines)?;

    // Convergence bounds on a schedule-driven run with known constants.
    let k = 80;
    let n = 2 * k;
    let (obj, _) = lower_bound_instance(k, n)?;
    let simplex = UnitSimplex::new(n)?;
    let params = ScheduleParams::from_constants(1.0, 1.0, simplex.diam_sq(), k)?;
    let config = SolverConfig {
        algorithm: Algorithm::Dicg,
        step_rule: StepRule::Schedule,
        schedule: Some(params.clone()),
        max_iters: 2000,
        gap_tolerance: 0.0,
        assert_invariants: true,
    };
    let run = run_dicg(&obj, &simplex, &config)?;
    let report = check_convergence_bounds(&run.trace, &params, Some(0.0))?;
    lines.extend(report.lines);

    Ok(())
}

fn lower_bound_suite(lines: &mut Vec<CheckLine>) -> Result<()> {
    for k in [4usize, 8, 16] {
        let n = 2 * k;
        let (obj, _) = lower_bound_instance(k, n)?;
        let simplex = UnitSimplex::new(n)?;
        let mut traces = Vec::new();
        for algorithm in [Algorithm::Cg, Algorithm::Acg, Algorithm::Pcg, Algorithm::Dicg] {
            let config = SolverConfig {
                algorithm,
                step_rule: StepRule::LineSearch,
                schedule: None,
                max_iters: k / 2 + 4,
                gap_tolerance: 0.0,
                assert_invariants: true,
            };
            traces.push(crate::solver::run(&obj, &simplex, &config)?.trace);
        }
        let (ok, margin) = check_sparsity_floor(&traces, k)?;
        let name = format!("sparsity_floor_k{k}");
        lines.push(if ok {
            CheckLine::pass(name, Some(-margin), "4 algorithms")
        } else {
            CheckLine::fail(name, Some(-margin), "floor violated in the early window")
        });

        let margin = sparse_points_floor_margin(k, n, 10_000, 0x5eed + k as u64)?;
        let name = format!("sparse_points_floor_k{k}");
        lines.push(if margin >= -EPS_NUM {
            CheckLine::pass(name, Some(-margin), "10000 samples")
        } else {
            CheckLine::fail(name, Some(-margin), "a sparse point undercuts the floor")
        });
    }
    Ok(())
}
