//! Acceptance gate: one test per shipped guarantee. Each test prints a
//! single `ACCEPT <name>: PASS/FAIL` line (visible under `--nocapture`)
//! and then asserts, so the suite doubles as a checklist.

use dicg::harness::{
    estimate_m, gen_flow_qp, gen_lasso, gen_simplex_mixture, layered_dag,
};
use dicg::objective::{DistanceObjective, Objective};
use dicg::polytope::{
    BipartiteGraph, ChainMarginalPolytope, ChainModel, FlowPolytope, MatchingPolytope,
    PolytopeOracle, UnitSimplex,
};
use dicg::schedule::ScheduleParams;
use dicg::solver::{run, run_dicg_inspected, Algorithm, RunResult, SolverConfig, StepRule};
use dicg::verify::{
    brute_lmo, brute_restricted_lmo, check_away_dominance, check_convergence_bounds,
    check_simplex_transfer_bound, check_sparsity_floor, lower_bound_instance,
    sparse_points_floor_margin, BoundReport, CheckStatus, VertexEnumeration,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::sync::OnceLock;
use std::time::Instant;

fn report(name: &str, passed: bool, detail: &str) {
    let status = if passed { "PASS" } else { "FAIL" };
    println!("ACCEPT {name}: {status} ({detail})");
    assert!(passed, "{name}: {detail}");
}

/// One 2000-iteration predefined-schedule run with exact constants, kept
/// around so the three bound criteria grade the same trajectories.
struct ScheduleCase {
    label: &'static str,
    report: BoundReport,
    rows: usize,
    elapsed_s: f64,
}

const SCHEDULE_ITERS: usize = 2000;

fn schedule_config(params: ScheduleParams) -> SolverConfig {
    SolverConfig {
        algorithm: Algorithm::Dicg,
        step_rule: StepRule::Schedule,
        schedule: Some(params),
        max_iters: SCHEDULE_ITERS,
        gap_tolerance: 0.0,
        assert_invariants: true,
    }
}

/// All four targets are non-dyadic mixtures (weights 1/3 and 1/40), so the
/// lattice never lands on the optimum and every run uses its full budget.
fn schedule_instances() -> Vec<(&'static str, DistanceObjective, Box<dyn PolytopeOracle>, usize)> {
    let flow_a = gen_flow_qp(5, 4, 3, 7).unwrap();
    let flow_b = gen_flow_qp(4, 3, 3, 11).unwrap();
    let mix_a = gen_simplex_mixture(160, 80, 5).unwrap();
    let mix_b = gen_simplex_mixture(100, 40, 9).unwrap();
    vec![
        ("flow_qp_5x4", flow_a.objective, Box::new(flow_a.polytope), flow_a.card_star),
        ("flow_qp_4x3", flow_b.objective, Box::new(flow_b.polytope), flow_b.card_star),
        ("simplex_mix_160", mix_a.objective, Box::new(mix_a.polytope), mix_a.card_star),
        ("simplex_mix_100", mix_b.objective, Box::new(mix_b.polytope), mix_b.card_star),
    ]
}

fn schedule_cases() -> &'static [ScheduleCase] {
    static CASES: OnceLock<Vec<ScheduleCase>> = OnceLock::new();
    CASES.get_or_init(|| {
        schedule_instances()
            .into_iter()
            .map(|(label, obj, oracle, card_star)| {
                let params =
                    ScheduleParams::from_constants(1.0, 1.0, oracle.diam_sq(), card_star)
                        .unwrap();
                let start = Instant::now();
                let result = run(&obj, oracle.as_ref(), &schedule_config(params.clone()))
                    .unwrap_or_else(|e| panic!("{label}: schedule run failed: {e}"));
                let elapsed_s = start.elapsed().as_secs_f64();
                let report = check_convergence_bounds(&result.trace, &params, Some(0.0))
                    .unwrap_or_else(|e| panic!("{label}: bound check failed: {e}"));
                ScheduleCase {
                    label,
                    report,
                    rows: result.trace.len(),
                    elapsed_s,
                }
            })
            .collect()
    })
}

fn graded_line(case: &ScheduleCase, name: &str) -> (bool, String) {
    let line = case
        .report
        .lines
        .iter()
        .find(|l| l.name == name)
        .unwrap_or_else(|| panic!("{}: no `{name}` line in the report", case.label));
    let ok = line.status == CheckStatus::Pass;
    let slack = line
        .worst_slack
        .map(|s| format!("{s:.3e}"))
        .unwrap_or_else(|| "n/a".into());
    (ok, format!("{} slack {}", case.label, slack))
}

#[test]
fn c01_schedule_runs_stay_under_the_rate_envelope() {
    let mut ok = true;
    let mut details = Vec::new();
    for case in schedule_cases() {
        let (pass, detail) = graded_line(case, "linear_rate_envelope");
        ok &= pass && case.rows == SCHEDULE_ITERS && case.elapsed_s < 10.0;
        details.push(format!("{detail} rows {} in {:.2}s", case.rows, case.elapsed_s));
    }
    report("rate_envelope", ok, &details.join("; "));
}

#[test]
fn c02_error_reduction_holds_at_every_step() {
    let mut ok = true;
    let mut details = Vec::new();
    for case in schedule_cases() {
        let (pass, detail) = graded_line(case, "error_reduction");
        ok &= pass;
        details.push(detail);
    }
    report("error_reduction", ok, &details.join("; "));
}

#[test]
fn c03_gap_certificate_bounds_the_gap_by_the_suboptimality() {
    let mut ok = true;
    let mut details = Vec::new();
    for case in schedule_cases() {
        let (pass, detail) = graded_line(case, "gap_certificate");
        ok &= pass;
        details.push(detail);
    }
    report("gap_certificate", ok, &details.join("; "));
}

#[test]
fn c04_schedule_iterates_stay_on_the_dyadic_lattice() {
    let mut ok = true;
    let mut details = Vec::new();
    for (label, obj, oracle, card_star) in schedule_instances() {
        let params =
            ScheduleParams::from_constants(1.0, 1.0, oracle.diam_sq(), card_star).unwrap();
        let mut max_delta: u32 = 0;
        let mut violations = 0usize;
        let mut checked = 0usize;
        let mut worst_residual = 0.0f64;
        let result = run_dicg_inspected(
            &obj,
            oracle.as_ref(),
            &schedule_config(params),
            |it| {
                checked += 1;
                let scale = f64::exp2(max_delta as f64);
                for &v in it.x {
                    // Exact lattice membership and exact nonnegativity, no
                    // tolerance on either.
                    if v < 0.0 || (v * scale).fract() != 0.0 {
                        violations += 1;
                    }
                }
                worst_residual = worst_residual.max(oracle.equality_residual(it.x));
                if let Some(d) = it.delta {
                    max_delta = max_delta.max(d);
                }
                Ok(())
            },
        )
        .unwrap_or_else(|e| panic!("{label}: inspected run failed: {e}"));
        let scale = f64::exp2(max_delta as f64);
        for &v in result.x_final.as_slice() {
            if v < 0.0 || (v * scale).fract() != 0.0 {
                violations += 1;
            }
        }
        worst_residual = worst_residual.max(oracle.equality_residual(result.x_final.as_slice()));
        let pass = violations == 0 && worst_residual <= 1e-9 && checked == SCHEDULE_ITERS;
        ok &= pass;
        details.push(format!(
            "{label} {checked} iters, {violations} off-lattice, residual {worst_residual:.2e}"
        ));
    }
    report("dyadic_lattice", ok, &details.join("; "));
}

struct OracleFamily {
    label: &'static str,
    oracle: Box<dyn PolytopeOracle>,
    enumeration: VertexEnumeration,
    seed: u64,
}

fn oracle_families() -> Vec<OracleFamily> {
    let simplex = UnitSimplex::new(10).unwrap();
    let simplex_enum = VertexEnumeration::simplex_basis(10).unwrap();

    let graph = layered_dag(4, 3).unwrap();
    let dag_enum = VertexEnumeration::dag_paths(&graph, 100).unwrap();
    let flow = FlowPolytope::new(graph).unwrap();

    let edges: Vec<(usize, usize)> = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).collect();
    let bipartite = BipartiteGraph::new(4, edges).unwrap();
    let matching_enum = VertexEnumeration::perfect_matchings(&bipartite, 100).unwrap();
    let matching = MatchingPolytope::new(bipartite);

    let model = ChainModel::new(vec![2, 3, 2, 3]).unwrap();
    let chain_enum = VertexEnumeration::chain_assignments(&model, 100).unwrap();
    let chain = ChainMarginalPolytope::new(model);

    vec![
        OracleFamily { label: "simplex_n10", oracle: Box::new(simplex), enumeration: simplex_enum, seed: 101 },
        OracleFamily { label: "dag_81_paths", oracle: Box::new(flow), enumeration: dag_enum, seed: 102 },
        OracleFamily { label: "matching_4x4", oracle: Box::new(matching), enumeration: matching_enum, seed: 103 },
        OracleFamily { label: "chain_len4", oracle: Box::new(chain), enumeration: chain_enum, seed: 104 },
    ]
}

fn random_cost(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.sample(StandardNormal)).collect()
}

/// Union of one or two enumerated supports, so the mask always admits at
/// least one vertex. Every fifth draw uses the all-true mask instead.
fn random_mask(rng: &mut ChaCha8Rng, enumeration: &VertexEnumeration, trial: usize) -> Vec<bool> {
    let dim = enumeration.dim();
    if trial.is_multiple_of(5) {
        return vec![true; dim];
    }
    let mut mask = vec![false; dim];
    let picks = 1 + rng.random_range(0..2);
    for _ in 0..picks {
        let v = &enumeration.vertices()[rng.random_range(0..enumeration.len())];
        for &i in v.support() {
            mask[i] = true;
        }
    }
    mask
}

#[test]
fn c05_oracles_match_brute_force_enumeration() {
    let mut ok = true;
    let mut details = Vec::new();
    for family in oracle_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(family.seed);
        let dim = family.oracle.dim();
        let mut mismatches = 0usize;
        for trial in 0..1000 {
            let cost = random_cost(&mut rng, dim);
            let fast = family.oracle.lmo(&cost).unwrap();
            let brute = brute_lmo(&family.enumeration, &cost).unwrap();
            if fast != brute {
                mismatches += 1;
            }
            let mask = random_mask(&mut rng, &family.enumeration, trial);
            let fast_r = family.oracle.restricted_lmo(&cost, &mask).unwrap();
            let brute_r = brute_restricted_lmo(&family.enumeration, &cost, &mask).unwrap();
            if fast_r != brute_r {
                mismatches += 1;
            }
        }
        ok &= mismatches == 0;
        details.push(format!(
            "{} {} vertices, 1000 costs, {mismatches} mismatches",
            family.label,
            family.enumeration.len()
        ));
    }
    report("oracle_exactness", ok, &details.join("; "));
}

fn line_search_config(max_iters: usize, gap_tolerance: f64) -> SolverConfig {
    SolverConfig {
        algorithm: Algorithm::Dicg,
        step_rule: StepRule::LineSearch,
        schedule: None,
        max_iters,
        gap_tolerance,
        assert_invariants: true,
    }
}

#[test]
fn c06_restricted_away_vertex_dominates_the_support() {
    let mut cases: Vec<(&str, DistanceObjective, Box<dyn PolytopeOracle>, VertexEnumeration)> =
        Vec::new();

    let flow = gen_flow_qp(4, 3, 3, 13).unwrap();
    let graph = layered_dag(4, 3).unwrap();
    cases.push((
        "flow_qp_4x3",
        flow.objective,
        Box::new(flow.polytope),
        VertexEnumeration::dag_paths(&graph, 100).unwrap(),
    ));

    let mix = gen_simplex_mixture(10, 5, 19).unwrap();
    cases.push((
        "simplex_mix_10",
        mix.objective,
        Box::new(mix.polytope),
        VertexEnumeration::simplex_basis(10).unwrap(),
    ));

    let edges: Vec<(usize, usize)> = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).collect();
    let bipartite = BipartiteGraph::new(4, edges).unwrap();
    let matching_enum = VertexEnumeration::perfect_matchings(&bipartite, 100).unwrap();
    let picks = [0usize, 7, 16];
    let dim = matching_enum.dim();
    let mut center = vec![0.0; dim];
    for &p in &picks {
        for &i in matching_enum.vertices()[p].support() {
            center[i] += 1.0 / picks.len() as f64;
        }
    }
    cases.push((
        "matching_4x4",
        DistanceObjective::with_fstar(center, 0.0),
        Box::new(MatchingPolytope::new(bipartite)),
        matching_enum,
    ));

    let model = ChainModel::new(vec![3, 3, 3, 3]).unwrap();
    let chain_enum = VertexEnumeration::chain_assignments(&model, 100).unwrap();
    let chain_picks = [0usize, 40, 80];
    let chain_dim = chain_enum.dim();
    let mut chain_center = vec![0.0; chain_dim];
    for &p in &chain_picks {
        for &i in chain_enum.vertices()[p].support() {
            chain_center[i] += 1.0 / chain_picks.len() as f64;
        }
    }
    cases.push((
        "chain_len4",
        DistanceObjective::with_fstar(chain_center, 0.0),
        Box::new(ChainMarginalPolytope::new(model)),
        chain_enum,
    ));

    let mut ok = true;
    let mut details = Vec::new();
    for (label, obj, oracle, enumeration) in cases {
        let card_star = obj
            .center()
            .iter()
            .filter(|v| **v > 1e-12)
            .count();
        let params =
            ScheduleParams::from_constants(1.0, 1.0, oracle.diam_sq(), card_star).unwrap();
        let mut schedule_cfg = schedule_config(params);
        schedule_cfg.max_iters = 300;
        // Line search collapses small mixtures in a handful of steps, so a
        // slow full-budget schedule run supplies the bulk of the checks.
        let configs = [line_search_config(300, 1e-10), schedule_cfg];
        let mut failures = 0usize;
        let mut checked = 0usize;
        for config in &configs {
            run_dicg_inspected(&obj, oracle.as_ref(), config, |it| {
                checked += 1;
                if !check_away_dominance(&enumeration, it.x, it.grad, it.v_minus) {
                    failures += 1;
                }
                Ok(())
            })
            .unwrap_or_else(|e| panic!("{label}: assert-mode run failed: {e}"));
        }
        ok &= failures == 0 && checked > 300;
        details.push(format!("{label} {checked} iters, {failures} dominance failures"));
    }
    report("away_dominance", ok, &details.join("; "));
}

#[test]
fn c07_sparse_iterates_respect_the_suboptimality_floor() {
    let mut ok = true;
    let mut details = Vec::new();
    for k in [4usize, 8, 16] {
        let n = 2 * k;
        let (obj, floor) = lower_bound_instance(k, n).unwrap();
        let oracle = UnitSimplex::new(n).unwrap();
        let mut traces = Vec::new();
        for algorithm in [Algorithm::Cg, Algorithm::Acg, Algorithm::Pcg, Algorithm::Dicg] {
            let config = SolverConfig {
                algorithm,
                step_rule: StepRule::LineSearch,
                schedule: None,
                max_iters: k,
                gap_tolerance: 0.0,
                assert_invariants: true,
            };
            let result = run(&obj, &oracle, &config)
                .unwrap_or_else(|e| panic!("k={k} {algorithm:?}: run failed: {e}"));
            traces.push(result.trace);
        }
        let (runs_pass, run_margin) = check_sparsity_floor(&traces, k).unwrap();
        let sample_margin = sparse_points_floor_margin(k, n, 10_000, 1234 + k as u64).unwrap();
        let samples_pass = sample_margin >= -1e-9;
        ok &= runs_pass && samples_pass;
        details.push(format!(
            "k={k} floor {floor:.4} run margin {run_margin:.3e} sample margin {sample_margin:.3e}"
        ));
    }
    report("sparsity_floor", ok, &details.join("; "));
}

/// Random simplex point: exponential weights normalized to sum one, on a
/// support of the requested size.
fn random_simplex_point(rng: &mut ChaCha8Rng, n: usize, card: usize) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..card {
        let j = rng.random_range(i..n);
        idx.swap(i, j);
    }
    let mut weights = vec![0.0; n];
    let mut total = 0.0;
    for &i in &idx[..card] {
        let u: f64 = rng.random_range(1e-12..1.0);
        let w = -u.ln();
        weights[i] = w;
        total += w;
    }
    for w in &mut weights {
        *w /= total;
    }
    weights
}

#[test]
fn c08_simplex_transfer_bound_holds_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut failures = 0usize;
    for trial in 0..10_000 {
        let n = 2 + trial % 9;
        let card_x = 1 + rng.random_range(0..n);
        let card_y = 1 + rng.random_range(0..n);
        let x = random_simplex_point(&mut rng, n, card_x);
        let y = random_simplex_point(&mut rng, n, card_y);
        if !check_simplex_transfer_bound(&x, &y) {
            failures += 1;
        }
    }
    report(
        "transfer_bound",
        failures == 0,
        &format!("10000 pairs, n in 2..=10, {failures} violations"),
    );
}

#[test]
fn c09_stores_reconstruct_and_stay_small() {
    let mut ok = true;
    let mut details = Vec::new();
    let instances: Vec<(&str, DistanceObjective, Box<dyn PolytopeOracle>)> = {
        let flow = gen_flow_qp(4, 3, 2, 7).unwrap();
        let mix = gen_simplex_mixture(30, 6, 3).unwrap();
        vec![
            ("flow_qp_4x3", flow.objective, Box::new(flow.polytope)),
            ("simplex_mix_30", mix.objective, Box::new(mix.polytope)),
        ]
    };
    for (label, obj, oracle) in instances {
        for algorithm in [Algorithm::Acg, Algorithm::Pcg, Algorithm::Dicg] {
            let config = SolverConfig {
                algorithm,
                step_rule: StepRule::LineSearch,
                schedule: None,
                max_iters: 400,
                gap_tolerance: 1e-10,
                assert_invariants: true,
            };
            // Assert mode revalidates the store against the iterate after
            // every step, so an Ok run certifies reconstruction drift.
            let result: RunResult = run(&obj, oracle.as_ref(), &config)
                .unwrap_or_else(|e| panic!("{label} {algorithm:?}: run failed: {e}"));
            let sizes_ok = match algorithm {
                Algorithm::Dicg => result.store_sizes.iter().all(|&s| s == 1),
                _ => result
                    .store_sizes
                    .iter()
                    .enumerate()
                    .all(|(i, &s)| s <= i + 2),
            };
            ok &= sizes_ok;
            details.push(format!(
                "{label} {} peak {}",
                algorithm.name(),
                result.peak_store()
            ));
        }
    }
    report("store_consistency", ok, &details.join("; "));
}

#[test]
fn c10_pairwise_methods_beat_cg_on_the_benchmarks() {
    let start = Instant::now();

    let lasso = gen_lasso(100, 100, 0.0625, 7).unwrap();
    let simplex = UnitSimplex::new(lasso.objective.dim()).unwrap();
    let mut lasso_iters = Vec::new();
    for algorithm in [Algorithm::Cg, Algorithm::Pcg, Algorithm::Dicg] {
        let config = SolverConfig {
            algorithm,
            step_rule: StepRule::LineSearch,
            schedule: None,
            max_iters: 2000,
            gap_tolerance: 1e-7,
            assert_invariants: false,
        };
        let result = run(&lasso.objective, &simplex, &config)
            .unwrap_or_else(|e| panic!("lasso {algorithm:?}: run failed: {e}"));
        lasso_iters.push((result.trace.iters_to_gap(1e-6), result.trace.len()));
    }
    let (cg_to, cg_len) = lasso_iters[0];
    let (pcg_to, _) = lasso_iters[1];
    let (dicg_to, _) = lasso_iters[2];
    // CG counts as slower when it never reached the gap inside a budget
    // larger than the pairwise methods needed.
    let cg_effective = cg_to.unwrap_or(cg_len + 1);
    let lasso_ok = matches!((pcg_to, dicg_to), (Some(p), Some(d)) if p < cg_effective && d < cg_effective);

    let flow = gen_flow_qp(5, 4, 3, 7).unwrap();
    let mut flow_iters = Vec::new();
    for algorithm in [Algorithm::Pcg, Algorithm::Dicg] {
        let config = SolverConfig {
            algorithm,
            step_rule: StepRule::LineSearch,
            schedule: None,
            max_iters: 4000,
            gap_tolerance: 1e-8,
            assert_invariants: false,
        };
        let result = run(&flow.objective, &flow.polytope, &config)
            .unwrap_or_else(|e| panic!("flow {algorithm:?}: run failed: {e}"));
        flow_iters.push(result.trace.iters_to_gap(1e-6));
    }
    let flow_ok = matches!(
        (flow_iters[0], flow_iters[1]),
        (Some(p), Some(d)) if d as f64 <= 1.1 * p as f64 + 1e-9
    );

    let elapsed = start.elapsed().as_secs_f64();
    let ok = lasso_ok && flow_ok && elapsed < 60.0;
    report(
        "benchmark_orderings",
        ok,
        &format!(
            "lasso to 1e-6: cg {cg_to:?}/{cg_len} pcg {pcg_to:?} dicg {dicg_to:?}; \
             flow to 1e-6: pcg {:?} dicg {:?}; {elapsed:.1}s",
            flow_iters[0], flow_iters[1]
        ),
    );
}

#[test]
fn c11_ratio_estimation_recovers_the_known_constant() {
    // Uniform mixture over 400 of 800 coordinates: alpha = beta = 1,
    // D^2 = 2, so the schedule ratio is sqrt(1/3200).
    let truth = (1.0f64 / 3200.0).sqrt();
    let (obj, _) = lower_bound_instance(400, 800).unwrap();
    let oracle = UnitSimplex::new(800).unwrap();
    let outcome = estimate_m(&obj, &oracle, truth / 512.0, truth * 64.5, 200).unwrap();
    let factor = if outcome.best_m >= truth {
        outcome.best_m / truth
    } else {
        truth / outcome.best_m
    };
    let ok = outcome.grid.len() == 16 && factor <= 2.0;
    report(
        "ratio_recovery",
        ok,
        &format!(
            "grid {} points, truth {truth:.4e}, best {:.4e}, factor {factor:.2}",
            outcome.grid.len(),
            outcome.best_m
        ),
    );
}
