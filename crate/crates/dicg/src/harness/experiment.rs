//! Experiment configs, instance construction, and the `run` workflow:
//! one trace CSV per algorithm, a JSON summary, and a gnuplot script.

use crate::error::{Error, Result};
use crate::harness::gen::{gen_chain_qp, gen_flow_qp, gen_lasso};
use crate::harness::io::{read_matrix_csv, read_vector_csv};
use crate::objective::{Objective, QuadraticObjective};
use crate::polytope::parse::{parse_bipartite, parse_chain, parse_dag};
use crate::polytope::{
    ChainMarginalPolytope, FlowPolytope, MatchingPolytope, PolytopeOracle, UnitSimplex,
};
use crate::schedule::ScheduleParams;
use crate::solver::{self, RunResult, SolverConfig, StepRule};
use crate::trace::RunTrace;
use crate::verify::check_sparsity_floor;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceSpec {
    /// l1-constrained least squares recast over the doubled simplex.
    Lasso {
        m: usize,
        p: usize,
        radius: f64,
        seed: u64,
    },
    /// Distance-to-mixture quadratic over a layered-DAG flow polytope.
    FlowQp {
        layers: usize,
        width: usize,
        paths_in_opt: usize,
        seed: u64,
    },
    /// Distance-to-mixture quadratic over a chain marginal polytope.
    ChainQp {
        length: usize,
        states: usize,
        seed: u64,
    },
    /// Adversarial simplex instance whose early iterates cannot beat the
    /// 1/(4k) error floor.
    LowerBound { k: usize, n: usize },
    /// Quadratic 0.5 ||A x - b||^2 read from files, over a described
    /// polytope.
    Custom {
        objective_matrix: PathBuf,
        objective_offset: PathBuf,
        polytope: PolytopeSpec,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PolytopeSpec {
    Simplex { n: usize },
    Dag { path: PathBuf },
    Bipartite { path: PathBuf },
    Chain { path: PathBuf },
}

/// One solver run within an experiment. The label defaults to the
/// algorithm name and becomes the trace CSV's file stem.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSpec {
    #[serde(default)]
    pub label: Option<String>,
    #[serde(flatten)]
    pub solver: SolverConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub instance: InstanceSpec,
    #[serde(default)]
    pub algorithms: Vec<RunSpec>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// When false (the default), wall times are zeroed in every output so
    /// a fixed config and seed produce byte-identical files.
    #[serde(default)]
    pub record_time: bool,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: ExperimentConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        for spec in &self.algorithms {
            spec.solver.validate().or_else(|err| match err {
                // Schedule parameters may be filled in from instance
                // constants at run time; everything else is fatal here.
                Error::InvalidParameter(ref what)
                    if spec.solver.step_rule == StepRule::Schedule
                        && spec.solver.schedule.is_none()
                        && what.contains("schedule") =>
                {
                    Ok(())
                }
                other => Err(other),
            })?;
        }
        Ok(())
    }
}

/// An instance ready to solve: objective, oracle, and whatever derived
/// facts the workflow can use downstream.
pub struct BuiltInstance {
    pub label: String,
    pub objective: Box<dyn Objective>,
    pub oracle: Box<dyn PolytopeOracle>,
    /// Schedule constants, when the construction certifies them.
    pub schedule: Option<ScheduleParams>,
    /// Support size of the adversarial instance; routes the summary
    /// through the early-iteration floor check.
    pub lower_bound_k: Option<usize>,
}

pub fn build_instance(spec: &InstanceSpec) -> Result<BuiltInstance> {
    match spec {
        InstanceSpec::Lasso { m, p, radius, seed } => {
            let inst = gen_lasso(*m, *p, *radius, *seed)?;
            let dim = inst.objective.dim();
            Ok(BuiltInstance {
                label: format!("lasso_m{m}_p{p}"),
                objective: Box::new(inst.objective),
                oracle: Box::new(UnitSimplex::new(dim)?),
                schedule: None,
                lower_bound_k: None,
            })
        }
        InstanceSpec::FlowQp {
            layers,
            width,
            paths_in_opt,
            seed,
        } => {
            let inst = gen_flow_qp(*layers, *width, *paths_in_opt, *seed)?;
            let schedule =
                ScheduleParams::from_constants(1.0, 1.0, inst.polytope.diam_sq(), inst.card_star)?;
            Ok(BuiltInstance {
                label: format!("flow_qp_l{layers}_w{width}"),
                objective: Box::new(inst.objective),
                oracle: Box::new(inst.polytope),
                schedule: Some(schedule),
                lower_bound_k: None,
            })
        }
        InstanceSpec::ChainQp {
            length,
            states,
            seed,
        } => {
            let inst = gen_chain_qp(*length, *states, *seed)?;
            let schedule =
                ScheduleParams::from_constants(1.0, 1.0, inst.polytope.diam_sq(), inst.card_star)?;
            Ok(BuiltInstance {
                label: format!("chain_qp_l{length}_s{states}"),
                objective: Box::new(inst.objective),
                oracle: Box::new(inst.polytope),
                schedule: Some(schedule),
                lower_bound_k: None,
            })
        }
        InstanceSpec::LowerBound { k, n } => {
            let (objective, _floor) = crate::verify::lower_bound_instance(*k, *n)?;
            let simplex = UnitSimplex::new(*n)?;
            let schedule = ScheduleParams::from_constants(1.0, 1.0, simplex.diam_sq(), *k)?;
            Ok(BuiltInstance {
                label: format!("lower_bound_k{k}_n{n}"),
                objective: Box::new(objective),
                oracle: Box::new(simplex),
                schedule: Some(schedule),
                lower_bound_k: Some(*k),
            })
        }
        InstanceSpec::Custom {
            objective_matrix,
            objective_offset,
            polytope,
        } => {
            let a = read_matrix_csv(objective_matrix)?;
            let b = read_vector_csv(objective_offset)?;
            let n = a.ncols();
            let objective =
                QuadraticObjective::new(a, b, ndarray::Array1::zeros(n))?;
            let oracle = build_polytope(polytope)?;
            if oracle.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: oracle.dim(),
                    got: n,
                });
            }
            Ok(BuiltInstance {
                label: "custom".into(),
                objective: Box::new(objective),
                oracle,
                schedule: None,
                lower_bound_k: None,
            })
        }
    }
}

fn build_polytope(spec: &PolytopeSpec) -> Result<Box<dyn PolytopeOracle>> {
    match spec {
        PolytopeSpec::Simplex { n } => Ok(Box::new(UnitSimplex::new(*n)?)),
        PolytopeSpec::Dag { path } => {
            let graph = parse_dag(&std::fs::read_to_string(path)?)?;
            Ok(Box::new(FlowPolytope::new(graph)?))
        }
        PolytopeSpec::Bipartite { path } => {
            let graph = parse_bipartite(&std::fs::read_to_string(path)?)?;
            Ok(Box::new(MatchingPolytope::new(graph)))
        }
        PolytopeSpec::Chain { path } => {
            let model = parse_chain(&std::fs::read_to_string(path)?)?;
            Ok(Box::new(ChainMarginalPolytope::new(model)))
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub label: String,
    pub algorithm: String,
    pub iterations: usize,
    pub termination: Option<String>,
    pub final_f: Option<f64>,
    pub final_gap: Option<f64>,
    pub iters_to_gap_1e3: Option<usize>,
    pub iters_to_gap_1e6: Option<usize>,
    pub peak_store: usize,
    /// Wall time of the run; zeroed unless the config records time.
    pub wall_ns: u64,
    /// Solver exit code: 0 converged, 2 budget exhausted, 3 invariant
    /// violation, 1 any other failure.
    pub exit_code: i32,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FloorCheck {
    pub k: usize,
    pub passed: bool,
    /// Smallest observed h_t - 1/(4k) over the checked prefix.
    pub worst_margin: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub instance: InstanceSpec,
    pub instance_label: String,
    pub algorithms: Vec<AlgorithmSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub floor_check: Option<FloorCheck>,
}

/// Runs every configured algorithm on the instance, writing one trace CSV
/// per run plus `summary.json` and `plot.gp` into the output directory.
/// A failing run is recorded in the summary and does not stop the others.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentSummary> {
    let dir = config
        .output_dir
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("run needs an output_dir".into()))?
        .clone();
    if config.algorithms.is_empty() {
        return Err(Error::InvalidParameter(
            "experiment config lists no algorithms".into(),
        ));
    }
    config.validate()?;
    std::fs::create_dir_all(&dir)?;

    let instance = build_instance(&config.instance)?;
    let mut summaries = Vec::new();
    let mut floor_traces: Vec<RunTrace> = Vec::new();
    let mut labels_seen: Vec<String> = Vec::new();

    for spec in &config.algorithms {
        let label = spec
            .label
            .clone()
            .unwrap_or_else(|| spec.solver.algorithm.name().to_string());
        if labels_seen.contains(&label) {
            return Err(Error::InvalidParameter(format!(
                "duplicate run label {label:?}"
            )));
        }
        labels_seen.push(label.clone());

        let solver_config = match resolve_schedule(&spec.solver, instance.schedule.as_ref()) {
            Ok(c) => c,
            Err(err) => {
                summaries.push(failed_summary(&label, spec, err));
                continue;
            }
        };
        let started = Instant::now();
        let outcome = solver::run(
            instance.objective.as_ref(),
            instance.oracle.as_ref(),
            &solver_config,
        );
        let wall_ns = if config.record_time {
            u64::try_from(started.elapsed().as_nanos()).unwrap_or(u64::MAX)
        } else {
            0
        };
        let exit_code = solver::exit_code(&outcome);
        match outcome {
            Ok(mut result) => {
                if !config.record_time {
                    for row in &mut result.trace.rows {
                        row.time_ns = 0;
                    }
                }
                std::fs::write(
                    dir.join(format!("{label}.csv")),
                    result.trace.to_csv_string(),
                )?;
                summaries.push(completed_summary(&label, spec, &result, wall_ns, exit_code));
                floor_traces.push(result.trace);
            }
            Err(err) => {
                let mut failed = failed_summary(&label, spec, err);
                failed.exit_code = exit_code;
                summaries.push(failed);
            }
        }
    }

    let floor_check = match instance.lower_bound_k {
        Some(k) if !floor_traces.is_empty() => {
            let (passed, worst_margin) = check_sparsity_floor(&floor_traces, k)?;
            Some(FloorCheck {
                k,
                passed,
                worst_margin,
            })
        }
        _ => None,
    };

    let summary = ExperimentSummary {
        instance: config.instance.clone(),
        instance_label: instance.label,
        algorithms: summaries,
        floor_check,
    };
    std::fs::write(
        dir.join("summary.json"),
        serde_json::to_string_pretty(&summary)?,
    )?;
    std::fs::write(dir.join("plot.gp"), gnuplot_script(&summary))?;
    Ok(summary)
}

/// Fills missing schedule parameters from the instance's certified
/// constants; errors when neither side provides them.
fn resolve_schedule(
    config: &SolverConfig,
    instance_schedule: Option<&ScheduleParams>,
) -> Result<SolverConfig> {
    let mut resolved = config.clone();
    if resolved.step_rule == StepRule::Schedule && resolved.schedule.is_none() {
        match instance_schedule {
            Some(params) => resolved.schedule = Some(params.clone()),
            None => {
                return Err(Error::InvalidParameter(
                    "instance certifies no constants; pass explicit schedule parameters".into(),
                ))
            }
        }
    }
    resolved.validate()?;
    Ok(resolved)
}

fn completed_summary(
    label: &str,
    spec: &RunSpec,
    result: &RunResult,
    wall_ns: u64,
    exit_code: i32,
) -> AlgorithmSummary {
    let last = result.trace.last();
    AlgorithmSummary {
        label: label.to_string(),
        algorithm: spec.solver.algorithm.name().to_string(),
        iterations: result.trace.len(),
        termination: result.trace.termination.map(|r| r.to_string()),
        final_f: last.map(|row| row.f_val),
        final_gap: last.map(|row| row.gap),
        iters_to_gap_1e3: result.trace.iters_to_gap(1e-3),
        iters_to_gap_1e6: result.trace.iters_to_gap(1e-6),
        peak_store: result.peak_store(),
        wall_ns,
        exit_code,
        error: None,
    }
}

fn failed_summary(label: &str, spec: &RunSpec, err: Error) -> AlgorithmSummary {
    AlgorithmSummary {
        label: label.to_string(),
        algorithm: spec.solver.algorithm.name().to_string(),
        iterations: 0,
        termination: None,
        final_f: None,
        final_gap: None,
        iters_to_gap_1e3: None,
        iters_to_gap_1e6: None,
        peak_store: 0,
        wall_ns: 0,
        exit_code: 1,
        error: Some(err.to_string()),
    }
}

/// Gap-versus-iteration plot over every trace the experiment produced.
pub fn gnuplot_script(summary: &ExperimentSummary) -> String {
    let mut script = String::new();
    script.push_str("set datafile separator comma\n");
    script.push_str("set logscale y\n");
    script.push_str("set xlabel \"iteration\"\n");
    script.push_str("set ylabel \"duality gap\"\n");
    script.push_str(&format!(
        "set title \"{}\"\n",
        summary.instance_label.replace('"', "")
    ));
    let plotted: Vec<String> = summary
        .algorithms
        .iter()
        .filter(|algo| algo.error.is_none())
        .map(|algo| {
            format!(
                "\"{label}.csv\" skip 1 using 1:3 with lines title \"{label}\"",
                label = algo.label
            )
        })
        .collect();
    if plotted.is_empty() {
        script.push_str("# no successful runs to plot\n");
    } else {
        script.push_str("plot \\\n  ");
        script.push_str(&plotted.join(", \\\n  "));
        script.push('\n');
    }
    script
}

/// Writes instance files for offline inspection: the generator's raw data
/// plus a `meta.json` echoing parameters and derived facts.
pub fn write_generated(spec: &InstanceSpec, dir: &Path) -> Result<()> {
    use crate::harness::io::{format_matrix_csv, format_vector_csv};
    std::fs::create_dir_all(dir)?;
    let meta = |value: serde_json::Value| -> Result<()> {
        std::fs::write(dir.join("meta.json"), serde_json::to_string_pretty(&value)?)?;
        Ok(())
    };
    match spec {
        InstanceSpec::Lasso { m, p, radius, seed } => {
            let inst = gen_lasso(*m, *p, *radius, *seed)?;
            std::fs::write(
                dir.join("design.csv"),
                format_matrix_csv(inst.objective.matrix()),
            )?;
            std::fs::write(
                dir.join("planted_simplex.csv"),
                format_vector_csv(inst.planted.as_slice()),
            )?;
            meta(serde_json::json!({
                "kind": "lasso",
                "m": m, "p": p, "radius": radius, "seed": seed,
                "simplex_dim": inst.objective.dim(),
            }))
        }
        InstanceSpec::FlowQp {
            layers,
            width,
            paths_in_opt,
            seed,
        } => {
            let inst = gen_flow_qp(*layers, *width, *paths_in_opt, *seed)?;
            std::fs::write(
                dir.join("graph.txt"),
                crate::polytope::parse::format_dag(inst.polytope.graph()),
            )?;
            std::fs::write(
                dir.join("center.csv"),
                format_vector_csv(inst.planted.as_slice()),
            )?;
            meta(serde_json::json!({
                "kind": "flow_qp",
                "layers": layers, "width": width,
                "paths_in_opt": paths_in_opt, "seed": seed,
                "card_star": inst.card_star,
                "diam_sq": inst.polytope.diam_sq(),
                "alpha": 1.0, "beta": 1.0, "fstar": 0.0,
            }))
        }
        InstanceSpec::ChainQp {
            length,
            states,
            seed,
        } => {
            let inst = gen_chain_qp(*length, *states, *seed)?;
            std::fs::write(
                dir.join("chain.txt"),
                crate::polytope::parse::format_chain(inst.polytope.model()),
            )?;
            std::fs::write(
                dir.join("center.csv"),
                format_vector_csv(inst.planted.as_slice()),
            )?;
            meta(serde_json::json!({
                "kind": "chain_qp",
                "length": length, "states": states, "seed": seed,
                "card_star": inst.card_star,
                "diam_sq": inst.polytope.diam_sq(),
                "alpha": 1.0, "beta": 1.0, "fstar": 0.0,
            }))
        }
        InstanceSpec::LowerBound { k, n } => {
            let (objective, floor) = crate::verify::lower_bound_instance(*k, *n)?;
            std::fs::write(
                dir.join("center.csv"),
                format_vector_csv(objective.center()),
            )?;
            meta(serde_json::json!({
                "kind": "lower_bound",
                "k": k, "n": n,
                "floor": floor,
            }))
        }
        InstanceSpec::Custom { .. } => Err(Error::InvalidParameter(
            "custom instances come from files already on disk".into(),
        )),
    }
}
