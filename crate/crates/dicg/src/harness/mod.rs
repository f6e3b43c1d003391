//! Experiment harness: deterministic instance generators, the experiment
//! runner behind the CLI, file IO for matrices and vectors, and the
//! grid-search estimator for the schedule's gain ratio.

pub mod estimate;
pub mod experiment;
pub mod gen;
pub mod io;

pub use estimate::{estimate_m, EstimateOutcome, GridPoint};
pub use experiment::{
    build_instance, gnuplot_script, run_experiment, write_generated, AlgorithmSummary,
    BuiltInstance, ExperimentConfig, ExperimentSummary, FloorCheck, InstanceSpec, PolytopeSpec,
    RunSpec,
};
pub use gen::{
    gen_chain_qp, gen_flow_qp, gen_lasso, gen_lasso_noiseless, gen_simplex_mixture, layered_dag,
    ChainQpInstance, FlowQpInstance, LassoInstance, SimplexMixtureInstance,
};
