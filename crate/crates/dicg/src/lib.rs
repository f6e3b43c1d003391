//! Conditional-gradient optimization over 0/1 polytopes.
//!
//! The crate provides projection-free first-order solvers (classical
//! conditional gradient, away-step and pairwise variants, and a
//! decomposition-invariant pairwise method that needs no vertex store),
//! exact linear-minimization oracles for four structured polytopes
//! (unit simplex, s-t flow on a DAG, bipartite perfect matching, chain
//! marginal), a verification module that turns the method's convergence
//! guarantees into executable checks, and an experiment harness with a
//! small CLI.
//!
//! All polytopes are simplex-like: every vertex is a 0/1 vector and
//! feasible points live in an affine slice of the unit cube. That
//! structure is what lets the decomposition-invariant solver replace the
//! away vertex of pairwise methods with a restricted oracle call over the
//! support of the current iterate.

pub mod error;
pub mod harness;
pub mod objective;
pub mod point;
pub mod polytope;
pub mod schedule;
pub mod solver;
pub mod trace;
pub mod verify;
pub mod vertex;

pub use error::{Error, Result};
pub use point::DensePoint;
pub use schedule::ScheduleParams;
pub use trace::{RunTrace, TerminationReason, TraceRow};
pub use vertex::Vertex;

/// Comparison slack for certified inequalities and feasibility residuals.
pub const EPS_NUM: f64 = 1e-9;

/// Magnitude below which a coordinate is treated as zero when computing
/// supports.
pub const EPS_SUPP: f64 = 1e-12;
