//! Feasible sets: 0/1 polytopes with exact linear-minimization oracles.
//!
//! Every polytope here is simplex-like — vertices in {0,1}^n, feasible
//! points in [0,1]^n, described by {x >= 0, A1 x = b1} — which is the
//! structure the decomposition-invariant solver relies on. Each oracle
//! breaks cost ties deterministically (lowest index wins), so runs are
//! reproducible bit for bit.

mod chain;
mod enumerated;
mod flow;
mod matching;
pub mod parse;
mod simplex;

pub use chain::{ChainMarginalPolytope, ChainModel};
pub use enumerated::EnumPolytope;
pub use flow::{DagGraph, FlowPolytope};
pub use matching::{BipartiteGraph, MatchingPolytope};
pub use simplex::UnitSimplex;

use crate::error::{Error, Result};
use crate::vertex::Vertex;

pub trait PolytopeOracle: Send + Sync {
    /// Ambient dimension (number of 0/1 coordinates).
    fn dim(&self) -> usize;

    /// Vertex minimizing cost . v over the polytope.
    fn lmo(&self, cost: &[f64]) -> Result<Vertex>;

    /// Vertex minimizing cost . v among vertices whose support is
    /// contained in the mask. Fails with `EmptySupport` when no vertex
    /// fits inside the mask.
    fn restricted_lmo(&self, cost: &[f64], mask: &[bool]) -> Result<Vertex>;

    /// Upper bound on the squared Euclidean diameter, exact for the
    /// structured polytopes here.
    fn diam_sq(&self) -> f64;

    /// Residual of the equality description A1 x = b1 at x, in the max
    /// norm. Zero for polytopes carrying no equality constraints.
    fn equality_residual(&self, x: &[f64]) -> f64;
}

/// Combined feasibility residual: equality violation plus how negative
/// any coordinate is.
pub fn feasibility_residual(oracle: &dyn PolytopeOracle, x: &[f64]) -> f64 {
    let neg = x.iter().fold(0.0f64, |acc, &v| acc.max(-v));
    oracle.equality_residual(x).max(neg)
}

pub(crate) fn check_cost(cost: &[f64], dim: usize) -> Result<()> {
    if cost.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: cost.len(),
        });
    }
    if cost.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("oracle cost vector".into()));
    }
    Ok(())
}

pub(crate) fn check_mask(mask: &[bool], dim: usize) -> Result<()> {
    if mask.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: mask.len(),
        });
    }
    Ok(())
}
