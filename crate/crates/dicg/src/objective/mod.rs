//! Smooth convex objectives and their line searches.

mod distance;
mod lasso;
mod linesearch;
mod quadratic;

pub use distance::DistanceObjective;
pub use lasso::{lasso_over_simplex, ChangeOfVariables};
pub use linesearch::golden_section_line_search;
pub use quadratic::QuadraticObjective;

use crate::error::Result;

/// A smooth convex function on the ambient space of a polytope.
///
/// `beta` must upper-bound the gradient Lipschitz constant; `alpha`, when
/// present, lower-bounds the strong convexity modulus. Objectives that are
/// convex but not strongly convex (singular quadratics such as the
/// simplex-lifted Lasso) return `None` for `alpha`; predefined-schedule
/// guarantees are then unavailable and such objectives run with line
/// search only.
pub trait Objective: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> f64;

    fn gradient(&self, x: &[f64]) -> Vec<f64>;

    /// Strong convexity modulus, if any.
    fn alpha(&self) -> Option<f64>;

    /// Smoothness (gradient Lipschitz) modulus.
    fn beta(&self) -> f64;

    /// Optimal value over the feasible set, when known by construction.
    fn fstar(&self) -> Option<f64>;

    /// True for objectives handled through the error-bound relaxation
    /// instead of strong convexity.
    fn relaxed_class(&self) -> bool {
        self.alpha().is_none()
    }

    /// Minimizes f(x + eta dir) over eta in [0, gamma_max]. The default
    /// is derivative-free golden-section search; structured objectives
    /// override it with a closed form. Returns 0 when no strictly better
    /// point is found along the ray.
    fn line_search(&self, x: &[f64], dir: &[f64], gamma_max: f64) -> Result<f64> {
        golden_section_line_search(self, x, dir, gamma_max)
    }
}
