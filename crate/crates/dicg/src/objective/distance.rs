//! Squared-distance objective f(x) = 0.5 ||x - center||^2.
//!
//! The workhorse of planted instances: alpha = beta = 1 exactly, and when
//! the center is feasible the optimal value is 0 with x* = center.

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::point::{dist_sq, dot, norm_sq};

#[derive(Debug, Clone)]
pub struct DistanceObjective {
    center: Vec<f64>,
    fstar: Option<f64>,
}

impl DistanceObjective {
    pub fn new(center: Vec<f64>) -> Self {
        DistanceObjective {
            center,
            fstar: None,
        }
    }

    /// Marks the optimal value as known; generators use this when the
    /// center is feasible by construction (then fstar = 0).
    pub fn with_fstar(center: Vec<f64>, fstar: f64) -> Self {
        DistanceObjective {
            center,
            fstar: Some(fstar),
        }
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    /// Closed-form minimizer of f along x + eta d over [0, gamma_max]:
    /// the unconstrained optimum (center - x).d / ||d||^2, clamped.
    pub fn exact_line_search(&self, x: &[f64], dir: &[f64], gamma_max: f64) -> Result<f64> {
        if !(gamma_max.is_finite() && gamma_max > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "line search needs gamma_max > 0, got {gamma_max}"
            )));
        }
        let g_dot_d = dot(x, dir) - dot(&self.center, dir);
        if g_dot_d >= 0.0 {
            return Ok(0.0);
        }
        let denom = norm_sq(dir);
        debug_assert!(denom > 0.0, "descent implies a nonzero direction");
        Ok((-g_dot_d / denom).min(gamma_max))
    }
}

impl Objective for DistanceObjective {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        0.5 * dist_sq(x, &self.center)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.center).map(|(a, c)| a - c).collect()
    }

    fn alpha(&self) -> Option<f64> {
        Some(1.0)
    }

    fn beta(&self) -> f64 {
        1.0
    }

    fn fstar(&self) -> Option<f64> {
        self.fstar
    }

    fn line_search(&self, x: &[f64], dir: &[f64], gamma_max: f64) -> Result<f64> {
        self.exact_line_search(x, dir, gamma_max)
    }
}
