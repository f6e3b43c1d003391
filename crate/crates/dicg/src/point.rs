//! Dense feasible points and the duality-gap primitive.

use crate::error::{Error, Result};
use crate::vertex::Vertex;

/// A dense point of the ambient space, typically a convex combination of
/// polytope vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct DensePoint(pub Vec<f64>);

impl DensePoint {
    pub fn zeros(dim: usize) -> Self {
        DensePoint(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Indices with magnitude above the support threshold.
    pub fn support(&self, eps: f64) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, v)| v.abs() > eps)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn l2_dist(&self, other: &DensePoint) -> f64 {
        dist_sq(&self.0, &other.0).sqrt()
    }
}

impl From<Vec<f64>> for DensePoint {
    fn from(v: Vec<f64>) -> Self {
        DensePoint(v)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm_sq(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum()
}

pub(crate) fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Frank-Wolfe duality gap (x - v_plus) . grad, where `v_plus` minimizes
/// grad . v over the polytope. Nonnegative whenever `v_plus` really is a
/// minimizer; an upper bound on the primal error for convex objectives.
pub fn duality_gap(x: &DensePoint, v_plus: &Vertex, grad: &[f64]) -> Result<f64> {
    if grad.len() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: grad.len(),
        });
    }
    if v_plus.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: v_plus.dim(),
        });
    }
    Ok(gap_on_slices(x.as_slice(), v_plus, grad))
}

/// Gap without the dimension checks; callers guarantee shapes.
pub(crate) fn gap_on_slices(x: &[f64], v_plus: &Vertex, grad: &[f64]) -> f64 {
    dot(x, grad) - v_plus.dot(grad)
}
