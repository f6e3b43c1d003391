//! Lasso-style least squares over an l1 ball, lifted to the unit simplex.
//!
//! min 0.5 ||A u - b||^2 over ||u||_1 <= r becomes a quadratic over the
//! 2p-simplex through u = r (x_pos - x_neg): the lifted matrix is
//! B = r [A, -A]. B^T B is always singular (column i and column p+i are
//! collinear), so the lifted objective is convex but never strongly
//! convex; it is exactly the composition-with-linear-map class and runs
//! with line search.

use crate::error::{Error, Result};
use crate::objective::QuadraticObjective;
use crate::EPS_NUM;
use ndarray::{concatenate, Array1, Array2, Axis};

/// Maps between l1-ball points in dimension p and simplex points in
/// dimension 2p.
#[derive(Debug, Clone, Copy)]
pub struct ChangeOfVariables {
    pub p: usize,
    pub radius: f64,
}

impl ChangeOfVariables {
    /// Simplex point -> signed point: u_i = r (x_i - x_{p+i}).
    pub fn to_signed(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != 2 * self.p {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.p,
                got: x.len(),
            });
        }
        Ok((0..self.p)
            .map(|i| self.radius * (x[i] - x[self.p + i]))
            .collect())
    }

    /// Signed point with ||u||_1 <= r -> simplex point. Positive and
    /// negative parts land on the two column blocks; the leftover simplex
    /// mass is spread uniformly so that it cancels in `to_signed`.
    pub fn to_simplex(&self, u: &[f64]) -> Result<Vec<f64>> {
        if u.len() != self.p {
            return Err(Error::DimensionMismatch {
                expected: self.p,
                got: u.len(),
            });
        }
        let l1: f64 = u.iter().map(|v| v.abs()).sum();
        if l1 > self.radius * (1.0 + EPS_NUM) {
            return Err(Error::InvalidParameter(format!(
                "||u||_1 = {l1} exceeds the ball radius {}",
                self.radius
            )));
        }
        let mut x = vec![0.0; 2 * self.p];
        for (i, &ui) in u.iter().enumerate() {
            if ui > 0.0 {
                x[i] = ui / self.radius;
            } else {
                x[self.p + i] = -ui / self.radius;
            }
        }
        let slack = (1.0 - l1 / self.radius).max(0.0);
        let spread = slack / (2 * self.p) as f64;
        for xi in x.iter_mut() {
            *xi += spread;
        }
        Ok(x)
    }
}

/// Lifts min 0.5 ||a_bar u - b_bar||^2 over the l1 ball of `radius` to a
/// quadratic over the 2p-simplex.
pub fn lasso_over_simplex(
    a_bar: Array2<f64>,
    b_bar: Array1<f64>,
    radius: f64,
) -> Result<(QuadraticObjective, ChangeOfVariables)> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "l1 radius must be positive, got {radius}"
        )));
    }
    let p = a_bar.ncols();
    if p == 0 {
        return Err(Error::InvalidParameter("empty design matrix".into()));
    }
    let pos = a_bar.mapv(|v| radius * v);
    let neg = a_bar.mapv(|v| -radius * v);
    let lifted = concatenate(Axis(1), &[pos.view(), neg.view()])
        .expect("blocks share a row count");
    let c = Array1::zeros(2 * p);
    let objective = QuadraticObjective::new(lifted, b_bar, c)?;
    Ok((objective, ChangeOfVariables { p, radius }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::Objective;
    use ndarray::array;

    #[test]
    fn one_dimensional_values() {
        // A = [1], b = [0.5], r = 1: over the 2-simplex,
        // f(e1) = 0.5 (1 - 0.5)^2 = 0.125, f(e2) = 0.5 (-1 - 0.5)^2 = 1.125.
        let (obj, cv) = lasso_over_simplex(array![[1.0]], array![0.5], 1.0).unwrap();
        assert_eq!(obj.dim(), 2);
        assert_eq!(obj.value(&[1.0, 0.0]), 0.125);
        assert_eq!(obj.value(&[0.0, 1.0]), 1.125);
        assert_eq!(cv.to_signed(&[1.0, 0.0]).unwrap(), vec![1.0]);
    }

    #[test]
    fn lifted_objective_is_never_strongly_convex() {
        let (obj, _) = lasso_over_simplex(
            array![[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]],
            array![1.0, -1.0, 0.0],
            2.0,
        )
        .unwrap();
        assert!(obj.alpha().is_none());
        assert!(obj.relaxed_class());
    }

    #[test]
    fn embed_then_project_is_identity_and_value_preserving() {
        let (obj, cv) = lasso_over_simplex(
            array![[1.0, 2.0], [0.5, -0.25]],
            array![0.25, 0.5],
            3.0,
        )
        .unwrap();
        let u = vec![0.5, -1.25];
        let x = cv.to_simplex(&u).unwrap();
        let total: f64 = x.iter().sum();
        assert!((total - 1.0).abs() < 1e-15, "embedding must hit the simplex");
        assert!(x.iter().all(|&v| v >= 0.0));
        let back = cv.to_signed(&x).unwrap();
        for (a, b) in back.iter().zip(&u) {
            assert!((a - b).abs() < 1e-12);
        }
        // Lifted objective evaluates to the original least squares at x.
        let direct = 0.5 * ((0.5 - 2.0 * 1.25 - 0.25f64).powi(2)
            + (0.25 + 0.25 * 1.25 - 0.5f64).powi(2));
        assert!((obj.value(&x) - direct).abs() < 1e-12);
    }

    #[test]
    fn embed_rejects_points_outside_the_ball() {
        let cv = ChangeOfVariables { p: 2, radius: 1.0 };
        assert!(cv.to_simplex(&[0.8, 0.8]).is_err());
        assert!(cv.to_simplex(&[0.8]).is_err());
    }
}
