//! General quadratic objective f(x) = 0.5 ||A x - b||^2 + c.x with
//! certified spectral constants.

use crate::error::{Error, Result};
use crate::objective::Objective;
use ndarray::{Array1, Array2, ArrayView1};

/// Relative convergence tolerance of the power iteration.
const POWER_REL_TOL: f64 = 1e-8;
const POWER_MAX_ITERS: usize = 100_000;
/// lambda_min below this fraction of beta is treated as zero: the
/// objective is then convex but not certifiably strongly convex.
const ALPHA_FLOOR_FRAC: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct QuadraticObjective {
    a: Array2<f64>,
    b: Array1<f64>,
    c: Array1<f64>,
    beta: f64,
    alpha: Option<f64>,
    fstar: Option<f64>,
}

impl QuadraticObjective {
    /// Builds the objective and certifies its spectral constants:
    /// beta is an upper bound on lambda_max(A^T A) and alpha, when
    /// returned, a positive lower bound on lambda_min(A^T A). Both come
    /// from power iteration with a Rayleigh-residual refinement; the
    /// minimum eigenvalue is reached by iterating on beta I - A^T A
    /// rather than by inverse iteration, which would need a linear solve.
    pub fn new(a: Array2<f64>, b: Array1<f64>, c: Array1<f64>) -> Result<Self> {
        let (m, n) = a.dim();
        if n == 0 || m == 0 {
            return Err(Error::InvalidParameter(
                "quadratic objective needs a nonempty matrix".into(),
            ));
        }
        if b.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: b.len(),
            });
        }
        if c.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: c.len(),
            });
        }
        if a.iter().any(|v| !v.is_finite())
            || b.iter().any(|v| !v.is_finite())
            || c.iter().any(|v| !v.is_finite())
        {
            return Err(Error::NonFinite("quadratic objective data".into()));
        }
        let (beta, alpha) = spectral_bounds(&a);
        Ok(QuadraticObjective {
            a,
            b,
            c,
            beta,
            alpha,
            fstar: None,
        })
    }

    /// Same objective with a known optimal value over the feasible set.
    pub fn with_fstar(mut self, fstar: f64) -> Self {
        self.fstar = Some(fstar);
        self
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.a
    }

    /// Closed-form minimizer of f along x + eta d over [0, gamma_max]:
    /// eta* = -grad.d / ||A d||^2. A flat curvature direction
    /// (A d = 0) with negative slope runs to the segment end.
    pub fn exact_line_search(&self, x: &[f64], dir: &[f64], gamma_max: f64) -> Result<f64> {
        if !(gamma_max.is_finite() && gamma_max > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "line search needs gamma_max > 0, got {gamma_max}"
            )));
        }
        let xv = ArrayView1::from(x);
        let dv = ArrayView1::from(dir);
        let residual = self.a.dot(&xv) - &self.b;
        let ad = self.a.dot(&dv);
        let slope = residual.dot(&ad) + self.c.dot(&dv);
        if slope >= 0.0 {
            return Ok(0.0);
        }
        let denom = ad.dot(&ad);
        if denom == 0.0 {
            return Ok(gamma_max);
        }
        Ok((-slope / denom).min(gamma_max))
    }
}

impl Objective for QuadraticObjective {
    fn dim(&self) -> usize {
        self.a.ncols()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let xv = ArrayView1::from(x);
        let r = self.a.dot(&xv) - &self.b;
        0.5 * r.dot(&r) + self.c.dot(&xv)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let xv = ArrayView1::from(x);
        let r = self.a.dot(&xv) - &self.b;
        (self.a.t().dot(&r) + &self.c).to_vec()
    }

    fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    fn beta(&self) -> f64 {
        self.beta
    }

    fn fstar(&self) -> Option<f64> {
        self.fstar
    }

    fn line_search(&self, x: &[f64], dir: &[f64], gamma_max: f64) -> Result<f64> {
        self.exact_line_search(x, dir, gamma_max)
    }
}

/// Power iteration on M = A^T A, then on beta I - M, returning a certified
/// upper bound on lambda_max and, when safely positive, a certified lower
/// bound on lambda_min.
fn spectral_bounds(a: &Array2<f64>) -> (f64, Option<f64>) {
    let n = a.ncols();
    let matvec = |v: &Array1<f64>| -> Array1<f64> { a.t().dot(&a.dot(v)) };

    let (rho_max, resid_max) = power_iterate(n, &matvec);
    // Residual certifies: some eigenvalue lies within resid of rho, and
    // after convergence that eigenvalue is lambda_max.
    let beta = (rho_max + resid_max).max(0.0);
    if beta == 0.0 {
        // Zero matrix: f is affine. Flat but valid; no strong convexity.
        return (0.0, None);
    }

    let shifted = |v: &Array1<f64>| -> Array1<f64> {
        let mv = matvec(v);
        v.mapv(|x| x * beta) - mv
    };
    let (rho_shift, resid_shift) = power_iterate(n, &shifted);
    // lambda_max(beta I - M) = beta - lambda_min(M).
    let lambda_min = beta - rho_shift - resid_shift;
    if lambda_min > ALPHA_FLOOR_FRAC * beta {
        (beta, Some(lambda_min))
    } else {
        (beta, None)
    }
}

/// Runs power iteration for a symmetric positive semidefinite operator,
/// returning the final Rayleigh quotient and residual norm. Deterministic:
/// the start vector is a fixed ramp, which is never orthogonal to the top
/// eigenspace in the generic case and costs no RNG dependency.
fn power_iterate(n: usize, matvec: &dyn Fn(&Array1<f64>) -> Array1<f64>) -> (f64, f64) {
    let mut v = Array1::from_shape_fn(n, |i| 1.0 + (i as f64 + 1.0) / n as f64);
    let norm = v.dot(&v).sqrt();
    v.mapv_inplace(|x| x / norm);

    let mut rho_prev = f64::INFINITY;
    for _ in 0..POWER_MAX_ITERS {
        let w = matvec(&v);
        let rho = v.dot(&w);
        let wnorm = w.dot(&w).sqrt();
        if wnorm == 0.0 {
            return (0.0, 0.0);
        }
        let next = w.mapv(|x| x / wnorm);
        if (rho - rho_prev).abs() <= POWER_REL_TOL * rho.abs().max(1e-300) {
            let resid = (&matvec(&next) - &next.mapv(|x| x * rho))
                .mapv(|x| x * x)
                .sum()
                .sqrt();
            return (rho, resid);
        }
        rho_prev = rho;
        v = next;
    }
    let w = matvec(&v);
    let rho = v.dot(&w);
    let resid = (&w - &v.mapv(|x| x * rho)).mapv(|x| x * x).sum().sqrt();
    (rho, resid)
}
