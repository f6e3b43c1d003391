//! Derivative-free line search over a ray segment.

use crate::error::{Error, Result};
use crate::objective::Objective;

/// Interval width below which the golden-section search stops.
const WIDTH_TOL: f64 = 1e-12;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimization of eta -> f(x + eta dir) over [0, gamma_max].
///
/// Exact for unimodal restrictions, which covers every convex objective.
/// Ties and ascent directions resolve to 0: a step is only taken when it
/// strictly decreases f.
pub fn golden_section_line_search<O: Objective + ?Sized>(
    obj: &O,
    x: &[f64],
    dir: &[f64],
    gamma_max: f64,
) -> Result<f64> {
    if x.len() != obj.dim() || dir.len() != obj.dim() {
        return Err(Error::DimensionMismatch {
            expected: obj.dim(),
            got: x.len().max(dir.len()),
        });
    }
    if !(gamma_max.is_finite() && gamma_max > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "line search needs gamma_max > 0, got {gamma_max}"
        )));
    }

    let mut buf = vec![0.0; x.len()];
    let mut eval = |eta: f64| -> Result<f64> {
        for (b, (xi, di)) in buf.iter_mut().zip(x.iter().zip(dir)) {
            *b = xi + eta * di;
        }
        let f = obj.value(&buf);
        if !f.is_finite() {
            return Err(Error::NonFinite(format!(
                "objective value at line-search point eta = {eta}"
            )));
        }
        Ok(f)
    };

    let f0 = eval(0.0)?;
    let mut lo = 0.0f64;
    let mut hi = gamma_max;
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    while hi - lo > WIDTH_TOL {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = eval(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = eval(d)?;
        }
    }
    let eta = 0.5 * (lo + hi);
    if eval(eta)? < f0 {
        Ok(eta)
    } else {
        Ok(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::DistanceObjective;

    /// Quadratic in disguise, forcing the golden-section default rather
    /// than the distance objective's exact override.
    struct Golden(DistanceObjective);

    impl Objective for Golden {
        fn dim(&self) -> usize {
            self.0.dim()
        }
        fn value(&self, x: &[f64]) -> f64 {
            self.0.value(x)
        }
        fn gradient(&self, x: &[f64]) -> Vec<f64> {
            self.0.gradient(x)
        }
        fn alpha(&self) -> Option<f64> {
            self.0.alpha()
        }
        fn beta(&self) -> f64 {
            self.0.beta()
        }
        fn fstar(&self) -> Option<f64> {
            self.0.fstar()
        }
    }

    #[test]
    fn interior_minimum_matches_exact_solution() {
        // f(x) = 0.5 (x - 0.6)^2 along dir = 1 from 0: minimum at 0.6.
        let obj = Golden(DistanceObjective::new(vec![0.6]));
        let eta = golden_section_line_search(&obj, &[0.0], &[1.0], 1.0).unwrap();
        assert!((eta - 0.6).abs() < 1e-9);
    }

    #[test]
    fn constant_objective_returns_zero() {
        // Direction orthogonal to x - center: f constant along the ray.
        let obj = Golden(DistanceObjective::new(vec![0.0, 0.0]));
        let eta = golden_section_line_search(&obj, &[1.0, 0.0], &[0.0, 0.0], 1.0).unwrap();
        assert_eq!(eta, 0.0);
    }

    #[test]
    fn ascent_direction_returns_zero() {
        let obj = Golden(DistanceObjective::new(vec![0.0]));
        let eta = golden_section_line_search(&obj, &[0.5], &[1.0], 1.0).unwrap();
        assert_eq!(eta, 0.0);
    }

    #[test]
    fn clamps_to_segment_end() {
        // Unconstrained minimizer at 2.0 lies beyond gamma_max = 1.
        let obj = Golden(DistanceObjective::new(vec![2.0]));
        let eta = golden_section_line_search(&obj, &[0.0], &[1.0], 1.0).unwrap();
        assert!((eta - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_gamma_max() {
        let obj = Golden(DistanceObjective::new(vec![0.0]));
        assert!(golden_section_line_search(&obj, &[0.5], &[1.0], 0.0).is_err());
        assert!(golden_section_line_search(&obj, &[0.5], &[1.0], f64::NAN).is_err());
    }
}
