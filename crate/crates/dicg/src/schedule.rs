//! Predefined step-size schedule for the decomposition-invariant solver,
//! and the dyadic rounding that keeps its iterates on an exact lattice.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Agreement tolerance between derived coefficients and the problem
/// constants they were derived from.
const COEFF_REL_TOL: f64 = 1e-12;

/// Constants driving the predefined step-size sequence
/// eta_t = gain / (2 sqrt(curvature)) * (1 - gain^2/(4 curvature))^((t-1)/2).
///
/// `gain` multiplies the sqrt(h) reduction term of the per-step error
/// recursion and `curvature` bounds the quadratic penalty; for a smooth,
/// strongly convex objective over a polytope they are
/// gain = sqrt(alpha / (8 card(x*))) and curvature = beta D^2 / 2.
/// Only the ratio gain/sqrt(curvature) matters for the sequence, so the
/// schedule can also be built from a single scalar estimate of that ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleParams {
    pub gain: f64,
    pub curvature: f64,
    /// Strong convexity modulus, when known.
    #[serde(default)]
    pub alpha: Option<f64>,
    /// Smoothness modulus, when known.
    #[serde(default)]
    pub beta: Option<f64>,
    /// Squared Euclidean diameter of the polytope, when known.
    #[serde(default)]
    pub diam_sq: Option<f64>,
    /// Cardinality of the optimum's support (or an estimate), when known.
    #[serde(default)]
    pub card_star: Option<usize>,
}

impl ScheduleParams {
    /// Derives both coefficients from the full set of problem constants.
    pub fn from_constants(
        alpha: f64,
        beta: f64,
        diam_sq: f64,
        card_star: usize,
    ) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be positive and finite, got {alpha}"
            )));
        }
        if !(beta.is_finite() && beta > 0.0) || alpha > beta {
            return Err(Error::InvalidParameter(format!(
                "beta must be finite with 0 < alpha <= beta, got alpha={alpha}, beta={beta}"
            )));
        }
        if !(diam_sq.is_finite() && diam_sq > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "diam_sq must be positive and finite, got {diam_sq}"
            )));
        }
        if card_star == 0 {
            return Err(Error::InvalidParameter("card_star must be >= 1".into()));
        }
        let params = ScheduleParams {
            gain: (alpha / (8.0 * card_star as f64)).sqrt(),
            curvature: beta * diam_sq / 2.0,
            alpha: Some(alpha),
            beta: Some(beta),
            diam_sq: Some(diam_sq),
            card_star: Some(card_star),
        };
        params.validate()?;
        Ok(params)
    }

    /// Builds the schedule from a single estimate of gain/sqrt(curvature),
    /// fixing curvature = 1. Used by the grid-search estimator when the
    /// problem constants are unknown.
    pub fn from_gain_ratio(m: f64) -> Result<Self> {
        let params = ScheduleParams {
            gain: m,
            curvature: 1.0,
            alpha: None,
            beta: None,
            diam_sq: None,
            card_star: None,
        };
        params.validate()?;
        Ok(params)
    }

    /// The ratio that fully determines the step-size sequence.
    pub fn gain_ratio(&self) -> f64 {
        self.gain / self.curvature.sqrt()
    }

    /// Checks positivity, the step-validity condition
    /// gain^2 / (2 curvature) < 1, and agreement between the coefficients
    /// and whichever problem constants are present.
    pub fn validate(&self) -> Result<()> {
        if !(self.gain.is_finite() && self.gain > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gain must be positive and finite, got {}",
                self.gain
            )));
        }
        if !(self.curvature.is_finite() && self.curvature > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "curvature must be positive and finite, got {}",
                self.curvature
            )));
        }
        if self.gain * self.gain / (2.0 * self.curvature) >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "gain^2/(2 curvature) = {} must be < 1 for the schedule to be valid",
                self.gain * self.gain / (2.0 * self.curvature)
            )));
        }
        if let (Some(alpha), Some(card)) = (self.alpha, self.card_star) {
            let expect = (alpha / (8.0 * card as f64)).sqrt();
            if (self.gain - expect).abs() > COEFF_REL_TOL * expect {
                return Err(Error::InvalidParameter(format!(
                    "gain {} disagrees with sqrt(alpha/(8 card)) = {expect}",
                    self.gain
                )));
            }
        }
        if let (Some(beta), Some(d2)) = (self.beta, self.diam_sq) {
            let expect = beta * d2 / 2.0;
            if (self.curvature - expect).abs() > COEFF_REL_TOL * expect {
                return Err(Error::InvalidParameter(format!(
                    "curvature {} disagrees with beta diam_sq / 2 = {expect}",
                    self.curvature
                )));
            }
        }
        if let (Some(alpha), Some(beta)) = (self.alpha, self.beta) {
            if alpha > beta {
                return Err(Error::InvalidParameter(format!(
                    "alpha {alpha} exceeds beta {beta}"
                )));
            }
        }
        Ok(())
    }

    /// Geometric contraction factor per step of the error envelope,
    /// 1 - gain^2/(4 curvature); lies in (0, 1) for valid parameters.
    pub fn contraction(&self) -> f64 {
        1.0 - self.gain * self.gain / (4.0 * self.curvature)
    }

    /// The step size prescribed for iteration t >= 1, before dyadic
    /// rounding. Strictly decreasing in t and always within (0, 1).
    pub fn eta(&self, t: usize) -> f64 {
        debug_assert!(t >= 1, "schedule is defined for iterations t >= 1");
        let lead = self.gain / (2.0 * self.curvature.sqrt());
        lead * self.contraction().powf((t as f64 - 1.0) / 2.0)
    }

    /// Linear-rate error envelope curvature * exp(-alpha t / (8 beta
    /// diam_sq card)); available only when all problem constants are known.
    pub fn error_envelope(&self, t: usize) -> Option<f64> {
        let (alpha, beta, d2, card) = (self.alpha?, self.beta?, self.diam_sq?, self.card_star?);
        Some(self.curvature * (-(alpha * t as f64) / (8.0 * beta * d2 * card as f64)).exp())
    }
}

/// Rounds a step size down to the nearest power of two: returns the
/// smallest natural delta (zero allowed) with 2^(-delta) <= eta, together
/// with 2^(-delta) itself. The result always lies in (eta/2, eta].
pub fn dyadic_round(eta: f64) -> Result<(u32, f64)> {
    if !eta.is_finite() || eta <= 0.0 || eta > 1.0 {
        return Err(Error::InvalidStepSize(eta));
    }
    let mut delta: u32 = 0;
    let mut pow = 1.0f64;
    while pow > eta {
        delta += 1;
        pow *= 0.5;
    }
    Ok((delta, pow))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_round_known_values() {
        assert_eq!(dyadic_round(0.3).unwrap(), (2, 0.25));
        assert_eq!(dyadic_round(1.0).unwrap(), (0, 1.0));
        assert_eq!(dyadic_round(0.0625).unwrap(), (4, 0.0625));
    }

    #[test]
    fn dyadic_round_rejects_out_of_range() {
        assert!(dyadic_round(0.0).is_err());
        assert!(dyadic_round(-0.25).is_err());
        assert!(dyadic_round(1.5).is_err());
        assert!(dyadic_round(f64::NAN).is_err());
    }

    #[test]
    fn schedule_known_values() {
        // alpha = 1, beta = 1, D^2 = 2, card = 2:
        // gain = 1/4, curvature = 1, eta_1 = 0.125,
        // eta_3 = 0.125 * (1 - 1/64) = 63/512.
        let p = ScheduleParams::from_constants(1.0, 1.0, 2.0, 2).unwrap();
        assert_eq!(p.gain, 0.25);
        assert_eq!(p.curvature, 1.0);
        assert_eq!(p.eta(1), 0.125);
        assert_eq!(p.eta(3), 0.123046875);
    }

    #[test]
    fn schedule_is_strictly_decreasing() {
        let p = ScheduleParams::from_constants(0.5, 2.0, 6.0, 3).unwrap();
        let mut prev = p.eta(1);
        assert!(prev < 1.0);
        for t in 2..200 {
            let cur = p.eta(t);
            assert!(cur < prev, "eta must strictly decrease, t={t}");
            assert!(cur > 0.0);
            prev = cur;
        }
    }

    #[test]
    fn gain_ratio_source_rejects_invalid() {
        assert!(ScheduleParams::from_gain_ratio(0.3).is_ok());
        // gain^2/2 >= 1 exactly at sqrt(2).
        assert!(ScheduleParams::from_gain_ratio(std::f64::consts::SQRT_2).is_err());
        assert!(ScheduleParams::from_gain_ratio(0.0).is_err());
        assert!(ScheduleParams::from_gain_ratio(-1.0).is_err());
    }

    #[test]
    fn from_constants_rejects_bad_inputs() {
        assert!(ScheduleParams::from_constants(0.0, 1.0, 2.0, 1).is_err());
        assert!(ScheduleParams::from_constants(2.0, 1.0, 2.0, 1).is_err());
        assert!(ScheduleParams::from_constants(1.0, 1.0, 0.0, 1).is_err());
        assert!(ScheduleParams::from_constants(1.0, 1.0, 2.0, 0).is_err());
    }

    #[test]
    fn envelope_needs_all_constants() {
        let full = ScheduleParams::from_constants(1.0, 1.0, 2.0, 2).unwrap();
        assert!(full.error_envelope(1).is_some());
        let ratio_only = ScheduleParams::from_gain_ratio(0.2).unwrap();
        assert!(ratio_only.error_envelope(1).is_none());
    }
}
