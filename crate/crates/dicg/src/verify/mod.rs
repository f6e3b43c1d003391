//! Executable checks for the inequalities the solvers rely on: away-vertex
//! dominance over support-contained vertices, the simplex weight-transfer
//! bound, per-run convergence envelopes, and the sparse lower-bound floor.

pub mod enumeration;
pub mod suites;

pub use enumeration::{brute_lmo, brute_restricted_lmo, Method, VertexEnumeration};
pub use suites::{run_suite, Suite};

use crate::error::{Error, Result};
use crate::objective::{DistanceObjective, Objective};
use crate::schedule::ScheduleParams;
use crate::trace::RunTrace;
use crate::vertex::{support_mask, Vertex};
use crate::{EPS_NUM, EPS_SUPP};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The check does not apply to the given inputs (e.g. missing constants).
    Skipped,
}

/// One line of a verification report, as printed by the CLI.
#[derive(Debug, Clone)]
pub struct CheckLine {
    pub name: String,
    pub status: CheckStatus,
    /// Largest observed lhs - rhs over all checked inequalities; negative
    /// values are margin, positive values are violations.
    pub worst_slack: Option<f64>,
    pub detail: String,
}

impl CheckLine {
    pub fn pass(name: impl Into<String>, worst_slack: Option<f64>, detail: impl Into<String>) -> Self {
        CheckLine {
            name: name.into(),
            status: CheckStatus::Pass,
            worst_slack,
            detail: detail.into(),
        }
    }

    pub fn fail(name: impl Into<String>, worst_slack: Option<f64>, detail: impl Into<String>) -> Self {
        CheckLine {
            name: name.into(),
            status: CheckStatus::Fail,
            worst_slack,
            detail: detail.into(),
        }
    }

    pub fn skipped(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckLine {
            name: name.into(),
            status: CheckStatus::Skipped,
            worst_slack: None,
            detail: detail.into(),
        }
    }

    /// Pass/fail from an observed worst slack against a zero threshold.
    pub fn from_slack(name: impl Into<String>, worst_slack: f64, detail: impl Into<String>) -> Self {
        if worst_slack <= 0.0 {
            CheckLine::pass(name, Some(worst_slack), detail)
        } else {
            CheckLine::fail(name, Some(worst_slack), detail)
        }
    }
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "SKIP",
        };
        write!(f, "{tag} {:<28}", self.name)?;
        if let Some(s) = self.worst_slack {
            write!(f, " worst slack {s:>13.6e}")?;
        }
        if !self.detail.is_empty() {
            write!(f, "  {}", self.detail)?;
        }
        Ok(())
    }
}

/// Report produced by `check_convergence_bounds`.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub lines: Vec<CheckLine>,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.status != CheckStatus::Fail)
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// True iff every enumerated vertex whose support lies inside supp(x) is
/// dominated by the away vertex: v . grad <= v_minus . grad + eps.
pub fn check_away_dominance(
    enumeration: &VertexEnumeration,
    x: &[f64],
    grad: &[f64],
    v_minus: &Vertex,
) -> bool {
    let mask = support_mask(x);
    // An away vertex outside the iterate's support could not be drained,
    // so it fails the check no matter how large its gradient correlation.
    if !v_minus.within_mask(&mask) {
        return false;
    }
    let away_dot = v_minus.dot(grad);
    enumeration
        .vertices()
        .iter()
        .filter(|v| v.within_mask(&mask))
        .all(|v| v.dot(grad) <= away_dot + EPS_NUM)
}

/// Simplex weight-transfer bound: the total positive-part difference between
/// two simplex points is at most sqrt(card(y)) times their distance.
pub fn check_simplex_transfer_bound(x: &[f64], y: &[f64]) -> bool {
    debug_assert_eq!(x.len(), y.len());
    let moved: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (a - b).max(0.0))
        .sum();
    let card = y.iter().filter(|v| **v > EPS_SUPP).count();
    let dist = x
        .iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    moved <= (card as f64).sqrt() * dist + EPS_NUM
}

/// Checks a schedule-driven run against its three guarantees: the linear
/// rate envelope, the per-step error reduction, and the gap certificate.
///
/// Suboptimality comes from `fstar` when given (h is recomputed as f - f*),
/// otherwise from the trace's own h column. Envelope and certificate lines
/// are skipped when the schedule params carry no problem constants.
pub fn check_convergence_bounds(
    trace: &RunTrace,
    params: &ScheduleParams,
    fstar: Option<f64>,
) -> Result<BoundReport> {
    params.validate()?;
    trace.validate()?;
    if trace.is_empty() {
        return Err(Error::InvalidParameter("trace has no rows".into()));
    }
    let h: Vec<f64> = match fstar {
        Some(fs) => trace.rows.iter().map(|r| r.f_val - fs).collect(),
        None => trace
            .rows
            .iter()
            .map(|r| {
                r.h.ok_or_else(|| {
                    Error::InvalidParameter(
                        "trace has no suboptimality column and no optimal value was given".into(),
                    )
                })
            })
            .collect::<Result<_>>()?,
    };

    let mut lines = Vec::with_capacity(3);

    // Envelope: h_t <= curvature * exp(-alpha t / (8 beta D^2 card)).
    lines.push(match params.error_envelope(1) {
        None => CheckLine::skipped(
            "linear_rate_envelope",
            "problem constants not supplied; envelope not applicable",
        ),
        Some(_) => {
            let mut worst = f64::NEG_INFINITY;
            let mut first_bad = None;
            for (row, ht) in trace.rows.iter().zip(&h) {
                let bound = params.error_envelope(row.t).expect("constants present");
                let slack = ht - bound - EPS_NUM;
                if slack > worst {
                    worst = slack;
                }
                if slack > 0.0 && first_bad.is_none() {
                    first_bad = Some(row.t);
                }
            }
            match first_bad {
                None => CheckLine::pass(
                    "linear_rate_envelope",
                    Some(worst),
                    format!("{} rows", trace.len()),
                ),
                Some(t) => CheckLine::fail(
                    "linear_rate_envelope",
                    Some(worst),
                    format!("first violation at t = {t}"),
                ),
            }
        }
    });

    // Per-step reduction: h_{t+1} <= h_t - eta gain sqrt(h_t) + eta^2 curvature,
    // with eta the schedule value before dyadic rounding.
    {
        let mut worst = f64::NEG_INFINITY;
        let mut first_bad = None;
        let mut steps = 0usize;
        for i in 0..trace.len().saturating_sub(1) {
            let eta = trace.rows[i].eta_raw;
            let rhs = h[i] - eta * params.gain * h[i].max(0.0).sqrt()
                + eta * eta * params.curvature;
            let slack = h[i + 1] - rhs - EPS_NUM;
            steps += 1;
            if slack > worst {
                worst = slack;
            }
            if slack > 0.0 && first_bad.is_none() {
                first_bad = Some(trace.rows[i + 1].t);
            }
        }
        lines.push(if steps == 0 {
            CheckLine::pass("error_reduction", None, "no consecutive steps to check")
        } else {
            match first_bad {
                None => CheckLine::pass(
                    "error_reduction",
                    Some(worst),
                    format!("{steps} steps"),
                ),
                Some(t) => CheckLine::fail(
                    "error_reduction",
                    Some(worst),
                    format!("first violation at t = {t}"),
                ),
            }
        });
    }

    // Gap certificate: gap <= sqrt(2 beta D^2 h) whenever h <= beta D^2 / 2.
    lines.push(match (params.beta, params.diam_sq) {
        (Some(beta), Some(diam_sq)) => {
            let bd2 = beta * diam_sq;
            let mut worst = f64::NEG_INFINITY;
            let mut first_bad = None;
            let mut checked = 0usize;
            for (row, ht) in trace.rows.iter().zip(&h) {
                if *ht > bd2 / 2.0 {
                    continue;
                }
                checked += 1;
                let bound = (2.0 * bd2 * ht.max(0.0)).sqrt();
                let slack = row.gap - bound - EPS_NUM;
                if slack > worst {
                    worst = slack;
                }
                if slack > 0.0 && first_bad.is_none() {
                    first_bad = Some(row.t);
                }
            }
            if checked == 0 {
                CheckLine::pass("gap_certificate", None, "no rows below the curvature level")
            } else {
                match first_bad {
                    None => CheckLine::pass(
                        "gap_certificate",
                        Some(worst),
                        format!("{checked} rows"),
                    ),
                    Some(t) => CheckLine::fail(
                        "gap_certificate",
                        Some(worst),
                        format!("first violation at t = {t}"),
                    ),
                }
            }
        }
        _ => CheckLine::skipped(
            "gap_certificate",
            "smoothness or diameter not supplied; certificate not applicable",
        ),
    });

    Ok(BoundReport { lines })
}

/// Objective whose sparse suboptimality floor is known: squared distance to
/// the uniform point over the first k coordinates of the n-simplex. Any
/// feasible x with support size at most k/2 has f(x) >= 1/(4k).
pub fn lower_bound_instance(k: usize, n: usize) -> Result<(DistanceObjective, f64)> {
    if k == 0 || !k.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "support budget k must be even and positive, got {k}"
        )));
    }
    if k > n {
        return Err(Error::InvalidParameter(format!(
            "support budget k = {k} exceeds dimension n = {n}"
        )));
    }
    let mut center = vec![0.0; n];
    center[..k].fill(1.0 / k as f64);
    Ok((DistanceObjective::with_fstar(center, 0.0), 1.0 / (4 * k) as f64))
}

/// Checks the early-iteration floor h_t >= 1/(4k) across traces of runs that
/// started at a vertex. Applies while t + 1 <= k/2, where any method that
/// adds at most one vertex per step cannot have found a dense iterate yet.
/// Returns the pass flag plus the smallest observed h - floor margin.
pub fn check_sparsity_floor(traces: &[RunTrace], k: usize) -> Result<(bool, f64)> {
    let floor = 1.0 / (4 * k) as f64;
    let mut worst_margin = f64::INFINITY;
    for trace in traces {
        for row in &trace.rows {
            if row.t + 1 > k / 2 {
                break;
            }
            let h = row.h.ok_or_else(|| {
                Error::InvalidParameter("floor check needs the suboptimality column".into())
            })?;
            let margin = h - floor;
            if margin < worst_margin {
                worst_margin = margin;
            }
        }
    }
    Ok((worst_margin >= -EPS_NUM, worst_margin))
}

/// Samples random feasible points with support size at most k/2 and returns
/// the smallest h - floor margin over all of them; the floor holds iff the
/// result is >= -eps.
pub fn sparse_points_floor_margin(k: usize, n: usize, samples: usize, seed: u64) -> Result<f64> {
    let (obj, floor) = lower_bound_instance(k, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    let max_card = (k / 2).max(1);
    for _ in 0..samples {
        let card = rng.random_range(1..=max_card);
        let support = rand::seq::index::sample(&mut rng, n, card).into_vec();
        let mut x = vec![0.0; n];
        let mut total = 0.0;
        let mut weights = Vec::with_capacity(card);
        for _ in 0..card {
            let w: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
            weights.push(w);
            total += w;
        }
        for (i, w) in support.iter().zip(&weights) {
            x[*i] = w / total;
        }
        let margin = obj.value(&x) - floor;
        if margin < worst {
            worst = margin;
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::{TerminationReason, TraceRow};

    fn simple_row(t: usize, f_val: f64, gap: f64, h: f64, eta_raw: f64) -> TraceRow {
        TraceRow {
            t,
            f_val,
            gap,
            h: Some(h),
            eta: eta_raw,
            eta_raw,
            time_ns: 0,
            feas_residual: 0.0,
        }
    }

    #[test]
    fn dominance_matches_the_hand_example() {
        let e = VertexEnumeration::simplex_basis(3).unwrap();
        let x = [0.5, 0.5, 0.0];
        let grad = [1.0, 2.0, 3.0];
        let e2 = Vertex::new(vec![1], 3).unwrap();
        let e1 = Vertex::new(vec![0], 3).unwrap();
        assert!(check_away_dominance(&e, &x, &grad, &e2));
        assert!(!check_away_dominance(&e, &x, &grad, &e1));
    }

    #[test]
    fn dominance_at_a_vertex_requires_that_vertex() {
        let e = VertexEnumeration::simplex_basis(3).unwrap();
        let x = [0.0, 1.0, 0.0];
        let grad = [0.3, -0.2, 0.9];
        let e2 = Vertex::new(vec![1], 3).unwrap();
        let e3 = Vertex::new(vec![2], 3).unwrap();
        assert!(check_away_dominance(&e, &x, &grad, &e2));
        assert!(!check_away_dominance(&e, &x, &grad, &e3));
    }

    #[test]
    fn transfer_bound_basic_cases() {
        assert!(check_simplex_transfer_bound(&[0.5, 0.5], &[0.5, 0.5]));
        // x = e1, y = e2: moved mass 1, bound sqrt(1) * sqrt(2).
        assert!(check_simplex_transfer_bound(&[1.0, 0.0], &[0.0, 1.0]));
    }

    #[test]
    fn corrupted_suboptimality_fails_the_reduction_line() {
        let params = ScheduleParams::from_gain_ratio(0.25).unwrap();
        let mut rows = Vec::new();
        let mut h = 0.5;
        for t in 1..=8 {
            let eta = params.eta(t);
            rows.push(simple_row(t, h, 2.0 * h, h, eta));
            h = h - eta * params.gain * h.sqrt() + eta * eta * params.curvature;
        }
        let mut trace = RunTrace { rows, termination: Some(TerminationReason::MaxIters) };
        let report = check_convergence_bounds(&trace, &params, None).unwrap();
        assert!(report.passed());
        // Envelope is skipped without constants.
        assert_eq!(report.lines[0].status, CheckStatus::Skipped);

        trace.rows[4].h = Some(10.0);
        let report = check_convergence_bounds(&trace, &params, None).unwrap();
        let reduction = &report.lines[1];
        assert_eq!(reduction.status, CheckStatus::Fail);
        assert!(reduction.detail.contains("t = 5"));
        assert!(reduction.worst_slack.unwrap() > 0.0);
    }

    #[test]
    fn missing_suboptimality_column_is_a_precondition_error() {
        let params = ScheduleParams::from_gain_ratio(0.25).unwrap();
        let mut row = simple_row(1, 1.0, 2.0, 1.0, 0.1);
        row.h = None;
        let trace = RunTrace { rows: vec![row], termination: None };
        assert!(check_convergence_bounds(&trace, &params, None).is_err());
        assert!(check_convergence_bounds(&trace, &params, Some(0.0)).is_ok());
    }

    #[test]
    fn floor_instance_hand_values() {
        let (obj, floor) = lower_bound_instance(2, 4).unwrap();
        assert_eq!(floor, 0.125);
        let e1 = [1.0, 0.0, 0.0, 0.0];
        assert!((obj.value(&e1) - 0.25).abs() < 1e-15);
        assert!(lower_bound_instance(3, 4).is_err());
        assert!(lower_bound_instance(6, 4).is_err());
    }

    #[test]
    fn floor_check_is_vacuous_for_tiny_budgets() {
        let trace = RunTrace {
            rows: vec![simple_row(1, 0.0, 0.0, 0.0, 0.0)],
            termination: None,
        };
        let (ok, margin) = check_sparsity_floor(&[trace], 2).unwrap();
        assert!(ok);
        assert!(margin.is_infinite());
    }

    #[test]
    fn injected_floor_violation_is_caught() {
        let rows = vec![
            simple_row(1, 0.5, 1.0, 0.5, 0.1),
            simple_row(2, 0.001, 0.01, 0.001, 0.1),
            simple_row(3, 0.0005, 0.01, 0.0005, 0.1),
        ];
        let trace = RunTrace { rows, termination: None };
        let (ok, margin) = check_sparsity_floor(&[trace], 8).unwrap();
        assert!(!ok);
        assert!(margin < -EPS_NUM);
    }

    #[test]
    fn random_sparse_points_stay_above_the_floor() {
        let worst = sparse_points_floor_margin(8, 16, 2000, 7).unwrap();
        assert!(worst >= -EPS_NUM, "margin {worst}");
    }
}
