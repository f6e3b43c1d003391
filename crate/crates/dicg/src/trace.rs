//! Per-iteration run traces and their CSV serialization.
//!
//! The column set is part of the crate's external interface:
//! `t,f,gap,h,eta,eta_raw,time_ns,feas_residual`, one row per iteration,
//! `h` left empty when the optimal value is unknown. Floats are written
//! with the shortest round-trip representation, so re-parsing a trace
//! reproduces it exactly.

use crate::error::{Error, Result};
use crate::EPS_NUM;
use std::fmt;
use std::io::Write;

pub const CSV_HEADER: &str = "t,f,gap,h,eta,eta_raw,time_ns,feas_residual";

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    /// Iteration counter, starting at 1.
    pub t: usize,
    /// Objective value at the iterate.
    pub f_val: f64,
    /// Duality gap at the iterate.
    pub gap: f64,
    /// Primal error f - f*, when f* is known.
    pub h: Option<f64>,
    /// Step size actually applied (0 on the terminating row).
    pub eta: f64,
    /// Step size before dyadic rounding; equals `eta` for rules that do
    /// not round.
    pub eta_raw: f64,
    /// Nanoseconds elapsed since the start of the run, 0 unless timing
    /// was requested.
    pub time_ns: u64,
    /// Feasibility residual of the iterate (equality part and negativity).
    pub feas_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminationReason {
    /// Duality gap fell below the configured tolerance.
    GapConverged,
    /// The two oracle vertices coincided, so the step direction was zero.
    ZeroDirection,
    /// Iteration budget exhausted.
    MaxIters,
}

impl fmt::Display for TerminationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TerminationReason::GapConverged => "gap_converged",
            TerminationReason::ZeroDirection => "zero_direction",
            TerminationReason::MaxIters => "max_iters",
        };
        f.write_str(s)
    }
}

/// A complete run record: one row per iteration visited, plus why the run
/// stopped. Traces parsed back from CSV carry no termination reason.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub rows: Vec<TraceRow>,
    pub termination: Option<TerminationReason>,
}

impl RunTrace {
    pub fn new() -> Self {
        RunTrace {
            rows: Vec::new(),
            termination: None,
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    /// Smallest t whose gap is at or below `tol`, if any.
    pub fn iters_to_gap(&self, tol: f64) -> Option<usize> {
        self.rows.iter().find(|r| r.gap <= tol).map(|r| r.t)
    }

    /// Structural checks: t counts up from 1 without holes, all floats
    /// finite, gaps not meaningfully negative.
    pub fn validate(&self) -> Result<()> {
        for (k, row) in self.rows.iter().enumerate() {
            if row.t != k + 1 {
                return Err(Error::Parse(format!(
                    "row {} has t = {}, expected {}",
                    k,
                    row.t,
                    k + 1
                )));
            }
            let finite = row.f_val.is_finite()
                && row.gap.is_finite()
                && row.eta.is_finite()
                && row.eta_raw.is_finite()
                && row.feas_residual.is_finite()
                && row.h.is_none_or(f64::is_finite);
            if !finite {
                return Err(Error::NonFinite(format!("trace row t = {}", row.t)));
            }
            if row.gap < -EPS_NUM {
                return Err(Error::Parse(format!(
                    "negative gap {} at t = {}",
                    row.gap, row.t
                )));
            }
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for row in &self.rows {
            let h = row.h.map(|v| v.to_string()).unwrap_or_default();
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                row.t, row.f_val, row.gap, h, row.eta, row.eta_raw, row.time_ns, row.feas_residual
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("csv is ascii")
    }

    /// Parses a trace back from CSV text and validates it structurally.
    pub fn from_csv_str(text: &str) -> Result<RunTrace> {
        let mut lines = text.lines();
        match lines.next() {
            Some(header) if header.trim_end() == CSV_HEADER => {}
            Some(other) => {
                return Err(Error::Parse(format!(
                    "unexpected trace header {other:?}, want {CSV_HEADER:?}"
                )))
            }
            None => return Err(Error::Parse("empty trace file".into())),
        }
        let mut rows = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 8 {
                return Err(Error::Parse(format!(
                    "line {}: expected 8 fields, got {}",
                    lineno + 2,
                    fields.len()
                )));
            }
            let num = |s: &str, name: &str| -> Result<f64> {
                s.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("line {}: bad {name} {s:?}", lineno + 2)))
            };
            let t: usize = fields[0].parse().map_err(|_| {
                Error::Parse(format!("line {}: bad t {:?}", lineno + 2, fields[0]))
            })?;
            let h = if fields[3].is_empty() {
                None
            } else {
                Some(num(fields[3], "h")?)
            };
            let time_ns: u64 = fields[6].parse().map_err(|_| {
                Error::Parse(format!("line {}: bad time_ns {:?}", lineno + 2, fields[6]))
            })?;
            rows.push(TraceRow {
                t,
                f_val: num(fields[1], "f")?,
                gap: num(fields[2], "gap")?,
                h,
                eta: num(fields[4], "eta")?,
                eta_raw: num(fields[5], "eta_raw")?,
                time_ns,
                feas_residual: num(fields[7], "feas_residual")?,
            });
        }
        let trace = RunTrace {
            rows,
            termination: None,
        };
        trace.validate()?;
        Ok(trace)
    }
}

impl Default for RunTrace {
    fn default() -> Self {
        Self::new()
    }
}
