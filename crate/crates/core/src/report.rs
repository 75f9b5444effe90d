//! Probe reports and their CSV rendering.
//!
//! Column order is fixed:
//!
//! ```text
//! trial,probe,lhs,rhs,margin,r_star,pass,tolerance,seed
//! ```
//!
//! `pass` holds one of `pass`, `fail`, `finding`, `degenerate`. The last row is
//! a summary with `trial = summary`, `lhs` = number of rows, `rhs` = number of
//! rows that are not `pass`/`degenerate`, `margin` = smallest margin, and
//! `pass` = the overall verdict. A leading `#` line records the tolerance and
//! where it came from. Reals are written with 17 significant digits.

use std::fmt::Write as _;

use crate::grid::{ExponentField, FunctionSequence};

pub const COLUMNS: &str = "trial,probe,lhs,rhs,margin,r_star,pass,tolerance,seed";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    /// A branch the argument rules out was reached.
    Finding,
    /// The probe's interval or premise is empty.
    Degenerate,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Finding => "finding",
            Outcome::Degenerate => "degenerate",
        }
    }

    pub fn is_ok(self) -> bool {
        matches!(self, Outcome::Pass | Outcome::Degenerate)
    }
}

/// Everything needed to rerun a probe on a pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeInstance {
    pub f: FunctionSequence,
    pub g: FunctionSequence,
    pub p: ExponentField,
    pub q: ExponentField,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub probe: String,
    pub instance: String,
    pub trial: Option<usize>,
    pub seed: Option<u64>,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs` at full precision.
    pub margin: f64,
    pub r_star: Option<f64>,
    pub quantities: Vec<(String, f64)>,
    pub outcome: Outcome,
    pub tolerance: f64,
    pub reproducer: Option<Box<ProbeInstance>>,
}

impl ProbeReport {
    pub fn new(probe: &str, lhs: f64, rhs: f64, outcome: Outcome, tolerance: f64) -> Self {
        ProbeReport {
            probe: probe.to_string(),
            instance: String::new(),
            trial: None,
            seed: None,
            lhs,
            rhs,
            margin: rhs - lhs,
            r_star: None,
            quantities: Vec::new(),
            outcome,
            tolerance,
            reproducer: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.outcome.is_ok()
    }

    pub fn quantity(&self, name: &str) -> Option<f64> {
        self.quantities.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    pub(crate) fn with(mut self, name: &str, value: f64) -> Self {
        self.quantities.push((name.to_string(), value));
        self
    }

    pub(crate) fn tagged(mut self, trial: usize, seed: u64) -> Self {
        self.trial = Some(trial);
        self.seed = Some(seed);
        self.instance = format!("seed={seed}");
        self
    }
}

/// `%.17g`: 17 significant digits, shortest of fixed or scientific form,
/// trailing zeros removed.
pub fn format_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Renders reports as CSV with a summary row.
pub fn render_csv(probe: &str, reports: &[ProbeReport], tolerance: f64, tolerance_source: &str, seed: Option<u64>) -> String {
    let mut out = String::new();
    writeln!(out, "# rel_tolerance={} source={}", format_g17(tolerance), tolerance_source).unwrap();
    writeln!(out, "{COLUMNS}").unwrap();
    let opt_seed = |s: Option<u64>| s.map(|s| s.to_string()).unwrap_or_default();
    for (i, r) in reports.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.trial.unwrap_or(i),
            r.probe,
            format_g17(r.lhs),
            format_g17(r.rhs),
            format_g17(r.margin),
            r.r_star.map(format_g17).unwrap_or_default(),
            r.outcome.as_str(),
            format_g17(r.tolerance),
            opt_seed(r.seed),
        )
        .unwrap();
    }
    let failures = reports.iter().filter(|r| !r.passed()).count();
    let min_margin = reports.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let verdict = if failures == 0 {
        "pass"
    } else if reports.iter().any(|r| r.outcome == Outcome::Fail) {
        "fail"
    } else {
        "finding"
    };
    writeln!(
        out,
        "summary,{probe},{},{},{},,{verdict},{},{}",
        reports.len(),
        failures,
        if reports.is_empty() { String::new() } else { format_g17(min_margin) },
        format_g17(tolerance),
        opt_seed(seed),
    )
    .unwrap();
    out
}
