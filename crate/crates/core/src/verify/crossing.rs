//! Crossing probes on a single component `ν`.
//!
//! With `a = f_ν / ζ_ν^{1/q}` and `b = g_ν / ζ_ν^{1/q}` cellwise, everything
//! here is an instance of the two-scale modular
//!
//! ```text
//! M(s, t) = Σ_cells |a/s + b/t|^p · measure
//! ```
//!
//! and `T = μ₁ + μ₂`, `D = μ₂ − μ₁`. The symmetric crossing function is
//! `h(r) = M(T + r, T + r)`; the asymmetric value is `M(T − r, T + r)`.
//! Both probes require `f_ν, g_ν ≥ 0`: only then does shrinking the
//! denominator of `a` increase `M` cellwise.

use crate::error::{Error, Result};
use crate::grid::{same_grid, ExponentField, FunctionSequence};
use crate::report::{Outcome, ProbeReport};
use crate::root::{bisect_interval, solve_decreasing};
use crate::solver::{ComponentWeights, SolverConfig};
use crate::verify::probes::strict_gap;

/// Number of points at which `h` is sampled for monotonicity.
const MONOTONE_SAMPLES: usize = 17;

pub(crate) struct PairComponent {
    a: Vec<f64>,
    b: Vec<f64>,
    p: Vec<f64>,
    measure: Vec<f64>,
}

impl PairComponent {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn new(
        f: &FunctionSequence,
        g: &FunctionSequence,
        zeta: &ComponentWeights,
        nu: usize,
        p: &ExponentField,
        q: &ExponentField,
    ) -> Result<Self> {
        if !(same_grid(f.grid(), g.grid()) && same_grid(f.grid(), p.grid()) && same_grid(f.grid(), q.grid())) {
            return Err(Error::GridMismatch("crossing probe inputs must share one grid".into()));
        }
        let n = f.len().max(g.len());
        if nu >= n {
            return Err(Error::InvalidInput(format!("component index {nu} out of range (N = {n})")));
        }
        let z = *zeta.weights().get(nu).ok_or_else(|| {
            Error::InvalidInput(format!("zeta has {} weights, needs index {nu}", zeta.len()))
        })?;
        if z.is_nan() || z <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "zeta[{nu}] = {z} must be positive (apply a positivity floor)"
            )));
        }
        let (f, g) = (f.padded(n), g.padded(n));
        let (fv, gv) = (&f.components()[nu], &g.components()[nu]);
        if !(fv.is_nonnegative() && gv.is_nonnegative()) {
            return Err(Error::InvalidInput(
                "crossing probes accept only cellwise nonnegative f_nu and g_nu".into(),
            ));
        }
        let ln_z = z.ln();
        let root = |i: usize| (ln_z / q.values()[i]).exp();
        let cells = f.grid().cell_count();
        Ok(PairComponent {
            a: (0..cells).map(|i| fv.values()[i] / root(i)).collect(),
            b: (0..cells).map(|i| gv.values()[i] / root(i)).collect(),
            p: p.values().to_vec(),
            measure: f.grid().measures().to_vec(),
        })
    }

    /// `M(s, t)`; may be `+∞`.
    pub(crate) fn modular(&self, s: f64, t: f64) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.a.len() {
            let x = self.a[i] / s + self.b[i] / t;
            if x != 0.0 {
                sum += (self.p[i] * x.abs().ln()).exp() * self.measure[i];
            }
        }
        sum
    }

    /// Scale `s` with `M(s, s) = 1`.
    pub(crate) fn unit_scale(&self, cfg: &SolverConfig) -> Result<f64> {
        let root = solve_decreasing(|s| Ok(self.modular(s, s)), 1.0, cfg.rel_tolerance, cfg, "unit scale")?;
        Ok(root.value)
    }
}

fn check_scales(mu1: f64, mu2: f64) -> Result<()> {
    if !(mu1 > 0.0 && mu1.is_finite() && mu2.is_finite()) {
        return Err(Error::InvalidInput(format!("mu1, mu2 must be positive and finite, got {mu1}, {mu2}")));
    }
    if mu1 > mu2 {
        return Err(Error::InvalidInput(format!("need mu1 <= mu2, got {mu1} > {mu2}")));
    }
    Ok(())
}

fn is_nonincreasing(h: impl Fn(f64) -> f64, upper: f64) -> bool {
    let samples: Vec<f64> = (0..MONOTONE_SAMPLES)
        .map(|k| h(upper * k as f64 / (MONOTONE_SAMPLES - 1) as f64))
        .collect();
    samples.windows(2).all(|w| w[1] <= w[0])
}

/// Locates `r* ∈ (0, μ₂ − μ₁]` with `h(r*) = 1` and evaluates the asymmetric
/// modular there.
///
/// Report fields: `lhs = 1`, `rhs` = asymmetric modular, `margin = rhs − 1`,
/// `r_star = r*`; quantities `premise`, `h_at_r_star`. When `h(μ₂ − μ₁) > 1`
/// no crossing exists in the interval: the outcome is `Finding`, `rhs` is
/// `h(μ₂ − μ₁)` and `r_root` records the unconstrained root of `h`.
/// `μ₁ = μ₂` yields `Degenerate`.
#[allow(clippy::too_many_arguments)]
pub fn lemma_crossing_probe(
    f: &FunctionSequence,
    g: &FunctionSequence,
    zeta: &ComponentWeights,
    nu: usize,
    mu1: f64,
    mu2: f64,
    p: &ExponentField,
    q: &ExponentField,
    cfg: &SolverConfig,
) -> Result<ProbeReport> {
    check_scales(mu1, mu2)?;
    let pc = PairComponent::new(f, g, zeta, nu, p, q)?;
    let total = mu1 + mu2;
    let width = mu2 - mu1;
    let premise = pc.modular(total, total);
    let tol = cfg.rel_tolerance;

    if width == 0.0 {
        return Ok(ProbeReport::new("lemma", 1.0, premise, Outcome::Degenerate, tol).with("premise", premise));
    }
    if premise.is_nan() || premise <= 1.0 {
        return Err(Error::Premise {
            context: format!("lemma needs modular of (f+g) at scale mu1+mu2 = {total} to exceed 1"),
            modular: premise,
        });
    }
    let h = |r: f64| pc.modular(total + r, total + r);
    if !is_nonincreasing(h, width) {
        return Ok(ProbeReport::new("lemma", 1.0, f64::NAN, Outcome::Fail, tol).with("premise", premise));
    }
    let h_end = h(width);
    if h_end > 1.0 {
        let r_root = solve_decreasing(|r| Ok(h(r - total)), total + width, tol, cfg, "crossing root")?.value - total;
        return Ok(ProbeReport::new("lemma", 1.0, h_end, Outcome::Finding, tol)
            .with("premise", premise)
            .with("h_at_width", h_end)
            .with("r_root", r_root));
    }
    let r_star = bisect_interval(h, width, 0.0, cfg, "lemma crossing")?.value;
    let h_star = h(r_star);
    let asym = pc.modular(total - r_star, total + r_star);
    let gap = strict_gap(cfg);
    let outcome = if (h_star - 1.0).abs() <= gap && asym > 1.0 + gap {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    let mut report = ProbeReport::new("lemma", 1.0, asym, outcome, tol)
        .with("premise", premise)
        .with("h_at_r_star", h_star);
    report.r_star = Some(r_star);
    Ok(report)
}

/// Why [`iterated_crossing_search`] stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// `μ₁ = μ₂`: nothing to iterate.
    EmptyInterval,
    /// The stage's asymmetric modular is no longer above `1 + 10·tol`.
    PremiseFailed,
    /// No crossing inside the remaining interval.
    ContradictionBranch,
    /// The remaining interval shrank below `tol · (μ₂ − μ₁)`.
    IntervalExhausted,
    /// Stage cap (`max_bisection_iters`) reached.
    StageLimit,
}

impl StopReason {
    pub fn code(self) -> f64 {
        self as u8 as f64
    }
}

/// Outcome of the repeated crossing construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingSequence {
    pub steps: Vec<f64>,
    pub partial_sums: Vec<f64>,
    pub stop: StopReason,
    /// 1-based stage at which the search stopped.
    pub stop_stage: usize,
    /// Asymmetric modular that failed the premise, if any.
    pub premise_modular: Option<f64>,
    /// `M(2μ₁, 2μ₂)`.
    pub terminal_modular: f64,
}

/// Repeats the crossing step on the shrinking interval
/// `(0, μ₂ − μ₁ − Σ_{i<n} r_i]`.
///
/// Stage `n` starts from the asymmetric modular `A(R) = M(T − R, T + R)` with
/// `R = Σ_{i<n} r_i`, requires `A(R) > 1`, and solves
/// `M(T − R + r, T + R + r) = 1` for `r_n`.
///
/// Report fields: `lhs = Σ r_i`, `rhs = μ₂ − μ₁`, `margin = rhs − lhs`,
/// `r_star = r_1`; quantities `stop_reason`, `stop_stage`, `stages`,
/// `terminal_modular`, and `r[n]`, `sum[n]` per stage. The outcome is `Pass`
/// when partial sums are nondecreasing and bounded by `μ₂ − μ₁ + tol`,
/// `Finding` on the contradiction branch, otherwise `Fail`.
#[allow(clippy::too_many_arguments)]
pub fn iterated_crossing_search(
    f: &FunctionSequence,
    g: &FunctionSequence,
    zeta: &ComponentWeights,
    nu: usize,
    mu1: f64,
    mu2: f64,
    p: &ExponentField,
    q: &ExponentField,
    cfg: &SolverConfig,
) -> Result<(ProbeReport, CrossingSequence)> {
    check_scales(mu1, mu2)?;
    let pc = PairComponent::new(f, g, zeta, nu, p, q)?;
    let seq = crossing_sequence(&pc, mu1, mu2, cfg)?;
    let width = mu2 - mu1;
    let tol = cfg.rel_tolerance;
    let sum = seq.partial_sums.last().copied().unwrap_or(0.0);
    let monotone = seq.partial_sums.windows(2).all(|w| w[1] >= w[0]);
    let bounded = sum <= width + tol * width.max(f64::MIN_POSITIVE);
    let outcome = if !(monotone && bounded) {
        Outcome::Fail
    } else if seq.stop == StopReason::ContradictionBranch {
        Outcome::Finding
    } else if seq.stop == StopReason::EmptyInterval {
        Outcome::Degenerate
    } else {
        Outcome::Pass
    };
    let mut report = ProbeReport::new("iterate", sum, width, outcome, tol)
        .with("stop_reason", seq.stop.code())
        .with("stop_stage", seq.stop_stage as f64)
        .with("stages", seq.steps.len() as f64)
        .with("terminal_modular", seq.terminal_modular);
    if let Some(m) = seq.premise_modular {
        report = report.with("premise_modular", m);
    }
    for (i, (r, s)) in seq.steps.iter().zip(&seq.partial_sums).enumerate() {
        report = report.with(&format!("r[{}]", i + 1), *r).with(&format!("sum[{}]", i + 1), *s);
    }
    report.r_star = seq.steps.first().copied();
    Ok((report, seq))
}

fn crossing_sequence(pc: &PairComponent, mu1: f64, mu2: f64, cfg: &SolverConfig) -> Result<CrossingSequence> {
    let total = mu1 + mu2;
    let width = mu2 - mu1;
    let gap = strict_gap(cfg);
    let mut out = CrossingSequence {
        steps: Vec::new(),
        partial_sums: Vec::new(),
        stop: StopReason::EmptyInterval,
        stop_stage: 1,
        premise_modular: None,
        terminal_modular: pc.modular(2.0 * mu1, 2.0 * mu2),
    };
    if width == 0.0 {
        return Ok(out);
    }
    let mut offset = 0.0;
    for stage in 1..=cfg.max_bisection_iters {
        out.stop_stage = stage;
        let current = pc.modular(total - offset, total + offset);
        // stage 1 has no earlier crossing to inherit strictness from
        let threshold = if stage == 1 { 1.0 } else { 1.0 + gap };
        if current.is_nan() || current <= threshold {
            out.stop = StopReason::PremiseFailed;
            out.premise_modular = Some(current);
            return Ok(out);
        }
        let remaining = width - offset;
        if remaining <= cfg.rel_tolerance * width {
            out.stop = StopReason::IntervalExhausted;
            return Ok(out);
        }
        let (lo, hi) = (total - offset, total + offset);
        let h = |r: f64| pc.modular(lo + r, hi + r);
        if h(remaining) > 1.0 {
            out.stop = StopReason::ContradictionBranch;
            return Ok(out);
        }
        let r = bisect_interval(h, remaining, 0.0, cfg, "iterated crossing")?.value;
        offset = (offset + r).min(width);
        out.steps.push(r);
        out.partial_sums.push(offset);
    }
    out.stop = StopReason::StageLimit;
    Ok(out)
}
