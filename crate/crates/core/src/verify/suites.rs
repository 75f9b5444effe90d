//! Seeded bulk runs of the probes.
//!
//! Trial `k` uses `spec.for_trial(k)`; trials run in parallel and reports are
//! returned in trial order, so output is independent of scheduling.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{FunctionSequence, Grid};
use crate::report::{Outcome, ProbeInstance, ProbeReport};
use crate::solver::{mixed_modular, mixed_norm, witness_decomposition, SolverConfig};
use crate::verify::crossing::{iterated_crossing_search, lemma_crossing_probe, PairComponent};
use crate::verify::generate::{random_instance, random_pair, InstanceSpec, Sampler};
use crate::verify::probes::{constant_exponent_oracle, strict_convexity_probe, strict_gap, triangle_check};

/// Positivity floor for zero witness weights.
pub const ZETA_FLOOR: f64 = 1e-300;

fn run_trials<F>(spec: &InstanceSpec, trials: usize, probe: F) -> Result<Vec<ProbeReport>>
where
    F: Fn(&InstanceSpec) -> Result<ProbeReport> + Sync,
{
    spec.validate()?;
    (0..trials)
        .into_par_iter()
        .map(|k| {
            let sub = spec.for_trial(k);
            probe(&sub).map(|r| r.tagged(k, sub.seed))
        })
        .collect()
}

pub fn triangle_suite(spec: &InstanceSpec, trials: usize, cfg: &SolverConfig) -> Result<Vec<ProbeReport>> {
    run_trials(spec, trials, |s| {
        let (f, g, p, q) = random_pair(s)?;
        triangle_check(&f, &g, &p, &q, cfg)
    })
}

/// `non_proportional` random pairs followed by `proportional` pairs
/// `(f, c·f)` with `c` uniform in `[0.1, 10]`.
pub fn convexity_suite(
    spec: &InstanceSpec,
    non_proportional: usize,
    proportional: usize,
    cfg: &SolverConfig,
) -> Result<Vec<ProbeReport>> {
    spec.validate()?;
    (0..non_proportional + proportional)
        .into_par_iter()
        .map(|k| {
            let sub = spec.for_trial(k);
            let report = if k < non_proportional {
                let (f, g, p, q) = random_pair(&sub)?;
                strict_convexity_probe(&f, &g, &p, &q, cfg)?
            } else {
                let (f, p, q) = random_instance(&sub)?;
                let c = Sampler::new(&sub.for_trial(0))?.uniform(0.1, 10.0);
                strict_convexity_probe(&f, &f.scaled(c)?, &p, &q, cfg)?
            };
            Ok(report.tagged(k, sub.seed))
        })
        .collect()
}

/// `trials` instances per `(p, q)` pair drawn from `exponents`.
pub fn oracle_suite(
    spec: &InstanceSpec,
    exponents: &[f64],
    trials: usize,
    cfg: &SolverConfig,
) -> Result<Vec<ProbeReport>> {
    spec.validate()?;
    let pairs: Vec<(f64, f64)> = exponents
        .iter()
        .flat_map(|&p| exponents.iter().map(move |&q| (p, q)))
        .collect();
    for &(p, _) in &pairs {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::InvalidInput(format!("oracle exponent {p} must lie in (1, inf)")));
        }
    }
    (0..pairs.len() * trials)
        .into_par_iter()
        .map(|k| {
            let (p, q) = pairs[k / trials];
            let sub = spec.for_trial(k);
            let (f, _, _) = random_instance(&sub)?;
            constant_exponent_oracle(&f, p, q, cfg).map(|r| r.tagged(k, sub.seed))
        })
        .collect()
}

/// `‖c·f‖ = c‖f‖` with `c` log-uniform in `[1e-6, 1e6]`.
/// `lhs = ‖c·f‖`, `rhs = c‖f‖`; quantity `c`.
pub fn homogeneity_suite(spec: &InstanceSpec, trials: usize, cfg: &SolverConfig) -> Result<Vec<ProbeReport>> {
    run_trials(spec, trials, |s| {
        let (f, p, q) = random_instance(s)?;
        let mut sm = Sampler::new(&s.for_trial(0))?;
        let c = 10f64.powf(sm.uniform(-6.0, 6.0));
        let lhs = mixed_norm(&f.scaled(c)?, &p, &q, cfg)?;
        let rhs = c * mixed_norm(&f, &p, &q, cfg)?;
        let outcome = if (lhs - rhs).abs() <= strict_gap(cfg) * rhs {
            Outcome::Pass
        } else {
            Outcome::Fail
        };
        Ok(ProbeReport::new("homogeneity", lhs, rhs, outcome, cfg.rel_tolerance).with("c", c))
    })
}

/// `ϱ(f/‖f‖) = 1`. `lhs` = modular, `rhs = 1`.
pub fn unit_ball_suite(spec: &InstanceSpec, trials: usize, cfg: &SolverConfig) -> Result<Vec<ProbeReport>> {
    run_trials(spec, trials, |s| {
        let (f, p, q) = random_instance(s)?;
        let norm = mixed_norm(&f, &p, &q, cfg)?;
        let m = mixed_modular(&f.scaled(1.0 / norm)?, &p, &q, cfg)?;
        let outcome = if (m - 1.0).abs() <= strict_gap(cfg) {
            Outcome::Pass
        } else {
            Outcome::Fail
        };
        Ok(ProbeReport::new("unit-ball", m, 1.0, outcome, cfg.rel_tolerance).with("norm", norm))
    })
}

/// Triangle checks on instances whose exponents may drop to or below 1.
/// Violations keep the full pair for reproduction.
pub fn quasi_norm_boundary_scan(spec: &InstanceSpec, trials: usize, cfg: &SolverConfig) -> Result<Vec<ProbeReport>> {
    if !spec.allow_quasi {
        return Err(Error::InvalidInput("quasi-norm scan needs allow_quasi".into()));
    }
    run_trials(spec, trials, |s| {
        let (f, g, p, q) = random_pair(s)?;
        let mut r = triangle_check(&f, &g, &p, &q, cfg)?;
        r.probe = "quasi-scan".into();
        if r.outcome == Outcome::Fail {
            r.reproducer = Some(Box::new(ProbeInstance { f, g, p, q }));
        }
        Ok(r)
    })
}

/// Inputs of one crossing probe.
#[derive(Debug, Clone)]
pub struct CrossingSetup {
    pub instance: ProbeInstance,
    pub zeta: crate::solver::ComponentWeights,
    pub nu: usize,
    pub mu1: f64,
    pub mu2: f64,
}

/// A nonnegative pair with a crossing inside `(0, μ₂ − μ₁]`.
///
/// `ζ` is the witness decomposition of the midpoint `f/(2‖f‖) + g/(2‖g‖)`
/// (floored at [`ZETA_FLOOR`]); `ν` is drawn among nonzero components. With
/// `s₀` the scale at which the symmetric modular of `f_ν + g_ν` equals 1,
/// the sum `μ₁ + μ₂` is drawn in `[0.55, 0.95]·s₀` and `μ₂` so that
/// `2μ₂ > s₀`; hence the premise holds and `h(μ₂ − μ₁) < 1`.
pub fn crossing_setup(spec: &InstanceSpec, cfg: &SolverConfig) -> Result<CrossingSetup> {
    let (f, g, p, q) = random_pair(spec)?;
    let (f, g) = (f.abs(), g.abs());
    let nf = mixed_norm(&f, &p, &q, cfg)?;
    let ng = mixed_norm(&g, &p, &q, cfg)?;
    let mid = f.combine(0.5 / nf, &g, 0.5 / ng)?;
    let zeta = witness_decomposition(&mid, &p, &q, cfg)?.with_floor(ZETA_FLOOR);
    let n = f.len().max(g.len());
    let candidates: Vec<usize> = (0..n)
        .filter(|&i| !(f.components()[i].is_zero() && g.components()[i].is_zero()))
        .collect();
    let mut sm = Sampler::new(&spec.for_trial(0))?;
    let nu = candidates[sm.index(candidates.len())];
    let pc = PairComponent::new(&f, &g, &zeta, nu, &p, &q)?;
    let s0 = pc.unit_scale(cfg)?;
    let total = s0 * sm.uniform(0.55, 0.95);
    let mu2 = sm.uniform(0.5 * s0 * 1.01, total * 0.99);
    let mu1 = total - mu2;
    Ok(CrossingSetup {
        instance: ProbeInstance { f, g, p, q },
        zeta,
        nu,
        mu1,
        mu2,
    })
}

pub fn lemma_suite(spec: &InstanceSpec, trials: usize, cfg: &SolverConfig) -> Result<Vec<ProbeReport>> {
    run_trials(spec, trials, |s| {
        let c = crossing_setup(s, cfg)?;
        let i = &c.instance;
        lemma_crossing_probe(&i.f, &i.g, &c.zeta, c.nu, c.mu1, c.mu2, &i.p, &i.q, cfg)
    })
}

pub fn iterate_suite(spec: &InstanceSpec, trials: usize, cfg: &SolverConfig) -> Result<Vec<ProbeReport>> {
    run_trials(spec, trials, |s| {
        let c = crossing_setup(s, cfg)?;
        let i = &c.instance;
        iterated_crossing_search(&i.f, &i.g, &c.zeta, c.nu, c.mu1, c.mu2, &i.p, &i.q, cfg).map(|(r, _)| r)
    })
}

/// Single-cell, unit-measure sequence with the given component values.
pub fn scalar_sequence(values: &[f64]) -> Result<FunctionSequence> {
    let grid = Grid::uniform(1, 1, 1.0)?;
    FunctionSequence::from_values(&grid, values.iter().map(|&v| vec![v]).collect())
}
