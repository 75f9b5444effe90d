//! Luxemburg norm, component weights `λ_ν*`, and the mixed modular and norm
//! of `ℓ^{q(·)}(L^{p(·)})`.
//!
//! Each infimum is the unique root of a strictly decreasing continuous map,
//! found by geometric bracketing followed by bisection. The mixed norm nests
//! one `λ`-solve per component inside every outer `μ` evaluation; inner solves
//! run at a tenth of the outer tolerance.

use log::debug;

use crate::error::{Error, Result};
use crate::grid::{CellTerms, ExponentField, FunctionSequence, SimpleFunction};
use crate::root::solve_decreasing;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub rel_tolerance: f64,
    pub max_bisection_iters: usize,
    pub bracket_growth: f64,
    pub max_bracket_expansions: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            rel_tolerance: 1e-12,
            max_bisection_iters: 200,
            bracket_growth: 2.0,
            max_bracket_expansions: 200,
        }
    }
}

impl SolverConfig {
    pub fn with_tolerance(rel_tolerance: f64) -> Self {
        SolverConfig {
            rel_tolerance,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tolerance > 0.0 && self.rel_tolerance < 1.0) {
            return Err(Error::InvalidInput(format!(
                "rel_tolerance must lie in (0, 1), got {}",
                self.rel_tolerance
            )));
        }
        if !(self.bracket_growth > 1.0 && self.bracket_growth.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "bracket_growth must exceed 1, got {}",
                self.bracket_growth
            )));
        }
        if self.max_bisection_iters == 0 || self.max_bracket_expansions == 0 {
            return Err(Error::InvalidInput("iteration caps must be at least 1".into()));
        }
        Ok(())
    }

    fn inner(&self) -> SolverConfig {
        SolverConfig {
            rel_tolerance: self.rel_tolerance / 10.0,
            ..*self
        }
    }
}

/// Nonnegative per-component weights (`λ_ν` or `ζ_ν`) and their sum.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentWeights {
    weights: Vec<f64>,
    total: f64,
}

impl ComponentWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidInput(format!(
                "weight {i} must be finite and nonnegative, got {}",
                weights[i]
            )));
        }
        let total = weights.iter().sum();
        Ok(ComponentWeights { weights, total })
    }

    /// Checks a stated total against the recomputed sum.
    pub fn with_total(weights: Vec<f64>, total: f64) -> Result<Self> {
        let w = Self::new(weights)?;
        if (w.total - total).abs() > 1e-15 * w.total.abs().max(total.abs()) {
            return Err(Error::InvalidInput(format!(
                "stated total {total} differs from weight sum {}",
                w.total
            )));
        }
        Ok(w)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Replaces zero weights by `floor`, so every `ζ_ν^{1/q}` can divide.
    pub fn with_floor(&self, floor: f64) -> Self {
        let weights: Vec<f64> = self
            .weights
            .iter()
            .map(|&w| if w == 0.0 { floor } else { w })
            .collect();
        let total = weights.iter().sum();
        ComponentWeights { weights, total }
    }
}

/// Mixed norm together with solver diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSolution {
    pub value: f64,
    pub outer_iterations: usize,
}

fn warn_if_relaxed(p: &ExponentField, q: Option<&ExponentField>) {
    if !p.is_normable() || q.is_some_and(|q| !q.is_normable()) {
        debug!("exponent lower bound <= 1: result is a quasi-norm value");
    }
}

/// `‖f‖_{p(·)} = inf{μ > 0 : ϱ_{p(·)}(f/μ) ≤ 1}`.
pub fn luxemburg_norm(f: &SimpleFunction, p: &ExponentField, cfg: &SolverConfig) -> Result<f64> {
    cfg.validate()?;
    warn_if_relaxed(p, None);
    let terms = CellTerms::new(f, p, None)?;
    if terms.is_zero() {
        return Ok(0.0);
    }
    let root = solve_decreasing(
        |mu| Ok(terms.eval(mu.ln(), 0.0)),
        terms.log_mu_guess().exp(),
        cfg.rel_tolerance,
        cfg,
        "luxemburg norm",
    )?;
    Ok(root.value)
}

/// Root `λ` of `Σ m|v/μ|^p λ^{-p/q} = 1` for the terms of one component,
/// with the function already divided by `μ = exp(log_mu)`.
fn weight_of_terms(terms: &CellTerms, log_mu: f64, cfg: &SolverConfig) -> Result<f64> {
    if terms.is_zero() {
        return Ok(0.0);
    }
    let root = solve_decreasing(
        |lambda| Ok(terms.eval(log_mu, lambda.ln())),
        terms.log_lambda_guess(log_mu).exp(),
        cfg.rel_tolerance,
        cfg,
        "component weight",
    )?;
    Ok(root.value)
}

/// `λ_ν* = inf{λ > 0 : ϱ_{p(·)}(f_ν / λ^{1/q(·)}) ≤ 1}`.
pub fn component_weight(
    f_nu: &SimpleFunction,
    p: &ExponentField,
    q: &ExponentField,
    cfg: &SolverConfig,
) -> Result<f64> {
    cfg.validate()?;
    warn_if_relaxed(p, Some(q));
    let terms = CellTerms::new(f_nu, p, Some(q))?;
    weight_of_terms(&terms, 0.0, cfg)
}

fn sequence_terms(f: &FunctionSequence, p: &ExponentField, q: &ExponentField) -> Result<Vec<CellTerms>> {
    f.components()
        .iter()
        .enumerate()
        .map(|(i, c)| CellTerms::new(c, p, Some(q)).map_err(|e| e.in_component(i)))
        .collect()
}

fn weights_at(terms: &[CellTerms], log_mu: f64, cfg: &SolverConfig) -> Result<Vec<f64>> {
    terms
        .iter()
        .enumerate()
        .map(|(i, t)| weight_of_terms(t, log_mu, cfg).map_err(|e| e.in_component(i)))
        .collect()
}

/// Per-component weights `(λ_1*, …, λ_N*)` of a sequence.
pub fn component_weights(
    f: &FunctionSequence,
    p: &ExponentField,
    q: &ExponentField,
    cfg: &SolverConfig,
) -> Result<ComponentWeights> {
    cfg.validate()?;
    warn_if_relaxed(p, Some(q));
    let terms = sequence_terms(f, p, q)?;
    ComponentWeights::new(weights_at(&terms, 0.0, cfg)?)
}

/// `ϱ_{ℓ^{q(·)}(L^{p(·)})}(f) = Σ_ν λ_ν*`, summed in index order.
pub fn mixed_modular(
    f: &FunctionSequence,
    p: &ExponentField,
    q: &ExponentField,
    cfg: &SolverConfig,
) -> Result<f64> {
    Ok(component_weights(f, p, q, cfg)?.total())
}

/// `‖f‖ = inf{μ > 0 : ϱ_{ℓ^{q(·)}(L^{p(·)})}(f/μ) ≤ 1}`.
pub fn mixed_norm(
    f: &FunctionSequence,
    p: &ExponentField,
    q: &ExponentField,
    cfg: &SolverConfig,
) -> Result<f64> {
    mixed_norm_with_diagnostics(f, p, q, cfg).map(|s| s.value)
}

pub fn mixed_norm_with_diagnostics(
    f: &FunctionSequence,
    p: &ExponentField,
    q: &ExponentField,
    cfg: &SolverConfig,
) -> Result<NormSolution> {
    cfg.validate()?;
    warn_if_relaxed(p, Some(q));
    let terms = sequence_terms(f, p, q)?;
    let active: Vec<&CellTerms> = terms.iter().filter(|t| !t.is_zero()).collect();
    if active.is_empty() {
        return Ok(NormSolution {
            value: 0.0,
            outer_iterations: 0,
        });
    }
    let inner = cfg.inner();
    let guess = active
        .iter()
        .map(|t| t.log_mu_guess())
        .fold(f64::NEG_INFINITY, f64::max)
        .exp();
    let outer = |mu: f64| -> Result<f64> {
        let log_mu = mu.ln();
        let mut sum = 0.0;
        for (i, t) in terms.iter().enumerate() {
            sum += weight_of_terms(t, log_mu, &inner).map_err(|e| e.in_component(i))?;
        }
        Ok(sum)
    };
    let root = solve_decreasing(outer, guess, cfg.rel_tolerance, cfg, "mixed norm")?;
    Ok(NormSolution {
        value: root.value,
        outer_iterations: root.iterations,
    })
}

/// The weights `ζ_ν = λ_ν*` of a sequence in the closed unit ball of the
/// mixed modular: `Σ ζ_ν ≤ 1` and `ϱ_{p(·)}(f_ν / ζ_ν^{1/q(·)}) = 1` for every
/// nonzero `f_ν`.
pub fn witness_decomposition(
    f: &FunctionSequence,
    p: &ExponentField,
    q: &ExponentField,
    cfg: &SolverConfig,
) -> Result<ComponentWeights> {
    let weights = component_weights(f, p, q, cfg)?;
    if weights.total() > 1.0 + cfg.rel_tolerance {
        return Err(Error::Premise {
            context: "witness decomposition needs mixed modular <= 1".into(),
            modular: weights.total(),
        });
    }
    Ok(weights)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::grid::{scaled_component_modular, Grid};

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    fn unit() -> Arc<Grid> {
        Grid::uniform(1, 1, 1.0).unwrap()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn luxemburg_examples() {
        let g = unit();
        let p2 = ExponentField::constant(&g, 2.0).unwrap();
        assert_eq!(luxemburg_norm(&SimpleFunction::zero(&g), &p2, &cfg()).unwrap(), 0.0);
        let f = SimpleFunction::constant(&g, 2.0).unwrap();
        assert!(close(luxemburg_norm(&f, &p2, &cfg()).unwrap(), 2.0, 1e-12));

        let g = Grid::new(1, vec![0.5, 0.5]).unwrap();
        let p = ExponentField::new(&g, vec![2.0, 4.0]).unwrap();
        let f = SimpleFunction::constant(&g, 1.0).unwrap();
        assert!(close(luxemburg_norm(&f, &p, &cfg()).unwrap(), 1.0, 1e-12));
    }

    #[test]
    fn component_weight_examples() {
        let g = unit();
        let p = ExponentField::constant(&g, 2.0).unwrap();
        let q = ExponentField::constant(&g, 3.0).unwrap();
        assert_eq!(
            component_weight(&SimpleFunction::zero(&g), &p, &q, &cfg()).unwrap(),
            0.0
        );
        let f = SimpleFunction::constant(&g, 2.0).unwrap();
        assert!(close(component_weight(&f, &p, &q, &cfg()).unwrap(), 8.0, 1e-12));

        let g = Grid::new(1, vec![0.5, 0.5]).unwrap();
        let p = ExponentField::constant(&g, 2.0).unwrap();
        let q = ExponentField::new(&g, vec![2.0, 4.0]).unwrap();
        let f = SimpleFunction::constant(&g, 1.0).unwrap();
        let w = component_weight(&f, &p, &q, &cfg()).unwrap();
        assert!(close(w, 1.0, 1e-12));
        assert!(close(scaled_component_modular(&f, &p, &q, w).unwrap(), 1.0, 1e-11));
    }

    #[test]
    fn mixed_modular_examples() {
        let g = unit();
        let p = ExponentField::constant(&g, 2.0).unwrap();
        let zero = FunctionSequence::from_values(&g, vec![vec![0.0], vec![0.0]]).unwrap();
        assert_eq!(mixed_modular(&zero, &p, &p, &cfg()).unwrap(), 0.0);
        let ones = FunctionSequence::from_values(&g, vec![vec![1.0], vec![1.0]]).unwrap();
        assert!(close(mixed_modular(&ones, &p, &p, &cfg()).unwrap(), 2.0, 1e-12));
        let q3 = ExponentField::constant(&g, 3.0).unwrap();
        let f = FunctionSequence::from_values(&g, vec![vec![2.0], vec![0.0]]).unwrap();
        assert!(close(mixed_modular(&f, &p, &q3, &cfg()).unwrap(), 8.0, 1e-12));
    }

    #[test]
    fn mixed_norm_examples() {
        let g = unit();
        let p = ExponentField::constant(&g, 2.0).unwrap();
        let zero = FunctionSequence::from_values(&g, vec![vec![0.0]]).unwrap();
        let s = mixed_norm_with_diagnostics(&zero, &p, &p, &cfg()).unwrap();
        assert_eq!((s.value, s.outer_iterations), (0.0, 0));
        let f = FunctionSequence::from_values(&g, vec![vec![3.0], vec![4.0]]).unwrap();
        let s = mixed_norm_with_diagnostics(&f, &p, &p, &cfg()).unwrap();
        assert!(close(s.value, 5.0, 1e-12));
        assert!(s.outer_iterations > 0);

        let g = Grid::new(1, vec![0.5, 0.5]).unwrap();
        let p = ExponentField::new(&g, vec![2.0, 4.0]).unwrap();
        let f1 = SimpleFunction::constant(&g, 1.0).unwrap();
        let lux = luxemburg_norm(&f1, &p, &cfg()).unwrap();
        for qv in [vec![1.5, 1.5], vec![1.2, 6.0], vec![3.0, 2.0]] {
            let q = ExponentField::new(&g, qv).unwrap();
            let f = FunctionSequence::new(&g, vec![f1.clone()]).unwrap();
            let n = mixed_norm(&f, &p, &q, &cfg()).unwrap();
            assert!(close(n, 1.0, 1e-11));
            assert!(close(n, lux, 1e-11));
        }
    }

    #[test]
    fn witness_examples() {
        let g = unit();
        let p = ExponentField::constant(&g, 2.0).unwrap();
        let zero = FunctionSequence::from_values(&g, vec![vec![0.0], vec![0.0]]).unwrap();
        let z = witness_decomposition(&zero, &p, &p, &cfg()).unwrap();
        assert_eq!(z.weights(), &[0.0, 0.0]);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let f = FunctionSequence::from_values(&g, vec![vec![h], vec![h]]).unwrap();
        let z = witness_decomposition(&f, &p, &p, &cfg()).unwrap();
        assert!(close(z.weights()[0], 0.5, 1e-12) && close(z.weights()[1], 0.5, 1e-12));
        assert!(close(z.total(), 1.0, 1e-12));
        for (c, &w) in f.components().iter().zip(z.weights()) {
            assert!(close(scaled_component_modular(c, &p, &p, w).unwrap(), 1.0, 1e-11));
        }

        let ones = FunctionSequence::from_values(&g, vec![vec![1.0], vec![1.0]]).unwrap();
        match witness_decomposition(&ones, &p, &p, &cfg()) {
            Err(Error::Premise { modular, .. }) => assert!(close(modular, 2.0, 1e-12)),
            other => panic!("expected premise error, got {other:?}"),
        }
    }

    #[test]
    fn component_weights_type() {
        let w = ComponentWeights::new(vec![0.25, 0.0, 0.5]).unwrap();
        assert_eq!(w.total(), 0.75);
        assert!(ComponentWeights::with_total(vec![0.25, 0.5], 0.75).is_ok());
        assert!(ComponentWeights::with_total(vec![0.25, 0.5], 0.76).is_err());
        assert!(ComponentWeights::new(vec![-1.0]).is_err());
        let floored = w.with_floor(1e-300);
        assert_eq!(floored.weights()[1], 1e-300);
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::with_tolerance(0.0).validate().is_err());
        assert!(SolverConfig::with_tolerance(1.0).validate().is_err());
        let bad = SolverConfig {
            bracket_growth: 1.0,
            ..cfg()
        };
        assert!(bad.validate().is_err());
        let g = unit();
        let p = ExponentField::constant(&g, 2.0).unwrap();
        let f = SimpleFunction::constant(&g, 1.0).unwrap();
        assert!(luxemburg_norm(&f, &p, &bad).is_err());
    }

    #[test]
    fn component_errors_carry_index() {
        let g = unit();
        let p = ExponentField::constant(&g, 2.0).unwrap();
        let f = FunctionSequence::from_values(&g, vec![vec![1.0], vec![2.0]]).unwrap();
        assert!(mixed_modular(&f, &p, &p, &cfg()).is_ok());
        let other = Grid::uniform(1, 2, 1.0).unwrap();
        let pq = ExponentField::constant(&other, 2.0).unwrap();
        match mixed_modular(&f, &pq, &pq, &cfg()) {
            Err(Error::Component { index: 0, .. }) => {}
            r => panic!("unexpected {r:?}"),
        }
    }
}
