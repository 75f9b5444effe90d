//! Discrete functions and exponents on a fixed grid of cells.
//!
//! Every function is constant on each cell, so the variable-exponent modular
//! `∫|f(x)|^{p(x)} dx` is the finite sum `Σ |v_i|^{p_i} m_i` over cells with
//! value `v_i`, exponent `p_i` and measure `m_i`. Only cell measures are stored.
//!
//! Cell powers are evaluated as `exp(p·ln|v|)`, with zero cells skipped.

use std::sync::Arc;

use crate::error::{Error, Result};

/// A finite partition of a box into cells of positive measure.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    dimension: usize,
    measures: Vec<f64>,
    total: f64,
}

impl Grid {
    pub fn new(dimension: usize, measures: Vec<f64>) -> Result<Arc<Self>> {
        if !(1..=3).contains(&dimension) {
            return Err(Error::InvalidInput(format!(
                "grid dimension must be 1, 2 or 3, got {dimension}"
            )));
        }
        if measures.is_empty() {
            return Err(Error::InvalidInput("grid has no cells".into()));
        }
        for (i, &m) in measures.iter().enumerate() {
            if !(m.is_finite() && m > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "cell_measures[{i}] = {m}: measure must be positive and finite"
                )));
            }
        }
        let total = measures.iter().sum::<f64>();
        if !total.is_finite() {
            return Err(Error::InvalidInput("total measure is not finite".into()));
        }
        Ok(Arc::new(Grid {
            dimension,
            measures,
            total,
        }))
    }

    /// `cells` cells of equal measure summing to `total`.
    pub fn uniform(dimension: usize, cells: usize, total: f64) -> Result<Arc<Self>> {
        Self::new(dimension, vec![total / cells as f64; cells])
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn cell_count(&self) -> usize {
        self.measures.len()
    }

    pub fn measures(&self) -> &[f64] {
        &self.measures
    }

    pub fn total_measure(&self) -> f64 {
        self.total
    }
}

pub(crate) fn same_grid(a: &Arc<Grid>, b: &Arc<Grid>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn check_grid(a: &Arc<Grid>, b: &Arc<Grid>, what: &str) -> Result<()> {
    if same_grid(a, b) {
        Ok(())
    } else {
        Err(Error::GridMismatch(format!(
            "{what}: {} cells vs {} cells on a different grid",
            a.cell_count(),
            b.cell_count()
        )))
    }
}

/// A variable exponent `p(·)` (or `q(·)`), one value per cell.
///
/// Strict fields satisfy `1 < lower` and `upper < ∞`, the range in which the
/// mixed quasi-norm is a norm. Relaxed fields only require values in `(0, ∞)`
/// and are marked non-normable when `lower <= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentField {
    grid: Arc<Grid>,
    values: Vec<f64>,
    lower: f64,
    upper: f64,
}

impl ExponentField {
    pub fn new(grid: &Arc<Grid>, values: Vec<f64>) -> Result<Self> {
        Self::build(grid, values, false)
    }

    /// Exponents in `(0, ∞)`, for quasi-norm experiments.
    pub fn relaxed(grid: &Arc<Grid>, values: Vec<f64>) -> Result<Self> {
        Self::build(grid, values, true)
    }

    pub fn constant(grid: &Arc<Grid>, value: f64) -> Result<Self> {
        Self::new(grid, vec![value; grid.cell_count()])
    }

    pub fn constant_relaxed(grid: &Arc<Grid>, value: f64) -> Result<Self> {
        Self::relaxed(grid, vec![value; grid.cell_count()])
    }

    fn build(grid: &Arc<Grid>, values: Vec<f64>, relaxed: bool) -> Result<Self> {
        if values.len() != grid.cell_count() {
            return Err(Error::GridMismatch(format!(
                "exponent has {} values for {} cells",
                values.len(),
                grid.cell_count()
            )));
        }
        for (index, &value) in values.iter().enumerate() {
            let reason = if !value.is_finite() {
                Some("exponent must be finite")
            } else if relaxed && value <= 0.0 {
                Some("exponent must be positive")
            } else if !relaxed && value <= 1.0 {
                Some("exponent must exceed 1 (relaxed mode permits (0, 1])")
            } else {
                None
            };
            if let Some(reason) = reason {
                return Err(Error::InvalidExponent {
                    field: "exponent".into(),
                    index,
                    value,
                    reason: reason.into(),
                });
            }
        }
        let lower = values.iter().copied().fold(f64::INFINITY, f64::min);
        let upper = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(ExponentField {
            grid: grid.clone(),
            values,
            lower,
            upper,
        })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn lower_bound(&self) -> f64 {
        self.lower
    }

    pub fn upper_bound(&self) -> f64 {
        self.upper
    }

    /// `1 < lower_bound`; `upper_bound` is always finite.
    pub fn is_normable(&self) -> bool {
        self.lower > 1.0
    }

    pub fn is_constant(&self) -> bool {
        self.lower == self.upper
    }
}

/// A piecewise-constant function, one real value per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleFunction {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

impl SimpleFunction {
    pub fn new(grid: &Arc<Grid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.cell_count() {
            return Err(Error::GridMismatch(format!(
                "function has {} values for {} cells",
                values.len(),
                grid.cell_count()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "function value {i} is not finite: {}",
                values[i]
            )));
        }
        Ok(SimpleFunction {
            grid: grid.clone(),
            values,
        })
    }

    pub fn zero(grid: &Arc<Grid>) -> Self {
        SimpleFunction {
            grid: grid.clone(),
            values: vec![0.0; grid.cell_count()],
        }
    }

    pub fn constant(grid: &Arc<Grid>, value: f64) -> Result<Self> {
        Self::new(grid, vec![value; grid.cell_count()])
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(&self.grid, self.values.iter().map(|v| v * c).collect())
    }

    pub fn abs(&self) -> Self {
        SimpleFunction {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v.abs()).collect(),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &SimpleFunction, b: f64) -> Result<Self> {
        check_grid(&self.grid, &other.grid, "linear combination")?;
        Self::new(
            &self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
    }
}

/// A finite sequence `(f_1, …, f_N)`; every `f_ν` with `ν > N` is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSequence {
    grid: Arc<Grid>,
    components: Vec<SimpleFunction>,
}

impl FunctionSequence {
    pub fn new(grid: &Arc<Grid>, components: Vec<SimpleFunction>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidInput("sequence needs at least one component".into()));
        }
        for (i, c) in components.iter().enumerate() {
            check_grid(grid, &c.grid, &format!("component {i}"))?;
        }
        Ok(FunctionSequence {
            grid: grid.clone(),
            components,
        })
    }

    pub fn from_values(grid: &Arc<Grid>, components: Vec<Vec<f64>>) -> Result<Self> {
        let components = components
            .into_iter()
            .enumerate()
            .map(|(i, v)| SimpleFunction::new(grid, v).map_err(|e| e.in_component(i)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(grid, components)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn components(&self) -> &[SimpleFunction] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(SimpleFunction::is_zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.components.iter().all(SimpleFunction::is_nonnegative)
    }

    /// Appends zero components up to length `n`.
    pub fn padded(&self, n: usize) -> Self {
        let mut components = self.components.clone();
        while components.len() < n {
            components.push(SimpleFunction::zero(&self.grid));
        }
        FunctionSequence {
            grid: self.grid.clone(),
            components,
        }
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        let components = self
            .components
            .iter()
            .map(|f| f.scaled(c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&self.grid, components)
    }

    pub fn abs(&self) -> Self {
        FunctionSequence {
            grid: self.grid.clone(),
            components: self.components.iter().map(SimpleFunction::abs).collect(),
        }
    }

    /// `a·self + b·other`, padding the shorter sequence with zeros.
    pub fn combine(&self, a: f64, other: &FunctionSequence, b: f64) -> Result<Self> {
        check_grid(&self.grid, &other.grid, "sequence combination")?;
        let n = self.len().max(other.len());
        let (x, y) = (self.padded(n), other.padded(n));
        let components = x
            .components
            .iter()
            .zip(&y.components)
            .map(|(f, g)| f.combine(a, g, b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&self.grid, components)
    }

    pub fn sum(&self, other: &FunctionSequence) -> Result<Self> {
        self.combine(1.0, other, 1.0)
    }
}

/// Log-domain cell terms of `Σ m_i |v_i|^{p_i} μ^{-p_i} λ^{-p_i/q_i}`.
///
/// Zero cells contribute nothing and are dropped.
#[derive(Debug, Clone)]
pub(crate) struct CellTerms {
    cells: Vec<usize>,
    log_abs: Vec<f64>,
    p: Vec<f64>,
    p_over_q: Vec<f64>,
    measure: Vec<f64>,
}

impl CellTerms {
    pub(crate) fn new(f: &SimpleFunction, p: &ExponentField, q: Option<&ExponentField>) -> Result<Self> {
        check_grid(&f.grid, &p.grid, "function vs p")?;
        if let Some(q) = q {
            check_grid(&f.grid, &q.grid, "function vs q")?;
        }
        let mut terms = CellTerms {
            cells: Vec::new(),
            log_abs: Vec::new(),
            p: Vec::new(),
            p_over_q: Vec::new(),
            measure: Vec::new(),
        };
        for (i, &v) in f.values.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            let pi = p.values[i];
            terms.cells.push(i);
            terms.log_abs.push(v.abs().ln());
            terms.p.push(pi);
            terms.p_over_q.push(q.map_or(0.0, |q| pi / q.values[i]));
            terms.measure.push(f.grid.measures[i]);
        }
        Ok(terms)
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.cells.is_empty()
    }

    /// `ln μ` at which the largest single cell term of `Σ m|v/μ|^p` equals 1.
    /// The root of the full sum lies at or above it.
    pub(crate) fn log_mu_guess(&self) -> f64 {
        (0..self.cells.len())
            .map(|i| self.log_abs[i] + self.measure[i].ln() / self.p[i])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `ln λ` at which the largest single cell term equals 1, for fixed `μ`.
    pub(crate) fn log_lambda_guess(&self, log_mu: f64) -> f64 {
        (0..self.cells.len())
            .map(|i| (self.p[i] * (self.log_abs[i] - log_mu) + self.measure[i].ln()) / self.p_over_q[i])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Value at `μ = exp(log_mu)`, `λ = exp(log_lambda)`; may be `+∞`.
    pub(crate) fn eval(&self, log_mu: f64, log_lambda: f64) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.cells.len() {
            let e = self.p[i] * (self.log_abs[i] - log_mu) - self.p_over_q[i] * log_lambda;
            sum += e.exp() * self.measure[i];
        }
        sum
    }

    /// As [`eval`](Self::eval), reporting the first cell whose term is not finite.
    pub(crate) fn eval_checked(&self, log_mu: f64, log_lambda: f64, context: &str) -> Result<f64> {
        let mut sum = 0.0;
        for i in 0..self.cells.len() {
            let e = self.p[i] * (self.log_abs[i] - log_mu) - self.p_over_q[i] * log_lambda;
            let term = e.exp() * self.measure[i];
            sum += term;
            if !term.is_finite() || !sum.is_finite() {
                return Err(Error::Overflow {
                    cell: self.cells[i],
                    context: context.to_string(),
                });
            }
        }
        Ok(sum)
    }
}

/// `ϱ_{p(·)}(f) = Σ_cells |v|^{p} · measure`.
pub fn modular_p(f: &SimpleFunction, p: &ExponentField) -> Result<f64> {
    CellTerms::new(f, p, None)?.eval_checked(0.0, 0.0, "modular_p")
}

/// `ϱ_{p(·)}(f / λ^{1/q(·)}) = Σ_cells |v|^{p} λ^{-p/q} · measure`.
pub fn scaled_component_modular(
    f: &SimpleFunction,
    p: &ExponentField,
    q: &ExponentField,
    lambda: f64,
) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "lambda must be positive and finite, got {lambda}"
        )));
    }
    CellTerms::new(f, p, Some(q))?.eval_checked(
        0.0,
        lambda.ln(),
        &format!("scaled component modular at lambda = {lambda:e}"),
    )
}
