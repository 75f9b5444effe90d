use crate::error::{Error, Result};
use crate::grid::{ExponentField, FunctionSequence};
use crate::report::{Outcome, ProbeReport};
use crate::solver::{mixed_modular, mixed_norm, SolverConfig};

/// Strictness threshold for "<" claims: ten root tolerances.
pub(crate) fn strict_gap(cfg: &SolverConfig) -> f64 {
    10.0 * cfg.rel_tolerance
}

/// `‖f + g‖ ≤ ‖f‖ + ‖g‖`; `lhs = ‖f + g‖`, `rhs = ‖f‖ + ‖g‖`.
pub fn triangle_check(
    f: &FunctionSequence,
    g: &FunctionSequence,
    p: &ExponentField,
    q: &ExponentField,
    cfg: &SolverConfig,
) -> Result<ProbeReport> {
    let sum = f.sum(g)?;
    let norm_f = mixed_norm(f, p, q, cfg)?;
    let norm_g = mixed_norm(g, p, q, cfg)?;
    let lhs = mixed_norm(&sum, p, q, cfg)?;
    let rhs = norm_f + norm_g;
    let outcome = if lhs <= rhs + strict_gap(cfg) * rhs {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    Ok(ProbeReport::new("triangle", lhs, rhs, outcome, cfg.rel_tolerance)
        .with("norm_f", norm_f)
        .with("norm_g", norm_g))
}

fn normalized_close(f: &FunctionSequence, nf: f64, g: &FunctionSequence, ng: f64) -> bool {
    let n = f.len().max(g.len());
    let (f, g) = (f.padded(n), g.padded(n));
    let mut scale: f64 = 0.0;
    let mut diff: f64 = 0.0;
    for (a, b) in f.components().iter().zip(g.components()) {
        for (x, y) in a.values().iter().zip(b.values()) {
            let (u, w) = (x / nf, y / ng);
            scale = scale.max(u.abs()).max(w.abs());
            diff = diff.max((u - w).abs());
        }
    }
    diff <= 1e-9 * scale
}

/// Midpoint modular `m = ϱ(f/(2‖f‖) + g/(2‖g‖))` of two unit vectors.
///
/// Non-proportional inputs pass when `m < 1 − 10·tol`; positive multiples of
/// one another pass when `|m − 1| ≤ 10·tol`. `lhs = m`, `rhs = 1`.
pub fn strict_convexity_probe(
    f: &FunctionSequence,
    g: &FunctionSequence,
    p: &ExponentField,
    q: &ExponentField,
    cfg: &SolverConfig,
) -> Result<ProbeReport> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::InvalidInput("strict convexity probe needs nonzero f and g".into()));
    }
    let nf = mixed_norm(f, p, q, cfg)?;
    let ng = mixed_norm(g, p, q, cfg)?;
    let mid = f.combine(0.5 / nf, g, 0.5 / ng)?;
    let m = mixed_modular(&mid, p, q, cfg)?;
    let proportional = normalized_close(f, nf, g, ng);
    let gap = strict_gap(cfg);
    let ok = if proportional { (m - 1.0).abs() <= gap } else { m < 1.0 - gap };
    let outcome = if ok { Outcome::Pass } else { Outcome::Fail };
    Ok(ProbeReport::new("convexity", m, 1.0, outcome, cfg.rel_tolerance)
        .with("proportional", if proportional { 1.0 } else { 0.0 })
        .with("norm_f", nf)
        .with("norm_g", ng))
}

/// `(Σ_ν ‖f_ν‖_p^q)^{1/q}` with `‖f_ν‖_p = (Σ_cells |v|^p m)^{1/p}`.
pub fn constant_exponent_closed_form(f: &FunctionSequence, p: f64, q: f64) -> f64 {
    let measures = f.grid().measures();
    let sum: f64 = f
        .components()
        .iter()
        .map(|c| {
            let lp: f64 = c.values().iter().zip(measures).map(|(v, m)| v.abs().powf(p) * m).sum();
            lp.powf(q / p)
        })
        .sum();
    sum.powf(1.0 / q)
}

/// Compares `mixed_norm` under constant exponents with the closed form.
/// `lhs = mixed_norm`, `rhs` = closed form.
pub fn constant_exponent_oracle(
    f: &FunctionSequence,
    p_const: f64,
    q_const: f64,
    cfg: &SolverConfig,
) -> Result<ProbeReport> {
    let p = ExponentField::constant(f.grid(), p_const)?;
    let q = ExponentField::constant(f.grid(), q_const)?;
    let lhs = mixed_norm(f, &p, &q, cfg)?;
    let rhs = constant_exponent_closed_form(f, p_const, q_const);
    let outcome = if (lhs - rhs).abs() <= strict_gap(cfg) * rhs {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    Ok(ProbeReport::new("oracle", lhs, rhs, outcome, cfg.rel_tolerance)
        .with("p", p_const)
        .with("q", q_const))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::grid::Grid;

    fn unit() -> Arc<Grid> {
        Grid::uniform(1, 1, 1.0).unwrap()
    }

    fn seq(g: &Arc<Grid>, v: &[f64]) -> FunctionSequence {
        FunctionSequence::from_values(g, v.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    #[test]
    fn triangle_euclidean_example() {
        let g = unit();
        let two = ExponentField::constant(&g, 2.0).unwrap();
        let r = triangle_check(&seq(&g, &[3.0, 0.0]), &seq(&g, &[0.0, 4.0]), &two, &two, &SolverConfig::default())
            .unwrap();
        assert!((r.lhs - 5.0).abs() < 1e-11 && (r.rhs - 7.0).abs() < 1e-11);
        assert_eq!(r.outcome, Outcome::Pass);
    }

    #[test]
    fn triangle_equality_for_identical_inputs() {
        let g = Grid::new(1, vec![0.3, 0.7]).unwrap();
        let p = ExponentField::new(&g, vec![1.6, 3.1]).unwrap();
        let q = ExponentField::new(&g, vec![2.2, 1.4]).unwrap();
        let f = FunctionSequence::from_values(&g, vec![vec![0.4, -1.1], vec![2.0, 0.3]]).unwrap();
        let cfg = SolverConfig::default();
        let r = triangle_check(&f, &f, &p, &q, &cfg).unwrap();
        assert!(r.margin.abs() <= 1e-10 * r.rhs, "margin {}", r.margin);
        assert!(r.passed());
    }

    #[test]
    fn convexity_examples() {
        let g = unit();
        let two = ExponentField::constant(&g, 2.0).unwrap();
        let cfg = SolverConfig::default();
        let r = strict_convexity_probe(&seq(&g, &[1.0, 0.0]), &seq(&g, &[0.0, 1.0]), &two, &two, &cfg).unwrap();
        assert!((r.lhs - 0.5).abs() < 1e-11);
        assert!(r.passed());

        let f = seq(&g, &[1.5, -0.5]);
        let r = strict_convexity_probe(&f, &f.scaled(2.0).unwrap(), &two, &two, &cfg).unwrap();
        assert_eq!(r.quantity("proportional"), Some(1.0));
        assert!((r.lhs - 1.0).abs() < 1e-10);
        assert!(r.passed());

        assert!(strict_convexity_probe(&seq(&g, &[0.0]), &f, &two, &two, &cfg).is_err());
    }

    #[test]
    fn oracle_examples() {
        let g = unit();
        let cfg = SolverConfig::default();
        let zero = seq(&g, &[0.0, 0.0]);
        let r = constant_exponent_oracle(&zero, 2.0, 2.0, &cfg).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
        assert!(r.passed());
        let r = constant_exponent_oracle(&seq(&g, &[3.0, 4.0]), 2.0, 2.0, &cfg).unwrap();
        assert!((r.lhs - 5.0).abs() < 1e-11 && (r.rhs - 5.0).abs() < 1e-12);
        assert!(r.passed());
    }
}
