//! Bracketing and bisection for the equation `φ(x) = 1` with `φ` strictly
//! decreasing on `(0, ∞)`.
//!
//! Brackets grow or shrink geometrically from a starting guess, so roots far
//! from the guess are reached in a logarithmic number of steps.

use crate::error::{Error, Result};
use crate::solver::SolverConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Root {
    pub value: f64,
    pub iterations: usize,
}

/// Solves `phi(x) = 1` for `x > 0`, starting from `guess`.
///
/// `phi` must be strictly decreasing; `+∞` is accepted as "above 1" and
/// errors from `phi` abort the search.
/// The returned `x` lies within `rel_tol · x` of the root.
pub(crate) fn solve_decreasing<F>(
    mut phi: F,
    guess: f64,
    rel_tol: f64,
    cfg: &SolverConfig,
    what: &str,
) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut phi = |x: f64| match phi(x) {
        Ok(v) if v.is_nan() => Err(Error::InvalidInput(format!("{what}: objective is NaN at {x:e}"))),
        other => other,
    };
    let guess = if guess.is_finite() && guess > 0.0 { guess } else { 1.0 };
    let growth = cfg.bracket_growth;
    let (mut lo, mut hi);
    let mut expansions = 0;
    let v = phi(guess)?;
    if v > 1.0 {
        lo = guess;
        hi = guess * growth;
        while phi(hi)? > 1.0 {
            expansions += 1;
            if expansions >= cfg.max_bracket_expansions || !hi.is_finite() {
                return Err(Error::NonConvergence {
                    what: format!("{what} bracket expansion (upper end {hi:e})"),
                    iterations: expansions,
                });
            }
            lo = hi;
            hi *= growth;
        }
    } else if v < 1.0 {
        hi = guess;
        lo = guess / growth;
        while phi(lo)? <= 1.0 {
            expansions += 1;
            if expansions >= cfg.max_bracket_expansions || lo == 0.0 {
                return Err(Error::NonConvergence {
                    what: format!("{what} bracket expansion (lower end {lo:e})"),
                    iterations: expansions,
                });
            }
            hi = lo;
            lo /= growth;
        }
    } else {
        return Ok(Root {
            value: guess,
            iterations: 0,
        });
    }

    // phi(lo) > 1 >= phi(hi)
    let mut iterations = 0;
    while hi - lo > rel_tol * lo {
        if iterations >= cfg.max_bisection_iters {
            return Err(Error::NonConvergence {
                what: format!("{what} bisection (bracket [{lo:e}, {hi:e}])"),
                iterations,
            });
        }
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = phi(mid)?;
        if v > 1.0 {
            lo = mid;
        } else if v < 1.0 {
            hi = mid;
        } else {
            return Ok(Root { value: mid, iterations });
        }
    }
    Ok(Root {
        value: 0.5 * (lo + hi),
        iterations,
    })
}

/// Solves `h(r) = 1` on `[0, upper]` for strictly decreasing `h` with
/// `h(0) > 1 >= h(upper)`, to absolute width `abs_tol`.
pub(crate) fn bisect_interval<F>(h: F, upper: f64, abs_tol: f64, cfg: &SolverConfig, what: &str) -> Result<Root>
where
    F: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = (0.0, upper);
    let mut iterations = 0;
    while hi - lo > abs_tol {
        if iterations >= cfg.max_bisection_iters {
            return Err(Error::NonConvergence {
                what: format!("{what} bisection (bracket [{lo:e}, {hi:e}])"),
                iterations,
            });
        }
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = h(mid);
        if v > 1.0 {
            lo = mid;
        } else if v < 1.0 {
            hi = mid;
        } else {
            return Ok(Root { value: mid, iterations });
        }
    }
    Ok(Root {
        value: 0.5 * (lo + hi),
        iterations,
    })
}
