//! Seeded random instances.
//!
//! Cell measures are uniform in `[0.5, 1.5] / cells`, exponents uniform per
//! cell in their ranges, and function values uniform in `[-A, A]`. Trial `k`
//! of a suite draws from its own stream seeded by mixing `(seed, k)`, so
//! trials can run in any order.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{ExponentField, FunctionSequence, Grid, SimpleFunction};

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSpec {
    pub seed: u64,
    pub dimension: usize,
    pub cell_count: usize,
    pub component_count: usize,
    pub p_range: (f64, f64),
    pub q_range: (f64, f64),
    pub amplitude: f64,
    /// Permits exponent lows in `(0, 1]`.
    pub allow_quasi: bool,
}

impl Default for InstanceSpec {
    fn default() -> Self {
        InstanceSpec {
            seed: 42,
            dimension: 1,
            cell_count: 16,
            component_count: 4,
            p_range: (1.5, 4.0),
            q_range: (1.5, 4.0),
            amplitude: 1.0,
            allow_quasi: false,
        }
    }
}

impl InstanceSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        if !(1..=3).contains(&self.dimension) {
            return bad(format!("dimension must be 1, 2 or 3, got {}", self.dimension));
        }
        if self.cell_count == 0 || self.component_count == 0 {
            return bad("cell and component counts must be at least 1".into());
        }
        for (name, (lo, hi)) in [("p", self.p_range), ("q", self.q_range)] {
            if !(lo <= hi && hi.is_finite()) {
                return bad(format!("{name} range ({lo}, {hi}) must be ordered and finite"));
            }
            if self.allow_quasi {
                if lo <= 0.0 {
                    return bad(format!("{name} range low {lo} must be positive"));
                }
            } else if lo <= 1.0 {
                return bad(format!("{name} range low {lo} must exceed 1 without allow_quasi"));
            }
        }
        if !(self.amplitude > 0.0 && self.amplitude.is_finite()) {
            return bad(format!("amplitude must be positive and finite, got {}", self.amplitude));
        }
        Ok(())
    }

    /// The spec for trial `k` of a suite seeded by `self.seed`.
    pub fn for_trial(&self, k: usize) -> InstanceSpec {
        InstanceSpec {
            seed: trial_seed(self.seed, k),
            ..self.clone()
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    splitmix64(seed ^ splitmix64(trial as u64))
}

/// A random source tied to one instance spec.
pub(crate) struct Sampler {
    rng: ChaCha8Rng,
    spec: InstanceSpec,
}

impl Sampler {
    pub(crate) fn new(spec: &InstanceSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Sampler {
            rng: ChaCha8Rng::seed_from_u64(spec.seed),
            spec: spec.clone(),
        })
    }

    pub(crate) fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        if lo == hi {
            lo
        } else {
            self.rng.gen_range(lo..=hi)
        }
    }

    pub(crate) fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub(crate) fn grid(&mut self) -> Result<Arc<Grid>> {
        let n = self.spec.cell_count;
        let measures = (0..n).map(|_| self.uniform(0.5, 1.5) / n as f64).collect();
        Grid::new(self.spec.dimension, measures)
    }

    pub(crate) fn exponent(&mut self, grid: &Arc<Grid>, range: (f64, f64)) -> Result<ExponentField> {
        let values = (0..grid.cell_count()).map(|_| self.uniform(range.0, range.1)).collect();
        if self.spec.allow_quasi {
            ExponentField::relaxed(grid, values)
        } else {
            ExponentField::new(grid, values)
        }
    }

    /// A sequence with at least one nonzero value.
    pub(crate) fn sequence(&mut self, grid: &Arc<Grid>) -> Result<FunctionSequence> {
        let a = self.spec.amplitude;
        loop {
            let components = (0..self.spec.component_count)
                .map(|_| {
                    let values = (0..grid.cell_count()).map(|_| self.uniform(-a, a)).collect();
                    SimpleFunction::new(grid, values)
                })
                .collect::<Result<Vec<_>>>()?;
            let f = FunctionSequence::new(grid, components)?;
            if !f.is_zero() {
                return Ok(f);
            }
        }
    }

    pub(crate) fn fields(&mut self) -> Result<(Arc<Grid>, ExponentField, ExponentField)> {
        let grid = self.grid()?;
        let p = self.exponent(&grid, self.spec.p_range)?;
        let q = self.exponent(&grid, self.spec.q_range)?;
        Ok((grid, p, q))
    }
}

/// One sequence with its exponents, deterministic in `spec.seed`.
pub fn random_instance(spec: &InstanceSpec) -> Result<(FunctionSequence, ExponentField, ExponentField)> {
    let mut s = Sampler::new(spec)?;
    let (grid, p, q) = s.fields()?;
    let f = s.sequence(&grid)?;
    Ok((f, p, q))
}

/// Two sequences sharing one grid and exponent pair.
pub fn random_pair(
    spec: &InstanceSpec,
) -> Result<(FunctionSequence, FunctionSequence, ExponentField, ExponentField)> {
    let mut s = Sampler::new(spec)?;
    let (grid, p, q) = s.fields()?;
    let f = s.sequence(&grid)?;
    let g = s.sequence(&grid)?;
    Ok((f, g, p, q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_in_seed() {
        let spec = InstanceSpec::default();
        assert_eq!(random_instance(&spec).unwrap(), random_instance(&spec).unwrap());
        let other = InstanceSpec { seed: 43, ..spec.clone() };
        assert_ne!(random_instance(&spec).unwrap(), random_instance(&other).unwrap());
        assert_eq!(spec.for_trial(3), spec.for_trial(3));
        assert_ne!(spec.for_trial(3).seed, spec.for_trial(4).seed);
    }

    #[test]
    fn draws_respect_ranges() {
        let spec = InstanceSpec {
            cell_count: 32,
            component_count: 3,
            p_range: (1.2, 1.7),
            q_range: (3.0, 3.0),
            amplitude: 0.25,
            ..InstanceSpec::default()
        };
        let (f, p, q) = random_instance(&spec).unwrap();
        assert_eq!(f.len(), 3);
        assert!(p.values().iter().all(|&v| (1.2..=1.7).contains(&v)));
        assert!(q.is_constant() && q.lower_bound() == 3.0);
        for c in f.components() {
            assert!(c.values().iter().all(|v| v.abs() <= 0.25));
        }
        assert!(!f.is_zero());
    }

    #[test]
    fn rejects_invalid_specs() {
        let base = InstanceSpec::default();
        for spec in [
            InstanceSpec { amplitude: 0.0, ..base.clone() },
            InstanceSpec { p_range: (1.0, 2.0), ..base.clone() },
            InstanceSpec { q_range: (3.0, 2.0), ..base.clone() },
            InstanceSpec { cell_count: 0, ..base.clone() },
            InstanceSpec { dimension: 0, ..base.clone() },
            InstanceSpec { p_range: (0.0, 2.0), allow_quasi: true, ..base.clone() },
        ] {
            assert!(random_instance(&spec).is_err(), "{spec:?}");
        }
        let quasi = InstanceSpec { q_range: (0.5, 0.5), allow_quasi: true, ..base };
        let (_, _, q) = random_instance(&quasi).unwrap();
        assert!(!q.is_normable());
    }
}
