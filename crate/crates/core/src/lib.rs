//! Modulars and Luxemburg-type norms in the variable-exponent Lebesgue space
//! `L^{p(·)}` and the mixed Lebesgue-sequence space `ℓ^{q(·)}(L^{p(·)})`,
//! evaluated exactly on piecewise-constant functions, plus a property-test
//! engine that exercises the norm axioms of the mixed space.

pub mod error;
pub mod grid;
pub mod instance;
pub mod report;
mod root;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{modular_p, scaled_component_modular, ExponentField, FunctionSequence, Grid, SimpleFunction};
pub use solver::{
    component_weight, component_weights, luxemburg_norm, mixed_modular, mixed_norm, mixed_norm_with_diagnostics,
    witness_decomposition, ComponentWeights, NormSolution, SolverConfig,
};
