//! Property probes for the norm axioms of `ℓ^{q(·)}(L^{p(·)})`, the
//! constructions used to establish them, and seeded bulk runners.

mod crossing;
mod generate;
mod probes;
mod suites;

pub use crossing::{iterated_crossing_search, lemma_crossing_probe, CrossingSequence, StopReason};
pub use generate::{random_instance, random_pair, trial_seed, InstanceSpec};
pub use probes::{constant_exponent_closed_form, constant_exponent_oracle, strict_convexity_probe, triangle_check};
pub use suites::{
    convexity_suite, crossing_setup, homogeneity_suite, iterate_suite, lemma_suite, oracle_suite,
    quasi_norm_boundary_scan, scalar_sequence, triangle_suite, unit_ball_suite, CrossingSetup, ZETA_FLOOR,
};
