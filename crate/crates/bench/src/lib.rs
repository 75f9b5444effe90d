//! Criterion benchmarks for the solvers; see `benches/`.

use varlp::verify::{random_instance, InstanceSpec};
use varlp::{ExponentField, FunctionSequence};

/// A fixed random instance with `cells` cells and `components` components.
pub fn fixture(cells: usize, components: usize) -> (FunctionSequence, ExponentField, ExponentField) {
    random_instance(&InstanceSpec {
        seed: 7,
        cell_count: cells,
        component_count: components,
        ..InstanceSpec::default()
    })
    .expect("valid fixture spec")
}
