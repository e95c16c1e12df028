//! Shared input builders for the benchmark targets.

use norlund_core::series::Series;
use norlund_core::voronoi::WeightSpec;

pub fn bounded_series(order: usize) -> Series<f64> {
    norlund_core::families::seeded_coeff_series(1, order)
}

pub fn random_weights(n_max: usize) -> WeightSpec {
    WeightSpec::random_in(0.5, 2.5, n_max, 42).expect("valid range")
}
