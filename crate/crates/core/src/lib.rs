//! Voronoi (Nörlund) summation with remainder diagnostics, and exact
//! statistics of additive and multiplicative functions on weighted random
//! permutations.
//!
//! The crate is organized around four layers:
//!
//! - [`series`]: truncated power-series arithmetic (products, `exp`/`log`
//!   recurrences, Horner evaluation) — the substrate for every
//!   generating-function computation;
//! - [`voronoi`]: weight sequences `p_n` generated by `exp(Σ d_k z^k/k)`,
//!   Voronoi means, the transform `S(g;j)` and the remainder, ratio-bound and
//!   partial-sum checks built on them;
//! - [`permstat`]: cycle-type enumeration and the weighted measure on the
//!   symmetric group, with means of multiplicative functions computed by two
//!   independent routes and a sequential cycle-type sampler;
//! - [`clt`]: the normal-approximation apparatus — centering, skew
//!   correction, `L`-functionals and the corrected Kolmogorov gap.
//!
//! [`families`] pins the named input families shared by the CLI sweeps and
//! the acceptance suite.
//!
//! Everything is pure and deterministic: samplers take explicit seeds, and
//! identical inputs produce bit-identical outputs.

pub mod clt;
pub mod error;
pub mod families;
pub mod permstat;
pub mod series;
pub mod voronoi;

pub use clt::{
    char_fn, char_fn_centered, corrected_gap, delta_bound_report, eu_bound_report,
    expansion_residual, normal_cdf, normal_pdf, normalize_additive, stats_bundle, CltStats,
    DeltaBoundReport, EuBoundReport, ExpansionReport, GapReport, PNorm,
};
pub use error::{Error, Result};
pub use permstat::{
    additive_dist, cycles_distribution, ewens_cycle_count_law, mean_mult_enum, mean_mult_gf,
    measure_prob, partitions, sample_cycle_sequence, sample_cycle_type, sample_cycle_types,
    AdditiveSpec, CycleType, DistTable, MultiplicativeSpec,
};
pub use series::{required_order, Scalar, Series};
pub use voronoi::{
    lower_ratio_check, lower_ratio_floor, LowerRatioCheck, RatioBoundsCheck, RemainderReport,
    WeightSpec,
};

/// Crate version, embedded in every CLI output header.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
