use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// The variants are grouped by how a front end should treat them: bad
/// arguments and domain violations are usage errors, `Guard` is a resource
/// limit (overridable where documented), `NonFinite` is numeric overflow.
#[derive(Debug, Error)]
pub enum Error {
    #[error("series order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("argument out of range: {0}")]
    Argument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite value produced in {0}")]
    NonFinite(String),

    #[error("weight bound violation at index {index}: d[{index}] = {value} not in [{lo}, {hi}]")]
    WeightBounds {
        index: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("negative coefficient at index {0}")]
    NegativeCoefficient(usize),

    #[error("log-derivative bound violated at x = {x}: {lhs} > {rhs}")]
    LogDerivativeBound { x: f64, lhs: f64, rhs: f64 },

    #[error("guard exceeded: n = {n} > {guard} (hard ceiling {max})")]
    Guard { n: usize, guard: usize, max: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
