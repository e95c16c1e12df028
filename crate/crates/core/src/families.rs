//! Named input families used by the check suites and the CLI.
//!
//! The structural bounds in this crate carry existential constants, so their
//! tests fit a constant on half of a declared family and assert the other
//! half with headroom. The families are pinned here so the command-line
//! sweeps and the acceptance suite exercise exactly the same instances.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::permstat::{AdditiveSpec, MultiplicativeSpec};
use crate::series::Series;
use crate::voronoi::WeightSpec;

/// Seeded coefficient family `k`: uniform values in [-1, 1] damped by
/// `(j+1)^{-α}` with `α` cycling over {0, 0.25, 0.5, 0.75, 1}.
pub fn seeded_coeff_series(index: u64, order: usize) -> Series<f64> {
    let alpha = 0.25 * (index % 5) as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c0ef ^ index);
    Series::from_fn(order, |j| {
        rng.gen_range(-1.0..=1.0) * ((j + 1) as f64).powf(-alpha)
    })
    .expect("finite coefficients")
}

/// Parse a named coefficient series.
///
/// Recognized: `alternating` ((-1)^k), `ones`, `log1p` (coefficients of
/// log(1+x)), `alternating-harmonic` ((-1)^k/(k+1)), `seeded:<k>`.
pub fn coeff_series(spec: &str, order: usize) -> Result<Series<f64>> {
    match spec {
        "alternating" => Series::from_fn(order, |k| if k % 2 == 0 { 1.0 } else { -1.0 }),
        "ones" => Series::from_fn(order, |_| 1.0),
        "log1p" => Series::from_fn(order, |k| {
            if k == 0 {
                0.0
            } else if k % 2 == 1 {
                1.0 / k as f64
            } else {
                -1.0 / k as f64
            }
        }),
        "alternating-harmonic" => Series::from_fn(order, |k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign / (k + 1) as f64
        }),
        _ => match spec.strip_prefix("seeded:") {
            Some(idx) => {
                let idx: u64 = idx
                    .parse()
                    .map_err(|_| Error::Argument(format!("bad seeded index in '{spec}'")))?;
                Ok(seeded_coeff_series(idx, order))
            }
            None => Err(Error::Argument(format!(
                "unknown coefficient family '{spec}'"
            ))),
        },
    }
}

/// The ten seeded coefficient families of the standard remainder check.
pub fn standard_coeff_families(order: usize) -> Vec<(String, Series<f64>)> {
    (0..10)
        .map(|i| (format!("seeded:{i}"), seeded_coeff_series(i, order)))
        .collect()
}

/// The standard weight family of the remainder check: constants
/// {0.5, 0.7, 1, 2, 2.5} plus 20 seeded sequences drawn from [0.5, 2.5].
pub fn standard_d_specs(n_max: usize) -> Result<Vec<(String, WeightSpec)>> {
    let mut out = Vec::new();
    for theta in [0.5, 0.7, 1.0, 2.0, 2.5] {
        out.push((
            format!("constant:{theta}"),
            WeightSpec::constant(theta, n_max)?,
        ));
    }
    for seed in 0..20u64 {
        out.push((
            format!("random:0.5,2.5#{seed}"),
            WeightSpec::random_in(0.5, 2.5, n_max, seed)?,
        ));
    }
    Ok(out)
}

/// Parse a weight-data description: `constant:<θ>`, `random:<lo>,<hi>`
/// (seeded), or `file:<path>` with one value per line ('#' comments allowed).
pub fn weight_spec(spec: &str, n_max: usize, seed: u64) -> Result<WeightSpec> {
    if let Some(theta) = spec.strip_prefix("constant:") {
        let theta: f64 = theta
            .parse()
            .map_err(|_| Error::Argument(format!("bad constant in '{spec}'")))?;
        return WeightSpec::constant(theta, n_max);
    }
    if let Some(range) = spec.strip_prefix("random:") {
        let (lo, hi) = range
            .split_once(',')
            .ok_or_else(|| Error::Argument(format!("expected random:<lo>,<hi> in '{spec}'")))?;
        let lo: f64 = lo
            .trim()
            .parse()
            .map_err(|_| Error::Argument(format!("bad lower bound in '{spec}'")))?;
        let hi: f64 = hi
            .trim()
            .parse()
            .map_err(|_| Error::Argument(format!("bad upper bound in '{spec}'")))?;
        return WeightSpec::random_in(lo, hi, n_max, seed);
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Argument(format!("cannot read '{path}': {e}")))?;
        let mut d = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v: f64 = line
                .parse()
                .map_err(|_| Error::Argument(format!("bad value '{line}' in '{path}'")))?;
            d.push(v);
        }
        if d.is_empty() {
            return Err(Error::Argument(format!("no values in '{path}'")));
        }
        // pad cyclically up to n_max so file data can drive large sweeps
        let period = d.len();
        while d.len() < n_max {
            d.push(d[d.len() % period]);
        }
        let lo = d.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        return WeightSpec::from_values(d, lo, hi);
    }
    Err(Error::Argument(format!("unknown weight spec '{spec}'")))
}

/// Parse a named additive shape: `fixedpoints` (ĥ(1)=1, rest 0), `ones`
/// (total cycle count), `flat` (alias of ones), `decay:<α>` (ĥ(j)=j^{-α}),
/// `sparse` (ĥ(j)=1 on j ≡ 1 mod 7).
pub fn additive_shape(spec: &str, n: usize) -> Result<AdditiveSpec> {
    match spec {
        "fixedpoints" => AdditiveSpec::from_fn(n, |j| if j == 1 { 1.0 } else { 0.0 }),
        "ones" | "cycles" | "flat" => AdditiveSpec::from_fn(n, |_| 1.0),
        "sparse" => AdditiveSpec::from_fn(n, |j| if j % 7 == 1 { 1.0 } else { 0.0 }),
        _ => match spec.strip_prefix("decay:") {
            Some(alpha) => {
                let alpha: f64 = alpha
                    .parse()
                    .map_err(|_| Error::Argument(format!("bad decay exponent in '{spec}'")))?;
                AdditiveSpec::from_fn(n, |j| (j as f64).powf(-alpha))
            }
            None => Err(Error::Argument(format!("unknown additive shape '{spec}'"))),
        },
    }
}

/// Parse a named multiplicative family: `one` (f̂ ≡ 1), `expi`
/// (f̂(j)=e^{i/j}), `signflip` (f̂(1)=-1, rest 1), `eps:<ε>`
/// (f̂(j)=1+ε·e^{ij}/j), `seeded:<k>` (random with |f̂| ≤ 1).
pub fn mult_family(spec: &str, n: usize) -> Result<MultiplicativeSpec> {
    match spec {
        "one" => MultiplicativeSpec::from_real(vec![1.0; n]),
        "expi" => MultiplicativeSpec::from_fn(n, |j| Complex64::from_polar(1.0, 1.0 / j as f64)),
        "signflip" => {
            MultiplicativeSpec::from_fn(n, |j| Complex64::new(if j == 1 { -1.0 } else { 1.0 }, 0.0))
        }
        _ => {
            if let Some(eps) = spec.strip_prefix("eps:") {
                let eps: f64 = eps
                    .parse()
                    .map_err(|_| Error::Argument(format!("bad epsilon in '{spec}'")))?;
                return MultiplicativeSpec::from_fn(n, |j| {
                    Complex64::new(1.0, 0.0) + Complex64::from_polar(eps / j as f64, j as f64)
                });
            }
            if let Some(idx) = spec.strip_prefix("seeded:") {
                let idx: u64 = idx
                    .parse()
                    .map_err(|_| Error::Argument(format!("bad seeded index in '{spec}'")))?;
                let mut rng = ChaCha8Rng::seed_from_u64(0xf4a7 ^ idx);
                return MultiplicativeSpec::from_fn(n, |_| {
                    Complex64::from_polar(
                        rng.gen::<f64>(),
                        rng.gen::<f64>() * std::f64::consts::TAU,
                    )
                });
            }
            Err(Error::Argument(format!(
                "unknown multiplicative family '{spec}'"
            )))
        }
    }
}

/// The n-sweep of the standard remainder check: powers of two 16..=512.
pub fn standard_n_sweep(n_cap: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut n = 16usize;
    while n <= n_cap {
        out.push(n);
        n *= 2;
    }
    out
}
