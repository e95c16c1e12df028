//! Statistics of permutations under the multiplicative-weight measure
//! `ν(σ) ∝ d(σ) = Π_j d_j^{α_j(σ)}`.
//!
//! Everything in scope is a function of the cycle type, so the module works
//! at cycle-type level: partition enumeration indexes the exact sums, the
//! mean of a multiplicative function is computed both as a ratio of
//! generating-function coefficients and by brute-force enumeration (the two
//! routes are the module's central cross-check), and a sequential sampler
//! draws cycle types from the measure directly.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::series::Series;
use crate::voronoi::WeightSpec;

/// Default ceiling for exact enumeration; p(60) ≈ 9.7e5 partitions keeps
/// sweeps sub-second.
pub const PARTITION_GUARD: usize = 60;
/// Hard ceiling with the override flag; p(90) ≈ 5.7e7 is the practical limit.
pub const PARTITION_GUARD_MAX: usize = 90;

/// Cycle type of a permutation: sparse multiplicities `j → k_j` with
/// `Σ j·k_j = n` and every stored `k_j ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleType {
    n: usize,
    mult: BTreeMap<usize, usize>,
}

impl CycleType {
    pub fn from_parts(parts: &[usize]) -> Result<Self> {
        let mut mult = BTreeMap::new();
        for &j in parts {
            if j == 0 {
                return Err(Error::Argument("cycle length 0".into()));
            }
            *mult.entry(j).or_insert(0) += 1;
        }
        let n = parts.iter().sum();
        Ok(Self { n, mult })
    }

    pub fn from_multiplicities(mult: BTreeMap<usize, usize>) -> Result<Self> {
        if mult.keys().any(|&j| j == 0) || mult.values().any(|&k| k == 0) {
            return Err(Error::Argument(
                "cycle type entries must be positive".into(),
            ));
        }
        let n = mult.iter().map(|(j, k)| j * k).sum();
        Ok(Self { n, mult })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sparse map `j → k_j`.
    pub fn multiplicities(&self) -> &BTreeMap<usize, usize> {
        &self.mult
    }

    /// Total number of cycles `Σ k_j`.
    pub fn cycle_count(&self) -> usize {
        self.mult.values().sum()
    }

    /// `Σ_j k_j · ĥ(j)` for an additive function given by `ĥ`.
    pub fn additive_value(&self, h: &AdditiveSpec) -> f64 {
        self.mult.iter().map(|(&j, &k)| k as f64 * h.hhat(j)).sum()
    }

    /// `Π_j f̂(j)^{k_j}` for a multiplicative function given by `f̂`.
    pub fn multiplicative_value(&self, f: &MultiplicativeSpec) -> Complex64 {
        self.mult
            .iter()
            .map(|(&j, &k)| f.fhat(j).powu(k as u32))
            .product()
    }

    /// JSON sparse map, e.g. `{"1":3,"2":1}`; keys in increasing order.
    pub fn to_json_string(&self) -> String {
        let map: BTreeMap<String, usize> = self
            .mult
            .iter()
            .map(|(&j, &k)| (j.to_string(), k))
            .collect();
        serde_json::to_string(&map).expect("cycle type serializes")
    }

    /// Compact text form `1:3 2:1 3:2`, in increasing cycle length.
    pub fn to_compact_string(&self) -> String {
        self.mult
            .iter()
            .map(|(j, k)| format!("{j}:{k}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Iterator over all partitions of `n` as cycle types, in descending
/// lexicographic order by parts (`[n]` first, all-ones last). The order is
/// fixed so golden fixtures stay stable.
pub struct PartitionIter {
    parts: Option<Vec<usize>>,
}

impl PartitionIter {
    fn new(n: usize) -> Self {
        Self {
            parts: Some(if n == 0 { vec![] } else { vec![n] }),
        }
    }
}

impl Iterator for PartitionIter {
    type Item = CycleType;

    fn next(&mut self) -> Option<CycleType> {
        let parts = self.parts.as_mut()?;
        let out = CycleType::from_parts(parts).expect("valid partition");
        match parts.iter().rposition(|&a| a > 1) {
            None => self.parts = None,
            Some(i) => {
                let r = parts[i] - 1;
                let mut rem = parts[i] + (parts.len() - i - 1) - r;
                parts.truncate(i);
                parts.push(r);
                while rem > r {
                    parts.push(r);
                    rem -= r;
                }
                if rem > 0 {
                    parts.push(rem);
                }
            }
        }
        Some(out)
    }
}

/// Enumerate partitions of `n`; errors above [`PARTITION_GUARD`].
pub fn partitions(n: usize) -> Result<PartitionIter> {
    partitions_guarded(n, false)
}

/// Enumerate partitions with the override flag raising the guard to
/// [`PARTITION_GUARD_MAX`].
pub fn partitions_guarded(n: usize, override_guard: bool) -> Result<PartitionIter> {
    let guard = if override_guard {
        PARTITION_GUARD_MAX
    } else {
        PARTITION_GUARD
    };
    if n > guard {
        return Err(Error::Guard {
            n,
            guard,
            max: PARTITION_GUARD_MAX,
        });
    }
    Ok(PartitionIter::new(n))
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// Natural log of the number of permutations with cycle type `t`:
/// `ln n! − Σ_j (ln k_j! + k_j ln j)`.
pub fn cycle_type_count_ln(t: &CycleType) -> f64 {
    let mut acc = ln_factorial(t.n);
    for (&j, &k) in &t.mult {
        acc -= ln_factorial(k) + k as f64 * (j as f64).ln();
    }
    acc
}

/// Exact count `n!·Π_j 1/(k_j!·j^{k_j})`; `None` once `n!` leaves the `u128`
/// range (n > 33). The small-n contract is n ≤ 20.
pub fn cycle_type_count_exact(t: &CycleType) -> Option<u128> {
    fn factorial(n: usize) -> Option<u128> {
        let mut acc: u128 = 1;
        for i in 2..=n as u128 {
            acc = acc.checked_mul(i)?;
        }
        Some(acc)
    }
    let mut num = factorial(t.n)?;
    for (&j, &k) in &t.mult {
        let mut den = factorial(k)?;
        for _ in 0..k {
            den = den.checked_mul(j as u128)?;
        }
        debug_assert_eq!(num % den, 0);
        num /= den;
    }
    Some(num)
}

/// Probability of the cycle type under the weighted measure:
/// `P(t) = (1/p_n) Π_j (d_j/j)^{k_j} / k_j!`.
pub fn measure_prob(t: &CycleType, w: &WeightSpec) -> Result<f64> {
    if t.n > w.n_max() {
        return Err(Error::Argument(format!(
            "cycle type on n = {} exceeds weight range {}",
            t.n,
            w.n_max()
        )));
    }
    let mut acc = 1.0f64;
    for (&j, &k) in &t.mult {
        acc *= (w.d_value(j) / j as f64).powi(k as i32);
        for i in 1..=k {
            acc /= i as f64;
        }
    }
    if t.n == 0 {
        return Ok(1.0);
    }
    Ok(acc / w.p_at(t.n))
}

/// Multiplicative function on the symmetric group, defined by the values
/// `f̂(1)..f̂(n)` taken once per cycle of each length.
#[derive(Debug, Clone)]
pub struct MultiplicativeSpec {
    fhat: Vec<Complex64>,
    bounded: bool,
}

impl MultiplicativeSpec {
    pub fn from_complex(fhat: Vec<Complex64>) -> Result<Self> {
        if fhat.is_empty() {
            return Err(Error::Argument("multiplicative spec needs f̂(1)".into()));
        }
        if fhat.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("multiplicative spec values".into()));
        }
        let bounded = fhat.iter().all(|c| c.norm() <= 1.0 + 1e-12);
        Ok(Self { fhat, bounded })
    }

    pub fn from_real(fhat: Vec<f64>) -> Result<Self> {
        Self::from_complex(fhat.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> Complex64) -> Result<Self> {
        Self::from_complex((1..=n).map(f).collect())
    }

    pub fn n(&self) -> usize {
        self.fhat.len()
    }

    /// `f̂(j)`, 1-based.
    pub fn fhat(&self, j: usize) -> Complex64 {
        self.fhat[j - 1]
    }

    /// True iff every `|f̂(j)| ≤ 1`, the hypothesis of the mean-value bound.
    pub fn is_bounded(&self) -> bool {
        self.bounded
    }
}

/// Additive function on the symmetric group, defined by `ĥ(1)..ĥ(n)`.
#[derive(Debug, Clone)]
pub struct AdditiveSpec {
    hhat: Vec<f64>,
}

impl AdditiveSpec {
    pub fn from_values(hhat: Vec<f64>) -> Result<Self> {
        if hhat.is_empty() {
            return Err(Error::Argument("additive spec needs ĥ(1)".into()));
        }
        if hhat.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("additive spec values".into()));
        }
        Ok(Self { hhat })
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> f64) -> Result<Self> {
        Self::from_values((1..=n).map(f).collect())
    }

    pub fn n(&self) -> usize {
        self.hhat.len()
    }

    /// `ĥ(j)`, 1-based.
    pub fn hhat(&self, j: usize) -> f64 {
        self.hhat[j - 1]
    }

    pub fn values(&self) -> &[f64] {
        &self.hhat
    }
}

/// Exact discrete law as a sorted step function: `(value, prob)` atoms with
/// strictly increasing values and probabilities summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct DistTable {
    atoms: Vec<(f64, f64)>,
}

/// Absolute tolerance used to merge additive values that collide inexactly.
pub const VALUE_MERGE_TOL: f64 = 1e-12;

impl DistTable {
    /// Sort, merge values within [`VALUE_MERGE_TOL`], and validate.
    pub fn from_atoms(mut raw: Vec<(f64, f64)>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::Argument(
                "distribution needs at least one atom".into(),
            ));
        }
        if raw.iter().any(|&(v, p)| !v.is_finite() || !p.is_finite()) {
            return Err(Error::NonFinite("distribution atoms".into()));
        }
        raw.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite values"));
        let mut atoms: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (v, p) in raw {
            match atoms.last_mut() {
                Some(last) if (v - last.0).abs() <= VALUE_MERGE_TOL => last.1 += p,
                _ => atoms.push((v, p)),
            }
        }
        if let Some(&(v, p)) = atoms.iter().find(|&&(_, p)| p < -1e-15) {
            return Err(Error::Precondition(format!(
                "negative probability {p} at value {v}"
            )));
        }
        let total: f64 = atoms.iter().map(|&(_, p)| p).sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::Precondition(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self { atoms })
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|&(v, p)| v * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.atoms.iter().map(|&(v, p)| (v - m) * (v - m) * p).sum()
    }

    /// `P(X < x)` — strict, matching the left-continuous step function.
    pub fn cdf_below(&self, x: f64) -> f64 {
        self.atoms
            .iter()
            .take_while(|&&(v, _)| v < x)
            .map(|&(_, p)| p)
            .sum()
    }

    /// Apply a strictly increasing map to the values (e.g. standardization).
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_atoms(self.atoms.iter().map(|&(v, p)| (f(v), p)).collect())
    }

    /// `E e^{itX}` directly from the atoms.
    pub fn characteristic_fn(&self, t: f64) -> Complex64 {
        self.atoms
            .iter()
            .map(|&(v, p)| Complex64::from_polar(p, t * v))
            .sum()
    }

    /// Supremum of `|F(x) − G(x)|` against a continuous cdf `G`, evaluated
    /// from both sides of every atom.
    pub fn sup_gap_to(&self, cdf: impl Fn(f64) -> f64) -> f64 {
        let mut gap = 0.0f64;
        let mut cum = 0.0;
        for &(v, p) in &self.atoms {
            let target = cdf(v);
            gap = gap.max((cum - target).abs());
            cum += p;
            gap = gap.max((cum - target).abs());
        }
        gap
    }

    /// Total-variation distance to another table; values are matched exactly
    /// up to [`VALUE_MERGE_TOL`].
    pub fn tv_distance(&self, other: &DistTable) -> f64 {
        let mut acc = 0.0;
        let (mut i, mut j) = (0, 0);
        while i < self.atoms.len() || j < other.atoms.len() {
            match (self.atoms.get(i), other.atoms.get(j)) {
                (Some(&(va, pa)), Some(&(vb, pb))) => {
                    if (va - vb).abs() <= VALUE_MERGE_TOL {
                        acc += (pa - pb).abs();
                        i += 1;
                        j += 1;
                    } else if va < vb {
                        acc += pa;
                        i += 1;
                    } else {
                        acc += pb;
                        j += 1;
                    }
                }
                (Some(&(_, pa)), None) => {
                    acc += pa;
                    i += 1;
                }
                (None, Some(&(_, pb))) => {
                    acc += pb;
                    j += 1;
                }
                (None, None) => break,
            }
        }
        acc / 2.0
    }

    /// CSV with columns `value,prob` (shortest round-trip float formatting).
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("value,prob\n");
        for &(v, p) in &self.atoms {
            out.push_str(&format!("{v},{p}\n"));
        }
        out
    }

    /// JSON array of `[value, prob]` pairs.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.atoms).expect("atoms serialize")
    }
}

/// Mean of a multiplicative function as a ratio of generating-function
/// coefficients: `[z^n] exp(Σ d_j f̂(j) z^j/j) / p_n`.
pub fn mean_mult_gf(f: &MultiplicativeSpec, w: &WeightSpec) -> Result<Complex64> {
    let n = f.n();
    if n > w.n_max() {
        return Err(Error::Argument(format!(
            "multiplicative spec n = {n} exceeds weight range {}",
            w.n_max()
        )));
    }
    let q = Series::from_fn(n, |j| {
        if j == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            f.fhat(j) * (w.d_value(j) / j as f64)
        }
    })?;
    let m = q.exp()?;
    Ok(m.coeff(n) / w.p_at(n))
}

/// Brute-force mean over all cycle types: `Σ_t P(t) Π_j f̂(j)^{k_j}`.
/// The independent oracle for [`mean_mult_gf`]; guarded by the partition
/// enumeration ceiling.
pub fn mean_mult_enum(f: &MultiplicativeSpec, w: &WeightSpec) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for t in partitions(f.n())? {
        acc += t.multiplicative_value(f).scale(measure_prob(&t, w)?);
    }
    Ok(acc)
}

/// Exact law of the additive function `h` under the measure, by aggregating
/// cycle-type probabilities.
pub fn additive_dist(h: &AdditiveSpec, w: &WeightSpec) -> Result<DistTable> {
    additive_dist_guarded(h, w, false)
}

pub fn additive_dist_guarded(
    h: &AdditiveSpec,
    w: &WeightSpec,
    override_guard: bool,
) -> Result<DistTable> {
    let mut raw = Vec::new();
    for t in partitions_guarded(h.n(), override_guard)? {
        raw.push((t.additive_value(h), measure_prob(&t, w)?));
    }
    DistTable::from_atoms(raw)
}

/// Exact law of the total cycle count (`ĥ ≡ 1`).
pub fn cycles_distribution(w: &WeightSpec, n: usize) -> Result<DistTable> {
    let h = AdditiveSpec::from_fn(n, |_| 1.0)?;
    additive_dist(&h, w)
}

/// Law of the cycle count under constant weights `d ≡ θ` as a convolution of
/// independent Bernoulli(θ/(θ+k−1)) variables, k = 1..n. Independent of the
/// partition-enumeration route and cheap at large n.
pub fn ewens_cycle_count_law(theta: f64, n: usize) -> Result<DistTable> {
    if theta <= 0.0 || theta.is_nan() || n == 0 {
        return Err(Error::Argument(format!(
            "need theta > 0 and n >= 1, got ({theta}, {n})"
        )));
    }
    // probs[c] = P(count = c); count ranges over 0..=n with P(0) = 0.
    let mut probs = vec![0.0f64; n + 1];
    probs[0] = 1.0;
    for k in 1..=n {
        let q = theta / (theta + (k - 1) as f64);
        for c in (0..k).rev() {
            let moved = probs[c] * q;
            probs[c + 1] += moved;
            probs[c] -= moved;
        }
    }
    DistTable::from_atoms(
        probs
            .into_iter()
            .enumerate()
            .skip(1)
            .map(|(c, p)| (c as f64, p))
            .collect(),
    )
}

/// Draw one cycle type: with `m` elements remaining, the cycle containing
/// the smallest remaining label has length `j` with probability
/// `d_j·p_{m-j}/(m·p_m)` (exactly normalized because `m·p_m = Σ_j d_j p_{m-j}`).
pub fn sample_cycle_type(w: &WeightSpec, n: usize, seed: u64) -> Result<CycleType> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CycleType::from_parts(&sample_sequence_with_rng(w, n, &mut rng)?)
}

/// Draw the cycle lengths in their sequential order (the length of the cycle
/// containing the smallest remaining label comes first).
pub fn sample_cycle_sequence(w: &WeightSpec, n: usize, seed: u64) -> Result<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_sequence_with_rng(w, n, &mut rng)
}

/// Draw `count` cycle types from one seeded stream.
pub fn sample_cycle_types(
    w: &WeightSpec,
    n: usize,
    seed: u64,
    count: usize,
) -> Result<Vec<CycleType>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| CycleType::from_parts(&sample_sequence_with_rng(w, n, &mut rng)?))
        .collect()
}

fn sample_sequence_with_rng(w: &WeightSpec, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    if n > w.n_max() {
        return Err(Error::Argument(format!(
            "n = {n} exceeds weight range {}",
            w.n_max()
        )));
    }
    let mut parts = Vec::new();
    let mut m = n;
    while m > 0 {
        let total = m as f64 * w.p_at(m);
        let target = rng.gen::<f64>() * total;
        let mut acc = 0.0;
        let mut chosen = m;
        for j in 1..=m {
            acc += w.d_value(j) * w.p_at(m - j);
            if acc > target {
                chosen = j;
                break;
            }
        }
        parts.push(chosen);
        m -= chosen;
    }
    Ok(parts)
}

/// Exact-rational mirror of the small-n machinery, used as the oracle layer
/// where float round-off would cloud a fixture.
pub mod exact {
    use std::collections::BTreeMap;

    use num_bigint::BigInt;
    use num_rational::BigRational;

    use super::{partitions, CycleType};
    use crate::error::Result;

    pub fn ratio(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn factorial(n: usize) -> BigInt {
        (2..=n).fold(BigInt::from(1), |acc, i| acc * BigInt::from(i))
    }

    /// Rational weight recurrence `p_n = (1/n) Σ d_k p_{n-k}` for
    /// `d = d_1..d_{n_max}`.
    pub fn weights(d: &[BigRational]) -> Vec<BigRational> {
        let n_max = d.len();
        let mut p = vec![BigRational::from_integer(BigInt::from(0)); n_max + 1];
        p[0] = BigRational::from_integer(BigInt::from(1));
        for n in 1..=n_max {
            let mut acc = BigRational::from_integer(BigInt::from(0));
            for k in 1..=n {
                acc += &d[k - 1] * &p[n - k];
            }
            p[n] = acc / BigRational::from_integer(BigInt::from(n));
        }
        p
    }

    /// Rational cycle-type probability `(1/p_n) Π (d_j/j)^{k_j} / k_j!`.
    pub fn measure_prob(t: &CycleType, d: &[BigRational], p: &[BigRational]) -> BigRational {
        let mut acc = BigRational::from_integer(BigInt::from(1));
        for (&j, &k) in t.multiplicities() {
            let base = &d[j - 1] / BigRational::from_integer(BigInt::from(j));
            for _ in 0..k {
                acc *= &base;
            }
            acc /= BigRational::from_integer(factorial(k));
        }
        if t.n() == 0 {
            acc
        } else {
            acc / &p[t.n()]
        }
    }

    /// Exact law of the additive function with rational values `ĥ(1)..ĥ(n)`.
    pub fn additive_law(
        h: &[BigRational],
        d: &[BigRational],
    ) -> Result<Vec<(BigRational, BigRational)>> {
        let n = h.len();
        let p = weights(d);
        let mut acc: BTreeMap<BigRational, BigRational> = BTreeMap::new();
        for t in partitions(n)? {
            let value: BigRational = t
                .multiplicities()
                .iter()
                .map(|(&j, &k)| &h[j - 1] * BigRational::from_integer(BigInt::from(k)))
                .sum();
            let prob = measure_prob(&t, d, &p);
            *acc.entry(value)
                .or_insert_with(|| BigRational::from_integer(BigInt::from(0))) += prob;
        }
        Ok(acc.into_iter().collect())
    }

    /// Exact mean of a multiplicative function with rational values, by
    /// enumeration.
    pub fn mean_mult(f: &[BigRational], d: &[BigRational]) -> Result<BigRational> {
        let n = f.len();
        let p = weights(d);
        let mut acc = BigRational::from_integer(BigInt::from(0));
        for t in partitions(n)? {
            let mut val = BigRational::from_integer(BigInt::from(1));
            for (&j, &k) in t.multiplicities() {
                for _ in 0..k {
                    val *= &f[j - 1];
                }
            }
            acc += val * measure_prob(&t, d, &p);
        }
        Ok(acc)
    }
}
