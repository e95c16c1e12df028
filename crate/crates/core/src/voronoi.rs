//! Voronoi (Nörlund) summation for weight sequences generated by
//! `p(z) = exp(Σ d_k z^k / k)` with `0 < d⁻ ≤ d_k ≤ d⁺`.
//!
//! [`WeightSpec`] owns the data `d_1..d_N`, the derived coefficients
//! `p_0..p_N` and `θ = min{d⁻, 1}`. On top of it sit the Voronoi mean,
//! the transform `S(g;j) = Σ_k a_k·k·p_{j-k}`, and numeric checks for the
//! remainder inequality, the coefficient ratio bounds and the partial-sum
//! lower bound with its explicit floor `K(c)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{required_order, Scalar, Series};

/// Relative slack applied when asserting the exact inequalities; covers float
/// round-off only, never a real margin.
pub const INEQ_SLACK: f64 = 1e-9;

/// Weight sequence data: `d_1..d_{n_max}` with declared bounds, the derived
/// coefficients `p_0..p_{n_max}` of `exp(Σ d_k z^k/k)`, and `θ = min{d⁻, 1}`.
#[derive(Debug, Clone)]
pub struct WeightSpec {
    d: Vec<f64>,
    d_minus: f64,
    d_plus: f64,
    p: Vec<f64>,
    theta: f64,
}

/// Both sides of the remainder inequality at a single `n`.
///
/// `lhs = |V_n − g(e^{-1/n}) − S(g;n)/(n·p_n)|`; the two right-hand sums are
/// `n^{-θ} Σ_{j≤n} |S(g;j)| j^{θ-2}/p_j` and
/// `p(e^{-1/n})^{-1} Σ_{n<j≤tail} |S(g;j)| e^{-j/n}/j`. The bounding constant
/// is existential, so callers assert uniform boundedness of `ratio` over a
/// family rather than a fixed value.
#[derive(Debug, Clone, Serialize)]
pub struct RemainderReport {
    pub n: usize,
    pub voronoi_mean: f64,
    pub g_at_point: f64,
    pub correction: f64,
    pub lhs: f64,
    pub rhs_sum1: f64,
    pub rhs_sum2: f64,
    pub ratio: f64,
}

/// Result of the partial-sum lower-bound check `Σ_{k≤N} b_k ≥ K(c)·b(e^{-1/N})`.
#[derive(Debug, Clone, Serialize)]
pub struct LowerRatioCheck {
    pub ratio: f64,
    pub floor: f64,
    pub pass: bool,
}

/// Result of the two-sided bound check on `p(e^{-1/m})/p(e^{-1/n})`.
#[derive(Debug, Clone, Serialize)]
pub struct RatioBoundsCheck {
    pub ratio: f64,
    pub lower: f64,
    pub upper: f64,
    pub pass: bool,
}

/// Voronoi mean over an explicit weight slice: `(1/p_n) Σ_{k≤n} a_k p_{n-k}`.
///
/// Exposed separately from [`WeightSpec`] so degenerate weight sequences
/// (outside the validated class) can be exercised directly; the cumulative
/// weights of the increment choice `w = (1, 0, 0, …)` are all ones, for which
/// the mean reduces to the plain partial sum.
pub fn voronoi_mean_over<T: Scalar>(p: &[f64], a: &Series<T>, n: usize) -> Result<T> {
    if n > a.order() || n >= p.len() {
        return Err(Error::Argument(format!(
            "voronoi mean at n = {n} exceeds series order {} or weight range {}",
            a.order(),
            p.len().saturating_sub(1)
        )));
    }
    let mut acc = T::zero();
    for k in 0..=n {
        acc = acc + a.coeff(k).scale(p[n - k]);
    }
    Ok(acc.scale(1.0 / p[n]))
}

/// `S(g;j) = Σ_{k=0..j} a_k·k·p_{j-k}` over an explicit weight slice.
pub fn s_transform_over<T: Scalar>(p: &[f64], a: &Series<T>, j: usize) -> Result<T> {
    if j > a.order() || j >= p.len() {
        return Err(Error::Argument(format!(
            "s_transform at j = {j} exceeds series order {} or weight range {}",
            a.order(),
            p.len().saturating_sub(1)
        )));
    }
    let mut acc = T::zero();
    for k in 1..=j {
        acc = acc + a.coeff(k).scale(k as f64 * p[j - k]);
    }
    Ok(acc)
}

impl WeightSpec {
    /// Validate `d_k ∈ [d_minus, d_plus]` and run the recurrence
    /// `p_n = (1/n) Σ_{k=1..n} d_k p_{n-k}`, `p_0 = 1`.
    #[allow(clippy::needless_range_loop)]
    pub fn from_values(d: Vec<f64>, d_minus: f64, d_plus: f64) -> Result<Self> {
        if d_minus <= 0.0 || !d_minus.is_finite() {
            return Err(Error::Domain(format!(
                "d_minus = {d_minus} must be positive"
            )));
        }
        if d_plus < d_minus || !d_plus.is_finite() {
            return Err(Error::Domain(format!(
                "d_plus = {d_plus} must be finite and >= d_minus = {d_minus}"
            )));
        }
        if d.is_empty() {
            return Err(Error::Argument("weight spec needs at least d_1".into()));
        }
        for (i, &dk) in d.iter().enumerate() {
            if !dk.is_finite() || dk < d_minus || dk > d_plus {
                return Err(Error::WeightBounds {
                    index: i + 1,
                    value: dk,
                    lo: d_minus,
                    hi: d_plus,
                });
            }
        }
        let n_max = d.len();
        let mut p = vec![0.0f64; n_max + 1];
        p[0] = 1.0;
        for n in 1..=n_max {
            let mut acc = 0.0;
            for k in 1..=n {
                acc += d[k - 1] * p[n - k];
            }
            p[n] = acc / n as f64;
            if !p[n].is_finite() || p[n] <= 0.0 {
                return Err(Error::NonFinite(format!("weight recurrence at n = {n}")));
            }
        }
        let theta = d_minus.min(1.0);
        Ok(Self {
            d,
            d_minus,
            d_plus,
            p,
            theta,
        })
    }

    /// Constant data `d_k ≡ θ` (the Ewens-type weights).
    pub fn constant(theta: f64, n_max: usize) -> Result<Self> {
        Self::from_values(vec![theta; n_max], theta, theta)
    }

    /// Seeded data drawn uniformly from `[lo, hi]`.
    pub fn random_in(lo: f64, hi: f64, n_max: usize, seed: u64) -> Result<Self> {
        if lo <= 0.0 || hi < lo || lo.is_nan() || hi.is_nan() {
            return Err(Error::Domain(format!("invalid range [{lo}, {hi}]")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = (0..n_max).map(|_| rng.gen_range(lo..=hi)).collect();
        Self::from_values(d, lo, hi)
    }

    pub fn n_max(&self) -> usize {
        self.d.len()
    }

    /// `d_k`, 1-based.
    pub fn d_value(&self, k: usize) -> f64 {
        self.d[k - 1]
    }

    pub fn d_minus(&self) -> f64 {
        self.d_minus
    }

    pub fn d_plus(&self) -> f64 {
        self.d_plus
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Coefficients `p_0..p_{n_max}`.
    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn p_at(&self, n: usize) -> f64 {
        self.p[n]
    }

    /// `p(e^{-1/n})` evaluated from the truncated series, never a closed
    /// form; requires the spec to hold at least [`required_order`]`(n)`
    /// coefficients.
    pub fn eval_p(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::Argument("eval_p needs n >= 1".into()));
        }
        let need = required_order(n);
        if self.n_max() < need {
            return Err(Error::Argument(format!(
                "evaluating p(e^(-1/{n})) needs n_max >= {need}, have {}",
                self.n_max()
            )));
        }
        let x = (-1.0 / n as f64).exp();
        let mut acc = 0.0f64;
        for &c in self.p.iter().rev() {
            acc = acc * x + c;
        }
        if !acc.is_finite() {
            return Err(Error::NonFinite("p evaluation".into()));
        }
        Ok(acc)
    }

    /// The Voronoi mean `V_n = (1/p_n) Σ_{k≤n} a_k p_{n-k}`; `V_0 = a_0`.
    pub fn voronoi_mean<T: Scalar>(&self, a: &Series<T>, n: usize) -> Result<T> {
        voronoi_mean_over(&self.p, a, n)
    }

    /// `S(g;j) = Σ_{k≤j} a_k·k·p_{j-k}`; the empty sum makes `S(g;0) = 0`.
    pub fn s_transform<T: Scalar>(&self, a: &Series<T>, j: usize) -> Result<T> {
        s_transform_over(&self.p, a, j)
    }

    /// `S(g;n)/(n·p_n)` for each requested `n`, so decay toward zero (the
    /// summability condition) can be inspected directly.
    pub fn tauber_trajectory<T: Scalar>(&self, a: &Series<T>, ns: &[usize]) -> Result<Vec<T>> {
        ns.iter()
            .map(|&n| {
                if n == 0 {
                    return Err(Error::Argument("trajectory needs n >= 1".into()));
                }
                let s = self.s_transform(a, n)?;
                Ok(s.scale(1.0 / (n as f64 * self.p[n])))
            })
            .collect()
    }

    /// Evaluate both sides of the remainder inequality at `n`.
    ///
    /// The infinite second sum is truncated at `tail_horizon ≥ 8n`; the
    /// discarded terms decay like `e^{-j/n}`, so the cut tail is below
    /// `e^{-8}` of the last retained block.
    pub fn remainder_report(
        &self,
        a: &Series<f64>,
        n: usize,
        tail_horizon: usize,
    ) -> Result<RemainderReport> {
        if n == 0 {
            return Err(Error::Argument("remainder report needs n >= 1".into()));
        }
        if tail_horizon < 8 * n {
            return Err(Error::Argument(format!(
                "tail horizon {tail_horizon} < 8n = {} would bias the tail sum",
                8 * n
            )));
        }
        if a.order() < tail_horizon {
            return Err(Error::Argument(format!(
                "series order {} < tail horizon {tail_horizon}",
                a.order()
            )));
        }
        if self.n_max() < tail_horizon.max(required_order(n)) {
            return Err(Error::Argument(format!(
                "weight spec n_max {} too small for n = {n}, tail {tail_horizon}",
                self.n_max()
            )));
        }

        let x = (-1.0 / n as f64).exp();
        let v = self.voronoi_mean(a, n)?;
        let g_at_point = a.eval_at(x)?;
        let s_n = self.s_transform(a, n)?;
        let correction = s_n / (n as f64 * self.p[n]);
        let lhs = (v - g_at_point - correction).abs();

        let mut rhs_sum1 = 0.0;
        for j in 1..=n {
            let s_j: f64 = self.s_transform(a, j)?;
            rhs_sum1 += s_j.abs() * (j as f64).powf(self.theta - 2.0) / self.p[j];
        }
        rhs_sum1 *= (n as f64).powf(-self.theta);

        let p_point = self.eval_p(n)?;
        let mut rhs_sum2 = 0.0;
        for j in n + 1..=tail_horizon {
            let s_j: f64 = self.s_transform(a, j)?;
            rhs_sum2 += s_j.abs() * (-(j as f64) / n as f64).exp() / j as f64;
        }
        rhs_sum2 /= p_point;

        let denom = rhs_sum1 + rhs_sum2;
        let ratio = if denom == 0.0 { 0.0 } else { lhs / denom };
        if !ratio.is_finite() {
            return Err(Error::NonFinite(format!("remainder ratio at n = {n}")));
        }
        Ok(RemainderReport {
            n,
            voronoi_mean: v,
            g_at_point,
            correction,
            lhs,
            rhs_sum1,
            rhs_sum2,
            ratio,
        })
    }

    /// Coefficients `q_0..q_N` of `q(z) = 1/p(z)`, so that the convolution of
    /// `p` and `q` is the identity series.
    pub fn reciprocal_coeffs(&self, n: usize) -> Result<Series<f64>> {
        if n > self.n_max() {
            return Err(Error::Argument(format!(
                "reciprocal order {n} exceeds n_max {}",
                self.n_max()
            )));
        }
        let mut q = vec![0.0f64; n + 1];
        q[0] = 1.0; // p_0 = 1
        for m in 1..=n {
            let mut acc = 0.0;
            for k in 1..=m {
                acc += self.p[k] * q[m - k];
            }
            q[m] = -acc;
        }
        Series::from_coeffs(q)
    }

    /// `v_{m,j} = Σ_{s=0..m} p_{m-s} q_s / (s+j)`; `v_{0,j} = 1/j` exactly.
    pub fn v_coeff(&self, m: usize, j: usize) -> Result<f64> {
        if j == 0 {
            return Err(Error::Argument("v coefficient needs j >= 1".into()));
        }
        let q = self.reciprocal_coeffs(m)?;
        let mut acc = 0.0;
        for s in 0..=m {
            acc += self.p[m - s] * q.coeff(s) / (s + j) as f64;
        }
        Ok(acc)
    }

    /// Check `(m/n)^{d⁻} e^{-d⁻/n} ≤ p(e^{-1/m})/p(e^{-1/n}) ≤ (m/n)^{d⁺} e^{d⁺/m}`
    /// for `m ≥ n ≥ 1`, within round-off slack.
    pub fn ratio_bounds_check(&self, m: usize, n: usize) -> Result<RatioBoundsCheck> {
        if m < n || n == 0 {
            return Err(Error::Argument(format!(
                "ratio bounds need m >= n >= 1, got ({m}, {n})"
            )));
        }
        let ratio = self.eval_p(m)? / self.eval_p(n)?;
        let mn = m as f64 / n as f64;
        let lower = mn.powf(self.d_minus) * (-self.d_minus / n as f64).exp();
        let upper = mn.powf(self.d_plus) * (self.d_plus / m as f64).exp();
        let pass = ratio >= lower * (1.0 - INEQ_SLACK) && ratio <= upper * (1.0 + INEQ_SLACK);
        Ok(RatioBoundsCheck {
            ratio,
            lower,
            upper,
            pass,
        })
    }
}

/// Explicit floor `K(c)` for the partial-sum lower bound: `1/2` for
/// `c ≤ 1/2`, otherwise `e^{-1/2} / (2·(2c)^c)`.
pub fn lower_ratio_floor(c: f64) -> f64 {
    if c <= 0.5 {
        0.5
    } else {
        (-0.5f64).exp() / (2.0 * (2.0 * c).powf(c))
    }
}

/// Check `Σ_{k≤N} b_k ≥ K(c)·b(e^{-1/N})` for a series with nonnegative
/// coefficients whose log-derivative satisfies `b'(x)/b(x) ≤ c/(1-x)`.
///
/// The hypothesis is about all of `[0, 1)`; it is verified here on the grid
/// `x ∈ {0.01, …, 0.99}` only, with the truncated polynomial standing in for
/// the series (a nonnegative polynomial is itself an admissible series).
pub fn lower_ratio_check(b: &Series<f64>, c: f64, n: usize) -> Result<LowerRatioCheck> {
    if let Some(k) = b.coeffs().iter().position(|&x| x < 0.0) {
        return Err(Error::NegativeCoefficient(k));
    }
    if b.coeffs().iter().all(|&x| x == 0.0) {
        return Err(Error::Domain("series is identically zero".into()));
    }
    if (n as f64) < 2.0 * c {
        return Err(Error::Argument(format!(
            "need N >= 2c, got N = {n}, c = {c}"
        )));
    }
    if b.order() < n {
        return Err(Error::Argument(format!(
            "series order {} < N = {n}",
            b.order()
        )));
    }

    if b.order() >= 1 {
        let db = b.derivative()?;
        for i in 1..=99u32 {
            let x = i as f64 / 100.0;
            let lhs = db.eval_at(x)?;
            let rhs = c / (1.0 - x) * b.eval_at(x)?;
            if lhs > rhs + INEQ_SLACK * (1.0 + rhs.abs()) {
                return Err(Error::LogDerivativeBound { x, lhs, rhs });
            }
        }
    }

    let partial: f64 = b.coeffs()[..=n].iter().sum();
    let at_point = b.eval_at((-1.0 / n as f64).exp())?;
    let ratio = partial / at_point;
    let floor = lower_ratio_floor(c);
    Ok(LowerRatioCheck {
        ratio,
        floor,
        pass: ratio >= floor * (1.0 - INEQ_SLACK),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constant_one_gives_flat_weights() {
        let w = WeightSpec::constant(1.0, 1000).unwrap();
        for &pn in w.p() {
            assert_relative_eq!(pn, 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn constant_two_gives_linear_weights() {
        let w = WeightSpec::constant(2.0, 10).unwrap();
        for (n, &pn) in w.p().iter().enumerate() {
            assert_relative_eq!(pn, (n + 1) as f64, max_relative = 1e-12);
        }
    }

    #[test]
    fn constant_half_hand_recurrence() {
        let w = WeightSpec::constant(0.5, 4).unwrap();
        assert_eq!(w.p_at(0), 1.0);
        assert_relative_eq!(w.p_at(1), 0.5, max_relative = 1e-15);
        assert_relative_eq!(w.p_at(2), 0.375, max_relative = 1e-15);
    }

    #[test]
    fn bound_violation_names_index() {
        let err = WeightSpec::from_values(vec![1.0, 3.0, 1.0], 0.5, 2.0).unwrap_err();
        match err {
            Error::WeightBounds { index, value, .. } => {
                assert_eq!(index, 2);
                assert_eq!(value, 3.0);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn recurrence_identity_holds() {
        // n·p_n = Σ_{k=1..n} d_k p_{n-k}
        let w = WeightSpec::random_in(0.5, 2.5, 200, 7).unwrap();
        for n in 1..=200usize {
            let sum: f64 = (1..=n).map(|k| w.d_value(k) * w.p_at(n - k)).sum();
            assert_relative_eq!(n as f64 * w.p_at(n), sum, max_relative = 1e-12);
        }
    }

    #[test]
    fn voronoi_mean_of_delta_is_constant() {
        let w = WeightSpec::random_in(0.5, 2.5, 50, 3).unwrap();
        let a = Series::from_fn(50, |k| if k == 0 { 1.0 } else { 0.0 }).unwrap();
        for n in [0usize, 1, 7, 50] {
            assert_relative_eq!(w.voronoi_mean(&a, n).unwrap(), 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn cesaro_alternating_fixtures() {
        let w = WeightSpec::constant(2.0, 10).unwrap();
        let a = Series::from_fn(10, |k| if k % 2 == 0 { 1.0 } else { -1.0 }).unwrap();
        assert_relative_eq!(w.voronoi_mean(&a, 3).unwrap(), 0.5, max_relative = 1e-14);
        assert_relative_eq!(
            w.voronoi_mean(&a, 2).unwrap(),
            2.0 / 3.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn s_transform_fixtures() {
        let w1 = WeightSpec::constant(1.0, 20).unwrap();
        let constant = Series::constant(3.0, 20).unwrap();
        for j in 0..=20 {
            assert_eq!(w1.s_transform(&constant, j).unwrap(), 0.0);
        }
        let z = Series::from_fn(20, |k| if k == 1 { 1.0 } else { 0.0 }).unwrap();
        for j in 1..=20 {
            assert_relative_eq!(w1.s_transform(&z, j).unwrap(), 1.0, max_relative = 1e-15);
        }
        let w2 = WeightSpec::constant(2.0, 20).unwrap();
        let alt = Series::from_fn(20, |k| if k % 2 == 0 { 1.0 } else { -1.0 }).unwrap();
        assert_relative_eq!(w2.s_transform(&alt, 2).unwrap(), 0.0, epsilon = 1e-14);
        assert_relative_eq!(w2.s_transform(&alt, 3).unwrap(), -2.0, max_relative = 1e-14);
    }

    #[test]
    fn trajectory_flags_divergent_series() {
        // a_k ≡ 1 with d ≡ 1: S(g;n) = n(n+1)/2, p_n = 1, so S/(n·p_n) =
        // (n+1)/2, which does not decay: summability fails.
        let w = WeightSpec::constant(1.0, 100).unwrap();
        let a = Series::from_fn(100, |_| 1.0).unwrap();
        let traj = w.tauber_trajectory(&a, &[10, 50, 100]).unwrap();
        assert_relative_eq!(traj[0], 5.5, max_relative = 1e-13);
        assert_relative_eq!(traj[1], 25.5, max_relative = 1e-13);
        assert_relative_eq!(traj[2], 50.5, max_relative = 1e-13);
    }

    #[test]
    fn trajectory_constant_is_zero() {
        let w = WeightSpec::constant(2.0, 30).unwrap();
        let a = Series::constant(4.0, 30).unwrap();
        for v in w.tauber_trajectory(&a, &[1, 5, 30]).unwrap() {
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn trajectory_alternating_decays() {
        let w = WeightSpec::constant(2.0, 1001).unwrap();
        let a = Series::from_fn(1001, |k| if k % 2 == 0 { 1.0 } else { -1.0 }).unwrap();
        // Closed form: S(g;n) = 0 for even n and -(n+1)/2 for odd n, so the
        // trajectory at odd n is exactly -1/(2n).
        let traj = w.tauber_trajectory(&a, &[10, 11, 101, 1001]).unwrap();
        assert!(traj[0].abs() < 1e-12, "{traj:?}");
        for (v, n) in traj[1..].iter().zip([11.0f64, 101.0, 1001.0]) {
            assert_relative_eq!(v, &(-1.0 / (2.0 * n)), max_relative = 1e-12);
        }
        let abs: Vec<f64> = traj[1..].iter().map(|v| v.abs()).collect();
        assert!(abs[0] > abs[1] && abs[1] > abs[2]);
    }

    #[test]
    fn remainder_report_constant_series_is_exact() {
        let w = WeightSpec::constant(1.0, required_order(4)).unwrap();
        let a = Series::constant(2.5, 64).unwrap();
        let r = w.remainder_report(&a, 4, 64).unwrap();
        assert!(r.lhs < 1e-12);
        assert_eq!(r.ratio, 0.0);
    }

    #[test]
    fn remainder_report_tail_guard() {
        let w = WeightSpec::constant(1.0, required_order(4)).unwrap();
        let a = Series::constant(1.0, 64).unwrap();
        assert!(matches!(
            w.remainder_report(&a, 4, 31),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn reciprocal_of_flat_weights() {
        let w = WeightSpec::constant(1.0, 10).unwrap();
        let q = w.reciprocal_coeffs(5).unwrap();
        assert_relative_eq!(q.coeff(0), 1.0, max_relative = 1e-15);
        assert_relative_eq!(q.coeff(1), -1.0, max_relative = 1e-15);
        for k in 2..=5 {
            assert!(q.coeff(k).abs() < 1e-14);
        }
    }

    #[test]
    fn reciprocal_of_linear_weights() {
        let w = WeightSpec::constant(2.0, 10).unwrap();
        let q = w.reciprocal_coeffs(6).unwrap();
        let want = [1.0, -2.0, 1.0, 0.0, 0.0, 0.0, 0.0];
        for (k, &v) in want.iter().enumerate() {
            assert_relative_eq!(q.coeff(k), v, epsilon = 1e-13);
        }
    }

    #[test]
    fn reciprocal_convolution_identity_random() {
        let w = WeightSpec::random_in(0.5, 2.5, 64, 11).unwrap();
        let q = w.reciprocal_coeffs(64).unwrap();
        let p = Series::from_coeffs(w.p().to_vec()).unwrap();
        let prod = p.mul(&q).unwrap();
        assert_relative_eq!(prod.coeff(0), 1.0, max_relative = 1e-12);
        for k in 1..=64 {
            assert!(prod.coeff(k).abs() < 1e-9, "k = {k}: {}", prod.coeff(k));
        }
    }

    #[test]
    fn v_coeff_fixtures() {
        let w = WeightSpec::random_in(0.5, 2.5, 40, 5).unwrap();
        for j in [1usize, 3, 10, 31] {
            assert_relative_eq!(
                w.v_coeff(0, j).unwrap(),
                1.0 / j as f64,
                max_relative = 1e-13
            );
        }
        let flat = WeightSpec::constant(1.0, 40).unwrap();
        for m in [1usize, 2, 9] {
            for j in [1usize, 4, 12] {
                let want = 1.0 / (j as f64 * (j + 1) as f64);
                assert_relative_eq!(flat.v_coeff(m, j).unwrap(), want, max_relative = 1e-12);
            }
        }
        assert!(matches!(w.v_coeff(3, 0), Err(Error::Argument(_))));
        // nonnegativity at m = j = 5
        assert!(w.v_coeff(5, 5).unwrap() >= -1e-12);
    }

    #[test]
    fn eval_p_matches_closed_forms() {
        // d ≡ 1: p(x) = 1/(1-x); d ≡ 2: p(x) = (1-x)^{-2}. The truncated
        // evaluation must sit within the documented tail tolerance.
        for n in [5usize, 50] {
            let x = (-1.0 / n as f64).exp();
            let w1 = WeightSpec::constant(1.0, required_order(n)).unwrap();
            assert_relative_eq!(w1.eval_p(n).unwrap(), 1.0 / (1.0 - x), max_relative = 1e-6);
            let w2 = WeightSpec::constant(2.0, required_order(n)).unwrap();
            let want = 1.0 / ((1.0 - x) * (1.0 - x));
            assert_relative_eq!(w2.eval_p(n).unwrap(), want, max_relative = 1e-6);
        }
        let w = WeightSpec::constant(1.0, 10).unwrap();
        assert!(matches!(w.eval_p(5), Err(Error::Argument(_))));
    }

    #[test]
    fn ratio_bounds_at_equal_points() {
        let w = WeightSpec::random_in(0.5, 2.5, required_order(20), 9).unwrap();
        let r = w.ratio_bounds_check(20, 20).unwrap();
        assert_relative_eq!(r.ratio, 1.0, max_relative = 1e-14);
        assert!(r.pass);
        assert!(r.lower <= 1.0 && 1.0 <= r.upper);
    }

    #[test]
    fn ratio_bounds_random_pair() {
        let w = WeightSpec::random_in(0.5, 2.5, required_order(400), 13).unwrap();
        assert!(w.ratio_bounds_check(400, 17).unwrap().pass);
        assert!(matches!(
            w.ratio_bounds_check(3, 9),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn lower_ratio_geometric() {
        // b = 1/(1-z), c = 1, N = 100: ratio ≈ 1.004 over floor e^{-1/2}/4.
        let b = Series::from_fn(2000, |_| 1.0).unwrap();
        let r = lower_ratio_check(&b, 1.0, 100).unwrap();
        assert!(r.pass);
        assert_relative_eq!(
            r.ratio,
            101.0 * (1.0 - (-0.01f64).exp()),
            max_relative = 1e-6
        );
        assert_relative_eq!(r.floor, (-0.5f64).exp() / 4.0, max_relative = 1e-15);
    }

    #[test]
    fn lower_ratio_constant_series() {
        let b = Series::from_fn(300, |k| if k == 0 { 1.0 } else { 0.0 }).unwrap();
        let r = lower_ratio_check(&b, 0.1, 10).unwrap();
        assert!(r.pass);
        assert_relative_eq!(r.ratio, 1.0, max_relative = 1e-15);
        assert_eq!(r.floor, 0.5);
    }

    #[test]
    fn lower_ratio_quadratic_pole() {
        // b = (1-z)^{-2}, c = 2, N = 50.
        let b = Series::from_fn(1200, |k| (k + 1) as f64).unwrap();
        let r = lower_ratio_check(&b, 2.0, 50).unwrap();
        assert!(r.pass);
        assert_relative_eq!(r.floor, (-0.5f64).exp() / 32.0, max_relative = 1e-15);
    }

    #[test]
    fn lower_ratio_rejects_bad_inputs() {
        let neg = Series::from_coeffs(vec![1.0, -0.5, 0.0]).unwrap();
        assert!(matches!(
            lower_ratio_check(&neg, 1.0, 2),
            Err(Error::NegativeCoefficient(1))
        ));
        // Log-derivative hypothesis fails for a series growing faster than
        // any (1-x)^{-c} allows at the tested c.
        let steep = Series::from_fn(400, |k| ((k as f64) * 0.5).exp()).unwrap();
        assert!(matches!(
            lower_ratio_check(&steep, 0.2, 40),
            Err(Error::LogDerivativeBound { .. })
        ));
    }

    #[test]
    fn degenerate_weight_sequence_gives_partial_sums() {
        // Cumulative weights of w = (1, 0, 0, …) are all ones: the mean must
        // be the plain partial sum.
        let p = vec![1.0; 21];
        let a = Series::from_fn(20, |k| (k as f64 * 0.37).sin()).unwrap();
        for n in [0usize, 3, 20] {
            let partial: f64 = (0..=n).map(|k| a.coeff(k)).sum();
            assert_relative_eq!(
                voronoi_mean_over(&p, &a, n).unwrap(),
                partial,
                max_relative = 1e-13
            );
        }
    }
}
