//! Truncated power-series arithmetic.
//!
//! A [`Series`] holds the coefficients of a polynomial of fixed order used as
//! a truncation of a power series. All generating-function work in the crate
//! runs through this type: products are plain Cauchy convolutions, `exp`/`log`
//! use the standard coefficient recurrences, and evaluation is Horner on
//! `[0, 1)`.
//!
//! Convolutions are deliberately naive O(N²); the crate targets desk-scale
//! orders (up to ~10⁵) where this completes in seconds and keeps results
//! bit-reproducible.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficient field for [`Series`]: implemented for `f64` and [`Complex64`].
pub trait Scalar:
    Copy
    + PartialEq
    + std::fmt::Debug
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::Neg<Output = Self>
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(x: f64) -> Self;
    /// Multiply by a real factor.
    fn scale(self, k: f64) -> Self;
    /// Modulus.
    fn norm(self) -> f64;
    fn is_finite_scalar(self) -> bool;
    fn exp(self) -> Self;
    /// Principal logarithm; `None` outside the domain (`<= 0` for reals, `0`
    /// for complex values).
    fn ln(self) -> Option<Self>;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn norm(self) -> f64 {
        self.abs()
    }
    fn is_finite_scalar(self) -> bool {
        self.is_finite()
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Option<Self> {
        if self > 0.0 {
            Some(f64::ln(self))
        } else {
            None
        }
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn norm(self) -> f64 {
        Complex64::norm(self)
    }
    fn is_finite_scalar(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn exp(self) -> Self {
        Complex64::exp(self)
    }
    fn ln(self) -> Option<Self> {
        if self == Complex64::new(0.0, 0.0) {
            None
        } else {
            Some(Complex64::ln(self))
        }
    }
}

/// Truncated power series: `coeffs[k]` is the coefficient of `z^k`, with
/// exactly `order + 1` entries, all finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Series<T: Scalar> {
    coeffs: Vec<T>,
}

/// Truncation order that makes evaluation at `e^{-1/n}` safe: the discarded
/// tail decays like `e^{-k/n}`, so `max(20n, n + 200)` terms push it far below
/// test tolerances for bounded-coefficient series.
pub fn required_order(n: usize) -> usize {
    (20 * n).max(n + 200)
}

/// Compensated accumulator; the `exp`/`log` recurrences subtract nearly
/// equal large sums, where plain summation loses n·eps of accuracy.
struct Kahan<T: Scalar> {
    sum: T,
    comp: T,
}

impl<T: Scalar> Kahan<T> {
    fn new() -> Self {
        Self {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    fn add(&mut self, term: T) {
        let y = term - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> T {
        self.sum
    }
}

impl<T: Scalar> Series<T> {
    pub fn from_coeffs(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Argument(
                "series needs at least one coefficient".into(),
            ));
        }
        if let Some(k) = coeffs.iter().position(|c| !c.is_finite_scalar()) {
            return Err(Error::NonFinite(format!("series coefficient {k}")));
        }
        Ok(Self { coeffs })
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> T) -> Result<Self> {
        Self::from_coeffs((0..=order).map(f).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![T::zero(); order + 1],
        }
    }

    /// The constant series `c + 0·z + …` of the given order.
    pub fn constant(c: T, order: usize) -> Result<Self> {
        let mut coeffs = vec![T::zero(); order + 1];
        coeffs[0] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `z^k`; panics if `k > order`.
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs[k]
    }

    fn check_finite(coeffs: Vec<T>, op: &str) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite_scalar()) {
            return Err(Error::NonFinite(format!("series {op}")));
        }
        Ok(Self { coeffs })
    }

    /// Entrywise sum; both operands must share the same order.
    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.order() != rhs.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: rhs.order(),
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(&a, &b)| a + b)
            .collect();
        Self::check_finite(coeffs, "add")
    }

    /// Cauchy product truncated to the common order.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.order() != rhs.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: rhs.order(),
            });
        }
        let n = self.order();
        let mut coeffs = vec![T::zero(); n + 1];
        for (k, &a) in self.coeffs.iter().enumerate() {
            if a == T::zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs[..=n - k].iter().enumerate() {
                coeffs[k + j] = coeffs[k + j] + a * b;
            }
        }
        Self::check_finite(coeffs, "mul")
    }

    /// Truncated Taylor expansion of `exp(Q(z))` via the coefficient
    /// recurrence `P_n = (1/n) Σ_{k=1..n} k·Q_k·P_{n-k}`, `P_0 = exp(Q_0)`.
    #[allow(clippy::needless_range_loop)]
    pub fn exp(&self) -> Result<Self> {
        let n = self.order();
        let mut out = vec![T::zero(); n + 1];
        out[0] = Scalar::exp(self.coeffs[0]);
        for m in 1..=n {
            let mut acc = Kahan::new();
            for k in 1..=m {
                acc.add(self.coeffs[k].scale(k as f64) * out[m - k]);
            }
            out[m] = acc.value().scale(1.0 / m as f64);
        }
        Self::check_finite(out, "exp")
    }

    /// Inverse of [`Series::exp`]: the reversed recurrence
    /// `Q_n = (n·P_n − Σ_{k=1..n-1} k·Q_k·P_{n-k}) / (n·P_0)`.
    #[allow(clippy::needless_range_loop)]
    pub fn log(&self) -> Result<Self> {
        let p0 = self.coeffs[0];
        let q0 = Scalar::ln(p0).ok_or_else(|| {
            Error::Domain(format!("log of series with leading coefficient {p0:?}"))
        })?;
        let n = self.order();
        let mut out = vec![T::zero(); n + 1];
        out[0] = q0;
        for m in 1..=n {
            let mut acc = Kahan::new();
            acc.add(self.coeffs[m].scale(m as f64));
            for k in 1..m {
                acc.add(-(out[k].scale(k as f64) * self.coeffs[m - k]));
            }
            out[m] = (acc.value() / p0).scale(1.0 / m as f64);
        }
        Self::check_finite(out, "log")
    }

    /// Formal derivative. Reduces the order by one and never pads.
    pub fn derivative(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::Argument("derivative of an order-0 series".into()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c.scale(k as f64))
            .collect();
        Self::check_finite(coeffs, "derivative")
    }

    /// Horner evaluation of the truncated polynomial at a real `x ∈ [0, 1)`.
    ///
    /// The caller is responsible for a truncation order that makes the
    /// discarded tail negligible; see [`required_order`].
    pub fn eval_at(&self, x: f64) -> Result<T> {
        if !(0.0..1.0).contains(&x) {
            return Err(Error::Domain(format!(
                "evaluation point {x} outside [0, 1)"
            )));
        }
        let mut acc = T::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc.scale(x) + c;
        }
        if !acc.is_finite_scalar() {
            return Err(Error::NonFinite("series evaluation".into()));
        }
        Ok(acc)
    }
}

impl Series<f64> {
    /// Lift a real series into the complex field.
    pub fn to_complex(&self) -> Series<Complex64> {
        Series {
            coeffs: self
                .coeffs
                .iter()
                .map(|&c| Complex64::new(c, 0.0))
                .collect(),
        }
    }
}
