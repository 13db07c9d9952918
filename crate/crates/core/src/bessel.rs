//! The generalized normalized Bessel series
//!
//! ```text
//! u(z) = Σ_{n≥0} (−c/4)^n / ((κ)_n n!) z^n,    κ = p + (b + 1)/2
//! ```
//!
//! evaluated by direct summation with a rigorous geometric tail bound.
//! The ratio of consecutive terms is exactly `(−c/4) z / ((κ + n)(n + 1))`,
//! which decreases in modulus once `κ + n > 0`, so `|t_n| / (1 − r_n)`
//! majorizes everything from index `n` onwards.

use std::ops::{Add, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default absolute truncation tolerance for series evaluations.
pub const DEFAULT_EPS: f64 = 1e-14;

/// Hard cap on the number of summed terms.
pub const MAX_TERMS: usize = 10_000;

/// Real parameters `(c, κ)` of the normalized Bessel series.
///
/// `κ` may also be derived from the original `(b, p)` pair, in which case
/// both are kept alongside it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselParams {
    c: f64,
    kappa: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
}

/// `true` when `κ` is not a pole of the Pochhammer denominators.
pub fn is_admissible_kappa(kappa: f64) -> bool {
    kappa.is_finite() && !(kappa <= 0.0 && kappa.fract() == 0.0)
}

impl BesselParams {
    /// Any admissible `κ` (not `0, −1, −2, …`) and finite `c`.
    pub fn new(c: f64, kappa: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::InvalidArgument(format!("c must be finite, got {c}")));
        }
        if !is_admissible_kappa(kappa) {
            return Err(Error::NonAdmissibleKappa(kappa));
        }
        Ok(BesselParams { c, kappa, b: None, p: None })
    }

    /// Parameters in the regime `c < 0`, `κ > 0` assumed by every certifier.
    pub fn theorem_regime(c: f64, kappa: f64) -> Result<Self> {
        let params = Self::new(c, kappa)?;
        params.require_regime()?;
        Ok(params)
    }

    /// Builds the parameters from `(b, p, c)` with `κ = p + (b + 1)/2`.
    pub fn from_bp(b: f64, p: f64, c: f64) -> Result<Self> {
        let kappa = p + (b + 1.0) / 2.0;
        let mut params = Self::new(c, kappa)?;
        params.b = Some(b);
        params.p = Some(p);
        Ok(params)
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn b(&self) -> Option<f64> {
        self.b
    }

    pub fn p(&self) -> Option<f64> {
        self.p
    }

    /// The series base `−c/4`.
    pub fn base(&self) -> f64 {
        -self.c / 4.0
    }

    pub fn is_theorem_regime(&self) -> bool {
        self.c < 0.0 && self.kappa > 0.0
    }

    pub fn require_regime(&self) -> Result<()> {
        if self.is_theorem_regime() {
            Ok(())
        } else {
            Err(Error::RegimeViolation { c: self.c, kappa: self.kappa })
        }
    }

    /// Parameters of `u_{p+k}`: `κ` shifted by `k`, `c` unchanged.
    pub fn shifted(&self, k: u32) -> Result<Self> {
        let kappa = self.kappa + k as f64;
        if !is_admissible_kappa(kappa) {
            return Err(Error::NonAdmissibleKappa(kappa));
        }
        Ok(BesselParams { c: self.c, kappa, b: self.b, p: self.p.map(|p| p + k as f64) })
    }
}

/// A truncated series evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue<T = f64> {
    pub value: T,
    pub terms_used: usize,
    /// Upper bound on `|value − exact|` from truncation.
    pub tail_bound: f64,
}

/// Scalars the series can be summed over.
pub trait SeriesScalar: Copy + Add<Output = Self> + Mul<f64, Output = Self> + Mul<Output = Self> {
    fn zero() -> Self;
    fn modulus(self) -> f64;
}

impl SeriesScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
}

impl SeriesScalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
}

/// Rising factorial `a (a+1) … (a+n−1)` as a running product; `(a)_0 = 1`.
pub fn pochhammer(a: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (a + k as f64))
}

/// Sums `Σ_{n≥start} t_n` where `t_{n+1} = t_n · w / ((κ + n)(n + 1))`.
///
/// Stops before index `n` once `|t_n| ≤ eps/2` and `|t_n| r/(1−r) ≤ eps/2`
/// with `r = |w| / ((κ + n)(n + 1)) < 1` and `κ + n > 0`; the reported
/// tail bound is `|t_n| / (1 − r)`.
fn sum_series<T: SeriesScalar>(kappa: f64, w: T, start: usize, first: T, eps: f64) -> Result<SeriesValue<T>> {
    let w_abs = w.modulus();
    let mut sum = T::zero();
    let mut term = first;
    let mut n = start;
    let mut terms = 0usize;
    loop {
        sum = sum + term;
        terms += 1;
        let denom = (kappa + n as f64) * (n as f64 + 1.0);
        term = term * w * (1.0 / denom);
        n += 1;

        let next_abs = term.modulus();
        let shift = kappa + n as f64;
        if shift > 0.0 {
            let r = w_abs / (shift * (n as f64 + 1.0));
            if r < 1.0 && next_abs <= eps / 2.0 && next_abs * r / (1.0 - r) <= eps / 2.0 {
                return Ok(SeriesValue { value: sum, terms_used: terms, tail_bound: next_abs / (1.0 - r) });
            }
        }
        if terms >= MAX_TERMS {
            return Err(Error::NotConverged { max_terms: MAX_TERMS });
        }
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")))
    }
}

/// `u(1)` with `tail_bound ≤ eps`.
pub fn u_at_one(params: &BesselParams, eps: f64) -> Result<SeriesValue> {
    check_eps(eps)?;
    sum_series(params.kappa, params.base(), 0, 1.0, eps)
}

/// `u(1) − 1`, summed from the `n = 1` term so that no cancellation
/// against the leading 1 occurs.
pub fn u_minus_one_at_one(params: &BesselParams, eps: f64) -> Result<SeriesValue> {
    check_eps(eps)?;
    let first = params.base() / params.kappa;
    sum_series(params.kappa, params.base(), 1, first, eps)
}

/// Scales an evaluation of a shifted series by a constant prefactor,
/// requesting a tighter inner tolerance so the scaled tail stays `≤ eps`.
fn scaled<F>(prefactor: f64, eps: f64, inner: F) -> Result<SeriesValue>
where
    F: FnOnce(f64) -> Result<SeriesValue>,
{
    let inner_eps = if prefactor.abs() > 1.0 { eps / prefactor.abs() } else { eps };
    let v = inner(inner_eps)?;
    Ok(SeriesValue { value: prefactor * v.value, terms_used: v.terms_used, tail_bound: prefactor.abs() * v.tail_bound })
}

/// `u′(1) = ((−c/4)/κ) · u_{p+1}(1)`.
pub fn u_prime_at_one(params: &BesselParams, eps: f64) -> Result<SeriesValue> {
    check_eps(eps)?;
    let next = params.shifted(1)?;
    let prefactor = params.base() / params.kappa;
    scaled(prefactor, eps, |e| u_at_one(&next, e))
}

/// `u″(1) = ((−c/4)² / (κ(κ+1))) · u_{p+2}(1)`.
pub fn u_second_at_one(params: &BesselParams, eps: f64) -> Result<SeriesValue> {
    check_eps(eps)?;
    params.shifted(1)?;
    let next = params.shifted(2)?;
    let q = params.base();
    let prefactor = q * q / (params.kappa * (params.kappa + 1.0));
    scaled(prefactor, eps, |e| u_at_one(&next, e))
}

/// `u(z)` at a general complex point.
pub fn u_at(params: &BesselParams, z: Complex64, eps: f64) -> Result<SeriesValue<Complex64>> {
    check_eps(eps)?;
    sum_series(params.kappa, z * params.base(), 0, Complex64::new(1.0, 0.0), eps)
}

/// `u′(z)` at a general complex point via the index-shift recursion.
pub fn u_prime_at(params: &BesselParams, z: Complex64, eps: f64) -> Result<SeriesValue<Complex64>> {
    check_eps(eps)?;
    let next = params.shifted(1)?;
    let prefactor = params.base() / params.kappa;
    let inner_eps = if prefactor.abs() > 1.0 { eps / prefactor.abs() } else { eps };
    let v = u_at(&next, z, inner_eps)?;
    Ok(SeriesValue { value: v.value * prefactor, terms_used: v.terms_used, tail_bound: prefactor.abs() * v.tail_bound })
}

/// Coefficient of `z^n` in `z·u(z)`: `(−c/4)^{n−1} / ((κ)_{n−1} (n−1)!)`.
pub fn u_coefficient(params: &BesselParams, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("coefficient index must be at least 1".into()));
    }
    Ok(coefficient_run(params, n).last().copied().unwrap_or(1.0))
}

/// Coefficients of `z^1, z^2, …, z^n` in `z·u(z)` as one running product.
pub(crate) fn coefficient_run(params: &BesselParams, n: usize) -> Vec<f64> {
    let q = params.base();
    let mut out = Vec::with_capacity(n);
    let mut a = 1.0;
    out.push(a);
    for k in 0..n.saturating_sub(1) {
        a *= q / ((params.kappa + k as f64) * (k as f64 + 1.0));
        out.push(a);
    }
    out
}
