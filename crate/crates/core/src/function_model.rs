//! Normalized analytic functions `f(z) = z + Σ_{n≥2} a_n z^n` stored as
//! truncated coefficient sequences, and the Bessel-derived constructions.

use std::fmt::Debug;
use std::ops::{Add, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bessel::{coefficient_run, BesselParams};
use crate::error::{Error, Result};

/// Default truncation order for constructed functions.
pub const DEFAULT_ORDER: usize = 64;

/// Coefficient scalars: real for the Bessel constructions, complex for the
/// `R^τ(A, B)` extremal functions.
pub trait Coefficient:
    Copy + Debug + PartialEq + Add<Output = Self> + Mul<f64, Output = Self> + Mul<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn modulus(self) -> f64;
    fn to_complex(self) -> Complex64;
    fn is_finite(self) -> bool;
    /// Usable as a stored T-class magnitude (real and non-negative).
    fn is_magnitude(self) -> bool;
}

impl Coefficient for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn is_magnitude(self) -> bool {
        self >= 0.0
    }
}

impl Coefficient for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn to_complex(self) -> Complex64 {
        self
    }
    fn is_finite(self) -> bool {
        Complex64::is_finite(self)
    }
    fn is_magnitude(self) -> bool {
        self.im == 0.0 && self.re >= 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SignClass {
    /// `z + Σ a_n z^n`
    General,
    /// `z − Σ |a_n| z^n`; the stored values are the magnitudes.
    T,
}

/// A truncated normalized function. `coeffs[0]` is `a_2`; `a_1 = 1` is
/// implicit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "RawCoeffFunction<T>",
    bound(deserialize = "T: Coefficient + Deserialize<'de>", serialize = "T: Serialize")
)]
pub struct CoeffFunction<T = f64> {
    sign_class: SignClass,
    coeffs: Vec<T>,
}

#[derive(Deserialize)]
struct RawCoeffFunction<T> {
    sign_class: SignClass,
    coeffs: Vec<T>,
}

impl<T: Coefficient> TryFrom<RawCoeffFunction<T>> for CoeffFunction<T> {
    type Error = Error;

    fn try_from(raw: RawCoeffFunction<T>) -> Result<Self> {
        CoeffFunction::with_class(raw.sign_class, raw.coeffs)
    }
}

impl<T: Coefficient> CoeffFunction<T> {
    /// The identity `f(z) = z`.
    pub fn identity() -> Self {
        CoeffFunction { sign_class: SignClass::General, coeffs: Vec::new() }
    }

    /// `z + Σ a_n z^n` from `[a_2, a_3, …]`.
    pub fn general(coeffs: Vec<T>) -> Result<Self> {
        Self::with_class(SignClass::General, coeffs)
    }

    /// `z − Σ |a_n| z^n` from the magnitudes `[|a_2|, |a_3|, …]`.
    pub fn t_class(magnitudes: Vec<T>) -> Result<Self> {
        Self::with_class(SignClass::T, magnitudes)
    }

    pub fn with_class(sign_class: SignClass, coeffs: Vec<T>) -> Result<Self> {
        for (i, a) in coeffs.iter().enumerate() {
            if !a.is_finite() {
                return Err(Error::InvalidArgument(format!("coefficient a_{} is not finite", i + 2)));
            }
            if sign_class == SignClass::T && !a.is_magnitude() {
                return Err(Error::SignViolation { index: i + 2, value: a.to_complex().re });
            }
        }
        Ok(CoeffFunction { sign_class, coeffs })
    }

    pub fn sign_class(&self) -> SignClass {
        self.sign_class
    }

    /// Truncation order `N`: the highest stored power.
    pub fn order(&self) -> usize {
        self.coeffs.len() + 1
    }

    /// Stored values `[a_2, …, a_N]` (magnitudes for T-class).
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Stored value of `a_n`; `a_1 = 1`, zero beyond the order.
    pub fn stored(&self, n: usize) -> T {
        match n {
            0 => T::zero(),
            1 => T::one(),
            _ => self.coeffs.get(n - 2).copied().unwrap_or_else(T::zero),
        }
    }

    /// Signed `a_n` as it appears in the power series (`n ≥ 2`).
    pub fn signed(&self, n: usize) -> T {
        let a = self.stored(n);
        match self.sign_class {
            SignClass::General => a,
            SignClass::T => a * -1.0,
        }
    }

    /// `|a_n|` for `n ≥ 2`.
    pub fn magnitude(&self, n: usize) -> f64 {
        self.stored(n).modulus()
    }

    /// `(n, |a_n|)` for `n = 2..=N`.
    pub fn magnitudes(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.coeffs.iter().enumerate().map(|(i, a)| (i + 2, a.modulus()))
    }

    /// `(f(z), f′(z))` by Horner's rule.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let sign = match self.sign_class {
            SignClass::General => 1.0,
            SignClass::T => -1.0,
        };
        // f(z) = z (1 + Σ s a_n z^{n−1}),  f′(z) = 1 + Σ s n a_n z^{n−1}
        let mut inner = Complex64::new(0.0, 0.0);
        let mut dinner = Complex64::new(0.0, 0.0);
        for (i, a) in self.coeffs.iter().enumerate().rev() {
            let n = (i + 2) as f64;
            let a = a.to_complex() * sign;
            inner = (inner + a) * z;
            dinner = (dinner + a * n) * z;
        }
        (z * (inner + 1.0), dinner + 1.0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_with_derivative(z).0
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        self.eval_with_derivative(z).1
    }
}

/// `z f′(z)`: coefficient `n` is multiplied by `n`; sign class preserved.
pub fn zfprime<T: Coefficient>(f: &CoeffFunction<T>) -> CoeffFunction<T> {
    CoeffFunction {
        sign_class: f.sign_class,
        coeffs: f.coeffs.iter().enumerate().map(|(i, &a)| a * (i + 2) as f64).collect(),
    }
}

/// `z·u(z)` truncated at order `order`.
pub fn make_z_up(params: &BesselParams, order: usize) -> Result<CoeffFunction> {
    check_order(order)?;
    let run = coefficient_run(params, order);
    CoeffFunction::general(run[1..].to_vec())
}

/// `z(2 − u(z)) = z − Σ a_n z^n` with the same magnitudes as `z·u(z)`.
pub fn make_z_two_minus_up(params: &BesselParams, order: usize) -> Result<CoeffFunction> {
    check_order(order)?;
    let run = coefficient_run(params, order);
    CoeffFunction::t_class(run[1..].to_vec())
}

/// The Hadamard operator `I(κ, c) f = z·u(z) ∗ f(z)`.
pub fn hadamard_i<T: Coefficient>(params: &BesselParams, f: &CoeffFunction<T>) -> Result<CoeffFunction<T>> {
    let run = coefficient_run(params, f.order());
    let coeffs = f.coeffs.iter().zip(&run[1..]).map(|(&a, &u)| a * u).collect();
    CoeffFunction::with_class(f.sign_class, coeffs)
}

/// `G(κ, c, z) = ∫₀^z (2 − u(t)) dt = z − Σ a_n/n z^n`.
pub fn integral_g_coeffs(params: &BesselParams, order: usize) -> Result<CoeffFunction> {
    check_order(order)?;
    let run = coefficient_run(params, order);
    let coeffs = run.iter().enumerate().skip(1).map(|(i, &a)| a / (i + 1) as f64).collect();
    CoeffFunction::t_class(coeffs)
}

fn check_order(order: usize) -> Result<()> {
    if order == 0 {
        Err(Error::InvalidArgument("truncation order must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Parameters `(A, B, τ)` of the class `R^τ(A, B)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RtauParams {
    a: f64,
    b: f64,
    tau: Complex64,
}

impl RtauParams {
    /// Requires `−1 ≤ B < A ≤ 1` and `τ ≠ 0`.
    pub fn new(a: f64, b: f64, tau: Complex64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && tau.is_finite()) {
            return Err(Error::InvalidRtauParams("parameters must be finite".into()));
        }
        if !(-1.0 <= b && b < a && a <= 1.0) {
            return Err(Error::InvalidRtauParams(format!("need -1 <= B < A <= 1, got A = {a}, B = {b}")));
        }
        if tau.norm() == 0.0 {
            return Err(Error::InvalidRtauParams("tau must be nonzero".into()));
        }
        Ok(RtauParams { a, b, tau })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    /// `(A − B)|τ|`
    pub fn scale(&self) -> f64 {
        (self.a - self.b) * self.tau.norm()
    }
}

/// Coefficient bound `|a_n| ≤ (A − B)|τ|/n` for `f ∈ R^τ(A, B)`, `n ≥ 2`.
pub fn rtau_coeff_bound(n: usize, r: &RtauParams) -> f64 {
    r.scale() / n as f64
}

/// Coefficients of `∫₀^z (1 + (A − B)τ t^{n−1} / (1 + B t^{n−1})) dt`,
/// the function attaining the bound at index `n`. The geometric
/// expansion puts `(A − B)τ(−B)^m / k` at `k = (m+1)(n−1) + 1`.
pub fn rtau_extremal_coeffs(n: usize, r: &RtauParams, order: usize) -> Result<CoeffFunction<Complex64>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("extremal index must be at least 2, got {n}")));
    }
    check_order(order)?;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order - 1];
    let lead = r.tau * (r.a - r.b);
    let mut power = 1.0;
    let mut m = 0usize;
    loop {
        let k = (m + 1) * (n - 1) + 1;
        if k > order {
            break;
        }
        coeffs[k - 2] = lead * power / k as f64;
        power *= -r.b;
        m += 1;
    }
    CoeffFunction::general(coeffs)
}

/// Smallest truncation order at which the dropped part of the extremal
/// function, `Σ_{m≥M} |B|^m`, is at most `tail_tol`. Fails for `|B| = 1`,
/// where the expansion does not converge on the closed disk.
pub fn rtau_extremal_order(n: usize, r: &RtauParams, tail_tol: f64) -> Result<usize> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("extremal index must be at least 2, got {n}")));
    }
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Error::InvalidArgument(format!("tail tolerance must lie in (0, 1), got {tail_tol}")));
    }
    let b = r.b.abs();
    if b >= 1.0 {
        return Err(Error::InvalidArgument("extremal expansion diverges on |z| = 1 when |B| = 1".into()));
    }
    let kept = if b == 0.0 { 1 } else { ((tail_tol * (1.0 - b)).ln() / b.ln()).ceil().max(1.0) as usize };
    Ok(kept * (n - 1) + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::u_coefficient;
    use proptest::prelude::*;

    fn bp(c: f64, kappa: f64) -> BesselParams {
        BesselParams::new(c, kappa).unwrap()
    }

    #[test]
    fn z_up_examples() {
        let f = make_z_up(&bp(0.0, 1.0), 5).unwrap();
        assert_eq!(f.coeffs(), &[0.0; 4]);
        assert_eq!(f.order(), 5);

        let f = make_z_up(&bp(-4.0, 1.0), 3).unwrap();
        assert_eq!(f.coeffs(), &[1.0, 0.25]);

        let f = make_z_up(&bp(-2.0, 2.0), 4).unwrap();
        assert!((f.stored(2) - 0.25).abs() < 1e-17);
        assert!((f.stored(3) - 0.25 / 12.0).abs() < 1e-17);
        assert!((f.stored(4) - 0.125 / (2.0 * 3.0 * 4.0 * 6.0)).abs() < 1e-17);
    }

    #[test]
    fn z_two_minus_up_examples() {
        let f = make_z_two_minus_up(&bp(0.0, 1.0), 5).unwrap();
        assert_eq!(f.sign_class(), SignClass::T);
        assert_eq!(f.eval(Complex64::new(0.5, 0.0)), Complex64::new(0.5, 0.0));

        let f = make_z_two_minus_up(&bp(-4.0, 1.0), 3).unwrap();
        assert_eq!(f.signed(2), -1.0);
        assert_eq!(f.signed(3), -0.25);
        let z = Complex64::new(0.3, 0.2);
        let expected = z - z * z - z * z * z * 0.25;
        assert!((f.eval(z) - expected).norm() < 1e-16);

        let up = make_z_up(&bp(-1.3, 0.7), 20).unwrap();
        let tm = make_z_two_minus_up(&bp(-1.3, 0.7), 20).unwrap();
        assert_eq!(up.coeffs(), tm.coeffs());

        assert!(matches!(make_z_two_minus_up(&bp(1.0, 1.0), 4), Err(Error::SignViolation { index: 2, .. })));
    }

    #[test]
    fn hadamard_examples() {
        let id = CoeffFunction::<f64>::general(vec![0.0; 9]).unwrap();
        assert_eq!(hadamard_i(&bp(-3.0, 1.2), &id).unwrap(), id);

        let f = CoeffFunction::general(vec![1.0]).unwrap();
        assert_eq!(hadamard_i(&bp(-4.0, 1.0), &f).unwrap().coeffs(), &[1.0]);

        let f = CoeffFunction::general(vec![0.0, 0.3]).unwrap();
        let g = hadamard_i(&bp(-2.0, 2.0), &f).unwrap();
        assert!((g.stored(3) - 0.00625).abs() < 1e-17);

        let t = CoeffFunction::t_class(vec![0.5, 0.5]).unwrap();
        assert_eq!(hadamard_i(&bp(-2.0, 2.0), &t).unwrap().sign_class(), SignClass::T);
    }

    #[test]
    fn integral_g_examples() {
        let g = integral_g_coeffs(&bp(-4.0, 1.0), 2).unwrap();
        assert_eq!(g.coeffs(), &[0.5]);
        assert_eq!(g.sign_class(), SignClass::T);
        let g = integral_g_coeffs(&bp(0.0, 2.0), 6).unwrap();
        assert!(g.coeffs().iter().all(|&a| a == 0.0));
    }

    #[test]
    fn zfprime_examples() {
        let id = CoeffFunction::<f64>::identity();
        assert_eq!(zfprime(&id), id);
        let f = CoeffFunction::general(vec![1.0]).unwrap();
        assert_eq!(zfprime(&f).coeffs(), &[2.0]);
        let f = CoeffFunction::t_class(vec![0.0, 0.25]).unwrap();
        let g = zfprime(&f);
        assert_eq!(g.coeffs(), &[0.0, 0.75]);
        assert_eq!(g.sign_class(), SignClass::T);
    }

    #[test]
    fn rtau_bound_examples() {
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(rtau_coeff_bound(2, &RtauParams::new(1.0, 0.0, one).unwrap()), 0.5);
        assert_eq!(rtau_coeff_bound(5, &RtauParams::new(1.0, -1.0, one).unwrap()), 0.4);
        let r = RtauParams::new(0.5, 0.0, Complex64::new(0.0, 2.0)).unwrap();
        assert!((rtau_coeff_bound(3, &r) - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn rtau_params_validation() {
        let one = Complex64::new(1.0, 0.0);
        assert!(RtauParams::new(0.5, 0.5, one).is_err());
        assert!(RtauParams::new(1.5, 0.0, one).is_err());
        assert!(RtauParams::new(0.5, -1.5, one).is_err());
        assert!(RtauParams::new(0.5, 0.0, Complex64::new(0.0, 0.0)).is_err());
        assert!(RtauParams::new(1.0, -1.0, one).is_ok());
    }

    /// f(z) = ∫₀^z g(t) dt by composite Simpson along the segment [0, z].
    fn integrate_segment(g: impl Fn(Complex64) -> Complex64, z: Complex64) -> Complex64 {
        let m = 2000;
        let h = 1.0 / m as f64;
        let mut s = g(Complex64::new(0.0, 0.0)) + g(z);
        for j in 1..m {
            let w = if j % 2 == 1 { 4.0 } else { 2.0 };
            s += g(z * (j as f64 * h)) * w;
        }
        s * z * (h / 3.0)
    }

    /// Taylor coefficients from samples on |z| = ρ (discrete Cauchy formula).
    fn fit_coefficients(f: impl Fn(Complex64) -> Complex64, upto: usize) -> Vec<Complex64> {
        let rho = 0.5;
        let m = 64;
        let samples: Vec<(Complex64, Complex64)> = (0..m)
            .map(|j| {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                let z = Complex64::from_polar(rho, theta);
                (z, f(z))
            })
            .collect();
        (0..=upto)
            .map(|k| {
                let s: Complex64 = samples.iter().map(|&(z, fz)| fz / z.powu(k as u32)).sum();
                s / m as f64
            })
            .collect()
    }

    #[test]
    fn rtau_extremal_examples() {
        let one = Complex64::new(1.0, 0.0);
        let r = RtauParams::new(1.0, 0.0, one).unwrap();
        let f = rtau_extremal_coeffs(2, &r, 4).unwrap();
        assert_eq!(f.coeffs(), &[Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)]);

        let r = RtauParams::new(1.0, -0.5, one).unwrap();
        let f = rtau_extremal_coeffs(2, &r, 3).unwrap();
        assert!((f.stored(2) - Complex64::new(0.75, 0.0)).norm() < 1e-16);
        assert!((f.stored(3) - Complex64::new(0.25, 0.0)).norm() < 1e-16);

        // independent route: quadrature of the integrand, then coefficient fit
        let (a, b, tau) = (1.0, -0.5, one);
        let n = 2;
        let integrand = |t: Complex64| {
            let tn = t.powu(n - 1);
            one + tau * (a - b) * tn / (one + tn * b)
        };
        let fitted = fit_coefficients(|z| integrate_segment(integrand, z), 3);
        assert!((fitted[1] - one).norm() < 1e-10);
        assert!((fitted[2] - f.stored(2)).norm() < 1e-10);
        assert!((fitted[3] - f.stored(3)).norm() < 1e-10);
    }

    #[test]
    fn rtau_extremal_order_bounds_dropped_tail() {
        let one = Complex64::new(1.0, 0.0);
        let r = RtauParams::new(1.0, 0.0, one).unwrap();
        assert_eq!(rtau_extremal_order(4, &r, 1e-9).unwrap(), 4);
        let r = RtauParams::new(1.0, -0.5, one).unwrap();
        let order = rtau_extremal_order(3, &r, 1e-9).unwrap();
        let f = rtau_extremal_coeffs(3, &r, order).unwrap();
        let kept = f.magnitudes().filter(|&(_, m)| m > 0.0).count() as i32;
        assert!(0.5f64.powi(kept) / 0.5 <= 1e-9);
        assert!(0.5f64.powi(kept - 1) / 0.5 > 1e-9);
        assert!(rtau_extremal_order(3, &RtauParams::new(1.0, -1.0, one).unwrap(), 1e-9).is_err());
        assert!(rtau_extremal_order(1, &r, 1e-9).is_err());
    }

    #[test]
    fn rtau_extremal_complex_tau_matches_quadrature() {
        let tau = Complex64::new(0.3, -0.8);
        let (a, b) = (0.7, 0.4);
        let r = RtauParams::new(a, b, tau).unwrap();
        let n = 3;
        let f = rtau_extremal_coeffs(n, &r, 9).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let integrand = |t: Complex64| {
            let tn = t.powu(n as u32 - 1);
            one + tau * (a - b) * tn / (one + tn * b)
        };
        let fitted = fit_coefficients(|z| integrate_segment(integrand, z), 9);
        for (k, fit) in fitted.iter().enumerate().skip(2) {
            assert!((fit - f.stored(k)).norm() < 1e-10, "k = {k}");
        }
        assert!((f.magnitude(n) - rtau_coeff_bound(n, &r)).abs() <= 1e-15 * rtau_coeff_bound(n, &r));
    }

    #[test]
    fn json_shape_and_validation() {
        let f = CoeffFunction::t_class(vec![0.1, 0.0]).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"sign_class":"T","coeffs":[0.1,0.0]}"#);
        let back: CoeffFunction = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<CoeffFunction>(r#"{"sign_class":"T","coeffs":[-0.1]}"#).is_err());
        let g: CoeffFunction = serde_json::from_str(r#"{"sign_class":"GENERAL","coeffs":[-0.1]}"#).unwrap();
        assert_eq!(g.signed(2), -0.1);
    }

    #[test]
    fn horner_matches_direct_sum() {
        let f = CoeffFunction::general(vec![0.3, -0.2, 0.05]).unwrap();
        let z = Complex64::new(0.4, -0.7);
        let direct = z + z.powu(2) * 0.3 - z.powu(3) * 0.2 + z.powu(4) * 0.05;
        let ddirect = 1.0 + z * 0.6 - z.powu(2) * 0.6 + z.powu(3) * 0.2;
        let (v, d) = f.eval_with_derivative(z);
        assert!((v - direct).norm() < 1e-15);
        assert!((d - ddirect).norm() < 1e-15);
    }

    proptest! {
        #[test]
        fn hadamard_of_all_ones_is_z_up(c in -8.0f64..-0.01, kappa in 0.1f64..10.0, order in 1usize..40) {
            let p = bp(c, kappa);
            let ones = CoeffFunction::general(vec![1.0; order - 1]).unwrap();
            prop_assert_eq!(hadamard_i(&p, &ones).unwrap(), make_z_up(&p, order).unwrap());
        }

        #[test]
        fn g_magnitudes_are_divided_by_index(c in -8.0f64..-0.01, kappa in 0.1f64..10.0) {
            let p = bp(c, kappa);
            let g = integral_g_coeffs(&p, DEFAULT_ORDER).unwrap();
            let t = make_z_two_minus_up(&p, DEFAULT_ORDER).unwrap();
            for (n, a) in g.magnitudes() {
                prop_assert_eq!(a, t.magnitude(n) / n as f64);
            }
        }

        #[test]
        fn single_coefficients_agree_with_bulk(c in -8.0f64..8.0, kappa in 0.1f64..10.0, n in 2usize..64) {
            let p = bp(c, kappa);
            prop_assert_eq!(make_z_up(&p, 64).unwrap().stored(n), u_coefficient(&p, n).unwrap());
        }

        #[test]
        fn zfprime_scales_by_index(coeffs in proptest::collection::vec(-1.0f64..1.0, 0..20)) {
            let f = CoeffFunction::general(coeffs.clone()).unwrap();
            let g = zfprime(&f);
            for (i, a) in coeffs.iter().enumerate() {
                prop_assert_eq!(g.stored(i + 2), a * (i + 2) as f64);
            }
        }

        #[test]
        fn extremal_attains_bound(n in 2usize..=10, a in -0.9f64..1.0, gap in 0.01f64..1.0, re in -2.0f64..2.0, im in -2.0f64..2.0) {
            prop_assume!(re.abs() + im.abs() > 1e-3);
            let b = (a - gap).max(-0.99);
            let r = RtauParams::new(a, b, Complex64::new(re, im)).unwrap();
            let f = rtau_extremal_coeffs(n, &r, 30).unwrap();
            let bound = rtau_coeff_bound(n, &r);
            prop_assert!((f.magnitude(n) - bound).abs() <= 1e-15 * bound);
        }
    }
}
