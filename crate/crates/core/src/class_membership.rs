//! Coefficient criteria for `SP_p(α, β)` and `UCSP(α, β)`, and sampled
//! checks of the defining inequalities on the unit disk.
//!
//! A function `f` is in `SP_p(α, β)` when
//!
//! ```text
//! Re{e^{−iα} z f′(z)/f(z)} > |z f′(z)/f(z) − 1| + β    for all |z| < 1,
//! ```
//!
//! and in `UCSP(α, β)` when `z f′(z)` is in `SP_p(α, β)`. The coefficient
//! sums are sufficient for general functions. For T-class functions the
//! sum is also necessary when `α = 0`; for `α ≠ 0` the real-axis limit only
//! yields the weaker bound `(1 + cos α) Σ n|a_n| − (1 + β) Σ |a_n| ≤ cos α − β`,
//! so certificates mark that case accordingly.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificate::{
    Certificate, CertificateMeta, ClaimStrength, ConditionId, GridEcho, Method, CERT_TOL, SAMPLED_TOL,
};
use crate::error::{Error, Result};
use crate::function_model::{zfprime, CoeffFunction, Coefficient, RtauParams, SignClass};

/// Below this modulus a denominator is treated as vanishing.
pub const ZERO_DENOMINATOR: f64 = 1e-12;

/// Aperture `α` (radians) and order `β` of the target class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpiralParams {
    alpha: f64,
    beta: f64,
}

impl SpiralParams {
    /// Requires `|α| < π/2` and `0 ≤ β < 1`. `cos α ≤ β` is accepted; every
    /// condition then fails except at the degenerate boundary.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let ok = alpha.is_finite() && beta.is_finite() && alpha.abs() < FRAC_PI_2 && (0.0..1.0).contains(&beta);
        if ok {
            Ok(SpiralParams { alpha, beta })
        } else {
            Err(Error::InvalidSpiralParams { alpha, beta })
        }
    }

    pub fn from_degrees(alpha_deg: f64, beta: f64) -> Result<Self> {
        Self::new(alpha_deg.to_radians(), beta)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn cos_alpha(&self) -> f64 {
        self.alpha.cos()
    }

    /// `cos α + β`, the constant subtracted inside every coefficient weight.
    pub fn gamma(&self) -> f64 {
        self.cos_alpha() + self.beta
    }

    /// `cos α − β`, the right-hand side of every condition.
    pub fn rhs(&self) -> f64 {
        self.cos_alpha() - self.beta
    }

    pub(crate) fn echo(&self, meta: CertificateMeta) -> CertificateMeta {
        meta.param("alpha", self.alpha).param("beta", self.beta).param("cos_alpha", self.cos_alpha())
    }
}

/// Polar sampling grid inside the unit disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskGrid {
    radii: Vec<f64>,
    angles: usize,
}

impl Default for DiskGrid {
    /// 48 uniform radii `0.02, …, 0.96`, refinement radii `1 − 10^{−k}`
    /// (`k = 1..=6`), 256 uniform angles.
    fn default() -> Self {
        let mut radii: Vec<f64> = (1..=48).map(|k| 0.02 * k as f64).collect();
        radii.extend(refinement_radii());
        DiskGrid { radii, angles: 256 }
    }
}

/// `1 − 10^{−k}` for `k = 1..=6`.
pub fn refinement_radii() -> Vec<f64> {
    (1..=6).map(|k| 1.0 - 10f64.powi(-k)).collect()
}

impl DiskGrid {
    pub fn new(radii: Vec<f64>, angles: usize) -> Result<Self> {
        if radii.is_empty() || angles == 0 {
            return Err(Error::InvalidArgument("grid needs at least one radius and one angle".into()));
        }
        if let Some(r) = radii.iter().find(|r| !(r.is_finite() && **r > 0.0 && **r < 1.0)) {
            return Err(Error::InvalidArgument(format!("grid radius {r} is outside (0, 1)")));
        }
        Ok(DiskGrid { radii, angles })
    }

    /// `n_radii` uniform radii up to `r_max`.
    pub fn uniform(n_radii: usize, r_max: f64, angles: usize) -> Result<Self> {
        let radii = (1..=n_radii).map(|k| r_max * k as f64 / n_radii as f64).collect();
        Self::new(radii, angles)
    }

    /// The refinement radii along the positive real axis only.
    pub fn radial_probe() -> Self {
        DiskGrid { radii: refinement_radii(), angles: 1 }
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn angles(&self) -> usize {
        self.angles
    }

    pub fn r_max(&self) -> f64 {
        self.radii.iter().copied().fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.angles
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid point `i`, radius-major.
    pub fn point(&self, i: usize) -> Complex64 {
        let r = self.radii[i / self.angles];
        let theta = 2.0 * PI * (i % self.angles) as f64 / self.angles as f64;
        Complex64::from_polar(r, theta)
    }

    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    fn echo(&self, worst: Option<Complex64>) -> GridEcho {
        GridEcho {
            radii: self.radii.len(),
            angles: self.angles,
            r_max: self.r_max(),
            worst_point: worst.map(|z| [z.re, z.im]),
        }
    }
}

/// Which modulus term enters the sampled inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulusForm {
    /// `|z f′(z)/f(z) − 1|`
    #[default]
    Standard,
    /// `|z f′(z)/f′(z) − 1| = |z − 1|`, the term exactly as printed in the
    /// class definition; kept for comparison only.
    AsPrinted,
}

fn lemma1_certificate<T: Coefficient>(
    id: ConditionId,
    f: &CoeffFunction<T>,
    weighted: &CoeffFunction<T>,
    s: &SpiralParams,
) -> Certificate {
    let gamma = s.gamma();
    let lhs: f64 = weighted.magnitudes().map(|(n, a)| (2.0 * n as f64 - gamma) * a).sum();
    let mut meta = s.echo(CertificateMeta::new(CERT_TOL));
    meta.n_terms = Some(f.order());
    let (strength, note) = match f.sign_class() {
        SignClass::General => (ClaimStrength::Sufficient, None),
        SignClass::T if s.alpha() == 0.0 => (ClaimStrength::NecessaryAndSufficient, None),
        SignClass::T => (
            ClaimStrength::PaperClaimsIffSeeNotes,
            Some("for T-class functions the coefficient sum is necessary only at alpha = 0".to_string()),
        ),
    };
    meta.claim_strength = Some(strength);
    meta.note = note;
    Certificate::new(id, lhs, s.rhs(), Method::DirectSum, meta)
}

/// `Σ_{n=2}^{N} (2n − cos α − β)|a_n| ≤ cos α − β`.
pub fn check_sp_sufficient<T: Coefficient>(f: &CoeffFunction<T>, s: &SpiralParams) -> Certificate {
    lemma1_certificate(ConditionId::Lemma1T1, f, f, s)
}

/// `Σ_{n=2}^{N} n(2n − cos α − β)|a_n| ≤ cos α − β`, summed as the SP
/// criterion of `z f′(z)`.
pub fn check_ucsp_sufficient<T: Coefficient>(f: &CoeffFunction<T>, s: &SpiralParams) -> Certificate {
    lemma1_certificate(ConditionId::Lemma1B1, f, &zfprime(f), s)
}

/// `Re{e^{−iα} w} − |w − 1| − β` with `w = z f′(z)/f(z)`.
pub fn spiral_margin_at<T: Coefficient>(
    f: &CoeffFunction<T>,
    s: &SpiralParams,
    z: Complex64,
    form: ModulusForm,
) -> Result<f64> {
    let (fz, dfz) = f.eval_with_derivative(z);
    if fz.norm() < ZERO_DENOMINATOR {
        return Err(Error::ZeroDenominator { z, magnitude: fz.norm() });
    }
    let w = z * dfz / fz;
    let modulus = match form {
        ModulusForm::Standard => (w - 1.0).norm(),
        ModulusForm::AsPrinted => {
            if dfz.norm() < ZERO_DENOMINATOR {
                return Err(Error::ZeroDenominator { z, magnitude: dfz.norm() });
            }
            (z * dfz / dfz - 1.0).norm()
        }
    };
    let rotated = Complex64::from_polar(1.0, -s.alpha()) * w;
    Ok(rotated.re - modulus - s.beta())
}

/// Evaluates `value(z)` over the grid in parallel and returns the index
/// and value of the minimum; ties go to the lowest index.
fn grid_min<F>(grid: &DiskGrid, value: F) -> Result<(usize, f64)>
where
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    let values: Vec<Result<f64>> = (0..grid.len()).into_par_iter().map(|i| value(grid.point(i))).collect();
    let mut best = (0usize, f64::INFINITY);
    for (i, v) in values.into_iter().enumerate() {
        let v = v?;
        if v < best.1 {
            best = (i, v);
        }
    }
    Ok(best)
}

/// Sampled check of the `SP_p(α, β)` inequality. A failure refutes
/// membership; a pass is only evidence.
pub fn geometric_check<T: Coefficient + Send + Sync>(
    f: &CoeffFunction<T>,
    s: &SpiralParams,
    grid: &DiskGrid,
) -> Result<Certificate> {
    geometric_check_with(f, s, grid, ModulusForm::Standard)
}

pub fn geometric_check_with<T: Coefficient + Send + Sync>(
    f: &CoeffFunction<T>,
    s: &SpiralParams,
    grid: &DiskGrid,
    form: ModulusForm,
) -> Result<Certificate> {
    let (idx, min) = grid_min(grid, |z| spiral_margin_at(f, s, z, form))?;
    let mut meta = s.echo(CertificateMeta::new(SAMPLED_TOL));
    meta.n_terms = Some(f.order());
    meta.grid = Some(grid.echo(Some(grid.point(idx))));
    meta.claim_strength = Some(ClaimStrength::RefutationOnly);
    if form == ModulusForm::AsPrinted {
        meta.note = Some("modulus term |z f'(z)/f'(z) - 1| as printed".into());
    }
    Ok(Certificate::new(ConditionId::Geometric, -min, 0.0, Method::Sampled, meta))
}

/// `|(f′(z) − 1) / ((A − B)τ − B(f′(z) − 1))|`
pub fn rtau_ratio_at<T: Coefficient>(f: &CoeffFunction<T>, r: &RtauParams, z: Complex64) -> Result<f64> {
    let d = f.derivative(z) - 1.0;
    let denom = r.tau() * (r.a() - r.b()) - d * r.b();
    if denom.norm() < ZERO_DENOMINATOR {
        return Err(Error::ZeroDenominator { z, magnitude: denom.norm() });
    }
    Ok((d / denom).norm())
}

/// Sampled check of the `R^τ(A, B)` inequality: `lhs` is the largest
/// ratio found, `rhs = 1`.
pub fn check_rtau_membership<T: Coefficient + Send + Sync>(
    f: &CoeffFunction<T>,
    r: &RtauParams,
    grid: &DiskGrid,
) -> Result<Certificate> {
    let (idx, neg_max) = grid_min(grid, |z| rtau_ratio_at(f, r, z).map(|v| -v))?;
    let meta = CertificateMeta {
        n_terms: Some(f.order()),
        grid: Some(grid.echo(Some(grid.point(idx)))),
        claim_strength: Some(ClaimStrength::RefutationOnly),
        ..CertificateMeta::new(SAMPLED_TOL)
    }
    .param("A", r.a())
    .param("B", r.b())
    .param("tau_re", r.tau().re)
    .param("tau_im", r.tau().im);
    Ok(Certificate::new(ConditionId::Rtau, -neg_max, 1.0, Method::Sampled, meta))
}
