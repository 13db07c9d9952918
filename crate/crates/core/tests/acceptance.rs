//! Acceptance suite. Each test prints one `[PASS]`/`[FAIL]` line to stderr
//! (bypassing the capture) before asserting, so
//! `cargo test --test acceptance -- --nocapture` or a plain run both show
//! the summary.

use std::io::Write;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use spiracert::bessel::DEFAULT_EPS;
use spiracert::class_membership::{check_rtau_membership, check_sp_sufficient, check_ucsp_sufficient};
use spiracert::cli::{scan_output, ScanFormat, ScanSpec};
use spiracert::function_model::{integral_g_coeffs, rtau_extremal_coeffs, rtau_extremal_order, zfprime, DEFAULT_ORDER};
use spiracert::oracle::{self, sample_rtau, TupleSampler};
use spiracert::theorems;
use spiracert::{BesselParams, CoeffFunction, ConditionId, DiskGrid, SpiralParams};

const SEED: u64 = 42;
const TUPLES: usize = 10_000;

fn verdict(id: u32, what: &str, pass: bool, detail: String) {
    let line = format!("[{}] AC-{id:02} {what}: {detail}\n", if pass { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(pass, "{}", line.trim_end());
}

fn single_core<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(f)
}

/// Largest `|direct − closed| / (1 + |closed|)` over the tuples, and the
/// elapsed single-core time.
fn identity_run(
    direct: fn(&BesselParams, &SpiralParams, f64) -> spiracert::Result<spiracert::SeriesValue>,
    closed: fn(&BesselParams, &SpiralParams) -> spiracert::Result<spiracert::Certificate>,
) -> (f64, f64) {
    let sampler = TupleSampler::new(SEED);
    let start = Instant::now();
    let worst = single_core(|| {
        (0..TUPLES as u64)
            .map(|i| {
                let t = sampler.tuple(i);
                let d = direct(&t.bessel, &t.spiral, DEFAULT_EPS).unwrap().value;
                let c = closed(&t.bessel, &t.spiral).unwrap().lhs;
                (d - c).abs() / (1.0 + c.abs())
            })
            .fold(0.0, f64::max)
    });
    (worst, start.elapsed().as_secs_f64())
}

#[test]
fn ac01_sp_series_identity() {
    let (worst, secs) = identity_run(oracle::direct_sum_sp, theorems::thm1_condition);
    verdict(
        1,
        "direct SP sum vs T1_HH",
        worst <= 1e-10 && secs < 30.0,
        format!("max scaled diff {worst:.2e} (tol 1e-10), {TUPLES} tuples, {secs:.2} s single-core (limit 30 s)"),
    );
}

#[test]
fn ac02_ucsp_series_identity() {
    let (worst, secs) = identity_run(oracle::direct_sum_ucsp, theorems::thm3_condition);
    verdict(
        2,
        "direct UCSP sum vs T3_GH",
        worst <= 1e-10 && secs < 30.0,
        format!("max scaled diff {worst:.2e} (tol 1e-10), {TUPLES} tuples, {secs:.2} s single-core (limit 30 s)"),
    );
}

#[test]
fn ac03_derivative_dual_route() {
    let sampler = TupleSampler::new(SEED);
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for i in 0..1000 {
        let p = sampler.tuple(i).bessel;
        for order in [1, 2] {
            let r = oracle::derivative_dual_route(&p, order, DEFAULT_EPS).unwrap();
            worst = worst.max(r.rel_diff);
            failures += usize::from(!r.verdict);
        }
    }
    verdict(
        3,
        "u' and u'' recursion vs term-wise series",
        failures == 0 && worst <= 1e-12,
        format!("max rel diff {worst:.2e} (tol 1e-12), 1000 tuples x 2 orders, {failures} failures"),
    );
}

#[test]
fn ac04_exponential_domination() {
    let sampler = TupleSampler::new(SEED);
    let mut worst_gap = f64::INFINITY;
    let mut counterexamples = 0;
    for i in 0..TUPLES as u64 {
        let t = sampler.tuple(i);
        let (p, s) = (&t.bessel, &t.spiral);
        let t1 = theorems::thm1_condition(p, s).unwrap();
        let t2 = theorems::thm2_condition(p, s).unwrap();
        let t3 = theorems::thm3_condition(p, s).unwrap();
        let t4 = theorems::thm4_condition(p, s).unwrap();
        worst_gap = worst_gap.min(t2.lhs - t1.lhs).min(t4.lhs - t3.lhs);
        counterexamples += usize::from(t2.holds && !t1.holds) + usize::from(t4.holds && !t3.holds);
    }
    verdict(
        4,
        "T2_Q >= T1_HH and T4_66 >= T3_GH",
        worst_gap >= -1e-12 && counterexamples == 0,
        format!("min gap {worst_gap:.2e} (floor -1e-12), {counterexamples} verdict counterexamples, {TUPLES} tuples"),
    );
}

#[test]
fn ac05_scalar_bridges() {
    let sampler = TupleSampler::new(SEED);
    let mut worst: f64 = 0.0;
    for i in 0..TUPLES as u64 {
        let t = sampler.tuple(i);
        let (p, s, r) = (&t.bessel, &t.spiral, &t.rtau);
        let scale = (r.a() - r.b()) * r.tau().norm();
        let pairs = [
            (theorems::thm5_condition(p, s, r).unwrap().lhs, theorems::thm1_condition(p, s).unwrap().lhs),
            (theorems::thm7_condition(p, s, r).unwrap().lhs, theorems::thm2_condition(p, s).unwrap().lhs),
        ];
        for (scaled, base) in pairs {
            let expected = scale * base;
            worst = worst.max((scaled - expected).abs() / expected.abs());
        }
    }
    verdict(
        5,
        "T5_D3 and T7_D3EXP equal (A-B)|tau| times T1_HH and T2_Q",
        worst <= 1e-15,
        format!("max rel diff {worst:.2e} (tol 1e-15), {TUPLES} tuples"),
    );
}

#[test]
fn ac06_ucsp_equals_sp_of_zfprime() {
    let mut rng = TupleSampler::new(SEED).rng(6);
    let s = SpiralParams::new(0.4, 0.2).unwrap();
    let mut mismatches = 0;
    for i in 0..100 {
        let len = rng.gen_range(1..40);
        let f = if i % 2 == 0 {
            let coeffs: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
            CoeffFunction::general(coeffs).unwrap()
        } else {
            let coeffs: Vec<f64> = (0..len).map(|_| rng.gen_range(0.0..0.5)).collect();
            CoeffFunction::t_class(coeffs).unwrap()
        };
        let a = check_ucsp_sufficient(&f, &s).lhs;
        let b = check_sp_sufficient(&zfprime(&f), &s).lhs;
        mismatches += usize::from(a.to_bits() != b.to_bits());
    }
    verdict(
        6,
        "UCSP sum of f vs SP sum of zf'",
        mismatches == 0,
        format!("{mismatches} bit mismatches over 100 functions"),
    );
}

#[test]
fn ac07_integral_operator_cross_check() {
    let sampler = TupleSampler::new(SEED + 7);
    let mut checked = 0;
    let mut mismatches = 0;
    let mut index = 0;
    while checked < 50 {
        let t = sampler.tuple(index);
        index += 1;
        let hh = theorems::thm1_condition(&t.bessel, &t.spiral).unwrap();
        if hh.margin.abs() < 1e-6 {
            continue;
        }
        let g = integral_g_coeffs(&t.bessel, DEFAULT_ORDER).unwrap();
        let cert = check_ucsp_sufficient(&g, &t.spiral);
        mismatches += usize::from(cert.holds != hh.holds);
        checked += 1;
    }
    verdict(
        7,
        "UCSP coefficient verdict on G (N = 64) vs T1_HH verdict",
        mismatches == 0,
        format!("{mismatches} mismatches over {checked} tuples ({} drawn)", index),
    );
}

#[test]
fn ac08_rtau_extremal_sharpness() {
    let mut rng = TupleSampler::new(SEED).rng(8);
    let grid = DiskGrid::default();
    let mut worst_coeff: f64 = 0.0;
    let mut worst_ratio: f64 = 0.0;
    let mut violations = 0;
    for _ in 0..20 {
        let r = sample_rtau(&mut rng, 0.9);
        let scale = (r.a() - r.b()) * r.tau().norm();
        for n in 2..=10 {
            let order = rtau_extremal_order(n, &r, 1e-9).unwrap();
            let f = rtau_extremal_coeffs(n, &r, order).unwrap();
            let expected = scale / n as f64;
            worst_coeff = worst_coeff.max((f.magnitude(n) - expected).abs() / expected);
            let cert = check_rtau_membership(&f, &r, &grid).unwrap();
            worst_ratio = worst_ratio.max(cert.lhs);
            violations += usize::from(!cert.holds);
        }
    }
    verdict(
        8,
        "R^tau extremal coefficients and membership",
        worst_coeff <= 1e-15 && violations == 0,
        format!(
            "max rel coeff diff {worst_coeff:.2e} (tol 1e-15) over 20 x n=2..10; largest sampled ratio {worst_ratio:.9} (< 1), {violations} violations on the default grid"
        ),
    );
}

/// A T-class function `z − Σ|a_n| z^n` at `alpha = 0` whose coefficient
/// margin `(1 − β) − Σ(2n − 1 − β)|a_n|` equals `margin`.
fn t_function_with_margin(rng: &mut impl Rng, s: &SpiralParams, margin: f64) -> CoeffFunction {
    let len = rng.gen_range(1..8);
    let raw: Vec<f64> = (0..len).map(|_| rng.gen_range(0.0..1.0)).collect();
    let weighted: f64 = raw.iter().enumerate().map(|(i, a)| (2.0 * (i + 2) as f64 - s.gamma()) * a).sum();
    let factor = (s.rhs() - margin) / weighted;
    CoeffFunction::t_class(raw.iter().map(|a| a * factor).collect()).unwrap()
}

#[test]
fn ac09_necessity_probe() {
    let mut rng = TupleSampler::new(SEED).rng(9);
    let mut refuted_bad = 0;
    let mut refuted_good = 0;
    for _ in 0..20 {
        let s = SpiralParams::new(0.0, rng.gen_range(0.0..0.9)).unwrap();
        let (bad_margin, good_margin) = (-rng.gen_range(0.05..1.5), rng.gen_range(0.05..s.rhs()));
        let bad = t_function_with_margin(&mut rng, &s, bad_margin);
        let good = t_function_with_margin(&mut rng, &s, good_margin);
        assert!(check_sp_sufficient(&bad, &s).margin < -0.05);
        assert!(check_sp_sufficient(&good, &s).margin > 0.05);
        refuted_bad += usize::from(oracle::refute_on_disk(&bad, &s).unwrap().verdict);
        refuted_good += usize::from(oracle::refute_on_disk(&good, &s).unwrap().verdict);
    }
    verdict(
        9,
        "disk refutation of T-class functions (alpha = 0)",
        refuted_bad == 20 && refuted_good == 0,
        format!("violations found for {refuted_bad}/20 failing and {refuted_good}/20 passing functions"),
    );
}

/// `(u(1) − 1, u′(1), u″(1))` from plain term-wise sums.
fn naive_derivatives(c: f64, kappa: f64) -> (f64, f64, f64) {
    let q = -c / 4.0;
    let (mut um1, mut d1, mut d2) = (0.0, 0.0, 0.0);
    let mut term = 1.0;
    for n in 1..200 {
        term *= q / ((kappa + (n - 1) as f64) * n as f64);
        let nf = n as f64;
        um1 += term;
        d1 += nf * term;
        d2 += nf * (nf - 1.0) * term;
    }
    (um1, d1, d2)
}

#[test]
fn ac10_beta_zero_reduction() {
    let sampler = TupleSampler::new(SEED + 10);
    let mut worst: f64 = 0.0;
    for i in 0..2000 {
        let t = sampler.tuple(i);
        let (c, kappa) = (t.bessel.c(), t.bessel.kappa());
        let alpha = t.spiral.alpha();
        let s = SpiralParams::new(alpha, 0.0).unwrap();
        let ca = alpha.cos();
        let (um1, d1, d2) = naive_derivatives(c, kappa);
        let e = (-c / (4.0 * kappa)).exp();
        let f1 = 2.0 * d1 + (2.0 - ca) * um1;
        let f2 = e * (-c / (2.0 * kappa) + (2.0 - ca) * (1.0 - (c / (4.0 * kappa)).exp()));
        let f3 = 2.0 * d2 + (6.0 - ca) * d1 + (2.0 - ca) * um1;
        let f4 = e
            * (c * c / (8.0 * kappa)
                + (6.0 - ca) * (-c / (4.0 * kappa))
                + (2.0 - ca) * (1.0 - (c / (4.0 * kappa)).exp()));
        let p = &t.bessel;
        let certs = [
            theorems::thm1_condition(p, &s).unwrap(),
            theorems::thm2_condition(p, &s).unwrap(),
            theorems::thm3_condition(p, &s).unwrap(),
            theorems::thm4_condition(p, &s).unwrap(),
        ];
        for (cert, expected) in certs.iter().zip([f1, f2, f3, f4]) {
            assert_eq!(cert.rhs, ca);
            worst = worst.max((cert.lhs - expected).abs() / expected.abs().max(1.0));
        }
    }
    verdict(
        10,
        "beta = 0 certificates vs independently typed formulas",
        worst <= 1e-14,
        format!("max rel diff {worst:.2e} (tol 1e-14), 2000 tuples x 4 formulas"),
    );
}

#[test]
fn ac11_scan_thread_invariance() {
    let spec = ScanSpec::new(
        [-8.0, -0.01],
        [0.1, 10.0],
        30,
        SpiralParams::new(0.3, 0.1).unwrap(),
        Some(spiracert::RtauParams::new(0.5, -0.5, Complex64::new(0.3, 0.4)).unwrap()),
        vec![
            ConditionId::T1Hh,
            ConditionId::T2Q,
            ConditionId::T3Gh,
            ConditionId::T466,
            ConditionId::T5D3,
            ConditionId::G866,
        ],
        ScanFormat::Csv,
    )
    .unwrap();
    let one = scan_output(&spec, 1).unwrap();
    let two = scan_output(&spec, 2).unwrap();
    let eight = scan_output(&spec, 8).unwrap();
    let json = ScanSpec { format: ScanFormat::Json, ..spec.clone() };
    let json_same = scan_output(&json, 1).unwrap() == scan_output(&json, 8).unwrap();
    verdict(
        11,
        "scan output across 1, 2 and 8 threads",
        one == two && one == eight && json_same && one.lines().count() == 901,
        format!(
            "{} CSV bytes, identical at 2 threads: {}, at 8 threads: {}, JSON identical: {json_same}",
            one.len(),
            one == two,
            one == eight
        ),
    );
}
