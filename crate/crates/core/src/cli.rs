//! The `spiracert` command-line front end.
//!
//! Exit codes: 0 when everything requested holds or passes, 1 when a
//! condition or oracle check fails, 2 on usage, parameter or I/O errors.
//! `SPIRACERT_THREADS` caps the worker pool.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::bessel::{self, BesselParams, SeriesValue, DEFAULT_EPS};
use crate::certificate::{Certificate, ConditionId};
use crate::class_membership::{
    check_rtau_membership, check_sp_sufficient, check_ucsp_sufficient, geometric_check, DiskGrid, SpiralParams,
};
use crate::error::{Error, Result};
use crate::function_model::{
    make_z_two_minus_up, rtau_extremal_coeffs, rtau_extremal_order, RtauParams, DEFAULT_ORDER,
};
use crate::oracle;
use crate::theorems;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "SPIRACERT_THREADS";

/// Tail tolerance used when truncating the extremal `R^τ` function.
const RTAU_TAIL_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "spiracert", version, about = "Bessel series certificates for uniformly spirallike classes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print u(1), u'(1) and u''(1) with truncation bounds.
    Eval(EvalArgs),
    /// Evaluate conditions at one parameter point and print JSON lines.
    Certify(CertifyArgs),
    /// Evaluate conditions over a (c, kappa) grid.
    Scan(ScanArgs),
    /// Run the randomized oracle suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long, allow_negative_numbers = true)]
    c: f64,
    #[arg(long, allow_negative_numbers = true)]
    kappa: f64,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    eps: f64,
    /// Accept c >= 0 or kappa <= 0 (outside the theorem regime).
    #[arg(long)]
    allow_degenerate: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct SpiralArgs {
    /// Spiral angle in radians.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "alpha_deg")]
    alpha: Option<f64>,
    /// Spiral angle in degrees.
    #[arg(long, allow_negative_numbers = true)]
    alpha_deg: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
}

impl SpiralArgs {
    fn params(&self) -> Result<SpiralParams> {
        match (self.alpha, self.alpha_deg) {
            (_, Some(deg)) => SpiralParams::from_degrees(deg, self.beta),
            (alpha, None) => SpiralParams::new(alpha.unwrap_or(0.0), self.beta),
        }
    }
}

#[derive(Debug, Args)]
struct RtauArgs {
    #[arg(long = "A", allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long = "B", allow_negative_numbers = true)]
    b: Option<f64>,
    /// Real part of tau.
    #[arg(long, allow_negative_numbers = true)]
    tau: Option<f64>,
    /// Imaginary part of tau.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    tau_im: f64,
}

impl RtauArgs {
    fn params(&self) -> Result<Option<RtauParams>> {
        match (self.a, self.b, self.tau) {
            (None, None, None) => Ok(None),
            (Some(a), Some(b), Some(tau)) => RtauParams::new(a, b, Complex64::new(tau, self.tau_im)).map(Some),
            _ => Err(Error::InvalidArgument("--A, --B and --tau must be given together".into())),
        }
    }
}

#[derive(Debug, Args)]
struct CertifyArgs {
    #[arg(long, allow_negative_numbers = true)]
    c: f64,
    #[arg(long, allow_negative_numbers = true)]
    kappa: f64,
    #[command(flatten)]
    spiral: SpiralArgs,
    #[command(flatten)]
    rtau: RtauArgs,
    /// Condition ids, repeatable or comma separated (default T1_HH,T2_Q,T3_GH,T4_66).
    #[arg(long = "cond", value_delimiter = ',')]
    conds: Vec<ConditionId>,
    /// Truncation order for the coefficient and sampled checks.
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    /// Extremal index n used by the RTAU check.
    #[arg(long, default_value_t = 2)]
    extremal_n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct ScanArgs {
    /// `lo,hi` with hi < 0.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    c_range: Vec<f64>,
    /// `lo,hi` with lo > 0.
    #[arg(long, value_delimiter = ',', required = true)]
    kappa_range: Vec<f64>,
    /// Grid points per axis.
    #[arg(long, default_value_t = 11)]
    steps: usize,
    #[command(flatten)]
    spiral: SpiralArgs,
    #[command(flatten)]
    rtau: RtauArgs,
    #[arg(long = "cond", value_delimiter = ',')]
    conds: Vec<ConditionId>,
    #[arg(long, value_enum, default_value_t = ScanFormat::Csv)]
    format: ScanFormat,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    tuples: usize,
    /// Golden-values file: written when missing, diffed otherwise.
    #[arg(long)]
    golden: Option<PathBuf>,
}

const DEFAULT_CERTIFY: [ConditionId; 4] = [ConditionId::T1Hh, ConditionId::T2Q, ConditionId::T3Gh, ConditionId::T466];

/// Conditions `scan` can evaluate: the closed forms only.
const SCANNABLE: [ConditionId; 8] = [
    ConditionId::T1Hh,
    ConditionId::T2Q,
    ConditionId::T3Gh,
    ConditionId::T466,
    ConditionId::T5D3,
    ConditionId::T7D3exp,
    ConditionId::G6Hh,
    ConditionId::G866,
];

/// Closed-form certificate for one condition id. Coefficient and sampled
/// conditions are evaluated on `z(2 − u)` truncated at `order`; `RTAU`
/// checks the extremal function of index `extremal_n`.
pub fn certify_condition(
    id: ConditionId,
    p: &BesselParams,
    s: &SpiralParams,
    r: Option<&RtauParams>,
    order: usize,
    extremal_n: usize,
) -> Result<Certificate> {
    let need_rtau = || r.ok_or_else(|| Error::InvalidArgument(format!("{id} needs --A, --B and --tau")));
    match id {
        ConditionId::T1Hh => theorems::thm1_condition(p, s),
        ConditionId::T2Q => theorems::thm2_condition(p, s),
        ConditionId::T3Gh => theorems::thm3_condition(p, s),
        ConditionId::T466 => theorems::thm4_condition(p, s),
        ConditionId::T5D3 => theorems::thm5_condition(p, s, need_rtau()?),
        ConditionId::T7D3exp => theorems::thm7_condition(p, s, need_rtau()?),
        ConditionId::G6Hh => theorems::thm_g_conditions(p, s).map(|(g6, _)| g6),
        ConditionId::G866 => theorems::thm_g_conditions(p, s).map(|(_, g8)| g8),
        ConditionId::Lemma1T1 | ConditionId::Lemma1B1 | ConditionId::Geometric => {
            p.require_regime()?;
            let f = make_z_two_minus_up(p, order)?;
            let mut cert = match id {
                ConditionId::Lemma1T1 => check_sp_sufficient(&f, s),
                ConditionId::Lemma1B1 => check_ucsp_sufficient(&f, s),
                _ => geometric_check(&f, s, &DiskGrid::default())?,
            };
            cert.meta.params.insert("c".into(), p.c());
            cert.meta.params.insert("kappa".into(), p.kappa());
            Ok(cert)
        }
        ConditionId::Rtau => {
            let r = need_rtau()?;
            let order = rtau_extremal_order(extremal_n, r, RTAU_TAIL_TOL)?;
            let f = rtau_extremal_coeffs(extremal_n, r, order)?;
            check_rtau_membership(&f, r, &DiskGrid::default())
        }
    }
}

/// A validated `scan` request.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub c_range: [f64; 2],
    pub kappa_range: [f64; 2],
    pub steps: usize,
    pub spiral: SpiralParams,
    pub rtau: Option<RtauParams>,
    pub conditions: Vec<ConditionId>,
    pub format: ScanFormat,
}

impl ScanSpec {
    /// Ranges must lie in the theorem regime, `lo ≤ hi`, `steps ≥ 2`, and
    /// every condition must be a closed form.
    pub fn new(
        c_range: [f64; 2],
        kappa_range: [f64; 2],
        steps: usize,
        spiral: SpiralParams,
        rtau: Option<RtauParams>,
        conditions: Vec<ConditionId>,
        format: ScanFormat,
    ) -> Result<Self> {
        let [c_lo, c_hi] = c_range;
        let [k_lo, k_hi] = kappa_range;
        if !(c_lo.is_finite() && c_lo <= c_hi && c_hi < 0.0) {
            return Err(Error::InvalidArgument(format!("c range must satisfy lo <= hi < 0, got {c_lo},{c_hi}")));
        }
        if !(k_hi.is_finite() && 0.0 < k_lo && k_lo <= k_hi) {
            return Err(Error::InvalidArgument(format!("kappa range must satisfy 0 < lo <= hi, got {k_lo},{k_hi}")));
        }
        if steps < 2 {
            return Err(Error::InvalidArgument(format!("steps must be at least 2, got {steps}")));
        }
        let conditions = if conditions.is_empty() { vec![ConditionId::T1Hh] } else { conditions };
        for id in &conditions {
            if !SCANNABLE.contains(id) {
                return Err(Error::InvalidArgument(format!("{id} cannot be scanned; use certify")));
            }
            if matches!(id, ConditionId::T5D3 | ConditionId::T7D3exp) && rtau.is_none() {
                return Err(Error::InvalidArgument(format!("{id} needs --A, --B and --tau")));
            }
        }
        Ok(ScanSpec { c_range, kappa_range, steps, spiral, rtau, conditions, format })
    }

    /// Grid points in output order: c-major, both axes ascending.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let axis = |[lo, hi]: [f64; 2]| -> Vec<f64> {
            (0..self.steps)
                .map(|i| if i + 1 == self.steps { hi } else { lo + (hi - lo) * i as f64 / (self.steps - 1) as f64 })
                .collect()
        };
        let kappas = axis(self.kappa_range);
        axis(self.c_range).into_iter().flat_map(|c| kappas.iter().map(move |&k| (c, k))).collect()
    }
}

#[derive(Debug, Serialize)]
struct ScanCell {
    condition_id: ConditionId,
    lhs: f64,
    margin: f64,
    holds: bool,
}

#[derive(Debug, Serialize)]
struct ScanRow {
    c: f64,
    kappa: f64,
    conditions: Vec<ScanCell>,
}

/// Runs the scan on a pool of `threads` workers and renders it. The bytes
/// returned do not depend on `threads`.
pub fn scan_output(spec: &ScanSpec, threads: usize) -> Result<String> {
    let pool = build_pool(threads)?;
    let rows: Vec<Result<ScanRow>> = pool.install(|| {
        spec.points()
            .into_par_iter()
            .map(|(c, kappa)| {
                let p = BesselParams::theorem_regime(c, kappa)?;
                let conditions = spec
                    .conditions
                    .iter()
                    .map(|&id| {
                        certify_condition(id, &p, &spec.spiral, spec.rtau.as_ref(), DEFAULT_ORDER, 2).map(|cert| {
                            ScanCell { condition_id: id, lhs: cert.lhs, margin: cert.margin, holds: cert.holds }
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(ScanRow { c, kappa, conditions })
            })
            .collect()
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let mut out = String::new();
    match spec.format {
        ScanFormat::Csv => {
            out.push_str("c,kappa");
            for id in &spec.conditions {
                write!(out, ",{id}_lhs,{id}_margin,{id}_holds").unwrap();
            }
            out.push('\n');
            for row in &rows {
                write!(out, "{:.16e},{:.16e}", row.c, row.kappa).unwrap();
                for cell in &row.conditions {
                    write!(out, ",{:.16e},{:.16e},{}", cell.lhs, cell.margin, cell.holds).unwrap();
                }
                out.push('\n');
            }
        }
        ScanFormat::Json => {
            for row in &rows {
                out.push_str(&serde_json::to_string(row).expect("scan values are finite"));
                out.push('\n');
            }
        }
    }
    Ok(out)
}

fn build_pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))
}

/// Worker count: the requested count (or all cores), capped by
/// `SPIRACERT_THREADS` when set.
fn thread_count(requested: Option<usize>) -> Result<usize> {
    let cap =
        match std::env::var(THREADS_ENV) {
            Ok(v) => Some(v.trim().parse::<usize>().ok().filter(|&n| n > 0).ok_or_else(|| {
                Error::InvalidArgument(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))
            })?),
            Err(_) => None,
        };
    let wanted = requested.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    Ok(cap.map_or(wanted, |cap| wanted.min(cap)).max(1))
}

/// Failure that maps onto an exit code.
enum Failure {
    Usage(String),
    Condition,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("write failed: {e}"))
    }
}

/// Parses `args` (including the program name) and runs the command,
/// writing results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let result = match cli.command {
        Command::Eval(a) => cmd_eval(&a, out, err),
        Command::Certify(a) => cmd_certify(&a, out),
        Command::Scan(a) => cmd_scan(&a, out),
        Command::Verify(a) => cmd_verify(&a, out, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Condition) => EXIT_FAIL,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

#[derive(Serialize)]
struct EvalOutput {
    c: f64,
    kappa: f64,
    u: SeriesValue,
    u_prime: SeriesValue,
    u_second: SeriesValue,
}

fn cmd_eval(a: &EvalArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::result::Result<(), Failure> {
    if a.eps.is_nan() || a.eps <= 0.0 {
        return Err(Failure::Usage(format!("eps must be positive, got {}", a.eps)));
    }
    let p = BesselParams::new(a.c, a.kappa)?;
    if !p.is_theorem_regime() {
        if !a.allow_degenerate {
            p.require_regime()?;
        }
        writeln!(err, "warning: (c, kappa) = ({}, {}) is outside c < 0, kappa > 0", a.c, a.kappa)?;
    }
    let report = EvalOutput {
        c: a.c,
        kappa: a.kappa,
        u: bessel::u_at_one(&p, a.eps)?,
        u_prime: bessel::u_prime_at_one(&p, a.eps)?,
        u_second: bessel::u_second_at_one(&p, a.eps)?,
    };
    if a.json {
        writeln!(out, "{}", serde_json::to_string(&report).expect("series values are finite"))?;
    } else {
        for (name, v) in [("u(1)", &report.u), ("u'(1)", &report.u_prime), ("u''(1)", &report.u_second)] {
            writeln!(out, "{name:<7} = {:.16e}  (terms {}, tail <= {:.3e})", v.value, v.terms_used, v.tail_bound)?;
        }
    }
    Ok(())
}

fn cmd_certify(a: &CertifyArgs, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let p = BesselParams::theorem_regime(a.c, a.kappa)?;
    let s = a.spiral.params()?;
    let r = a.rtau.params()?;
    let conds: &[ConditionId] = if a.conds.is_empty() { &DEFAULT_CERTIFY } else { &a.conds };
    let pool = build_pool(thread_count(None)?)?;
    let mut all_hold = true;
    for &id in conds {
        let cert = pool.install(|| certify_condition(id, &p, &s, r.as_ref(), a.order, a.extremal_n))?;
        all_hold &= cert.holds;
        writeln!(out, "{}", cert.to_json())?;
    }
    if all_hold {
        Ok(())
    } else {
        Err(Failure::Condition)
    }
}

fn cmd_scan(a: &ScanArgs, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let pair = |name: &str, v: &[f64]| -> std::result::Result<[f64; 2], Failure> {
        match v {
            [lo, hi] => Ok([*lo, *hi]),
            _ => Err(Failure::Usage(format!("--{name} takes lo,hi"))),
        }
    };
    let spec = ScanSpec::new(
        pair("c-range", &a.c_range)?,
        pair("kappa-range", &a.kappa_range)?,
        a.steps,
        a.spiral.params()?,
        a.rtau.params()?,
        a.conds.clone(),
        a.format,
    )?;
    let text = scan_output(&spec, thread_count(a.threads)?)?;
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::result::Result<(), Failure> {
    let pool = build_pool(thread_count(None)?)?;
    let mut failed = false;
    if let Some(path) = &a.golden {
        let fresh = oracle::canonical_golden()?;
        if path.exists() {
            let pinned = oracle::read_golden(path)?;
            let problems = oracle::diff_golden(&pinned, &fresh);
            for line in &problems {
                writeln!(err, "golden mismatch: {line}")?;
            }
            writeln!(err, "golden: {} records checked, {} mismatches", pinned.len(), problems.len())?;
            failed |= !problems.is_empty();
        } else {
            oracle::write_golden(path, &fresh)?;
            writeln!(err, "golden: wrote {} records to {}", fresh.len(), path.display())?;
        }
    }
    let reports = pool.install(|| oracle::run_suite(a.seed, a.tuples))?;
    let mut failures = 0usize;
    for r in &reports {
        writeln!(out, "{}", r.to_json())?;
        failures += usize::from(!r.verdict);
    }
    writeln!(err, "verify: seed {}, {} tuples, {} reports, {} failures", a.seed, a.tuples, reports.len(), failures)?;
    if failed || failures > 0 {
        Err(Failure::Condition)
    } else {
        Ok(())
    }
}
