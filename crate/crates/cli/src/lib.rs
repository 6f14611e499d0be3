//! Batch front end: evaluate curves, sample, fit and run the verification
//! suite. Each command turns a [`JobConfig`] into an [`Output`] whose text is
//! a pure function of the configuration.
//!
//! Exit codes: 0 ok, 2 configuration or input error, 3 construction error,
//! 4 fit did not converge, 5 insufficient data, 6 verification failure.

pub mod config;

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use mixhypo::estimate::{fit, FitConfig, Method};
use mixhypo::presets::audit_spec;
use mixhypo::verify::{audit_many, ks_suite, KsCase, OracleReport, Verdict, AUDIT_TOL};
use mixhypo::{Error, Family, RandomStream};
use serde::Serialize;
use thiserror::Error;

pub use config::JobConfig;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_CONSTRUCTION: u8 = 3;
pub const EXIT_NO_CONVERGENCE: u8 = 4;
pub const EXIT_INSUFFICIENT_DATA: u8 = 5;
pub const EXIT_CHECK_FAILED: u8 = 6;

pub const EVAL_HEADER: &str = "t,pdf,cdf,reliability,hazard";
pub const DEFAULT_POINTS: usize = 512;
pub const DEFAULT_U_MIN: f64 = 0.001;
pub const DEFAULT_U_MAX: f64 = 0.999;
pub const DEFAULT_CHECK_SEED: u64 = 20_240_601;
pub const DEFAULT_CHECK_SAMPLES: usize = 100_000;
pub const DEFAULT_CHECK_GRID: usize = 20;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Core(e) => match e {
                Error::Config(_) | Error::MomentDoesNotExist { .. } => EXIT_CONFIG,
                Error::InsufficientData { .. } => EXIT_INSUFFICIENT_DATA,
                _ => EXIT_CONSTRUCTION,
            },
        }
    }
}

/// Text to emit and the exit code to finish with.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub code: u8,
}

fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn cmd_eval(cfg: &JobConfig) -> Result<Output, CliError> {
    let spec = cfg.spec()?;
    let mixture = spec.mixture()?;
    let points = cfg.points.unwrap_or(DEFAULT_POINTS);
    if points < 2 {
        return Err(CliError::Config(format!("points must be at least 2, got {points}")));
    }
    let t_min = match cfg.t_min {
        Some(t) => t,
        None => mixture.quantile(DEFAULT_U_MIN)?,
    };
    let t_max = match cfg.t_max {
        Some(t) => t,
        None => mixture.quantile(DEFAULT_U_MAX)?,
    };
    if !(t_min.is_finite() && t_max.is_finite() && t_min < t_max) {
        return Err(CliError::Config(format!("invalid range [{t_min}, {t_max}]")));
    }
    let mut text = String::with_capacity(points * 120);
    text.push_str(EVAL_HEADER);
    text.push('\n');
    for i in 0..points {
        let t = if i + 1 == points { t_max } else { t_min + (t_max - t_min) * i as f64 / (points - 1) as f64 };
        // hazard is undefined where the reliability vanishes
        let hazard = mixture.hazard(t).unwrap_or(f64::NAN);
        let row = [t, mixture.pdf(t), mixture.cdf(t)?, mixture.reliability(t)?, hazard];
        let row: Vec<String> = row.iter().map(|&x| fmt_real(x)).collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    Ok(Output { text, code: EXIT_OK })
}

pub fn cmd_sample(cfg: &JobConfig) -> Result<Output, CliError> {
    let spec = cfg.spec()?;
    let seed = cfg.seed.ok_or_else(|| CliError::Config("sample requires an explicit seed".into()))?;
    let count = cfg.count.ok_or_else(|| CliError::Config("missing count".into()))?;
    if count == 0 {
        return Err(CliError::Config("count must be at least 1".into()));
    }
    let draws = spec.sample(count, &mut RandomStream::new(seed))?;
    let mut text = String::with_capacity(count * 24);
    for x in draws {
        text.push_str(&fmt_real(x));
        text.push('\n');
    }
    Ok(Output { text, code: EXIT_OK })
}

/// Newline-delimited reals; blank lines and `#` comments are skipped.
pub fn parse_data(text: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let x: f64 =
            line.parse().map_err(|_| CliError::Config(format!("data line {}: not a number: {line:?}", i + 1)))?;
        if !x.is_finite() {
            return Err(CliError::Config(format!("data line {}: non-finite value {line}", i + 1)));
        }
        out.push(x);
    }
    Ok(out)
}

pub fn read_data(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read data {}: {e}", path.display())))?;
    parse_data(&text)
}

pub fn fit_config(cfg: &JobConfig) -> Result<FitConfig, CliError> {
    let family = cfg.require_family()?;
    let method = cfg.method.unwrap_or(Method::Mle);
    let mut fc = FitConfig::new(method, family, cfg.n_components.unwrap_or(2));
    if let Some(k) = cfg.fixed_shared {
        fc = fc.with_fixed_shared(k);
    }
    fc.init = cfg.init.clone();
    if let Some(m) = cfg.max_iter {
        fc.max_iter = m;
    }
    if let Some(t) = cfg.tol {
        fc.tol = t;
    }
    if let Some(r) = cfg.restarts {
        fc.restarts = r;
    }
    fc.sep_min = cfg.sep_min()?;
    fc.validate()?;
    Ok(fc)
}

pub fn cmd_fit(cfg: &JobConfig) -> Result<Output, CliError> {
    let fc = fit_config(cfg)?;
    let path = cfg.data.as_ref().ok_or_else(|| CliError::Config("missing data file".into()))?;
    let data = read_data(path)?;
    let result = fit(&data, &fc, &mut RandomStream::new(cfg.seed.unwrap_or(0)))?;
    let code = if result.converged {
        EXIT_OK
    } else {
        log::warn!("fit did not converge after {} iterations", result.iterations);
        EXIT_NO_CONVERGENCE
    };
    let mut text = serde_json::to_string_pretty(&result).expect("fit result serialises");
    text.push('\n');
    Ok(Output { text, code })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub matched: usize,
    pub errata: usize,
    pub skipped: usize,
    pub failed: usize,
    pub ks_failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub seed: u64,
    pub samples: usize,
    pub families: Vec<Family>,
    pub summary: CheckSummary,
    pub audit: OracleReport,
    pub construction: Vec<KsCase>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.summary.failed == 0 && self.summary.ks_failed == 0
    }
}

pub fn run_check(cfg: &JobConfig) -> Result<CheckReport, CliError> {
    let tolerance = cfg.tolerance.unwrap_or(AUDIT_TOL);
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        return Err(CliError::Config(format!("tolerance must be positive, got {tolerance}")));
    }
    let grid = cfg.grid.unwrap_or(DEFAULT_CHECK_GRID);
    if grid < 2 {
        return Err(CliError::Config(format!("grid must be at least 2, got {grid}")));
    }
    let samples = cfg.samples.unwrap_or(DEFAULT_CHECK_SAMPLES);
    if samples == 0 {
        return Err(CliError::Config("samples must be at least 1".into()));
    }
    let seed = cfg.seed.unwrap_or(DEFAULT_CHECK_SEED);
    let families: Vec<Family> = match cfg.family {
        Some(f) => vec![f],
        None => Family::ALL.to_vec(),
    };
    let started = Instant::now();
    let specs: Vec<_> = families.iter().map(|&f| audit_spec(f)).collect();
    let audit = audit_many(&specs, grid, tolerance)?;
    log::info!("audit: {} checks in {:.2?}", audit.checks.len(), started.elapsed());
    let started = Instant::now();
    let construction = ks_suite(samples, seed, cfg.family)?;
    log::info!("construction suite: {} cases in {:.2?}", construction.len(), started.elapsed());
    let summary = CheckSummary {
        matched: audit.count(Verdict::Match),
        errata: audit.count(Verdict::Erratum),
        skipped: audit.count(Verdict::Skipped),
        failed: audit.count(Verdict::Fail),
        ks_failed: construction.iter().filter(|c| !c.passed).count(),
    };
    Ok(CheckReport { seed, samples, families, summary, audit, construction })
}

pub fn cmd_check(cfg: &JobConfig) -> Result<Output, CliError> {
    let report = run_check(cfg)?;
    log::info!("{}", check_summary_line(&report));
    for c in report.audit.checks.iter().filter(|c| c.verdict == Verdict::Fail) {
        log::error!("{} failed: {:?}", c.name, c.note);
    }
    let code = if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED };
    let mut text = serde_json::to_string_pretty(&report).expect("check report serialises");
    text.push('\n');
    Ok(Output { text, code })
}

/// Short human summary of a check report for the error stream.
pub fn check_summary_line(report: &CheckReport) -> String {
    let s = &report.summary;
    let mut line = String::new();
    let _ = write!(
        line,
        "{} MATCH, {} ERRATUM, {} SKIPPED, {} FAIL; construction {}/{} passed",
        s.matched,
        s.errata,
        s.skipped,
        s.failed,
        report.construction.len() - s.ks_failed,
        report.construction.len()
    );
    line
}
