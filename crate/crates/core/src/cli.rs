//! Command-line front end: `verify <task> [options]`.
//!
//! Settings come from flags, then an optional TOML config file (same keys as
//! the long flags), then `VERIFY_JOBS` for the worker count, then defaults.
//! Exit codes: 0 when every case passes, 1 on any mathematical failure,
//! 2 on usage or I/O errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde::Deserialize;
use thiserror::Error;

use crate::identity::Trailing;
use crate::report::{Format, Runner, VerificationReport};
use crate::{congruence, identity, qpoly};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const JOBS_ENV: &str = "VERIFY_JOBS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Task {
    #[value(name = "transform")]
    Transform,
    #[value(name = "recurrence")]
    Recurrence,
    #[value(name = "chu-vandermonde")]
    ChuVandermonde,
    #[value(name = "telescope")]
    Telescope,
    #[value(name = "sun-one")]
    SunOne,
    #[value(name = "sun-two")]
    SunTwo,
    #[value(name = "theorem1")]
    Theorem1,
    #[value(name = "theorem2")]
    Theorem2,
    #[value(name = "catalan-form")]
    CatalanForm,
    #[value(name = "lemma-schmidt")]
    LemmaSchmidt,
    #[value(name = "conjecture-final")]
    ConjectureFinal,
    #[value(name = "conjecture-sun-m")]
    ConjectureSunM,
    #[value(name = "conjecture-sun-ii")]
    ConjectureSunIi,
    #[value(name = "q-sun")]
    QSun,
    #[value(name = "q-specialize")]
    QSpecialize,
    #[value(name = "all")]
    All,
}

impl Task {
    /// Every concrete task, in the order `all` runs them.
    pub const EVERY: [Task; 15] = [
        Task::Transform,
        Task::Recurrence,
        Task::ChuVandermonde,
        Task::Telescope,
        Task::SunOne,
        Task::SunTwo,
        Task::Theorem1,
        Task::Theorem2,
        Task::CatalanForm,
        Task::LemmaSchmidt,
        Task::ConjectureFinal,
        Task::ConjectureSunM,
        Task::ConjectureSunIi,
        Task::QSun,
        Task::QSpecialize,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::Transform => "transform",
            Task::Recurrence => "recurrence",
            Task::ChuVandermonde => "chu-vandermonde",
            Task::Telescope => "telescope",
            Task::SunOne => "sun-one",
            Task::SunTwo => "sun-two",
            Task::Theorem1 => "theorem1",
            Task::Theorem2 => "theorem2",
            Task::CatalanForm => "catalan-form",
            Task::LemmaSchmidt => "lemma-schmidt",
            Task::ConjectureFinal => "conjecture-final",
            Task::ConjectureSunM => "conjecture-sun-m",
            Task::ConjectureSunIi => "conjecture-sun-ii",
            Task::QSun => "q-sun",
            Task::QSpecialize => "q-specialize",
            Task::All => "all",
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_USAGE
    }
}

#[derive(Debug, Parser)]
#[command(name = "verify", version, about = "Exact verification of binomial-sum identities and congruences")]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    /// Which check to run.
    #[arg(value_enum)]
    pub task: Task,
    /// Largest exponent parameter l (default 3)
    #[arg(long)]
    pub l_max: Option<i64>,
    /// Largest n (default 20)
    #[arg(long)]
    pub n_max: Option<i64>,
    /// Largest k for the Chu-Vandermonde check (default 20)
    #[arg(long)]
    pub k_max: Option<i64>,
    /// Convolution power for conjecture-sun-m.
    #[arg(long)]
    pub m: Option<i64>,
    /// Trailing coefficient of the recurrence check.
    #[arg(long, value_enum)]
    pub trailing: Option<Trailing>,
    /// Comma-separated signs, e.g. `+1,-1`.
    #[arg(long)]
    pub eps: Option<String>,
    /// Lower end of the sampling window for spot checks (default -10)
    #[arg(long)]
    pub x_min: Option<i64>,
    /// Upper end of the sampling window for spot checks (default 10)
    #[arg(long)]
    pub x_max: Option<i64>,
    /// Worker threads (default: $VERIFY_JOBS, else all cores)
    #[arg(long)]
    pub jobs: Option<i64>,
    /// Report format (default text)
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML file with any of the long-flag keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct FileConfig {
    l_max: Option<i64>,
    n_max: Option<i64>,
    k_max: Option<i64>,
    m: Option<i64>,
    trailing: Option<Trailing>,
    eps: Option<String>,
    x_min: Option<i64>,
    x_max: Option<i64>,
    jobs: Option<i64>,
    format: Option<Format>,
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridConfig {
    pub task: Task,
    pub l_max: i64,
    pub n_max: i64,
    pub k_max: i64,
    pub m: u32,
    pub trailing: Trailing,
    pub eps: Vec<i8>,
    pub x_min: i64,
    pub x_max: i64,
    pub jobs: usize,
    pub format: Format,
    pub output_path: Option<PathBuf>,
}

impl GridConfig {
    pub fn new(task: Task) -> Self {
        GridConfig {
            task,
            l_max: 3,
            n_max: 20,
            k_max: 20,
            m: 3,
            trailing: Trailing::Cubic,
            eps: vec![1, -1],
            x_min: -10,
            x_max: 10,
            jobs: 1,
            format: Format::Text,
            output_path: None,
        }
    }

    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let file = match &cli.config {
            Some(path) => read_config_file(path)?,
            None => FileConfig::default(),
        };
        let env_jobs = match std::env::var(JOBS_ENV) {
            Ok(v) => Some(
                v.trim()
                    .parse::<i64>()
                    .map_err(|_| CliError::Usage(format!("{JOBS_ENV}={v} is not an integer")))?,
            ),
            Err(_) => None,
        };
        let default_jobs = std::thread::available_parallelism().map_or(1, |n| n.get()) as i64;
        let d = GridConfig::new(cli.task);

        let l_max = cli.l_max.or(file.l_max).unwrap_or(d.l_max);
        let n_max = cli.n_max.or(file.n_max).unwrap_or(d.n_max);
        let k_max = cli.k_max.or(file.k_max).unwrap_or(d.k_max);
        let m = cli.m.or(file.m).unwrap_or(d.m as i64);
        let x_min = cli.x_min.or(file.x_min).unwrap_or(d.x_min);
        let x_max = cli.x_max.or(file.x_max).unwrap_or(d.x_max);
        let jobs = cli.jobs.or(file.jobs).or(env_jobs).unwrap_or(default_jobs);
        let eps = match cli.eps.or(file.eps) {
            Some(s) => parse_eps(&s)?,
            None => d.eps,
        };

        for (name, v) in [("l-max", l_max), ("n-max", n_max), ("k-max", k_max), ("m", m), ("jobs", jobs)] {
            if v < 1 {
                return Err(CliError::Usage(format!("--{name} must be a positive integer, got {v}")));
            }
        }
        if m > u32::MAX as i64 {
            return Err(CliError::Usage(format!("--m is too large: {m}")));
        }
        if x_min > x_max {
            return Err(CliError::Usage(format!("--x-min ({x_min}) exceeds --x-max ({x_max})")));
        }
        Ok(GridConfig {
            task: cli.task,
            l_max,
            n_max,
            k_max,
            m: m as u32,
            trailing: cli.trailing.or(file.trailing).unwrap_or(d.trailing),
            eps,
            x_min,
            x_max,
            jobs: jobs as usize,
            format: cli.format.or(file.format).unwrap_or(d.format),
            output_path: cli.out.or(file.out),
        })
    }
}

fn read_config_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
}

pub fn parse_eps(s: &str) -> Result<Vec<i8>, CliError> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let e = match part {
            "+1" | "1" => 1,
            "-1" => -1,
            other => return Err(CliError::Usage(format!("eps values must be +1 or -1, got {other:?}"))),
        };
        if !out.contains(&e) {
            out.push(e);
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("eps set is empty".into()));
    }
    out.sort_unstable();
    Ok(out)
}

fn run_task(task: Task, cfg: &GridConfig, runner: &Runner) -> Result<VerificationReport, CliError> {
    let n = cfg.n_max;
    let nu = n as usize;
    let report = match task {
        Task::Transform => identity::verify_transformation(nu, runner),
        Task::Recurrence => identity::verify_recurrence(nu, cfg.trailing, runner),
        Task::ChuVandermonde => identity::verify_chu_vandermonde(cfg.k_max as usize, runner),
        Task::Telescope => identity::verify_telescoped_sum(nu, runner),
        Task::SunOne => identity::verify_sun_identity_one(nu, runner),
        Task::SunTwo => identity::verify_sun_identity_two(nu, runner),
        Task::Theorem1 => congruence::check_theorem1(cfg.l_max, n, &cfg.eps, runner),
        Task::Theorem2 => congruence::check_theorem2(n, runner),
        Task::CatalanForm => congruence::check_catalan_form(n, cfg.x_min, cfg.x_max, runner),
        Task::LemmaSchmidt => congruence::check_lemma_schmidt(cfg.l_max, n, &cfg.eps, runner),
        Task::ConjectureFinal => congruence::check_conjecture_final(cfg.l_max, n, runner)
            .map_err(|e| CliError::Usage(e.to_string()))?,
        Task::ConjectureSunM => {
            congruence::check_conjecture_sun_m(cfg.m, cfg.l_max, n, &cfg.eps, cfg.x_min, cfg.x_max, runner)
        }
        Task::ConjectureSunIi => congruence::check_conjecture_sun_ii(cfg.l_max, n, runner),
        Task::QSun => qpoly::check_q_sun(n, runner),
        Task::QSpecialize => qpoly::q_specialization_check(n, runner),
        Task::All => {
            let start = Instant::now();
            let parts = Task::EVERY
                .iter()
                .map(|&t| run_task(t, cfg, runner))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(VerificationReport::merge("all", config_echo_for(cfg), parts).with_wall_time(start.elapsed()));
        }
    };
    Ok(report)
}

fn config_echo_for(cfg: &GridConfig) -> Vec<(String, String)> {
    let eps: Vec<&str> = cfg.eps.iter().map(|e| if *e < 0 { "-1" } else { "+1" }).collect();
    crate::config_echo!(
        "l_max" => cfg.l_max, "n_max" => cfg.n_max, "k_max" => cfg.k_max, "m" => cfg.m,
        "trailing" => cfg.trailing.label(), "eps" => eps.join(","), "x_min" => cfg.x_min, "x_max" => cfg.x_max,
    )
}

/// Runs the configured task. The worker count never changes the report.
pub fn run(cfg: &GridConfig) -> Result<VerificationReport, CliError> {
    run_task(cfg.task, cfg, &Runner::with_jobs(cfg.jobs))
}

pub fn exit_code(report: &VerificationReport) -> i32 {
    if report.all_pass() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

/// Writes the serialized report to the configured path, or stdout.
pub fn emit(report: &VerificationReport, cfg: &GridConfig) -> Result<(), CliError> {
    let body = report.serialize(cfg.format);
    match &cfg.output_path {
        Some(path) => fs::write(path, body).map_err(|source| CliError::Output {
            path: path.clone(),
            source,
        }),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes()).map_err(|source| CliError::Output {
                path: PathBuf::from("<stdout>"),
                source,
            })
        }
    }
}

/// Full CLI flow; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = GridConfig::from_cli(cli).and_then(|cfg| {
        let report = run(&cfg)?;
        emit(&report, &cfg)?;
        Ok(report)
    });
    match result {
        Ok(report) => {
            if let Some(cx) = &report.counterexample {
                eprintln!(
                    "{} failure(s); first: {} {} ({}) {}",
                    report.summary.fail,
                    cx.task,
                    cx.key,
                    cx.severity.as_str(),
                    cx.witness.as_deref().unwrap_or("")
                );
            }
            exit_code(&report)
        }
        Err(e) => {
            eprintln!("verify: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<GridConfig, CliError> {
        let cli = Cli::try_parse_from(std::iter::once("verify").chain(args.iter().copied())).unwrap();
        GridConfig::from_cli(cli)
    }

    #[test]
    fn eps_parsing() {
        assert_eq!(parse_eps("+1,-1").unwrap(), vec![-1, 1]);
        assert_eq!(parse_eps("-1").unwrap(), vec![-1]);
        assert_eq!(parse_eps("1, 1").unwrap(), vec![1]);
        assert!(parse_eps("2").is_err());
        assert!(parse_eps("").is_err());
    }

    #[test]
    fn bounds_validated() {
        assert!(matches!(parse(&["transform", "--n-max", "-1"]), Err(CliError::Usage(_))));
        assert!(matches!(parse(&["theorem1", "--l-max", "0"]), Err(CliError::Usage(_))));
        assert!(matches!(parse(&["catalan-form", "--x-min", "3", "--x-max", "2"]), Err(CliError::Usage(_))));
        let cfg = parse(&["transform", "--n-max", "5", "--jobs", "2"]).unwrap();
        assert_eq!((cfg.n_max, cfg.jobs, cfg.l_max), (5, 2, 3));
    }

    #[test]
    fn unknown_task_is_usage_error() {
        assert_eq!(main_with_args(["verify", "nonsense"]), EXIT_USAGE);
    }

    #[test]
    fn task_names() {
        assert_eq!(Task::ConjectureSunIi.name(), "conjecture-sun-ii");
        assert_eq!(Task::QSpecialize.name(), "q-specialize");
    }

    #[test]
    fn transform_run() {
        let mut cfg = GridConfig::new(Task::Transform);
        cfg.n_max = 10;
        let r = run(&cfg).unwrap();
        assert_eq!(r.summary.total, 11);
        assert_eq!(exit_code(&r), EXIT_OK);
    }
}
