//! Command-line front end for `gaussmod`: builds instances, runs the
//! verification suites and writes JSON or CSV reports.
//!
//! Exit codes: 0 when every check holds, 1 when a check fails or a
//! computation errors, 2 when the arguments or config are rejected before
//! anything is computed.

pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;

use clap::Parser;

use config::{Cli, Command, Format, InequalityConfig, OutputConfig, PerturbConfig, ThermalConfig};
use report::{RunReport, Status};

pub const THREADS_ENV: &str = "GAUSSMOD_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Compute(#[from] gaussmod::Error),
    #[error("{0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Compute(_) | CliError::Output(_) => 1,
        }
    }
}

/// Worker pool sized by `GAUSSMOD_THREADS`, or rayon's default.
pub fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let n: usize = raw
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Config(format!("{THREADS_ENV} must be a positive integer (got {raw:?})")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker threads: {e}")))
}

fn emit(report: &RunReport, output: &OutputConfig) -> Result<(), CliError> {
    let text = match output.format {
        Format::Json => report.render_json(),
        Format::Csv => report.render_csv(),
    };
    match &output.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Output(format!("cannot write {}: {e}", path.display())))?;
            eprintln!("{} ({} checks) -> {}", report.status().as_str(), report.results.len(), path.display());
        }
        None => print!("{text}"),
    }
    for r in report.failures() {
        eprintln!("FAILED {}: lhs {:e} rhs {:e}{}", r.name, r.lhs, r.rhs, r.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default());
    }
    for e in &report.errors {
        eprintln!("error in {e}");
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<Status, CliError> {
    let file = match &cli.config {
        Some(path) => config::load_config_file(path)?,
        None => Default::default(),
    };
    let (report, output) = match &cli.command {
        Command::Thermal(args) => {
            let cfg = ThermalConfig::resolve(args, file)?;
            (commands::thermal(&cfg)?, cfg.output)
        }
        Command::Perturb(args) => {
            let cfg = PerturbConfig::resolve(args, file)?;
            let pool = thread_pool()?;
            (commands::perturb(&cfg, &pool)?, cfg.output)
        }
        Command::Inequalities(args) => {
            let cfg = InequalityConfig::resolve(args, file)?;
            let pool = thread_pool()?;
            (commands::inequalities(&cfg, &pool)?, cfg.output)
        }
    };
    emit(&report, &output)?;
    Ok(report.status())
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(Status::Pass) => 0,
        Ok(_) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
