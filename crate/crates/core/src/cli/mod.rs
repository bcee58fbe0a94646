//! Command-line front end: `ness-chain <steady|symmetry|sweep|classical> --config FILE`.
//!
//! Exit codes: 0 on success, 1 when a solve or a symmetry check fails,
//! 2 for invalid arguments or configuration (no output is written).

mod commands;
mod config;
mod output;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser};
use serde_json::json;

pub use commands::{execute, Command, Failure, Report, CURRENT_PARITY_TOL, OPERATOR_IDENTITY_TOL};
pub use config::{
    BathSection, ClassicalSection, ExperimentConfig, Format, LinearizedSection, ModelSection,
    OutputSection, SolverSection, SweepAxis, SweepSection, SymmetrySection, SWEEP_PARAMETERS,
};
pub use output::{Cell, Table};

use crate::error::Error;
use crate::lindblad::Method;

#[derive(Debug, Parser)]
#[command(
    name = "ness-chain",
    version,
    about = "Steady states of boundary-driven XXZ chains"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// TOML experiment file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; overrides `output.path`. Without either, writes to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for independent solves.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Steady-state method: auto, dense_null or evolve.
    #[arg(long, global = true)]
    pub method: Option<Method>,
}

/// Loads the config file and folds command-line overrides into it.
pub fn resolve_config(common: &CommonArgs) -> Result<ExperimentConfig, Error> {
    let path = common
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("--config FILE is required".into()))?;
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(out) = &common.out {
        cfg.output.path = Some(out.display().to_string());
    }
    if let Some(f) = common.format {
        cfg.output.format = f;
    }
    if let Some(w) = common.workers {
        cfg.output.workers = Some(w);
    }
    if let Some(m) = common.method {
        cfg.solver.method = m;
    }
    if cfg.output.workers == Some(0) {
        return Err(Error::Config("workers must be at least 1".into()));
    }
    Ok(cfg)
}

/// Runs a command in a thread pool sized by `output.workers`.
pub fn run_command(command: Command, cfg: &ExperimentConfig) -> Result<Report, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cfg.output.workers {
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| Failure::Config(Error::Config(format!("thread pool: {e}"))))?;
    pool.install(|| execute(command, cfg))
}

fn write_report(command: Command, cfg: &ExperimentConfig, report: &Report) -> Result<(), Error> {
    let header = json!({
        "command": command.name(),
        "config": cfg,
        "resolved": report.resolved,
    });
    match &cfg.output.path {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Error::Config(format!("cannot create {path}: {e}")))?;
            let mut w = BufWriter::new(file);
            report.table.write(&mut w, cfg.output.format, &header)?;
            w.flush()
                .map_err(|e| Error::Config(format!("write failed: {e}")))
        }
        None => {
            let stdout = std::io::stdout();
            report
                .table
                .write(stdout.lock(), cfg.output.format, &header)
        }
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let cfg = match resolve_config(&cli.common) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let report = match run_command(cli.command, &cfg) {
        Ok(r) => r,
        Err(f) => {
            eprintln!("error: {}", f.error());
            return f.exit_code();
        }
    };
    if let Err(e) = write_report(cli.command, &cfg, &report) {
        eprintln!("error: {e}");
        return 1;
    }
    if report.failed_checks > 0 {
        eprintln!("{} symmetry check(s) failed", report.failed_checks);
        return 1;
    }
    0
}
