mod config;
mod experiments;
mod report;

use std::fmt;
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;

use config::{Args, ExperimentConfig, Format};
use experiments::Results;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config, recipe or noise spec; exit 2.
    Usage(String),
    /// A numerical check failed; exit 3.
    Validation(String),
    /// As `Validation`, with the report still written.
    Failed(String, Box<Results>),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Validation(m) | CliError::Failed(m, _) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validation(_) | CliError::Failed(..) => 3,
            CliError::Io(_) => 1,
        }
    }
}

#[derive(Serialize)]
struct Report<'a> {
    version: &'static str,
    config: &'a ExperimentConfig,
    results: &'a Results,
}

fn render(cfg: &ExperimentConfig, results: &Results) -> Result<String, CliError> {
    match cfg.format {
        Format::Json => {
            let report = Report { version: env!("CARGO_PKG_VERSION"), config: cfg, results };
            let mut s = serde_json::to_string_pretty(&report).map_err(|e| CliError::Io(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut s = format!("# mzm {} {}\n", env!("CARGO_PKG_VERSION"), serde_json::to_string(cfg).map_err(|e| CliError::Io(e.to_string()))?);
            s.push_str(&experiments::csv(results).map_err(|e| CliError::Io(e.to_string()))?);
            Ok(s)
        }
    }
}

fn emit(cfg: &ExperimentConfig, results: &Results) -> Result<(), CliError> {
    let text = render(cfg, results)?;
    match &cfg.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(args: Args) -> Result<(), CliError> {
    let cfg = ExperimentConfig::resolve(args)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| CliError::Io(e.to_string()))?;
    match pool.install(|| experiments::run(&cfg)) {
        Ok(results) => emit(&cfg, &results),
        Err(CliError::Failed(msg, results)) => {
            emit(&cfg, &results)?;
            Err(CliError::Validation(msg))
        }
        Err(e) => Err(e),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
