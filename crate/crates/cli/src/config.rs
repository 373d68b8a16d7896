use std::f64::consts::{FRAC_PI_2, FRAC_PI_8};
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use mzm_core::braiding::GateName;
use mzm_core::ite::DEFAULT_ITE_TIME;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Gates,
    Dj,
    Noise,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SweepParameter {
    Tau,
    IteTime,
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepParameter::Tau => "tau",
            SweepParameter::IteTime => "ite-time",
        })
    }
}

/// Run braiding experiments on the six-site Majorana network.
#[derive(Debug, Parser)]
#[command(name = "mzm", version)]
pub struct Args {
    /// JSON config file; flags override its fields
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub experiment: Option<Experiment>,
    /// H, Hdg, R, Rdg, Z, T, I, M (uses --tau) or M:tau=<float>
    #[arg(long)]
    pub gate: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub ite_time: Option<f64>,
    /// phase:<site>[@<pos>] or flip:<i>-<j>[@<pos>]; repeatable
    #[arg(long)]
    pub noise: Vec<String>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Shots per tomography measurement; exact expectations when absent
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long, value_enum)]
    pub sweep: Option<SweepParameter>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub values: Option<Vec<f64>>,
}

/// Config file layout; every field optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub experiment: Option<Experiment>,
    pub gate: Option<String>,
    pub tau: Option<f64>,
    pub ite_time: Option<f64>,
    pub noise: Option<Vec<String>>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
    pub shots: Option<u64>,
    pub sweep: Option<SweepParameter>,
    pub values: Option<Vec<f64>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub gate: String,
    pub tau: f64,
    pub ite_time: f64,
    pub noise: Vec<String>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub jobs: usize,
    pub seed: u64,
    pub shots: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepParameter>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<f64>,
}

impl ExperimentConfig {
    pub fn resolve(args: Args) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let experiment = args
            .experiment
            .or(file.experiment)
            .ok_or_else(|| CliError::Usage("no experiment given (use --experiment)".into()))?;
        let default_gate = if experiment == Experiment::Noise { "T" } else { "H" };
        let sweep = match experiment {
            Experiment::Sweep => Some(args.sweep.or(file.sweep).unwrap_or(SweepParameter::Tau)),
            _ => None,
        };
        let values = match sweep {
            Some(p) => args.values.or(file.values).unwrap_or_else(|| default_values(p)),
            None => Vec::new(),
        };
        let noise = if args.noise.is_empty() { file.noise.unwrap_or_default() } else { args.noise };
        let cfg = ExperimentConfig {
            experiment,
            gate: args.gate.or(file.gate).unwrap_or_else(|| default_gate.into()),
            tau: args.tau.or(file.tau).unwrap_or(FRAC_PI_8),
            ite_time: args.ite_time.or(file.ite_time).unwrap_or(DEFAULT_ITE_TIME),
            noise,
            output: args.output.or(file.output),
            format: args.format.or(file.format).unwrap_or_default(),
            jobs: args.jobs.or(file.jobs).unwrap_or(1),
            seed: args.seed.or(file.seed).unwrap_or(0),
            shots: args.shots.or(file.shots),
            sweep,
            values,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !self.tau.is_finite() {
            return Err(CliError::Usage(format!("tau must be finite, got {}", self.tau)));
        }
        if !(self.ite_time.is_finite() && self.ite_time > 0.0) {
            return Err(CliError::Usage(format!("ite_time must be positive, got {}", self.ite_time)));
        }
        if self.jobs == 0 {
            return Err(CliError::Usage("jobs must be at least 1".into()));
        }
        if self.shots == Some(0) {
            return Err(CliError::Usage("shots must be at least 1".into()));
        }
        if self.experiment == Experiment::Sweep {
            if self.values.is_empty() {
                return Err(CliError::Usage("sweep range is empty".into()));
            }
            if let Some(bad) = self.values.iter().find(|v| !v.is_finite()) {
                return Err(CliError::Usage(format!("sweep value {bad} is not finite")));
            }
            if self.sweep == Some(SweepParameter::IteTime) && self.values.iter().any(|&v| v <= 0.0) {
                return Err(CliError::Usage("ite_time sweep values must be positive".into()));
            }
        }
        if self.experiment == Experiment::Noise && self.noise.is_empty() {
            return Err(CliError::Usage("noise experiment needs at least one --noise spec".into()));
        }
        self.gate_name()?;
        Ok(())
    }

    /// `M` alone takes its duration from `tau`.
    pub fn gate_name(&self) -> Result<GateName, CliError> {
        if self.gate.trim().eq_ignore_ascii_case("m") {
            return Ok(GateName::M(self.tau));
        }
        self.gate.parse().map_err(|e| CliError::Usage(format!("{e}")))
    }
}

fn default_values(p: SweepParameter) -> Vec<f64> {
    match p {
        SweepParameter::Tau => vec![0.0, FRAC_PI_8, FRAC_PI_2],
        SweepParameter::IteTime => vec![1.0, 2.0, 5.0, 10.0, 20.0],
    }
}
