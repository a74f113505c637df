//! Command-line flags and the optional TOML config file.
//!
//! The config file accepts the flag names as keys (`zero-threshold`,
//! `paper-normalization`, ...). A flag given on the command line wins over
//! the file, the file wins over `ENTDIST_WORKERS`, and that wins over the
//! built-in defaults.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use entdist::{EdMode, OptimizerOptions};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub const WORKERS_ENV: &str = "ENTDIST_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Werner,
    BdFace,
    BdCustom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    Qcd,
    Ed,
    Concurrence,
    Ppt,
}

/// Test-only corruptions for checking that `verify` notices them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    /// Builds Bell-diagonal states from a basis with one sign flipped.
    BellSign,
}

#[derive(Debug, Parser)]
#[command(name = "entdist", version, about = "Distance-based correlation and entanglement measures for qubit states")]
pub struct Cli {
    /// TOML file with defaults for any of the flags below.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the measures on a state read from a JSON file.
    Measure {
        #[arg(long, value_name = "FILE")]
        state: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Tabulate the measures over the Werner line or the Bell-diagonal tetrahedron.
    Sweep {
        #[arg(long, value_enum)]
        family: Option<Family>,
        /// `N`, or `lo:hi:N`; comma-separate one spec per axis.
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the cross-checks between closed forms, oracles and optimizers.
    Verify {
        /// Random samples per property.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<Fault>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    #[arg(long, value_enum, value_delimiter = ',')]
    pub measures: Option<Vec<Measure>>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<EdMode>,
    #[arg(long)]
    pub zero_threshold: Option<f64>,
    /// Report C/2 and E/2 instead of C and E.
    #[arg(long)]
    pub paper_normalization: bool,
    /// Worker threads; defaults to $ENTDIST_WORKERS, then to the core count.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

fn parse_mode(s: &str) -> Result<EdMode, String> {
    s.parse().map_err(|e: entdist::Error| e.to_string())
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub state: Option<PathBuf>,
    pub family: Option<Family>,
    pub grid: Option<String>,
    pub count: Option<usize>,
    pub measures: Option<Vec<Measure>>,
    pub restarts: Option<usize>,
    pub seed: Option<u64>,
    pub mode: Option<EdMode>,
    pub zero_threshold: Option<f64>,
    pub paper_normalization: Option<bool>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub m_max: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::file(path, e))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Config { path: path.display().to_string(), message: e.to_string() })
    }
}

/// Flags merged with the config file.
#[derive(Debug, Clone)]
pub struct Settings {
    pub measures: Option<Vec<Measure>>,
    pub optimizer: OptimizerOptions,
    pub paper_normalization: bool,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
}

impl Settings {
    pub fn resolve(common: CommonArgs, file: &FileConfig) -> CliResult<Self> {
        let defaults = OptimizerOptions::default();
        let optimizer = OptimizerOptions {
            restarts: common.restarts.or(file.restarts).unwrap_or(defaults.restarts),
            seed: common.seed.or(file.seed).unwrap_or(defaults.seed),
            mode: common.mode.or(file.mode).unwrap_or(defaults.mode),
            zero_threshold: common.zero_threshold.or(file.zero_threshold).unwrap_or(defaults.zero_threshold),
            m_max: file.m_max,
            ..defaults
        };
        optimizer.validate()?;
        let workers = match common.workers.or(file.workers) {
            Some(n) => Some(n),
            None => match std::env::var(WORKERS_ENV) {
                Ok(v) => Some(v.trim().parse().map_err(|_| {
                    CliError::Usage(format!("{WORKERS_ENV}={v:?} is not a worker count"))
                })?),
                Err(_) => None,
            },
        };
        if workers == Some(0) {
            return Err(CliError::Usage("workers must be at least 1".into()));
        }
        let mut measures = common.measures.or_else(|| file.measures.clone());
        if let Some(m) = measures.as_mut() {
            m.sort();
            m.dedup();
        }
        Ok(Self {
            measures,
            optimizer,
            paper_normalization: common.paper_normalization || file.paper_normalization.unwrap_or(false),
            workers,
            out: common.out.or_else(|| file.out.clone()),
        })
    }

    pub fn scale(&self) -> f64 {
        if self.paper_normalization {
            0.5
        } else {
            1.0
        }
    }
}
