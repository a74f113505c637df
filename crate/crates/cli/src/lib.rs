//! Library side of the `entdist` command-line tool.

pub mod config;
pub mod error;
pub mod measure;
pub mod sweep;
pub mod verify;

use std::path::Path;

use config::{Cli, Command, FileConfig, Settings};
use error::{CliError, CliResult};

fn write_output(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::file(path, e)),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::file(Path::new("<stdout>"), e))
        }
    }
}

fn in_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> CliResult<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(job))
}

/// Executes a parsed command line.
pub fn run(cli: Cli) -> CliResult<()> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Measure { state, common } => {
            let settings = Settings::resolve(common, &file)?;
            let path = state
                .or_else(|| file.state.clone())
                .ok_or_else(|| CliError::Usage("measure needs --state FILE".into()))?;
            let text = in_pool(settings.workers, || measure::run(&path, &settings))??;
            write_output(settings.out.as_deref(), &text)
        }
        Command::Sweep { family, grid, common } => {
            let settings = Settings::resolve(common, &file)?;
            let family = family
                .or(file.family)
                .ok_or_else(|| CliError::Usage("sweep needs --family werner|bd-face|bd-custom".into()))?;
            let grid = grid.or_else(|| file.grid.clone());
            let spec = sweep::SweepSpec::new(family, grid.as_deref(), &settings)?;
            let text = in_pool(settings.workers, || sweep::run(&spec))??;
            write_output(settings.out.as_deref(), &text)
        }
        Command::Verify { count, inject_fault, common } => {
            let settings = Settings::resolve(common, &file)?;
            let count = count.or(file.count).unwrap_or(verify::DEFAULT_COUNT);
            if count == 0 {
                return Err(CliError::Usage("count must be at least 1".into()));
            }
            let report = in_pool(settings.workers, || {
                verify::run(settings.optimizer.seed, count, inject_fault, &settings.optimizer)
            })?;
            let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
            write_output(settings.out.as_deref(), &text)?;
            if report.failed > 0 {
                return Err(CliError::VerifyFailed { failed: report.failed, total: report.properties.len() });
            }
            Ok(())
        }
    }
}
