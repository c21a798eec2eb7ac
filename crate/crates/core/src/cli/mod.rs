//! Command-line front end: JSON configs in, CSV/JSON/SVG reports out.

mod commands;
mod config;
mod format;
mod svg;

use std::path::{Path, PathBuf};

pub use commands::{cmd_project, cmd_sample, cmd_spectrum, cmd_tau, cmd_verify, Model};
pub use config::{
    Grid, ProjectSection, RunConfig, SampleMeasure, SampleSection, SpectrumSection, TauSection,
    VerifySection, WeightValue, Weights,
};
pub use svg::{Plot, Series, SeriesStyle};

use crate::error::Error;

/// Subcommands of the `mff` binary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Tau,
    Spectrum,
    Verify,
    Sample,
    Project,
}

/// Failure of a CLI run, with its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] Error),
    #[error("{path}: {message}")]
    ConfigFile { path: PathBuf, message: String },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot start worker pool: {0}")]
    Workers(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(Error::Resource { .. }) => 3,
            _ => 1,
        }
    }
}

/// A rendered report.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    /// CSV or JSON body.
    pub body: String,
    pub svg: Option<String>,
    /// False when a verification suite failed.
    pub passed: bool,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            2
        }
    }
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub want_svg: bool,
}

/// Loads a config file, applying a seed override.
pub fn load_config(path: &Path, seed: Option<u64>) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::ConfigFile {
        path: path.to_owned(),
        message: e.to_string(),
    })?;
    let mut config = RunConfig::from_json(&text).map_err(|message| CliError::ConfigFile {
        path: path.to_owned(),
        message,
    })?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    Ok(config)
}

/// Runs `command` on a parsed config inside a worker pool of the requested size.
pub fn run(command: Command, config: &RunConfig, options: &RunOptions) -> Result<Report, CliError> {
    let workers = options.workers.or(config.workers).unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Workers(e.to_string()))?;
    let report = pool.install(|| match command {
        Command::Tau => cmd_tau(config, options.want_svg),
        Command::Spectrum => cmd_spectrum(config, options.want_svg),
        Command::Verify => cmd_verify(config),
        Command::Sample => cmd_sample(config, options.want_svg),
        Command::Project => cmd_project(config),
    })?;
    Ok(report)
}

/// Writes `report` to `out` (or stdout) and its plot to `svg`.
pub fn emit(report: &Report, out: Option<&Path>, svg: Option<&Path>) -> Result<(), CliError> {
    let write = |path: &Path, text: &str| {
        std::fs::write(path, text).map_err(|source| CliError::Write {
            path: path.to_owned(),
            source,
        })
    };
    match out {
        Some(path) => write(path, &report.body)?,
        None => print!("{}", report.body),
    }
    if let (Some(path), Some(text)) = (svg, &report.svg) {
        write(path, text)?;
    }
    Ok(())
}
