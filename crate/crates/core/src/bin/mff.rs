use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use mff::cli::{emit, load_config, run, Command, RunOptions};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Sub {
    Tau,
    Spectrum,
    Verify,
    Sample,
    Project,
}

/// Multifractal analysis of mixed-alphabet product measures.
#[derive(Debug, Parser)]
#[command(name = "mff", version)]
struct Args {
    command: Sub,
    #[arg(long)]
    config: PathBuf,
    /// Report destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Plot destination (tau, spectrum and sample).
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    workers: Option<usize>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            // usage errors are validation errors; 2 is reserved for failed checks
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let command = match args.command {
        Sub::Tau => Command::Tau,
        Sub::Spectrum => Command::Spectrum,
        Sub::Verify => Command::Verify,
        Sub::Sample => Command::Sample,
        Sub::Project => Command::Project,
    };
    let options = RunOptions {
        seed: args.seed,
        workers: args.workers,
        want_svg: args.svg.is_some(),
    };
    let result = load_config(&args.config, args.seed)
        .and_then(|config| run(command, &config, &options))
        .and_then(|report| {
            emit(&report, args.out.as_deref(), args.svg.as_deref())?;
            Ok(report.exit_code())
        });
    match result {
        Ok(0) => ExitCode::SUCCESS,
        Ok(code) => {
            eprintln!("mff: verification failed");
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("mff: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
