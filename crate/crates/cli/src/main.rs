//! `catenoid`: verification suite, symmetric family, inverse solver and mesh export.
//!
//! Exit codes: 0 success, 1 mathematical failure, 2 input or usage failure.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "catenoid", version, about = "Construct and certify n-end catenoids from flux data")]
struct Cli {
    /// Log progress to stderr (repeat for more).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    /// Run everything on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity suite and optionally write a JSON manifest.
    Verify {
        #[arg(long, default_value_t = 10)]
        m_max: usize,
        /// Replace every tolerance bound.
        #[arg(long)]
        tol: Option<f64>,
        /// Run a single group.
        #[arg(long)]
        only: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Write the symmetric (m+1)-end configuration with its flux data.
    Symmetric {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Solve for a configuration realizing target flux data.
    Solve {
        #[arg(long)]
        target: PathBuf,
        #[arg(long, conflicts_with = "from_symmetric")]
        seed: Option<PathBuf>,
        /// Seed from the symmetric family, as `M,R`.
        #[arg(long, value_parser = parse_pair)]
        from_symmetric: Option<(usize, f64)>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Sample the surface of a configuration and write OBJ.
    Mesh {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 12)]
        rings: usize,
        #[arg(long, default_value_t = 32)]
        radial: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn parse_pair(s: &str) -> Result<(usize, f64), String> {
    let (m, r) = s.split_once(',').ok_or_else(|| format!("expected M,R, got {s:?}"))?;
    Ok((m.trim().parse().map_err(|e| format!("bad M: {e}"))?, r.trim().parse().map_err(|e| format!("bad R: {e}"))?))
}

/// Failure class, mapped onto the exit code.
#[derive(Debug)]
pub enum Failure {
    Math(anyhow::Error),
    Input(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Math(_) => 1,
            Failure::Input(_) => 2,
        }
    }
}

/// Library errors that describe bad input rather than a failed computation.
pub fn classify(e: catenoid::Error) -> Failure {
    use catenoid::Error::*;
    match e {
        Argument(_) | Dimension(_) | Parse(_) | DegenerateFamily(_) | ExcludedMu(_) | Branched(_)
        | CoincidentEnds(..) | UnsupportedNormal | Normalization(_) => Failure::Input(e.into()),
        _ => Failure::Math(e.into()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();
    let execution = if cli.sequential { catenoid::Execution::Sequential } else { catenoid::Execution::default() };

    let outcome = match cli.command {
        Command::Verify { m_max, tol, only, json } => commands::verify(m_max, tol, only, json.as_deref(), execution),
        Command::Symmetric { m, r, output } => commands::symmetric(m, r, &output),
        Command::Solve { target, seed, from_symmetric, output } => {
            commands::solve(&target, seed.as_deref(), from_symmetric, &output, execution)
        }
        Command::Mesh { config, rings, radial, output } => commands::mesh(&config, rings, radial, &output, execution),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Math(e) | Failure::Input(e)) = &f;
            eprintln!("error: {e:#}");
            ExitCode::from(f.code())
        }
    }
}
