//! `cyclocong`: bounds, residue-class experiments, congruence verification
//! and Euler normalization from the command line.
//!
//! Exit codes: 0 success, 1 a checked statement failed, 2 bad arguments,
//! configuration or input, 3 budget or key-count cap exceeded.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cyclocong::Error;

#[derive(Debug, Parser)]
#[command(name = "cyclocong", version, about = "Characteristic-polynomial congruences for Hermitian root-of-unity matrices")]
struct Cli {
    /// TOML file with default values for any flag (flags take precedence).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the closed-form bound on the number of residue classes.
    Bounds(BoundsArgs),
    /// Count distinct residue keys of characteristic polynomials.
    Classes(ClassesArgs),
    /// Run a verification suite on random matrices or on one matrix file.
    Verify(VerifyArgs),
    /// Switch a matrix so that its residue graph is Euler.
    Normalize(NormalizeArgs),
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write machine output here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// jsonl or csv.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    e: Option<u32>,
    /// even or odd; both rows are printed when omitted.
    #[arg(long)]
    parity: Option<String>,
    /// hermitian (default) or seidel.
    #[arg(long)]
    family: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ClassesArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    e: Option<u32>,
    /// hermitian (default) or seidel.
    #[arg(long)]
    family: Option<String>,
    /// exhaustive (default) or sample.
    #[arg(long)]
    mode: Option<String>,
    /// Exhaustive: largest enumeration allowed. Sample: number of draws.
    #[arg(long)]
    budget: Option<u64>,
    /// Required for sampling.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Sample until the bound is reached, recording when each key appears.
    #[arg(long)]
    probe: bool,
    /// Abort once this many distinct keys are held.
    #[arg(long)]
    key_cap: Option<usize>,
    /// Include wall-clock time in the report (makes output nondeterministic).
    #[arg(long)]
    timings: bool,
    #[arg(long, hide = true, value_name = "FAULT")]
    inject_fault: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// congruences, walks, orbits, euler or a4k1.
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    n: Option<usize>,
    /// Number of random matrices (default 100).
    #[arg(long)]
    samples: Option<u64>,
    /// Required unless --matrix is given.
    #[arg(long)]
    seed: Option<u64>,
    /// Walk lengths for the walks suite, comma separated (default 3,4,5,6).
    #[arg(long = "N", value_delimiter = ',')]
    lens: Option<Vec<usize>>,
    /// The k of the a4k1 suite (default 2).
    #[arg(long)]
    k: Option<usize>,
    /// Orbit suite: largest vertex count (default 4).
    #[arg(long)]
    max_vertices: Option<usize>,
    /// Orbit and euler suites: largest walk length (default 6).
    #[arg(long = "max-N")]
    max_len: Option<usize>,
    /// Check this matrix instead of random ones.
    #[arg(long, value_name = "FILE")]
    matrix: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct NormalizeArgs {
    /// Matrix file in text or JSON form.
    #[arg(long, value_name = "FILE")]
    matrix: Option<PathBuf>,
    /// Also write the normalized matrix here in text form.
    #[arg(long, value_name = "FILE")]
    matrix_out: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug)]
enum CliError {
    Config(String),
    Core(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => f.write_str(msg),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::TheoremViolation(_)) => 1,
            CliError::Core(Error::Budget { .. } | Error::KeyCap { .. }) => 3,
            _ => 2,
        }
    }
}

/// Whether every checked statement held.
#[derive(Debug, PartialEq, Eq)]
enum Verdict {
    Pass,
    Violation,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = config::FileConfig::load(cli.config.as_deref()).and_then(|file| match cli.command {
        Command::Bounds(a) => commands::bounds(a, file),
        Command::Classes(a) => commands::classes(a, file),
        Command::Verify(a) => commands::verify(a, file),
        Command::Normalize(a) => commands::normalize(a, file),
    });
    match result {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
