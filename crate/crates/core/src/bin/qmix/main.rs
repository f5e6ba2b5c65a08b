//! `qmix`: build finite groups, compute character tables, and check mixing
//! inequalities from the command line.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical check fails
//! (a witness is printed), 2 for malformed input or usage errors.

mod commands;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qmix::Error;

#[derive(Parser)]
#[command(name = "qmix", version, about = "Finite-group Fourier analysis and mixing checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Bnp,
    Derivative,
    Gamma,
    Fcmu,
    Parseval,
    Chain,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Build a group and print its order, commutativity and class count.
    Group {
        spec: String,
        /// Write the multiplication table as a QMG1 file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Compute and certify the character table.
    Chartab {
        spec: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Run seeded instances of the inequality verifiers.
    Verify {
        spec: String,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Run only this trial index (used to replay witnesses).
        #[arg(long)]
        trial: Option<usize>,
        /// Sampled pairs for the Gamma functional on large groups.
        #[arg(long, default_value_t = 2000)]
        budget: usize,
        /// Largest order on which the chain diagnostics run.
        #[arg(long, default_value_t = qmix::mixing::DEFAULT_CHAIN_MAX_ORDER)]
        max_order: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Evaluate the mixing defect of set triples.
    Mix {
        spec: String,
        /// Three index arrays as JSON, inline or as a file path.
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        sets: Option<String>,
        /// Draw random sets with this membership probability.
        #[arg(long)]
        random: Option<f64>,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Hill-climb for set triples with large mixing defect.
    Search {
        spec: String,
        #[arg(long, default_value_t = 5000)]
        budget: usize,
        #[arg(long, default_value_t = 5)]
        restarts: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

/// Outcome of a command that ran to completion.
pub enum Outcome {
    Passed,
    Failed,
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("QMIX_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("QMIX_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn run(cli: Cli) -> qmix::Result<Outcome> {
    match cli.command {
        Command::Group { spec, out, format } => commands::group(&spec, out.as_deref(), format),
        Command::Chartab {
            spec,
            format,
            seed,
            tol,
        } => commands::chartab(&spec, format, seed, tol),
        Command::Verify {
            spec,
            suite,
            trials,
            seed,
            tol,
            trial,
            budget,
            max_order,
            format,
        } => verify::run(&verify::Options {
            spec,
            suite,
            trials,
            seed,
            tol,
            trial,
            budget,
            max_order,
            format,
        }),
        Command::Mix {
            spec,
            sets,
            random,
            trials,
            seed,
            tol,
            format,
        } => commands::mix(&spec, sets.as_deref(), random, trials, seed, tol, format),
        Command::Search {
            spec,
            budget,
            restarts,
            seed,
            tol,
            format,
        } => commands::search(&spec, budget, restarts, seed, tol, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(Outcome::Passed) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e @ Error::Certification(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
