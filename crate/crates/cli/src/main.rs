//! `mrpower`: cohering powers, conversion channels and verification suites
//! from the command line.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::commands::Failure;

#[derive(Parser, Debug)]
#[command(name = "mrpower", version, about = "Measurement-cohering power toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum What {
    /// measurement-cohering power
    C,
    /// state-cohering power
    Cg,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the cohering powers of a channel file.
    Power {
        channel_file: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        what: What,
    },
    /// Build the CNOT conversion channel and print its certificate.
    Convert {
        channel_file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Largest accepted local dimension.
        #[arg(long, default_value_t = mrpower_core::powers::CONVERSION_DIM_CAP)]
        cap: usize,
    },
    /// Run randomized verification suites.
    Verify {
        /// Suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Override every suite's own tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Grid resolution for the cm_oracle suite.
        #[arg(long, default_value_t = 1000)]
        grid_steps: usize,
    },
    /// Write one of the built-in example channels as a channel file.
    Example {
        /// prep | g | hadamard | qubit_dephase | cnot2
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("MRPOWER_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Failure::usage(format!("MRPOWER_THREADS must be an integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::usage(format!("cannot configure thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match cli.command {
        Command::Power { channel_file, what } => commands::power(&channel_file, what),
        Command::Convert {
            channel_file,
            out,
            cap,
        } => commands::convert(&channel_file, &out, cap),
        Command::Verify {
            suite,
            dim,
            trials,
            seed,
            tol,
            out,
            format,
            grid_steps,
        } => commands::verify(commands::VerifyArgs {
            suite,
            dim,
            trials,
            seed,
            tol,
            out,
            format,
            grid_steps,
        }),
        Command::Example { name, out } => commands::example(&name, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
