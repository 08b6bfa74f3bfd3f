mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}", path = .0.display(), source = .1)]
    Io(PathBuf, std::io::Error),
    #[error("{0}")]
    Domain(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(..) | CliError::Domain(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

pub fn domain<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

/// Feedback shift register algebra, Espresso and algebraic attacks.
#[derive(Debug, Parser)]
#[command(name = "nlfsr", version)]
pub struct Cli {
    /// Machine-readable JSON instead of key = value text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Keystream of a register from its initial state, as hex.
    Simulate {
        #[arg(long)]
        spec: PathBuf,
        /// Initial state (leftmost character is the highest stage); overrides the file's.
        #[arg(long)]
        init: Option<String>,
        #[arg(long)]
        bits: usize,
    },
    /// Fibonacci, uniform Galois or general Galois.
    Classify {
        #[arg(long)]
        spec: PathBuf,
    },
    #[command(subcommand)]
    Transform(TransformCmd),
    #[command(subcommand)]
    Espresso(EspressoCmd),
    #[command(subcommand)]
    Attack(AttackCmd),
    /// Checks gal_i = fib_i + C[i](fib) clock by clock.
    VerifyRelation {
        #[arg(long)]
        fib: PathBuf,
        #[arg(long)]
        gal: PathBuf,
        #[arg(long)]
        clist: PathBuf,
        #[arg(long, default_value_t = 2000)]
        clocks: usize,
    },
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the resulting register file here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the compensation list here.
    #[arg(long)]
    pub clist: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum TransformCmd {
    /// Fibonacci to Galois along a shift plan.
    Fib2gal {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        plan: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// General Galois to Fibonacci.
    Gal2fib {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Uniform Galois to Fibonacci, with output-function statistics.
    Uniform {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Subcommand)]
pub enum EspressoCmd {
    /// Register file of the published Galois cipher G or of F.
    Spec {
        #[arg(long, value_enum, default_value_t = Register::G)]
        register: Register,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Keystream after the 256 initialization clocks, as hex.
    Keystream {
        /// 128-bit key, 32 hex digits, bit k_i at stage x_i (LSB-first bytes).
        #[arg(long)]
        key: String,
        /// 96-bit IV, 24 hex digits.
        #[arg(long)]
        iv: String,
        #[arg(long)]
        bits: usize,
    },
    /// The equivalent LFSR filter generator and its compensated taps.
    Transform {
        #[command(flatten)]
        output: Output,
    },
    /// Compares G and the transformed LFSR on random keys and IVs.
    Verify {
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 10_000)]
        bits: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report wall-clock time.
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Register {
    /// The 14-feedback Galois register with the published output.
    G,
    /// The register with nontrivial feedback at stages 217 and 255.
    F,
}

#[derive(Debug, Args)]
pub struct AttackInput {
    /// LFSR filter generator: Fibonacci register with linear feedback.
    #[arg(long)]
    pub spec: PathBuf,
    /// Observed keystream as hex, inline or in a file.
    #[arg(long)]
    pub keystream: String,
    /// Use only the first BITS keystream bits; hex carries whole bytes, so
    /// pass the true length when it is not a multiple of 8.
    #[arg(long)]
    pub bits: Option<usize>,
    /// Report wall-clock time.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum AttackCmd {
    /// Multiplier, characteristic polynomial and linearization.
    Standard {
        #[command(flatten)]
        input: AttackInput,
        #[arg(long, default_value_t = 2)]
        max_e: usize,
    },
    /// Cancels all nonlinear terms and solves for the state.
    Rh {
        #[command(flatten)]
        input: AttackInput,
    },
    /// Closed-form log2 costs.
    Estimate {
        #[arg(long)]
        n: usize,
        /// Degree of h (standard) or of the filter (rh).
        #[arg(long)]
        d: usize,
        /// Degree of the multiplier g.
        #[arg(long, default_value_t = 0)]
        e: usize,
        /// Filter degree; defaults to d.
        #[arg(long)]
        d_f: Option<usize>,
        #[arg(long)]
        kind: String,
        /// Constant of the precomputation formula.
        #[arg(long, default_value_t = 1.0)]
        c: f64,
    },
    /// Products of (x_i + 1) that lower the filter degree.
    Multipliers {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_e: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err((text, e)) => {
            print!("{text}");
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
