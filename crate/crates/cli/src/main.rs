//! `bimono`: command-line front end for the exact bi-monotonic toolkit.

mod commands;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bimono::io::error_document;
use commands::Failure;

#[derive(Parser, Debug)]
#[command(name = "bimono", version, about = "Exact bi-monotonic combinatorics, transforms and positivity checks")]
pub struct Cli {
    #[command(flatten)]
    pub job: JobConfig,
    #[command(subcommand)]
    pub verb: Verb,
}

/// Options shared by every verb.
#[derive(Args, Debug, Clone)]
pub struct JobConfig {
    /// Truncation order for grids and series.
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..=16))]
    pub order: u64,
    /// Largest word length for partition enumeration.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u64).range(0..=12))]
    pub bound: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum LimitKind {
    Clt,
    Poisson,
    Compound,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// List BNC(χ), BM(χ) with `--bm`, or π_{χ,ω} with `--omega`.
    Partitions {
        #[arg(long)]
        chi: String,
        #[arg(long, conflicts_with = "omega")]
        bm: bool,
        /// Comma-separated family labels, one per letter of χ.
        #[arg(long)]
        omega: Option<String>,
    },
    /// Word or grid moments to cumulants.
    MomentsToCumulants {
        /// Input file, or `-` for stdin.
        #[arg(long = "in", default_value = "-")]
        input: String,
    },
    /// Word or grid cumulants to moments of the time-`t` law.
    CumulantsToMoments {
        #[arg(long = "in", default_value = "-")]
        input: String,
        /// Rational time; moments are polynomials in t evaluated here.
        #[arg(long, default_value = "1")]
        time: String,
    },
    /// Moments of (a₁ + a₂, b₁ + b₂) for independent pairs.
    Convolve {
        #[arg(long = "in", num_args = 2, required = true, value_names = ["A", "B"])]
        input: Vec<String>,
    },
    /// Cauchy and reciprocal transforms of a grid; for grid cumulants, the
    /// generating functions and the time-`t` Cauchy transform.
    Transform {
        #[arg(long = "in", default_value = "-")]
        input: String,
        #[arg(long, default_value = "1")]
        time: String,
    },
    /// Vacuum expectation of a word of type II operators.
    Type2 {
        #[arg(long)]
        spaces: String,
        #[arg(long)]
        word: String,
    },
    /// Exact positive-semidefiniteness check of a matrix or moment matrix.
    PsdCheck {
        #[arg(long = "in", default_value = "-")]
        input: String,
        /// Size n of the moment matrix built from grid moments.
        #[arg(long, default_value_t = 1)]
        size: usize,
    },
    /// Limit-law cumulants, moments and positivity verdict.
    Limit {
        #[arg(long, value_enum)]
        kind: LimitKind,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long)]
        gamma: Option<String>,
        #[arg(long)]
        lambda: Option<String>,
        /// Jump measure for `compound`.
        #[arg(long)]
        tau: Option<String>,
        /// Size n of the moment matrix (0 skips the check).
        #[arg(long, default_value_t = 1)]
        size: usize,
        /// Also compare the exact N-fold sum with the limit.
        #[arg(long)]
        check: Option<usize>,
    },
    /// Recompute the reference fixtures; exits 1 on any mismatch.
    ReproducePaper,
}

pub fn run(argv: impl IntoIterator<Item = impl Into<OsString> + Clone>) -> u8 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match commands::execute(&cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Compute(e)) => {
            eprintln!("{}", error_document(&e));
            1
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}
