//! `opuc`: coefficient conversions, para-orthogonal zeros, discrete measures
//! and periodic spectra from the command line.
//!
//! Exit status: 0 on success, 2 on invalid input (with an error object on
//! stderr), 3 when a numerical invariant fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

use output::Failure;

#[derive(Debug, Parser)]
#[command(name = "opuc", version, about = "Measures on the unit circle from (c, d) sequence pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Both,
}

/// Where the sequence literal comes from.
#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Inline sequence literal, e.g. '{"c": [0, 0], "m": [0.5, 0.5]}'.
    #[arg(long, conflicts_with = "file")]
    pub json: Option<String>,
    /// File holding a sequence literal.
    #[arg(long, alias = "alpha")]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write `<command>.json` / `<command>.csv` here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    R,
    Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformOp {
    Conjugate,
    Unfold,
    Rotate,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verblunsky coefficients of a (c, d) or (c, m) pair.
    Pair2alpha {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The (c, d) pair of a list of Verblunsky coefficients.
    Alpha2pair {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Coefficient table of R_n or Q_n; CSV columns n,k,re,im.
    Poly {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "r")]
        family: Family,
        /// Largest degree stored as explicit coefficients.
        #[arg(long, default_value_t = opuc_core::poly::DEFAULT_MAX_COEFF_DEGREE)]
        max_degree: usize,
    },
    /// Zeros of W_1, ..., W_n; CSV columns level,j,x,theta.
    Zeros {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = opuc_core::zeros::DEFAULT_TOL)]
        tol: f64,
    },
    /// Nodes and weights of psi_n; CSV columns j,theta,weight.
    Quadrature {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long)]
        n: Option<usize>,
    },
    /// psi_n sampled on [0, 2pi]; CSV columns theta,psi.
    Cdf {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 1001)]
        samples: usize,
    },
    /// Bands, gaps, candidates and pure points of periodic coefficients.
    Periodic {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Period; defaults to the declared tail period, else the whole list.
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, default_value_t = opuc_core::periodic::DEFAULT_GRID_PER_PERIOD)]
        grid: usize,
    },
    /// The absolutely continuous weight of periodic coefficients; CSV columns theta,w.
    Weight {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, default_value_t = 1001)]
        samples: usize,
    },
    /// Conjugate, unfold (alternating c_n) or rotate a sequence.
    Transform {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, value_enum)]
        op: TransformOp,
        /// Rotation by e^{i angle}.
        #[arg(long, conflicts_with = "beta_c", allow_negative_numbers = true)]
        angle: Option<f64>,
        /// Rotation by -(1 + ic)/(1 - ic).
        #[arg(long, allow_negative_numbers = true)]
        beta_c: Option<f64>,
    },
    /// Spectral report for c_n = (-1)^n c, m alternating (1 - b1)/2, (1 - b2)/2.
    Demo {
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
        #[arg(long, allow_negative_numbers = true)]
        b1: f64,
        #[arg(long, allow_negative_numbers = true)]
        b2: f64,
        #[arg(long, default_value_t = 1001)]
        samples: usize,
        /// Number of periods used for the zeros and discrete measure.
        #[arg(long, default_value_t = 20)]
        periods: usize,
        #[arg(long, default_value_t = opuc_core::periodic::DEFAULT_GRID_PER_PERIOD)]
        grid: usize,
        /// Directory for the plot CSVs.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant checks; nonzero exit on any violation.
    Check {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            return Failure::usage(first.to_string()).report();
        }
    };
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(f) => f.report(),
    }
}
