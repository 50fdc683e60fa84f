//! `pcmrank`: weights, rankings and axiom audits for pairwise comparison
//! matrices from the command line.
//!
//! Alternatives are numbered from 1 in all human-readable output; JSON keeps
//! the library's 0-based indices.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use pcmrank_core::{AxiomId, MethodId, DEFAULT_RECIPROCITY_TOL, DEFAULT_TIE_TOL};

/// Largest matrix the CLI accepts.
pub const MAX_N: usize = 64;

#[derive(Debug, Parser)]
#[command(
    name = "pcmrank",
    version,
    about = "Weights, rankings and axiom audits for pairwise comparison matrices"
)]
pub struct Cli {
    /// Relative tolerance under which two weights count as tied.
    #[arg(long, global = true, env = "PCMRANK_TIE_TOL", default_value_t = DEFAULT_TIE_TOL)]
    pub tie_tol: f64,
    /// Allowed deviation of a_ij * a_ji from 1 in input files.
    #[arg(long, global = true, default_value_t = DEFAULT_RECIPROCITY_TOL)]
    pub reciprocity_tol: f64,
    #[arg(long, global = true, default_value_t = 10_000)]
    pub em_max_iterations: usize,
    /// Convergence threshold of the power iteration (max-norm change).
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub em_tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the weight vector of a matrix.
    Weights {
        #[arg(long)]
        method: MethodId,
        #[arg(long)]
        input: PathBuf,
    },
    /// Print the ranking induced by a method.
    Rank {
        #[arg(long)]
        method: MethodId,
        #[arg(long)]
        input: PathBuf,
    },
    /// Entrywise geometric mean of several matrices.
    Aggregate {
        #[arg(long, required = true)]
        input: Vec<PathBuf>,
        /// Write the result as CSV to this file instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check one axiom on one concrete instance.
    Check(CheckArgs),
    /// Search for a violation with seeded random trials.
    Falsify {
        #[arg(long)]
        method: MethodId,
        #[arg(long)]
        axiom: AxiomId,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
    },
    /// Check that "anonymity and aggregation invariance imply INV, RSI, IIC"
    /// is never contradicted by the falsifier.
    Lemmas {
        #[arg(long)]
        method: MethodId,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Reproduce the published counterexamples.
    #[command(group(ArgGroup::new("which").required(true).args(["case", "all"])))]
    Repro {
        #[arg(long)]
        case: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Dump the matrices of the characterization proof for a matrix.
    ProofChain {
        #[arg(long)]
        input: PathBuf,
        /// Equalize the row products of alternatives 1 and 2 first.
        #[arg(long)]
        equalize: bool,
    },
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub method: MethodId,
    #[arg(long)]
    pub axiom: AxiomId,
    #[arg(long)]
    pub input: PathBuf,
    /// ANO: 1-based permutation, e.g. "2,1,3" sends alternative 1 to 2.
    #[arg(long)]
    pub perm: Option<String>,
    /// AI: further matrices to aggregate with the input.
    #[arg(long)]
    pub input2: Vec<PathBuf>,
    /// RSI: exponent p/q.
    #[arg(long)]
    pub kappa: Option<String>,
    /// IIC: the changed cell k,l.
    #[arg(long)]
    pub cell: Option<String>,
    /// IIC: new value of the changed cell.
    #[arg(long)]
    pub value: Option<f64>,
    /// IIC and RES: the pair i,j.
    #[arg(long)]
    pub pair: Option<String>,
    /// RES: new, larger value of a_ij.
    #[arg(long)]
    pub increase: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
