//! `qnk`: continued fractions, theta functions and the elliptic algebras `Q_{n,k}(E,τ)`
//! from the command line. Every subcommand prints one JSON document on standard output
//! (or CSV for `sweep --csv`).
//!
//! Exit codes: 0 success, 1 precondition violation (a JSON error object is printed),
//! 2 verification failure (the report is printed and some residual exceeds the tolerance).

mod commands;
mod json;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Debug, Parser)]
#[command(name = "qnk", version, about = "Elliptic algebras Q_{n,k}(E,τ): exact and numerical tools")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Acceptance threshold for verification residuals (defaults depend on the check).
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Seed for every random sample stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Lattice parameter η with Im η > 0, written "a+bi".
    #[arg(long, global = true, default_value = "0.8i", allow_hyphen_values = true)]
    pub eta: String,
    /// The point τ: complex "a+bi" or an exact point "p/q,r/s" meaning p/q + (r/s)η.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tau: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Negative continued fraction of n/k.
    Contfrac { n: String, k: String },
    /// The sequences kᵢ, lᵢ and k′ of n/k.
    Sequences { n: String, k: String },
    /// Smith invariants and adjugate of D(n₁,…,n_g).
    Smith {
        #[arg(required = true, num_args = 1..)]
        entries: Vec<String>,
    },
    /// Intersection number of the standard divisors with degrees a and b.
    Intersect {
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        a: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        b: Vec<String>,
    },
    /// Self-intersection and kernel of a weighted-graph divisor read from JSON.
    GraphDivisor { file: PathBuf },
    /// Structure of the characteristic variety of n/k.
    Charvar { n: String, k: String },
    /// Classification table for all slopes with n ≤ nmax.
    Sweep {
        #[arg(long)]
        nmax: u64,
        /// Largest number of continued-fraction entries to include.
        #[arg(long, default_value_t = 12)]
        gmax: usize,
        /// Lift the default caps n ≤ 500 and g ≤ 12.
        #[arg(long)]
        uncapped: bool,
        /// Emit CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// The n² relation coefficients of Q_{n,k}(E,τ).
    Relations { n: String, k: String },
    /// Numerical verification of an identity family.
    Verify {
        kind: VerifyKind,
        n: String,
        k: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Number of relation levels checked by `point-module`.
        #[arg(long, default_value_t = 7)]
        depth: usize,
    },
    /// Φ_{n/k}(z) = (w₀(z):…:w_{n−1}(z)).
    Phi {
        n: String,
        k: String,
        /// Comma-separated coordinates z₁,…,z_g, each "a+bi".
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        z: Vec<String>,
    },
    /// Galois-group order of the étale cover of the characteristic variety.
    Etale { n: String, k: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyKind {
    Identity,
    Graph,
    Degenerate,
    PointModule,
}

/// How a subcommand ended.
pub enum Outcome {
    Json(serde_json::Value),
    Text(String),
    /// A verification report whose residual exceeded the tolerance.
    Failed(serde_json::Value),
}

/// A precondition violation, reported as `{"error": {"kind", "message"}}`.
#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn new(kind: &'static str, message: impl Into<String>) -> Self {
        CliError { kind, message: message.into() }
    }
}

impl From<qnk::Error> for CliError {
    fn from(e: qnk::Error) -> Self {
        CliError { kind: e.kind(), message: e.to_string() }
    }
}

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    // a closed pipe is not an error worth reporting
    let _ = writeln!(out, "{text}");
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let message = e.render().to_string();
            emit(&pretty(&json!({"error": {"kind": "usage", "message": message.trim()}})));
            return ExitCode::from(1);
        }
    };
    match commands::run(&cli) {
        Ok(Outcome::Json(v)) => {
            emit(&pretty(&v));
            ExitCode::SUCCESS
        }
        Ok(Outcome::Text(t)) => {
            let _ = std::io::stdout().lock().write_all(t.as_bytes());
            ExitCode::SUCCESS
        }
        Ok(Outcome::Failed(v)) => {
            emit(&pretty(&v));
            ExitCode::from(2)
        }
        Err(e) => {
            emit(&pretty(&json!({"error": {"kind": e.kind, "message": e.message}})));
            ExitCode::from(1)
        }
    }
}
