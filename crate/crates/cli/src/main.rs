//! `gqht`: inner products, classifier experiments and circuit export.

mod commands;
mod config;
mod plot;
mod repro;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{parse_vector, EstimatorArgs, GenDataArgs, Vector};
use config::Overrides;

#[derive(Debug)]
pub enum CliError {
    /// Bad input or configuration (exit 1).
    Invalid(String),
    /// Anything else (exit 2).
    Internal(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) | CliError::Internal(m) => f.write_str(m),
        }
    }
}

impl From<gqht::Error> for CliError {
    fn from(e: gqht::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "gqht", version, about = "Hadamard-test inner products and hybrid classifiers on a statevector simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inner product of two vectors in [-1, 1]; prints JSON.
    Inner {
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        p: Vector,
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        q: Vector,
        /// Use the amplitude-encoded test; inputs are normalized first.
        #[arg(long)]
        qht: bool,
        #[command(flatten)]
        estimator: EstimatorArgs,
    },
    /// Sum of inner products of one test vector with several training vectors.
    BatchInner {
        /// One training vector; repeat for each (count must be a power of two).
        #[arg(long = "train", value_parser = parse_vector, allow_hyphen_values = true, required = true)]
        train: Vec<Vector>,
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        test: Vector,
        #[command(flatten)]
        estimator: EstimatorArgs,
    },
    /// Train a classifier; writes model and metrics JSON.
    Train(Overrides),
    /// Score a saved model on the configured dataset split.
    Evaluate {
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Decision-boundary grid CSV and SVG over [-1, 1]^2.
    Boundary {
        #[command(flatten)]
        overrides: Overrides,
        /// Saved model; trains from the config when absent.
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        resolution: Option<usize>,
    },
    /// Write a seeded synthetic dataset CSV.
    GenData(GenDataArgs),
    /// Rerun the worked circuit examples against classical oracles; prints JSON.
    Repro,
    /// OpenQASM 2.0 for a pairwise or batched inner-product circuit.
    ExportQasm {
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        p: Option<Vector>,
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        q: Option<Vector>,
        #[arg(long = "train", value_parser = parse_vector, allow_hyphen_values = true)]
        train: Vec<Vector>,
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        test: Option<Vector>,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(String, bool), CliError> {
    let ok = |s: String| Ok((s, true));
    let unwrap_all = |vs: Vec<Vector>| vs.into_iter().map(|v| v.0).collect::<Vec<_>>();
    match cli.command {
        Command::Inner { p, q, qht, estimator } => ok(commands::inner(&p.0, &q.0, &estimator, qht)?),
        Command::BatchInner { train, test, estimator } => ok(commands::batch_inner(&unwrap_all(train), &test.0, &estimator)?),
        Command::Train(o) => ok(commands::train(&o)?),
        Command::Evaluate { overrides, model } => ok(commands::evaluate(&overrides, model.as_ref())?),
        Command::Boundary { overrides, model, resolution } => {
            ok(commands::boundary(&overrides, model.as_ref(), resolution)?)
        }
        Command::GenData(a) => ok(commands::gen_data(&a)?),
        Command::Repro => commands::repro(),
        Command::ExportQasm { p, q, train, test, out } => {
            let (p, q, test) = (p.map(|v| v.0), q.map(|v| v.0), test.map(|v| v.0));
            let text = commands::export_qasm(p.as_deref(), q.as_deref(), &unwrap_all(train), test.as_deref())?;
            match out {
                Some(path) => {
                    std::fs::write(&path, text)
                        .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))?;
                    ok(format!("qasm: {}\n", path.display()))
                }
                None => ok(text),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok((out, passed)) => {
            print!("{out}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CliError::Invalid(_) => 1,
                CliError::Internal(_) => 2,
            })
        }
    }
}
