//! `mufix`: solve and check nested fixpoint decompositions on finite
//! lattices. Exit codes: 0 every executed check passed, 1 a check failed,
//! 2 bad input.

mod commands;
mod problem;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{AppError, Report, SweepPlan};

#[derive(Parser)]
#[command(name = "mufix", version, about = "Fixpoint engine for finite lattices")]
struct Cli {
    /// Emit a machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the vectorial least fixpoint of a problem file.
    Solve {
        /// Problem file to load.
        #[arg(long)]
        input: PathBuf,
    },
    /// Evaluate the nested decomposition per coordinate.
    Bekic {
        /// Problem file to load.
        #[arg(long)]
        input: PathBuf,
        /// One-based coordinate; all coordinates if omitted.
        #[arg(long)]
        coordinate: Option<usize>,
    },
    /// Run the decomposition, claim, and shift-lemma checks.
    Check {
        /// Problem file to load.
        #[arg(long)]
        input: PathBuf,
    },
    /// Print the symbolic nested expansion for one coordinate.
    Expr {
        /// Number of coordinates.
        #[arg(long)]
        arity: usize,
        /// One-based coordinate to expand.
        #[arg(long)]
        coordinate: usize,
        /// Override the default expansion cap (arity <= 7).
        #[arg(long)]
        max_arity: Option<usize>,
    },
    /// Check the decomposition across many monotone functions.
    Sweep {
        /// Coordinate lattice, e.g. chain2 or powerset2.
        #[arg(long)]
        lattice: String,
        /// Number of coordinates.
        #[arg(long)]
        arity: usize,
        /// Enumerate every monotone function instead of sampling.
        #[arg(long, conflicts_with_all = ["samples", "seed"])]
        exhaustive: bool,
        /// Number of seeded random functions to draw.
        #[arg(long)]
        samples: Option<u64>,
        /// Base seed for sampling.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn run(command: Command) -> Result<Report, AppError> {
    match command {
        Command::Solve { input } => commands::solve(&input),
        Command::Bekic { input, coordinate } => commands::bekic(&input, coordinate),
        Command::Check { input } => commands::check(&input),
        Command::Expr {
            arity,
            coordinate,
            max_arity,
        } => commands::expr(arity, coordinate, max_arity),
        Command::Sweep {
            lattice,
            arity,
            exhaustive,
            samples,
            seed,
        } => {
            let plan = if exhaustive {
                SweepPlan::Exhaustive
            } else {
                SweepPlan::Sampled {
                    samples: samples.unwrap_or(100),
                    seed: seed.unwrap_or(0),
                }
            };
            commands::sweep(&lattice, arity, plan)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.json);
            } else {
                print!("{}", report.text);
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
