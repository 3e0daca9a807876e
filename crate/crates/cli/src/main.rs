//! `wfset`: wave front set analysis of catalog distributions.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 on usage
//! or configuration errors.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Status;
use crate::config::CommonArgs;

#[derive(Debug, Parser)]
#[command(name = "wfset", version, about = "Gabor wave front set detection and propagation")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Inspect the built-in test distributions
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Detect the Gabor wave front set and Σ(u), and compare them for compactly supported inputs
    Analyze {
        /// Catalog entry
        name: String,
    },
    /// Evolve under the harmonic oscillator and check the predicted wave front set
    Propagate {
        /// Catalog entry
        name: String,
        /// Evolution time
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        /// Highest Hermite order [default: largest accurate order on the grid]
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Compute the singular space of a quadratic form read from a JSON file
    SingularSpace {
        /// JSON file of the form {"dim": d, "re": [[..]], "im": [[..]]}
        file: PathBuf,
        /// Relative tolerance of the rank decisions
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogAction {
    /// List all entries with their ground truth
    List {
        /// Print a JSON array instead of a table
        #[arg(long)]
        json: bool,
    },
    /// Print one entry with its ground truth as JSON
    Show { name: String },
}

fn run(cli: &Cli) -> anyhow::Result<Status> {
    let common = &cli.common;
    match &cli.command {
        Command::Catalog { action } => match action {
            CatalogAction::List { json } => commands::catalog_list(common, *json),
            CatalogAction::Show { name } => commands::catalog_show(common, name),
        },
        Command::Analyze { name } => commands::analyze(common, name),
        Command::Propagate { name, t, n_max } => commands::propagate(common, name, *t, *n_max),
        Command::SingularSpace { file, tol } => commands::singular_space_cmd(common, file, *tol),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Status::Success) => ExitCode::SUCCESS,
        Ok(Status::VerificationFailed) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
