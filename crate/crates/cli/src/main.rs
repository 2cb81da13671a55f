//! `fca`: formal concept analysis from the command line.
//!
//! Data goes to the output file (or stdout); counts and timings go to
//! stderr. Exit codes: 0 success, 1 bad input, 2 capacity exceeded.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "fca", version, about = "Formal concept analysis toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Cxt,
    Csv,
}

#[derive(Debug, clap::Args)]
pub struct MiningArgs {
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Abort with exit code 2 after this many concepts.
    #[arg(long)]
    pub max_concepts: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert a context between .cxt and binary CSV.
    Convert {
        input: PathBuf,
        /// Output format.
        #[arg(long, value_enum)]
        to: TableFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Discretize a numeric trait table into a binary context.
    Binarize {
        input: PathBuf,
        /// Role config (JSON) naming the columns and their roles.
        #[arg(long)]
        roles: PathBuf,
        /// Reuse an existing schema instead of inferring one.
        #[arg(long)]
        schema: Option<PathBuf>,
        /// Where to write the inferred schema.
        #[arg(long)]
        schema_out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "cxt")]
        format: TableFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Enumerate all concepts as JSON Lines.
    Mine {
        input: PathBuf,
        /// Keep only concepts with at least this support (percent).
        #[arg(long, value_parser = parse_percent)]
        min_support: Option<f64>,
        #[command(flatten)]
        mining: MiningArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Render the concept lattice (or its iceberg part) as DOT.
    Lattice {
        input: PathBuf,
        #[arg(long, value_parser = parse_percent)]
        min_support: Option<f64>,
        /// Omit support percentages from node labels.
        #[arg(long)]
        no_support: bool,
        #[command(flatten)]
        mining: MiningArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Positive/negative contrast analysis of a labeled trait table.
    Contrast {
        input: PathBuf,
        /// Role config (JSON) with a `label` entry.
        #[arg(long)]
        roles: PathBuf,
        #[arg(long, value_parser = parse_percent, default_value = "18")]
        min_support: f64,
        /// Also write the iceberg order diagram as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[command(flatten)]
        mining: MiningArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate a random context.
    Gen {
        #[arg(long)]
        objects: usize,
        #[arg(long)]
        attributes: usize,
        #[arg(long, value_parser = parse_density)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "cxt")]
        format: TableFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn parse_percent(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if (0.0..=100.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 100]"))
    }
}

fn parse_density(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
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
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fca: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
