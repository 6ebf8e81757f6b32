//! `ftcs` command line: generate and inspect lattices, apply split
//! pipelines, decode single error patterns with optional traces, run Monte
//! Carlo sweeps, and fit threshold crossings.
//!
//! Exit codes: 0 success, 2 validation failure, 3 no crossing found,
//! 4 I/O error.

mod commands;
mod config;
mod manifest;

use clap::{Parser, Subcommand};
use ftcs::lattices::{Axis, LatticeKind};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    /// Bad inputs or violated invariants (exit 2).
    Validation(String),
    /// Threshold fit found no crossing (exit 3).
    NoCrossing(String),
    /// Filesystem or format trouble (exit 4).
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::NoCrossing(_) => 3,
            CliError::Io(_) => 4,
        }
    }
    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::NoCrossing(m) | CliError::Io(m) => m,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "ftcs", version, about = "Fault-tolerant cluster states from 3-d cell complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a lattice: complex, syndrome graph, and degree report.
    Generate {
        /// cubic, diamond, triamond, or doubled-edge
        lattice: LatticeKind,
        /// Unit cells per side (>= 2)
        #[arg(long = "L")]
        l: u32,
        /// Serialization format for the output files
        #[arg(long, default_value = "text", value_parser = ["text", "json"])]
        format: String,
        /// Output directory (default: $FTCS_OUT or the working directory)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every structural invariant of a serialized complex.
    Verify {
        /// Complex file (.txt or .json)
        path: PathBuf,
    },
    /// Apply a JSON pipeline of splits/subdivisions to a complex.
    Split {
        /// Complex file to transform
        path: PathBuf,
        /// JSON array of pipeline operations
        #[arg(long)]
        pipeline: PathBuf,
        /// Output path (default: alongside the input)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode one serialized error pattern on a syndrome graph.
    Decode {
        /// Syndrome graph file (.txt or .json)
        #[arg(long)]
        graph: PathBuf,
        /// Error pattern JSON ({"edge_count":n,"flipped":[..],"erased":[..]})
        #[arg(long)]
        pattern: PathBuf,
        /// Write decoder trace events as JSON lines ("-" for stdout)
        #[arg(long)]
        trace: Option<String>,
    },
    /// Run a Monte Carlo sweep from a config file, producing CSV + manifest.
    Sweep {
        /// Key-value config file; flags below override its values
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        lattice: Option<LatticeKind>,
        /// Comma-separated sizes, e.g. 4,6,8
        #[arg(long)]
        sizes: Option<String>,
        /// pauli, erasure, weighted, or mixed
        #[arg(long)]
        model: Option<String>,
        /// Comma-separated swept rates
        #[arg(long)]
        rates: Option<String>,
        /// Fixed erasure rate for the mixed model
        #[arg(long)]
        p_erase: Option<f64>,
        #[arg(long)]
        trials: Option<u64>,
        /// Master seed; drawn at random and recorded when omitted
        #[arg(long)]
        seed: Option<u64>,
        /// Logical axis to test (x, y, z)
        #[arg(long)]
        axis: Option<Axis>,
        /// Output directory (default: $FTCS_OUT or the working directory)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: available parallelism)
        #[arg(long)]
        workers: Option<usize>,
        /// Resume from a previous run's manifest, filling in missing cells
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Fit a threshold crossing from a sweep CSV.
    Threshold {
        /// Sweep CSV file
        csv: PathBuf,
        /// Bootstrap resamples
        #[arg(long, default_value_t = 500)]
        bootstrap: usize,
        /// Write the JSON estimate here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a sweep CSV as a plot-ready long-format table.
    Report {
        /// Sweep CSV file
        csv: PathBuf,
        /// Output path (default: stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate { lattice, l, format, out } => {
            commands::generate(lattice, l, &format, out)
        }
        Command::Verify { path } => commands::verify(&path),
        Command::Split { path, pipeline, out } => commands::split(&path, &pipeline, out),
        Command::Decode { graph, pattern, trace } => {
            commands::decode(&graph, &pattern, trace.as_deref())
        }
        Command::Sweep {
            config,
            lattice,
            sizes,
            model,
            rates,
            p_erase,
            trials,
            seed,
            axis,
            out,
            workers,
            resume,
        } => commands::sweep(commands::SweepArgs {
            config,
            lattice,
            sizes,
            model,
            rates,
            p_erase,
            trials,
            seed,
            axis,
            out,
            workers,
            resume,
        }),
        Command::Threshold { csv, bootstrap, out } => commands::threshold(&csv, bootstrap, out),
        Command::Report { csv, out } => commands::report(&csv, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
