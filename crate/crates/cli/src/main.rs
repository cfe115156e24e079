mod commands;
mod io;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use cubetool_core::{
    complex::ComplexError, completion::CompletionError, corpus::CorpusError, cusped::CuspedError,
    geometry::GeometryError, gog::GogError, gog::LedgerError, hyperplanes::HyperplaneError,
    wallgraph::WallGraphError,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot access {0}: {1}")]
    Io(String, std::io::Error),
    #[error("cannot parse {0}: {1}")]
    Parse(String, String),
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Hyperplane(#[from] HyperplaneError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Completion(#[from] CompletionError),
    #[error(transparent)]
    WallGraph(#[from] WallGraphError),
    #[error(transparent)]
    Cusped(#[from] CuspedError),
    #[error(transparent)]
    Gog(#[from] GogError),
    #[error(transparent)]
    Ledger(#[from] LedgerError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

#[derive(Parser, Debug)]
#[command(name = "cubetool", version, about = "Cube complexes, walls, completions, cusped spaces and graphs of groups")]
pub struct Cli {
    /// Write a JSON run report here.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Include wall-clock timing in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the link condition at every vertex.
    CheckNpc { complex: PathBuf },
    /// Barycentric subdivision.
    Subdivide {
        complex: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Wall table and crossing graph.
    Hyperplanes {
        complex: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Specialness verdict with pathology witnesses.
    Special { complex: PathBuf },
    /// Ball in the universal cover.
    CoverBall {
        complex: PathBuf,
        #[arg(long)]
        base: String,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gate of a vertex onto a region cut out by half-spaces.
    Gate {
        ball: PathBuf,
        #[arg(long)]
        region: PathBuf,
        #[arg(long)]
        vertex: String,
        #[arg(long, default_value_t = cubetool_core::geometry::DEFAULT_PAIR_BUDGET)]
        budget: usize,
    },
    /// Wall graph with an optional greedy colouring.
    WallGraph {
        complex: PathBuf,
        #[arg(long = "R", default_value_t = 1)]
        r: usize,
        #[arg(long)]
        color: bool,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Canonical completion of a local isometry.
    Complete {
        map: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Files for j, r and p.
        #[arg(long, num_args = 3, value_names = ["J", "R", "P"])]
        emit: Option<Vec<PathBuf>>,
    },
    /// Induced map between completions of a square of local isometries.
    Functorial {
        square: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ball in the cusped space of a group.
    Cusped {
        group: PathBuf,
        #[arg(long, default_value_t = 2)]
        rho: usize,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long)]
        probe: bool,
        /// Sample this many triples; exhaustive when omitted.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = commands::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = cubetool_core::cusped::DEFAULT_BALL_BUDGET)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Graph-of-groups tools.
    Gog {
        #[command(subcommand)]
        command: GogCommand,
    },
    /// Gluing equations of a hierarchy ledger.
    GluingCheck {
        ledger: PathBuf,
        #[arg(long)]
        modify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Built-in example inputs.
    Corpus {
        #[command(subcommand)]
        command: CorpusCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum GogCommand {
    /// Presentation of the fundamental group.
    Pi1 {
        gog: PathBuf,
        #[arg(long)]
        base: String,
        /// Comma-separated tree edges.
        #[arg(long, default_value = "", value_delimiter = ',')]
        tree: Vec<String>,
        #[arg(long)]
        simplify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CorpusCommand {
    List,
    Emit {
        name: String,
        #[arg(long, default_value = ".")]
        dir: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckNpc { .. } => "check-npc",
            Command::Subdivide { .. } => "subdivide",
            Command::Hyperplanes { .. } => "hyperplanes",
            Command::Special { .. } => "special",
            Command::CoverBall { .. } => "cover-ball",
            Command::Gate { .. } => "gate",
            Command::WallGraph { .. } => "wall-graph",
            Command::Complete { .. } => "complete",
            Command::Functorial { .. } => "functorial",
            Command::Cusped { .. } => "cusped",
            Command::Gog { .. } => "gog pi1",
            Command::GluingCheck { .. } => "gluing-check",
            Command::Corpus { .. } => "corpus",
        }
    }
}

/// Result of a command: verdict and machine-readable payload.
pub struct Outcome {
    pub positive: bool,
    pub payload: Value,
}

#[derive(Serialize)]
struct RunReport {
    command: String,
    inputs: BTreeMap<String, String>,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Value::is_null")]
    payload: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut inputs = io::Inputs::default();
    let name = cli.command.name();
    let result = commands::run(&cli.command, &mut inputs);
    let (code, report) = match result {
        Ok(out) => {
            let text = serde_json::to_string_pretty(&out.payload).expect("serializable");
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            (
                if out.positive { 0 } else { 1 },
                RunReport {
                    command: name.into(),
                    inputs: inputs.digests,
                    verdict: if out.positive { "positive" } else { "negative" },
                    payload: out.payload,
                    error: None,
                    timing_ms: None,
                },
            )
        }
        Err(e) => {
            eprintln!("error: {e}");
            (
                2,
                RunReport {
                    command: name.into(),
                    inputs: inputs.digests,
                    verdict: "error",
                    payload: Value::Null,
                    error: Some(e.to_string()),
                    timing_ms: None,
                },
            )
        }
    };
    if let Some(path) = &cli.report {
        let report = RunReport {
            timing_ms: cli.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
            ..report
        };
        if let Err(e) = io::write(path, &io::pretty(&report)) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
