//! `ltfb`: reduced-distribution tables and feedback simulations for LT codes.

mod analyze;
mod output;
mod params;
mod simulate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use params::Params;

#[derive(Parser)]
#[command(name = "ltfb", version, about = "LT codes with acknowledgment feedback")]
struct Cli {
    /// Directory for result files (default: $LTFB_OUT_DIR, then the current directory).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Worker threads for simulations (default: all logical cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact reduced degree distributions.
    #[command(subcommand)]
    Analyze(AnalyzeCmd),
    /// Monte Carlo transmission experiments.
    #[command(subcommand)]
    Simulate(SimulateCmd),
}

#[derive(Subcommand)]
enum AnalyzeCmd {
    /// Probability of a redundant symbol against the number of decoded inputs.
    Reduced(Invocation),
    /// Redundancy against the number of acknowledged inputs.
    ReducedAcked(Invocation),
    /// Adaptive degree distribution for given undecoded counts.
    Adaptive(Invocation),
    /// Two-layer redundancy over all per-layer undecoded counts.
    TwoLayer(Invocation),
    /// Joint per-layer reduced degree distribution of a multi-layer code.
    NLayer(Invocation),
}

#[derive(Subcommand)]
enum SimulateCmd {
    /// Single-layer code with and without per-symbol acknowledgments.
    Single(Invocation),
    /// Weighted two-layer code with and without a base-layer acknowledgment.
    TwoLayer(Invocation),
    /// Mean video distortion against the erasure rate under a deadline.
    Distortion(Invocation),
}

#[derive(Args)]
struct Invocation {
    /// JSON file of parameters; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Path of the main CSV file.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    params: Params,
}

/// Exit status classes.
#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Runtime(String),
}

impl From<ltfb_core::Error> for Failure {
    fn from(e: ltfb_core::Error) -> Self {
        match e {
            ltfb_core::Error::Domain(m) => Failure::Invalid(m),
            ltfb_core::Error::State(m) => Failure::Runtime(m),
        }
    }
}

/// Result tables of one command, ready to be written.
pub struct Run {
    command: &'static str,
    stem: &'static str,
    seed: Option<u64>,
    config: serde_json::Value,
    tables: Vec<(&'static str, output::Table)>,
}

impl Run {
    fn new<C: Serialize>(
        command: &'static str,
        stem: &'static str,
        seed: Option<u64>,
        config: &C,
        tables: Vec<(&'static str, output::Table)>,
    ) -> Result<Self, Failure> {
        let config = serde_json::to_value(config).map_err(|e| Failure::Runtime(e.to_string()))?;
        Ok(Self { command, stem, seed, config, tables })
    }
}

fn execute(cli: Cli) -> Result<Vec<PathBuf>, Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Invalid("threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Runtime(e.to_string()))?;
    }
    let (inv, handler): (Invocation, fn(&Params) -> Result<Run, Failure>) = match cli.command {
        Command::Analyze(AnalyzeCmd::Reduced(i)) => (i, analyze::reduced),
        Command::Analyze(AnalyzeCmd::ReducedAcked(i)) => (i, analyze::reduced_acked),
        Command::Analyze(AnalyzeCmd::Adaptive(i)) => (i, analyze::adaptive),
        Command::Analyze(AnalyzeCmd::TwoLayer(i)) => (i, analyze::two_layer),
        Command::Analyze(AnalyzeCmd::NLayer(i)) => (i, analyze::n_layer),
        Command::Simulate(SimulateCmd::Single(i)) => (i, simulate::single),
        Command::Simulate(SimulateCmd::TwoLayer(i)) => (i, simulate::two_layer),
        Command::Simulate(SimulateCmd::Distortion(i)) => (i, simulate::distortion),
    };
    let params = match &inv.config {
        Some(path) => Params::load(path)?.merged(inv.params),
        None => inv.params,
    };
    let run = handler(&params)?;
    let path = params::output_path(inv.out, cli.out_dir, run.stem);
    output::write_run(&path, run.command, run.seed, &run.config, run.tables)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Invalid(m)) => {
            eprintln!("error: invalid arguments: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
