//! `clickbait`: extract features, rank them, train, predict and evaluate.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use clickbait_core::{Error, Result};

use config::{Flags, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "clickbait", version, about = "Score how clickbait-like social media posts are")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the feature matrix of --instances as CSV
    Extract(Flags),
    /// Rank features by Fisher score as CSV `rank,feature,score`
    Rank(Flags),
    /// Train a model on the training split and write it to --out
    Train(Flags),
    /// Score --instances with --model as challenge JSONL
    Predict(Flags),
    /// Score --predictions (or --model on --instances) against --truth
    Evaluate(Flags),
    /// k-fold cross-validation with per-fold and mean metrics
    Cv(Flags),
}

fn run(cli: Cli) -> Result<()> {
    let (flags, action): (&Flags, fn(&RunConfig) -> Result<()>) = match &cli.command {
        Command::Extract(f) => (f, commands::extract),
        Command::Rank(f) => (f, commands::rank),
        Command::Train(f) => (f, commands::train),
        Command::Predict(f) => (f, commands::predict),
        Command::Evaluate(f) => (f, commands::evaluate),
        Command::Cv(f) => (f, commands::cv),
    };
    let cfg = RunConfig::resolve(flags)?;
    if flags.print_config {
        print!("{}", cfg.to_toml());
        return Ok(());
    }
    if let Some(jobs) = cfg.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    }
    action(&cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
