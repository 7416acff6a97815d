use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::params::Params;

#[derive(Parser, Debug)]
#[command(
    name = "srd",
    version,
    about = "Sampling-rate lower bounds for approximate sparsity-pattern recovery"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Bound curves: one row per (bound, alpha) with the rate and beta maximizer.
    Bounds(Run),
    /// Best lower bound versus SNR over floor-constrained candidate laws.
    SnrCurve(Run),
    /// Monte-Carlo and oracle verification suites.
    Verify(Run),
    /// Support-recovery experiments.
    Simulate(Run),
    /// Truncated-law moments over a beta grid.
    TruncateTable(Run),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bounds(_) => "bounds",
            Command::SnrCurve(_) => "snr-curve",
            Command::Verify(_) => "verify",
            Command::Simulate(_) => "simulate",
            Command::TruncateTable(_) => "truncate-table",
        }
    }

    pub fn run_args(&self) -> &Run {
        match self {
            Command::Bounds(r)
            | Command::SnrCurve(r)
            | Command::Verify(r)
            | Command::Simulate(r)
            | Command::TruncateTable(r) => r,
        }
    }
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct Run {
    #[command(flatten)]
    pub params: Params,
    /// CSV output path; a manifest is written next to it. Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write `<out>.svg`.
    #[arg(long)]
    pub svg: bool,
    /// TOML file of parameters; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}
