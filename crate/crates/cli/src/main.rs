use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dualent_core::measures::NormPolicy;

mod commands;
mod error;
mod output;
mod statefile;

use output::Format;

/// Total (dual) entropy, its entanglement measures and monogamy diagnostics.
#[derive(Debug, Parser)]
#[command(name = "dualent", version, about, propagate_version = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    global: Global,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Output file (a directory for `reproduce`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format. Tables default to csv, reports to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Seed for every random draw; recorded in the output.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Dimension entering r(d): min, a, b or explicit:N.
    #[arg(long, global = true, default_value = "min", value_parser = parse_norm)]
    pub norm: NormPolicy,
}

fn parse_norm(s: &str) -> Result<NormPolicy, String> {
    s.parse::<NormPolicy>().map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Entropies of a state file or a preset.
    Entropy(commands::entropy::EntropyArgs),
    /// Recompute a worked example or figure table and check it.
    Reproduce(commands::reproduce::ReproduceArgs),
    /// Residual-tangle scans over the example families.
    Scan(commands::scan::ScanArgs),
    /// Polygon inequality on a random or provided network.
    Network(commands::network::NetworkArgs),
    /// Numerical convex roof of a pure-state measure.
    Roof(commands::roof::RoofArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let result = match &cli.command {
        Command::Entropy(a) => commands::entropy::run(a, g),
        Command::Reproduce(a) => commands::reproduce::run(a, g),
        Command::Scan(a) => commands::scan::run(a, g),
        Command::Network(a) => commands::network::run(a, g),
        Command::Roof(a) => commands::roof::run(a, g),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
