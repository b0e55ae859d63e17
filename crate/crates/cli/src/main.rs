//! `mpt` binary: argument parsing and exit-code mapping.
//!
//! All real work happens in [`mpt_cli::commands`]; this file only
//! translates flags into command calls and errors into exit codes
//! (0 success, 1 invalid input, 2 I/O failure).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mpt_cli::commands;

#[derive(Debug, Parser)]
#[command(
    name = "mpt",
    version,
    about = "Multiverse privacy decision model: simulate, analyze, replicate, decide"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the seeded simulation and write a trajectory CSV
    Simulate {
        /// Run config (TOML)
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
        /// Master seed; overrides the config seed, generated if neither is set
        #[arg(long)]
        seed: Option<u64>,
        /// Output CSV path; the manifest goes to <OUT>.manifest.json
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Run the hypothesis suite over a trajectory CSV
    Analyze {
        /// Trajectory CSV produced by simulate
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Output JSON report; band summary goes to <OUT>.bands.csv
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Re-run the study across consecutive seeds and aggregate
    Replicate {
        /// Run config (TOML)
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
        /// Number of seeds to sweep (base seed, base+1, ...)
        #[arg(long, value_name = "N")]
        seeds: u32,
        /// Base master seed; overrides the config seed, generated if neither is set
        #[arg(long)]
        seed: Option<u64>,
        /// Output per-seed CSV; quantiles go to <OUT>.quantiles.csv
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Pick the expected-utility-maximizing action for a given state
    Decide {
        /// Run config (TOML) supplying weights, horizon, and fallbacks
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
        /// State JSON: universes, optional actions and probabilities
        #[arg(long, value_name = "FILE")]
        state: PathBuf,
    },
    /// Print the closed-form correlations implied by the config
    Oracle {
        /// Run config (TOML); requires zero-effect actions and theta = 0
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
    },
}

fn run(cli: Cli) -> mpt_cli::error::Result<()> {
    match cli.command {
        Command::Simulate { config, seed, out } => commands::cmd_simulate(&config, seed, &out),
        Command::Analyze { input, out } => commands::cmd_analyze(&input, &out),
        Command::Replicate {
            config,
            seeds,
            seed,
            out,
        } => commands::cmd_replicate(&config, seeds, seed, &out),
        Command::Decide { config, state } => commands::cmd_decide(&config, &state),
        Command::Oracle { config } => commands::cmd_oracle(&config),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version land here too; clap routes them to
            // stdout and we exit 0, while real usage errors exit 1.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
