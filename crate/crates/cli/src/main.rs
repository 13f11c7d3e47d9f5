use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use pensiongame_cli::{run, Command, RunOptions};

/// Robust equilibria of the pension surplus games.
#[derive(Debug, Parser)]
#[command(name = "pensiongame", version, about)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Scenario file (TOML, or JSON with a .json extension).
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Seed for every random stream; overrides the scenario.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads. Results do not depend on it.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let opts = RunOptions {
        config: args.config,
        out: args.out,
        seed: args.seed,
        threads: args.threads.map(|n| n as usize),
    };
    match run(args.command, &opts) {
        Ok(report) => {
            for path in &report.outputs {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let record = serde_json::to_string(&e.record()).unwrap_or_else(|_| e.to_string());
            eprintln!("{record}");
            ExitCode::from(e.exit_code())
        }
    }
}
