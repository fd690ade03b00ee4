use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gridrel::runner::{self, RunManifest};

/// Monte Carlo reliability simulator for cyber-physical distribution grids.
#[derive(Parser)]
#[command(name = "gridrel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a scenario (and its RTO sweep) and write the result tables.
    Run(RunArgs),
    /// Check a scenario and its network without simulating.
    Validate {
        #[arg(long)]
        scenario: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file.
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
    /// Root seed, overriding the scenario's.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Also write per-replication indices.
    #[arg(long)]
    emit_samples: bool,
    /// Also write component transitions and interruption records of replication 0.
    #[arg(long)]
    emit_timelines: bool,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Validate { scenario } => {
            let diagnostics = runner::validate(&RunManifest::new(scenario, PathBuf::new()));
            if diagnostics.is_empty() {
                println!("ok");
                ExitCode::SUCCESS
            } else {
                for d in &diagnostics {
                    eprintln!("{d}");
                }
                ExitCode::FAILURE
            }
        }
        Command::Run(args) => {
            let manifest = RunManifest {
                scenario_path: args.scenario,
                out_dir: args.out,
                seed: args.seed,
                sweep: None,
                jobs: args.jobs,
                emit_samples: args.emit_samples,
                emit_timelines: args.emit_timelines,
            };
            match runner::run(&manifest) {
                Ok(paths) => {
                    for p in paths {
                        println!("wrote {}", p.display());
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
    }
}
