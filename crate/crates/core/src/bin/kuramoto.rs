use std::path::PathBuf;
use std::process::ExitCode;

use adaptive_kuramoto::scenario::{self, Overrides, Task};
use clap::{Args, Parser, Subcommand};

/// Cluster synchronization experiments for adaptive Kuramoto networks.
/// Set RAYON_NUM_THREADS to limit parallelism.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the cluster conditions (exit 2 when they fail).
    Check(RunArgs),
    /// Simulate the full network.
    Simulate(RunArgs),
    /// Build the invariant torus by successive approximation.
    Torus(RunArgs),
    /// Search for a minimal rewiring that satisfies the conditions.
    Design(RunArgs),
    /// Two oscillators with static coupling.
    TwoOsc(RunArgs),
    /// Simulate with a topology switch.
    Switch(RunArgs),
    /// Run the task named in the scenario file.
    Run(RunArgs),
    /// Run every bundled scenario and print a pass/fail table.
    ReproduceAll {
        #[arg(long, default_value = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/scenarios"))]
        dir: PathBuf,
        /// Only run the named scenario (repeatable).
        #[arg(long)]
        only: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    scenario: PathBuf,
    /// Directory for reports, trajectories and tori.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replace the scenario's random seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Build the torus even when the conditions fail.
    #[arg(long)]
    force: bool,
}

fn run(args: RunArgs, task: Option<Task>) -> i32 {
    let overrides = Overrides {
        task,
        seed: args.seed,
        force: args.force,
    };
    scenario::run(&args.scenario, args.out.as_deref(), &overrides)
}

fn main() -> ExitCode {
    let code = match Cli::parse().command {
        Command::Check(a) => run(a, Some(Task::Check)),
        Command::Simulate(a) => run(a, Some(Task::Simulate)),
        Command::Torus(a) => run(a, Some(Task::Torus)),
        Command::Design(a) => run(a, Some(Task::Design)),
        Command::TwoOsc(a) => run(a, Some(Task::TwoOsc)),
        Command::Switch(a) => run(a, Some(Task::Switch)),
        Command::Run(a) => run(a, None),
        Command::ReproduceAll { dir, only, out } => {
            match scenario::reproduce_all(&dir, &only, out.as_deref()) {
                Ok(runs) => {
                    print!("{}", scenario::summary_table(&runs));
                    if runs.iter().all(|r| r.passed()) {
                        0
                    } else {
                        1
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    1
                }
            }
        }
    };
    ExitCode::from(code as u8)
}
