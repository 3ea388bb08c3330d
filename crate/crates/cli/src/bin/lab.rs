use clap::{Parser, Subcommand};
use lpplab_cli::{catalog, run_lab, run_refdist, RefdistCommand, RunArgs};
use std::process::ExitCode;

/// Monte Carlo experiments on last-passage percolation and TASEP.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment; exits 0 iff every declared tolerance holds.
    Run(RunArgs),
    /// Print the experiment catalog.
    List,
    /// Tracy-Widom distribution functions.
    Refdist {
        #[command(subcommand)]
        command: RefdistCommand,
    },
}

fn main() -> ExitCode {
    let outcome = match Cli::parse().command {
        Command::Run(args) => run_lab(&args).map(|r| r.passed),
        Command::List => {
            print!("{}", catalog());
            Ok(true)
        }
        Command::Refdist { command } => run_refdist(command).map(|_| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
