use clap::Parser;
use lpplab_cli::{run_refdist, RefdistCommand};

/// Tracy-Widom distribution functions by Fredholm determinant quadrature.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: RefdistCommand,
}

fn main() -> anyhow::Result<()> {
    run_refdist(Cli::parse().command)
}
