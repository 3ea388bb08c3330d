//! Command implementations shared by the `lab` and `refdist` binaries.

use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand};
use lpplab::harness::{
    default_threads, run_experiment_with_threads, write_outputs, write_run_meta, ExperimentConfig, ExperimentId,
    ExperimentReport, GridSpec, RunMeta,
};
use lpplab::refdist::{Ensemble, TracyWidom, DEFAULT_ORDER};
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

/// Tracy-Widom distribution functions.
#[derive(Debug, Subcommand)]
pub enum RefdistCommand {
    /// Print F(s) for one ensemble.
    Eval {
        #[arg(long, default_value = "gue")]
        ensemble: Ensemble,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        /// Gauss-Legendre nodes of the Fredholm determinant.
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
    },
    /// Write F on a grid `lo:hi:n` as CSV with columns s,cdf,quad_order.
    Table {
        #[arg(long, default_value = "gue")]
        ensemble: Ensemble,
        #[arg(long, allow_hyphen_values = true)]
        grid: GridSpec,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn check_order(order: usize) -> Result<()> {
    if !(4..=512).contains(&order) {
        bail!("quadrature order must lie in 4..=512, got {order}");
    }
    Ok(())
}

/// CSV text of a distribution table.
pub fn refdist_table(ensemble: Ensemble, grid: &GridSpec, order: usize) -> Result<String> {
    check_order(order)?;
    let tw = TracyWidom::new(ensemble, order);
    let mut out = String::from("s,cdf,quad_order\n");
    for s in grid.points() {
        let f = tw.cdf(s)?;
        writeln!(out, "{s},{f},{order}")?;
    }
    Ok(out)
}

pub fn run_refdist(cmd: RefdistCommand) -> Result<()> {
    match cmd {
        RefdistCommand::Eval { ensemble, s, order } => {
            check_order(order)?;
            println!("{}", TracyWidom::new(ensemble, order).cdf(s)?);
        }
        RefdistCommand::Table { ensemble, grid, order, out } => {
            let text = refdist_table(ensemble, &grid, order)?;
            match out {
                Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
        }
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Experiment id, see `lab list`.
    pub experiment: ExperimentId,
    /// JSON configuration; defaults apply to absent keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Seed root, overriding the configuration.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Replica count, overriding the configuration.
    #[arg(long)]
    pub replicas: Option<usize>,
    /// Output directory; falls back to `out` in the configuration, then
    /// `runs/<experiment>`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; the report does not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Configuration after applying command-line overrides.
pub fn resolve_config(args: &RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            ExperimentConfig::from_json(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => ExperimentConfig::new(args.experiment),
    };
    if cfg.experiment != args.experiment {
        bail!("configuration is for {}, not {}", cfg.experiment, args.experiment);
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(n) = args.replicas {
        cfg.replicas = Some(n);
    }
    Ok(cfg)
}

/// Runs, writes the outputs and returns the report.
pub fn run_lab(args: &RunArgs) -> Result<ExperimentReport> {
    if args.threads == Some(0) {
        bail!("--threads must be at least 1");
    }
    let cfg = resolve_config(args)?;
    let dir = args
        .out
        .clone()
        .or_else(|| cfg.out.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("runs").join(cfg.experiment.as_str()));
    let started = Instant::now();
    let report = run_experiment_with_threads(&cfg, args.threads)?;
    let elapsed = started.elapsed().as_secs_f64();
    write_outputs(&report, &dir)?;
    let meta = RunMeta {
        experiment: cfg.experiment.to_string(),
        wall_clock_seconds: elapsed,
        threads: args.threads.unwrap_or_else(default_threads),
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    write_run_meta(&meta, &dir)?;
    for c in &report.checks {
        println!("{} {} value={} threshold={}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.value, c.threshold);
    }
    for c in &report.caveats {
        println!("note: {c}");
    }
    println!(
        "{} {} in {elapsed:.1}s, outputs in {}",
        report.experiment,
        if report.passed { "passed" } else { "failed" },
        dir.display()
    );
    Ok(report)
}

/// One line per experiment.
pub fn catalog() -> String {
    ExperimentId::ALL.iter().map(|id| format!("{:<22} {}\n", id.as_str(), id.about())).collect()
}
