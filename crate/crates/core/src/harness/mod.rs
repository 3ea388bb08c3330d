//! Experiment catalog, statistics, configuration and reports.

pub mod config;
mod driver;
mod experiments;
pub mod report;
pub mod stats;

pub use config::{ExperimentConfig, ExperimentId, GridSpec, Sampler, ScalingsConfig};
pub use report::{
    write_outputs, write_run_meta, CdfRow, CdfTable, Check, ExceedanceCurve, ExceedanceRow, ExperimentReport, GapRecord,
    KsRecord, RunMeta, SandwichRow, SandwichTable,
};
pub use stats::{
    binomial_se, decoupling_gap, decoupling_gap_with, iqr, ks_distance, linear_fit, two_sample_ks,
    two_sample_ks_critical_1pct, DecouplingGap, Ecdf, Ecdf2,
};

use crate::{Error, Result};

/// Runs one experiment on the current rayon pool.
///
/// The report depends only on the configuration: replicas draw from
/// per-replica seeds and are reduced in replica order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    experiments::run(config).map(ExperimentReport::finish)
}

/// Runs one experiment on a dedicated pool of `threads` workers, or on the
/// global pool when `threads` is `None`.
pub fn run_experiment_with_threads(config: &ExperimentConfig, threads: Option<usize>) -> Result<ExperimentReport> {
    match threads {
        None => run_experiment(config),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("cannot start {n} worker threads: {e}")))?;
            pool.install(|| run_experiment(config))
        }
    }
}

/// Worker count of the global pool, for run metadata.
pub fn default_threads() -> usize {
    rayon::current_num_threads()
}
