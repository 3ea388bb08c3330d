//! Reports depend only on configuration and seed, never on scheduling.

use lpplab::harness::{run_experiment_with_threads, ExperimentConfig, ExperimentId};

fn small(id: ExperimentId, seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(id);
    cfg.seed = seed;
    cfg.replicas = Some(24);
    cfg.t = Some(60.0);
    if id == ExperimentId::CriticalShockTasep {
        // The observed label T/4 - (a/2) T^(2/3) must be positive.
        cfg.t = Some(300.0);
        cfg.a_grid = Some(vec![2.0]);
    }
    cfg
}

#[test]
fn critical_shock_tasep_rejects_a_horizon_without_the_observed_label() {
    let mut cfg = small(ExperimentId::CriticalShockTasep, 0);
    cfg.t = Some(60.0);
    let err = run_experiment_with_threads(&cfg, Some(1)).unwrap_err();
    assert!(err.to_string().contains("too small"), "{err}");
}

#[test]
fn every_experiment_is_identical_across_thread_counts() {
    for &id in ExperimentId::ALL {
        let cfg = small(id, 3);
        let one = run_experiment_with_threads(&cfg, Some(1)).unwrap_or_else(|e| panic!("{id}: {e}"));
        let three = run_experiment_with_threads(&cfg, Some(3)).unwrap();
        assert_eq!(one.to_json(), three.to_json(), "{id}");
    }
}

#[test]
fn rerun_is_byte_identical_and_seed_matters() {
    let cfg = small(ExperimentId::Transversal, 11);
    let a = run_experiment_with_threads(&cfg, None).unwrap().to_json();
    let b = run_experiment_with_threads(&cfg, None).unwrap().to_json();
    assert_eq!(a, b);
    let other = run_experiment_with_threads(&small(ExperimentId::Transversal, 12), None).unwrap().to_json();
    assert_ne!(a, other);
}
