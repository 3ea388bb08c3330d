//! Invariants exercised by the fuzz targets and by the corpus replay test.
//! Each function accepts arbitrary bytes, must never panic on rejection,
//! and panics only when an accepted input breaks a round trip.

use lpplab::harness::{ExperimentConfig, ExperimentId, GridSpec};
use lpplab::lattice::Rational;

pub fn config_json(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = ExperimentConfig::from_json(text) {
        let again = ExperimentConfig::from_json(&cfg.to_json()).expect("serialized config parses");
        assert_eq!(again, cfg);
    }
}

pub fn grid_spec(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(grid) = text.parse::<GridSpec>() {
        let points = grid.points();
        assert_eq!(points.len(), grid.n);
        assert!(points.iter().all(|p| p.is_finite()));
        assert!(points.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(grid.to_string().parse::<GridSpec>().expect("printed grid parses"), grid);
    }
}

pub fn rational(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = text.parse::<Rational>() {
        assert!(r.den() > 0);
        assert_eq!(r.to_string().parse::<Rational>().expect("printed rational parses"), r);
    }
}

pub fn experiment_id(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(id) = text.parse::<ExperimentId>() {
        assert_eq!(id.to_string().parse::<ExperimentId>().expect("printed id parses"), id);
        assert!(ExperimentId::ALL.contains(&id));
    }
}
