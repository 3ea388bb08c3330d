//! Replays the fuzz seed corpus through the same invariant checks the fuzz
//! targets run, so regressions show up without a fuzzing toolchain.

#[path = "../../../fuzz/src/checks.rs"]
mod checks;

use std::fs;
use std::path::Path;

fn replay(target: &str, check: fn(&[u8])) {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut seen = 0;
    for entry in fs::read_dir(&dir).unwrap_or_else(|e| panic!("{}: {e}", dir.display())) {
        let path = entry.unwrap().path();
        let data = fs::read(&path).unwrap();
        if std::panic::catch_unwind(|| check(&data)).is_err() {
            panic!("{target}: seed {} broke an invariant", path.display());
        }
        seen += 1;
    }
    assert!(seen > 0, "{target}: empty corpus");
}

#[test]
fn config_json_seeds() {
    replay("config_json", checks::config_json);
}

#[test]
fn grid_spec_seeds() {
    replay("grid_spec", checks::grid_spec);
}

#[test]
fn rational_seeds() {
    replay("rational", checks::rational);
}

#[test]
fn experiment_id_seeds() {
    replay("experiment_id", checks::experiment_id);
}

mod random_inputs {
    use super::checks;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn rationals(text in r"-?[0-9]{0,20}([./]-?[0-9]{0,20})?") {
            checks::rational(text.as_bytes());
        }

        #[test]
        fn grids(text in r"[-+0-9.eEinfa]{0,12}:[-+0-9.eEinfa]{0,12}:[-+0-9]{0,8}") {
            checks::grid_spec(text.as_bytes());
        }

        #[test]
        fn experiment_ids(text in r"[a-z0-9-]{0,24}") {
            checks::experiment_id(text.as_bytes());
        }

        #[test]
        fn configs(
            key in prop::sample::select(vec!["seed", "replicas", "t", "a", "a_grid", "s_grid", "rho1", "labels", "scalings", "targets"]),
            value in r#"(-?[0-9]{1,25}(\.[0-9]{1,5})?(e-?[0-9]{1,3})?|"[-0-9:/.a-z]{0,12}"|\[[-0-9.,]{0,12}\]|\{\}|null)"#,
        ) {
            let text = format!(r#"{{"experiment":"step-gue","{key}":{value}}}"#);
            checks::config_json(text.as_bytes());
        }

        #[test]
        fn arbitrary_bytes(data in prop::collection::vec(any::<u8>(), 0..64)) {
            checks::rational(&data);
            checks::grid_spec(&data);
            checks::experiment_id(&data);
            checks::config_json(&data);
        }
    }
}
