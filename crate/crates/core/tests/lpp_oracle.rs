//! Dynamic-programming passage times against exhaustive path enumeration on
//! small instances, for every start-set variant and with forbidden regions.

mod common;

use common::oracle::{multi_endpoint, restricted, unrestricted, INSTANCES, KINDS};

#[test]
fn unrestricted_values_match_enumeration_for_every_start_set() {
    for (kind, tag) in KINDS {
        assert_eq!(unrestricted(kind, tag), Ok(INSTANCES));
    }
}

#[test]
fn restricted_values_match_enumeration_for_every_start_set() {
    for (kind, tag) in KINDS {
        assert_eq!(restricted(kind, tag), Ok(INSTANCES));
    }
}

#[test]
fn several_ends_in_one_sweep_match_enumeration() {
    assert_eq!(multi_endpoint(), Ok(INSTANCES));
}
