#![allow(dead_code)]

use std::path::PathBuf;

use survroute::NetworkInstance;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture(name: &str) -> NetworkInstance {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture readable");
    NetworkInstance::parse(&text).expect("fixture parses")
}

pub fn trivial() -> NetworkInstance {
    fixture("trivial_1mr.net")
}

pub fn standard() -> NetworkInstance {
    fixture("standard_3mr.net")
}

pub fn stress() -> NetworkInstance {
    fixture("stress_5mr.net")
}
