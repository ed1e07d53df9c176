#![allow(dead_code)]

use std::path::PathBuf;

use odrk_core::model::{Flavor, RepositoryEndpoint};
use odrk_mockrepo::{FixtureSet, MockOptions, MockServer};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> FixtureSet {
    FixtureSet::load(fixtures().join(name)).expect("fixture loads")
}

pub fn serve(name: &str, options: MockOptions) -> MockServer {
    MockServer::start(fixture(name), options).expect("mock starts")
}

pub fn endpoint(name: &str, server: &MockServer) -> RepositoryEndpoint {
    RepositoryEndpoint::new(name, &server.base_url(), Flavor::Fixture)
        .unwrap()
        .with_timeout_seconds(5.0)
        .unwrap()
}
