#![allow(dead_code)]

use proptest::test_runner::{Config, RngAlgorithm, RngSeed};

/// Property tests sample with this seed so runs are reproducible.
pub const SEED: u64 = 0x6772_6164_6563_7331;

pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_algorithm: RngAlgorithm::ChaCha,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: None,
        ..Config::default()
    }
}
