//! Config documents: parsing and validation must never panic.
//!
//! Run with: cargo +nightly fuzz run fuzz_config

#![no_main]

use libfuzzer_sys::fuzz_target;
use qcspace_cli::config::{FileConfig, RunConfig};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(file) = qcspace_cli::parse_config_json(text) {
        if let Ok(cfg) = RunConfig::resolve(&file, &FileConfig::default()) {
            assert!(cfg.k > 1.0 && cfg.tol > 0.0 && cfg.dimension >= 2);
        }
    }
});
