#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(ns) = qcspace_cli::parse_index_range(text) {
        assert!(!ns.is_empty());
        assert!(ns.len() <= qcspace_cli::parse::MAX_INDICES);
        assert!(ns.iter().all(|&n| n >= 1));
    }
});
