#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = qcspace_cli::parse_grid_spec(text) {
        assert!(spec.min <= spec.max && spec.max <= 0.0);
        // building the points is cheap only for small counts
        if spec.count <= 4096 {
            let points = spec.points().expect("validated spec");
            assert_eq!(points.len(), spec.count);
        }
    }
});
