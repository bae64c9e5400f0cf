#![no_main]

use libfuzzer_sys::fuzz_target;
use thermobound::cli::spec::parse_dims;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(dims) = parse_dims(s) {
        assert!(dims.iter().all(|d| (2..=16).contains(d)));
    }
});
