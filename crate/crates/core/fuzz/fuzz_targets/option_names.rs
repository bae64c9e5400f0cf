#![no_main]

use libfuzzer_sys::fuzz_target;
use thermobound::bounds::{Method, StateKind};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = s.parse::<Method>() {
        assert_eq!(m.name().parse::<Method>().ok(), Some(m));
    }
    if let Ok(k) = s.parse::<StateKind>() {
        assert_eq!(k.name().parse::<StateKind>().ok(), Some(k));
    }
});
