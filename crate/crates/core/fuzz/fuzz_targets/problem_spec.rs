#![no_main]

use libfuzzer_sys::fuzz_target;
use thermobound::cli::spec::ProblemSpec;

// Decoding arbitrary bytes must return an error, never panic. Anything that
// decodes must survive a JSON round trip.
fuzz_target!(|data: &[u8]| {
    let Ok(spec) = ProblemSpec::from_slice(data) else {
        return;
    };
    if spec.decode().is_ok() {
        let again = ProblemSpec::from_json(&spec.to_json_pretty()).expect("round trip");
        assert_eq!(again, spec);
    }
});
