#![no_main]

use libfuzzer_sys::fuzz_target;
use thermobound::bounds::evaluate_bounds;
use thermobound::cli::spec::ProblemSpec;
use thermobound::thermo::cycle_ledger;

fuzz_target!(|data: &[u8]| {
    let Ok(spec) = ProblemSpec::from_slice(data) else {
        return;
    };
    if spec.max_declared_dim() > 8 {
        return;
    }
    let Ok(problem) = spec.decode() else {
        return;
    };
    let Some(v) = problem.measurement else {
        return;
    };
    if let Ok(r) = evaluate_bounds(&problem.ensemble, &v) {
        assert!(r.holevo_satisfied && r.thermo_satisfied, "{r:?}");
    }
    if let Ok(l) = cycle_ledger(&problem.ensemble, &v) {
        assert!(l.second_law_ok(), "net {}", l.net_bits);
    }
});
