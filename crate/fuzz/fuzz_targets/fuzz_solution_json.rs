#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;

use fuelroute::feasibility::{check_solution, solution_from_json, violations_to_json};
use fuelroute::instance::{generate_instance, GeneratorParams, Instance};

fn fixture() -> &'static Instance {
    static INSTANCE: OnceLock<Instance> = OnceLock::new();
    INSTANCE.get_or_init(|| {
        let params = GeneratorParams {
            stations: 4,
            horizon_days: 2,
            requests: 8,
            seed: 1,
            ..GeneratorParams::default()
        };
        generate_instance(&params).expect("fixture generates")
    })
}

// Solution documents arrive from untrusted files via `evaluate`, so parsing
// and checking must never panic: day zero, out-of-range station ids, huge or
// non-finite totals all have to come back as violations, and the violation
// report itself must serialize.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(sol) = solution_from_json(text) else { return };
    let violations = check_solution(&sol, fixture());
    let _ = violations_to_json(&violations);
});
