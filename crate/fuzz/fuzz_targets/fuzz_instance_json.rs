#![no_main]

use libfuzzer_sys::fuzz_target;

use fuelroute::instance::{from_json, to_canonical_json};

// Instance parsing must never panic, and canonical serialization must
// stabilize: the first emit+reload cycle absorbs the 6-decimal rounding,
// after which the text is a fixpoint. A reload is allowed to fail outright
// (rounding can collapse a strict inequality such as deadline > travel
// time), but it must never crash, and when it succeeds the text must
// reproduce.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(first) = from_json(text) else { return };
    let canon1 = to_canonical_json(&first);
    let Ok(second) = from_json(&canon1) else { return };
    let canon2 = to_canonical_json(&second);
    let Ok(third) = from_json(&canon2) else { return };
    assert_eq!(to_canonical_json(&third), canon2, "canonical text must be a fixpoint");
});
