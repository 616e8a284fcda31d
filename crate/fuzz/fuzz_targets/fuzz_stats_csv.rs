#![no_main]

use libfuzzer_sys::fuzz_target;

use fuelroute::bench::{parse_rows_csv, rows_to_csv, BenchRow, RunStats};

// A parsed file may interleave trial levels arbitrarily; grouping
// consecutive runs keeps the original row order so re-emission is
// order-faithful.
fn regroup(rows: Vec<BenchRow>) -> Vec<RunStats> {
    let mut stats: Vec<RunStats> = Vec::new();
    for row in rows {
        match stats.last_mut() {
            Some(last) if last.r_level == row.r_level => last.rows.push(row),
            _ => stats.push(RunStats { r_level: row.r_level, rows: vec![row] }),
        }
    }
    stats
}

// Bitwise comparison: the parser admits only finite nonnegative values, and
// a -0 input normalizes to 0 on the first emit, so anything beyond the first
// cycle must be bit-stable.
fn same(a: &BenchRow, b: &BenchRow) -> bool {
    a.r_level == b.r_level
        && a.repetition == b.repetition
        && a.mc_ms.to_bits() == b.mc_ms.to_bits()
        && a.sa_ms.to_bits() == b.sa_ms.to_bits()
        && a.mc_km.to_bits() == b.mc_km.to_bits()
        && a.sa_km.to_bits() == b.sa_km.to_bits()
}

// CSV parsing must never panic, anything it accepts must re-emit as a file
// it accepts again, and one emit+reload cycle must absorb the 6-decimal
// rounding so the values stabilize.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(rows1) = parse_rows_csv(text) else { return };
    let rows2 = parse_rows_csv(&rows_to_csv(&regroup(rows1))).expect("emitted rows reparse");
    let rows3 = parse_rows_csv(&rows_to_csv(&regroup(rows2.clone()))).expect("emitted rows reparse");
    assert_eq!(rows2.len(), rows3.len());
    assert!(
        rows2.iter().zip(&rows3).all(|(a, b)| same(a, b)),
        "one emit+reload cycle must stabilize the values"
    );
});
