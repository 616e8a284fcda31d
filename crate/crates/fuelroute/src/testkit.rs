//! Hand-built fixtures shared by unit tests.

use crate::instance::{DayPlan, Matrices, PlannedStop};

/// Stations on a line: `dist(i, j) = step * |i - j|`, travel minutes equal
/// to kilometers. Index 0 is the hub.
pub(crate) fn line_matrices(n: usize, step: f64) -> Matrices {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| step * i.abs_diff(j) as f64).collect())
        .collect();
    Matrices::from_rows(rows.clone(), rows).unwrap()
}

pub(crate) fn stop(station: usize, demand: f64, service: f64, deadline: f64) -> PlannedStop {
    PlannedStop {
        station,
        demand_liters: demand,
        service_minutes: service,
        deadline_minutes: deadline,
    }
}

/// Day-1 plan over the given stops.
pub(crate) fn plan_of(stops: Vec<PlannedStop>) -> DayPlan {
    DayPlan::new(1, stops)
}
