//! Crate-wide error type.

use crate::instance::ValidationReport;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("I/O: {0}")]
    Io(#[from] std::io::Error),

    #[error("invalid instance:\n{0}")]
    InvalidInstance(ValidationReport),

    #[error("day {day} outside horizon 1..={horizon}")]
    DayOutOfRange { day: u32, horizon: u32 },

    /// A station's aggregated daily demand cannot fit in one tanker; with no
    /// split deliveries the day is unservable.
    #[error("station {station} needs {demand} L on day {day}, capacity is {capacity} L")]
    InfeasibleStation {
        day: u32,
        station: usize,
        demand: f64,
        capacity: f64,
    },

    /// No route can serve this station even on its own.
    #[error("station {station} cannot be served{}: {reason}", day_suffix(*.day))]
    Infeasible {
        day: Option<u32>,
        station: usize,
        reason: String,
    },

    #[error("plan has {count} stations, exact search is capped at {cap} (raise the cap explicitly for larger plans)")]
    StationCapExceeded { count: usize, cap: usize },

    #[error("no feasible solution exists for this day plan")]
    NoFeasibleSolution,

    #[error("route bound {given} is below the minimum {needed} = ceil(total demand / capacity)")]
    RouteBoundTooSmall { given: usize, needed: usize },

    #[error("generator parameter {name} must be positive (got {value})")]
    NonPositiveParam { name: &'static str, value: f64 },

    #[error("demand bounds [{lo}, {hi}] invalid: need 0 < lo <= hi <= capacity {capacity}")]
    BadDemandBounds { lo: f64, hi: f64, capacity: f64 },

    #[error("demand bounds incompatible with gamma parameters: no in-bounds draw in {attempts} attempts")]
    ResampleCapExceeded { attempts: u32 },

    #[error("cannot place request {request}: every (day, station) slot is at capacity")]
    PlacementSaturated { request: usize },

    #[error("csv line {line}: {detail}")]
    CsvParse { line: u64, detail: String },
}

fn day_suffix(day: Option<u32>) -> String {
    match day {
        Some(d) => format!(" on day {d}"),
        None => String::new(),
    }
}
