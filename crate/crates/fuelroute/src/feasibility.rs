//! Schedules, route distances, and the violation checker.
//!
//! A route starts loaded at the hub at minute 0 and drives directly: the
//! arrival at the first stop is the hub travel time, and each later arrival
//! adds the previous stop's service time plus the connecting leg. There is
//! no waiting (every time window opens at 0) and the return leg to the hub
//! carries no deadline.
//!
//! Everything downstream is judged by [`check_solution`]: the solver's
//! outputs must come back violation-free, and the exact oracle optimizes
//! over exactly the solutions this module accepts.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::instance::{build_day_plan, fmt_num, DayPlan, Fleet, Instance, LoadPolicy, Matrices};

/// One tanker's day: an ordered list of station ids (hub departure and
/// return are implicit).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Route {
    pub day: u32,
    pub stops: Vec<usize>,
}

/// Arrival/departure minutes and the liters on board before each stop,
/// parallel to a route's stops.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    pub arrivals: Vec<f64>,
    pub departures: Vec<f64>,
    pub load_before: Vec<f64>,
}

/// A set of routes (any mix of days) with their summed length.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub routes: Vec<Route>,
    pub total_km: f64,
}

impl Solution {
    pub fn empty() -> Self {
        Self { routes: Vec::new(), total_km: 0.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// Arrival after the stop's deadline; magnitude = minutes late.
    DeadlineMissed,
    /// Deliveries exceed tank capacity; magnitude = liters over.
    CapacityExceeded,
    /// FullLoad route returns with fuel; magnitude = liters short of a full
    /// tank.
    NotEmptied,
    /// Station served more than once in a day (or twice in one route);
    /// magnitude = extra visits.
    DuplicateStop,
    /// Station with demand that day but no visit; magnitude = its liters.
    UncoveredStation,
    /// Route day outside the horizon, or a stop with no demand that day;
    /// magnitude = 1 per offence.
    WrongDay,
    /// Stop references a station id the instance does not have; magnitude =
    /// 1 per offence. Distances involving such stops are undefined.
    UnknownStation,
    /// Solution's declared total_km differs from the recomputed value;
    /// magnitude = |difference| in km.
    TotalKmMismatch,
}

/// One concrete rule violation, located as precisely as possible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub route: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stop: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub station: Option<usize>,
    pub magnitude: f64,
}

impl Violation {
    fn new(kind: ViolationKind, magnitude: f64) -> Self {
        Self { kind, route: None, stop: None, station: None, magnitude }
    }

    fn at_route(mut self, route: usize) -> Self {
        self.route = Some(route);
        self
    }

    fn at_stop(mut self, stop: usize) -> Self {
        self.stop = Some(stop);
        self
    }

    fn at_station(mut self, station: usize) -> Self {
        self.station = Some(station);
        self
    }
}

/// Propagates arrival and departure times along a route.
///
/// Fails if a stop has no demand in the plan (its service time would be
/// undefined). Load starts at a full tank; under FullLoad the final stop
/// absorbs whatever remains.
pub fn schedule(route: &Route, plan: &DayPlan, mat: &Matrices, fleet: &Fleet) -> Result<Schedule, Error> {
    let n = route.stops.len();
    let mut arrivals = Vec::with_capacity(n);
    let mut departures = Vec::with_capacity(n);
    let mut load_before = Vec::with_capacity(n);
    let mut prev = 0usize;
    let mut clock = 0.0;
    let mut load = fleet.capacity_liters;
    for (idx, &station) in route.stops.iter().enumerate() {
        let stop = plan.stop(station).ok_or_else(|| Error::Infeasible {
            day: Some(plan.day),
            station,
            reason: format!("no demand on day {}", plan.day),
        })?;
        let arrival = clock + mat.travel(prev, station);
        let departure = arrival + stop.service_minutes;
        arrivals.push(arrival);
        departures.push(departure);
        load_before.push(load);
        let delivered = if idx + 1 == n && fleet.load_policy == LoadPolicy::FullLoad {
            load // tank emptied at the last stop
        } else {
            stop.demand_liters
        };
        load -= delivered;
        clock = departure;
        prev = station;
    }
    Ok(Schedule { arrivals, departures, load_before })
}

/// Kilometers of the closed tour hub → stops… → hub.
pub fn route_distance(route: &Route, mat: &Matrices) -> f64 {
    let mut total = 0.0;
    let mut prev = 0usize;
    for &stop in &route.stops {
        total += mat.dist(prev, stop);
        prev = stop;
    }
    total + mat.dist(prev, 0)
}

/// Sum of [`route_distance`] over `routes`, in iteration order.
pub fn total_distance(routes: &[Route], mat: &Matrices) -> f64 {
    routes.iter().map(|r| route_distance(r, mat)).sum()
}

/// Checks one route against deadlines and the load policy. An empty result
/// means every arrival meets its deadline and the deliveries fit the policy.
pub fn check_route(route: &Route, plan: &DayPlan, mat: &Matrices, fleet: &Fleet) -> Vec<Violation> {
    let mut violations = Vec::new();

    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &s in &route.stops {
        *counts.entry(s).or_insert(0) += 1;
    }
    for (&station, &count) in &counts {
        if count > 1 {
            violations.push(
                Violation::new(ViolationKind::DuplicateStop, (count - 1) as f64)
                    .at_station(station),
            );
        }
    }

    let mut known = Vec::with_capacity(route.stops.len());
    for (idx, &station) in route.stops.iter().enumerate() {
        match plan.stop(station) {
            Some(stop) => known.push((idx, stop)),
            None if station >= mat.size() => violations.push(
                Violation::new(ViolationKind::UnknownStation, 1.0)
                    .at_stop(idx)
                    .at_station(station),
            ),
            None => violations.push(
                Violation::new(ViolationKind::WrongDay, 1.0)
                    .at_stop(idx)
                    .at_station(station),
            ),
        }
    }

    // Deadlines need the schedule, which is undefined with off-plan stops.
    if known.len() == route.stops.len() {
        let sched = schedule(route, plan, mat, fleet).expect("all stops in plan");
        for (idx, &station) in route.stops.iter().enumerate() {
            let deadline = plan.stop(station).expect("in plan").deadline_minutes;
            let arrival = sched.arrivals[idx];
            if arrival > deadline {
                violations.push(
                    Violation::new(ViolationKind::DeadlineMissed, arrival - deadline)
                        .at_stop(idx)
                        .at_station(station),
                );
            }
        }
    }

    let total: f64 = known.iter().map(|(_, s)| s.demand_liters).sum();
    let capacity = fleet.capacity_liters;
    match fleet.load_policy {
        LoadPolicy::Bounded => {
            if total > capacity {
                violations.push(Violation::new(ViolationKind::CapacityExceeded, total - capacity));
            }
        }
        LoadPolicy::FullLoad => {
            // The last stop's delivery is truncated to the remaining load,
            // so capacity binds on the stops before it.
            let before_last: f64 = match known.split_last() {
                Some((_, init)) => init.iter().map(|(_, s)| s.demand_liters).sum(),
                None => 0.0,
            };
            if before_last > capacity {
                violations
                    .push(Violation::new(ViolationKind::CapacityExceeded, before_last - capacity));
            }
            if total < capacity {
                violations.push(Violation::new(ViolationKind::NotEmptied, capacity - total));
            }
        }
    }

    violations
}

/// Tolerance for the declared-vs-recomputed total_km cross-check; absorbs
/// 6-decimal canonical rounding, far below any meaningful discrepancy.
pub const TOTAL_KM_TOLERANCE: f64 = 1e-3;

/// Checks a solution against an instance: per-route rules, exact coverage
/// of every demanded station on each day the solution has routes for, and
/// the declared total.
///
/// A solution vouches only for the days it contains. A single-day solution
/// is therefore judged against that day alone, and the per-day outputs of
/// the solver pass cleanly on a multi-day instance.
pub fn check_solution(sol: &Solution, inst: &Instance) -> Vec<Violation> {
    let mut violations = Vec::new();
    let mut plans: BTreeMap<u32, DayPlan> = BTreeMap::new();

    for (ridx, route) in sol.routes.iter().enumerate() {
        if route.day == 0 || route.day > inst.horizon_days {
            violations.push(Violation::new(ViolationKind::WrongDay, 1.0).at_route(ridx));
            continue;
        }
        let plan = plans
            .entry(route.day)
            .or_insert_with(|| build_day_plan(inst, route.day));
        for v in check_route(route, plan, &inst.matrices, &inst.fleet) {
            violations.push(Violation { route: Some(ridx), ..v });
        }
    }

    // Coverage per covered day: every demanded station exactly once.
    let days: Vec<u32> = plans.keys().copied().collect();
    for day in days {
        let plan = &plans[&day];
        let mut visits: BTreeMap<usize, usize> = BTreeMap::new();
        for route in sol.routes.iter().filter(|r| r.day == day) {
            for &s in &route.stops {
                *visits.entry(s).or_insert(0) += 1;
            }
        }
        for stop in plan.stops() {
            match visits.get(&stop.station) {
                None => violations.push(
                    Violation::new(ViolationKind::UncoveredStation, stop.demand_liters)
                        .at_station(stop.station),
                ),
                Some(&n) if n > 1 => {
                    // Within-route duplicates are already reported by
                    // check_route; report cross-route duplication once.
                    let within: usize = sol
                        .routes
                        .iter()
                        .filter(|r| r.day == day)
                        .map(|r| {
                            let c = r.stops.iter().filter(|&&s| s == stop.station).count();
                            c.saturating_sub(1)
                        })
                        .sum();
                    if n - 1 > within {
                        violations.push(
                            Violation::new(ViolationKind::DuplicateStop, (n - 1 - within) as f64)
                                .at_station(stop.station),
                        );
                    }
                }
                _ => {}
            }
        }
    }

    // Distances are undefined for station ids outside the matrices, so the
    // declared-total cross-check only runs when every stop is in range. The
    // offending stops were already reported above.
    let size = inst.matrices.size();
    if sol.routes.iter().flat_map(|r| &r.stops).all(|&s| s < size) {
        let recomputed: f64 =
            sol.routes.iter().map(|r| route_distance(r, &inst.matrices)).sum();
        let gap = (sol.total_km - recomputed).abs();
        // A NaN declared total must be flagged too, hence the explicit branch.
        if gap.is_nan() {
            violations.push(Violation::new(ViolationKind::TotalKmMismatch, f64::INFINITY));
        } else if gap > TOTAL_KM_TOLERANCE {
            violations.push(Violation::new(ViolationKind::TotalKmMismatch, gap));
        }
    }

    violations
}

// ---------------------------------------------------------------------------
// Solution documents

#[derive(Deserialize)]
struct RawSolution {
    routes: Vec<RawRoute>,
    total_km: f64,
}

#[derive(Deserialize)]
struct RawRoute {
    day: u32,
    stops: Vec<usize>,
    // km and arrivals are derived fields; accepted but recomputed on use.
    #[serde(default)]
    #[allow(dead_code)]
    km: Option<f64>,
    #[serde(default)]
    #[allow(dead_code)]
    arrivals: Option<Vec<f64>>,
}

/// Parses a solution document. Derived fields (per-route km, arrivals) are
/// accepted and ignored; the checker recomputes them from stops.
pub fn solution_from_json(text: &str) -> Result<Solution, Error> {
    let raw: RawSolution = serde_json::from_str(text)?;
    Ok(Solution {
        routes: raw
            .routes
            .into_iter()
            .map(|r| Route { day: r.day, stops: r.stops })
            .collect(),
        total_km: raw.total_km,
    })
}

/// Reads a solution document from `reader`.
pub fn load_solution(mut reader: impl Read) -> Result<Solution, Error> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    solution_from_json(&text)
}

/// Serializes a solution on one line with derived per-route km and arrival
/// times. Derived fields degrade rather than fail on routes the instance
/// cannot explain: km is omitted when a stop is outside the matrices, and
/// arrivals are empty when the schedule is undefined (off-plan stops). The
/// document is for inspection, the checker is the authority.
pub fn solution_to_canonical_json(sol: &Solution, inst: &Instance) -> String {
    let mut out = String::from("{\"routes\": [");
    for (i, route) in sol.routes.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str("{\"day\": ");
        out.push_str(&route.day.to_string());
        out.push_str(", \"stops\": [");
        for (j, s) in route.stops.iter().enumerate() {
            if j > 0 {
                out.push_str(", ");
            }
            out.push_str(&s.to_string());
        }
        out.push_str("], ");
        if route.stops.iter().all(|&s| s < inst.matrices.size()) {
            out.push_str("\"km\": ");
            out.push_str(&fmt_num(route_distance(route, &inst.matrices)));
            out.push_str(", ");
        }
        out.push_str("\"arrivals\": [");
        let arrivals = if route.day >= 1 && route.day <= inst.horizon_days {
            let plan = build_day_plan(inst, route.day);
            schedule(route, &plan, &inst.matrices, &inst.fleet)
                .map(|s| s.arrivals)
                .unwrap_or_default()
        } else {
            Vec::new()
        };
        for (j, a) in arrivals.iter().enumerate() {
            if j > 0 {
                out.push_str(", ");
            }
            out.push_str(&fmt_num(*a));
        }
        out.push_str("]}");
    }
    out.push_str("], \"total_km\": ");
    out.push_str(&fmt_num(sol.total_km));
    out.push_str("}\n");
    out
}

/// Writes the canonical solution document to `writer`.
pub fn save_solution(sol: &Solution, inst: &Instance, mut writer: impl Write) -> Result<(), Error> {
    writer.write_all(solution_to_canonical_json(sol, inst).as_bytes())?;
    Ok(())
}

/// Serializes a violation report as a JSON array (one line).
pub fn violations_to_json(violations: &[Violation]) -> String {
    let mut out = serde_json::to_string(violations).expect("violations always serialize");
    out.push('\n');
    out
}
