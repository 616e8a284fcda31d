//! Per-route simulated annealing over stop orders.
//!
//! The move is segment reversal: pick two positions at least two apart and
//! reverse the half-open span between them. Shorter candidates are accepted
//! outright; longer ones survive a Boltzmann draw whose temperature follows
//! the inverse-linear schedule `T_k = t0 / k` for iteration `k = 1, 2, …`,
//! stopping once the temperature falls to `t_end`. With the default
//! schedule (`t0 = 1`, `t_end = 0.001`) that is exactly 999 candidate
//! evaluations per route.
//!
//! Only the visit order changes, so capacity checks never need repeating;
//! deadline feasibility does, and candidates that miss a deadline are
//! discarded before any acceptance draw.

use crate::feasibility::{route_distance, Route, Solution};
use crate::instance::{fmt_num, DayPlan, Matrices};
use crate::rng::Rng;

/// Which state a finished run reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReturnPolicy {
    /// The lowest-energy feasible state observed anywhere in the run.
    BestSeen,
    /// Whatever state the chain ends in, even if worse than earlier states.
    FinalState,
}

/// Cooling schedule and acceptance options.
#[derive(Clone, Debug, PartialEq)]
pub struct SaParams {
    /// Starting temperature. Iteration `k` runs at `t0 / k`.
    pub t0: f64,
    /// The run stops once the temperature is no longer above this. Must be
    /// positive or the schedule never terminates.
    pub t_end: f64,
    /// Reject candidates whose arrival times miss a deadline. Disabling
    /// this explores the unconstrained ordering landscape.
    pub enforce_windows: bool,
    pub return_policy: ReturnPolicy,
}

impl Default for SaParams {
    fn default() -> Self {
        Self { t0: 1.0, t_end: 0.001, enforce_windows: true, return_policy: ReturnPolicy::BestSeen }
    }
}

/// One annealing iteration as recorded by [`anneal_traced`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceEntry {
    /// 1-based iteration number.
    pub iteration: usize,
    /// Temperature the acceptance test ran at.
    pub temperature: f64,
    /// Chain energy (route kilometers) after the accept/reject decision.
    pub energy: f64,
    pub accepted: bool,
}

/// Returns `route` with the half-open span `[i, j)` of stops reversed.
pub fn reverse_segment(route: &Route, i: usize, j: usize) -> Route {
    debug_assert!(i < j && j <= route.stops.len(), "span out of bounds");
    let mut stops = route.stops.clone();
    stops[i..j].reverse();
    Route { day: route.day, stops }
}

/// Draws a neighbor of `route`: two positions at least two apart, segment
/// between them reversed. Routes of three or fewer stops have no such pair
/// and come back unchanged.
pub fn generate(route: &Route, rng: &mut Rng) -> Route {
    let n = route.stops.len();
    if n <= 3 {
        return route.clone();
    }
    let i = rng.index(n);
    let mut j = rng.index(n);
    while i.abs_diff(j) < 2 {
        j = rng.index(n);
    }
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    reverse_segment(route, lo, hi)
}

/// Boltzmann acceptance: true iff `exp(-delta / temperature)` is at least
/// the next uniform draw. A non-positive `delta` always passes.
pub fn metropolis_accept(delta: f64, temperature: f64, rng: &mut Rng) -> bool {
    (-delta / temperature).exp() >= rng.uniform(0.0, 1.0)
}

/// Arrival-before-deadline check for a stop order, hub departure at minute 0.
fn windows_ok(route: &Route, plan: &DayPlan, mat: &Matrices) -> bool {
    let mut clock = 0.0;
    let mut prev = 0usize;
    for &station in &route.stops {
        let Some(stop) = plan.stop(station) else {
            return false;
        };
        let arrival = clock + mat.travel(prev, station);
        if arrival > stop.deadline_minutes {
            return false;
        }
        clock = arrival + stop.service_minutes;
        prev = station;
    }
    true
}

fn anneal_inner(
    route: &Route,
    plan: &DayPlan,
    mat: &Matrices,
    params: &SaParams,
    rng: &mut Rng,
    mut trace: Option<&mut Vec<TraceEntry>>,
) -> Route {
    debug_assert!(params.t_end > 0.0, "non-positive t_end never terminates");
    let mut current = route.clone();
    let mut energy = route_distance(&current, mat);
    let mut best = current.clone();
    let mut best_energy = energy;

    let mut temperature = params.t0;
    let mut iteration = 0usize;
    while temperature > params.t_end {
        iteration += 1;
        let candidate = generate(&current, rng);
        let cand_energy = route_distance(&candidate, mat);
        // Infeasible and improving candidates alike skip the Boltzmann
        // draw, so the draw count depends only on the uphill proposals.
        let feasible = !params.enforce_windows || windows_ok(&candidate, plan, mat);
        let accepted = feasible
            && (cand_energy < energy
                || metropolis_accept(cand_energy - energy, temperature, rng));
        if accepted {
            current = candidate;
            energy = cand_energy;
            if energy < best_energy && (params.enforce_windows || windows_ok(&current, plan, mat))
            {
                best = current.clone();
                best_energy = energy;
            }
        }
        if let Some(t) = trace.as_deref_mut() {
            t.push(TraceEntry { iteration, temperature, energy, accepted });
        }
        temperature = params.t0 / (iteration as f64 + 1.0);
    }
    match params.return_policy {
        ReturnPolicy::BestSeen => best,
        ReturnPolicy::FinalState => current,
    }
}

/// Anneals one route's stop order. The input order should satisfy its
/// deadlines; under [`ReturnPolicy::BestSeen`] the result is then feasible
/// and never longer than the input.
pub fn anneal(
    route: &Route,
    plan: &DayPlan,
    mat: &Matrices,
    params: &SaParams,
    rng: &mut Rng,
) -> Route {
    anneal_inner(route, plan, mat, params, rng, None)
}

/// [`anneal`] that also records every iteration.
pub fn anneal_traced(
    route: &Route,
    plan: &DayPlan,
    mat: &Matrices,
    params: &SaParams,
    rng: &mut Rng,
) -> (Route, Vec<TraceEntry>) {
    let mut trace = Vec::new();
    let improved = anneal_inner(route, plan, mat, params, rng, Some(&mut trace));
    (improved, trace)
}

/// Anneals every route of a set independently and assembles the result,
/// routes ordered by first stop, total recomputed in that order.
///
/// Each route gets its own generator keyed off `rng` in input order, so the
/// outcome is a pure function of the incoming routes and `rng`'s state.
pub fn improve_solution(
    routes: &[Route],
    plan: &DayPlan,
    mat: &Matrices,
    params: &SaParams,
    rng: &mut Rng,
) -> Solution {
    improve_inner(routes, plan, mat, params, rng, false).0
}

/// [`improve_solution`] that also returns each route's iteration trace,
/// aligned with the assembled route order.
pub fn improve_solution_traced(
    routes: &[Route],
    plan: &DayPlan,
    mat: &Matrices,
    params: &SaParams,
    rng: &mut Rng,
) -> (Solution, Vec<Vec<TraceEntry>>) {
    let (solution, traces) = improve_inner(routes, plan, mat, params, rng, true);
    (solution, traces.expect("traces requested"))
}

/// Renders a trace as RFC-4180 CSV with header `iteration,T,E,accepted`.
pub fn trace_to_csv(trace: &[TraceEntry]) -> String {
    let mut w =
        csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    w.write_record(["iteration", "T", "E", "accepted"]).expect("in-memory write");
    for entry in trace {
        w.write_record([
            entry.iteration.to_string(),
            fmt_num(entry.temperature),
            fmt_num(entry.energy),
            entry.accepted.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

fn improve_inner(
    routes: &[Route],
    plan: &DayPlan,
    mat: &Matrices,
    params: &SaParams,
    rng: &mut Rng,
    want_traces: bool,
) -> (Solution, Option<Vec<Vec<TraceEntry>>>) {
    let seeds: Vec<u64> = routes.iter().map(|_| rng.next_seed()).collect();
    let mut improved: Vec<(Route, Vec<TraceEntry>)> = routes
        .iter()
        .zip(&seeds)
        .map(|(route, &seed)| {
            let mut route_rng = Rng::seed_from(seed);
            if want_traces {
                anneal_traced(route, plan, mat, params, &mut route_rng)
            } else {
                (anneal(route, plan, mat, params, &mut route_rng), Vec::new())
            }
        })
        .collect();
    // Total in input order: each annealed route is no longer than its
    // original, so this sum never exceeds the pre-annealing total, bit for
    // bit. The first-stop sort below is presentation only.
    let total_km: f64 = improved.iter().map(|(r, _)| route_distance(r, mat)).sum();
    improved.sort_by_key(|(r, _)| r.stops.first().copied().unwrap_or(0));
    let (improved, traces): (Vec<Route>, Vec<Vec<TraceEntry>>) = improved.into_iter().unzip();
    (Solution { routes: improved, total_km }, want_traces.then_some(traces))
}
