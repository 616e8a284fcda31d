//! Exact optimum for small days, plus an LP-file export of the arc model.
//!
//! The search branches over ordered route sets directly: grow the open
//! route one station at a time or close it and open the next. Route sets
//! are generated with strictly increasing first stops, which picks one
//! representative per unordered set of routes. Feasibility here matches
//! the checker exactly (arrival before deadline, load policy on liters),
//! so the reported optimum is over the same solution space that
//! [`check_solution`](crate::feasibility::check_solution) accepts.
//!
//! Branches are cut when the kilometers already committed reach the best
//! known total. Totals are always recomputed route by route in first-stop
//! order, and partial sums of nonnegative numbers never exceed their
//! completions in IEEE arithmetic, so the cut never discards a strictly
//! better solution and equal optima reproduce bit for bit.

use std::time::{Duration, Instant};

use crate::construct;
use crate::error::Error;
use crate::feasibility::{check_route, Route};
use crate::instance::{fmt_num, DayPlan, Fleet, LoadPolicy, Matrices, PlannedStop};
use crate::rng::Rng;

/// Caps on the exhaustive search. `station_cap` guards against calling the
/// factorial search on a day it cannot finish; the node and time limits
/// turn a run into an anytime search that may return unproven bounds.
#[derive(Clone, Debug)]
pub struct SearchLimits {
    pub station_cap: usize,
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self { station_cap: 10, max_nodes: None, max_time: None }
    }
}

/// Outcome of [`solve_exact`]. When `proven` is false a limit stopped the
/// search early: the routes are the best found so far, and `optimum_km` is
/// infinite if nothing feasible had been reached yet.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactResult {
    pub optimum_km: f64,
    pub routes: Vec<Route>,
    pub nodes_explored: u64,
    pub proven: bool,
}

/// Seed for the construction draw that warm-starts the incumbent.
const WARM_START_SEED: u64 = 0x5eed_ba5e;

/// Finds a shortest feasible route set for one day by branch and bound.
///
/// Errors if the day is provably infeasible (some station unreachable
/// before its deadline, or demand beyond tanker capacity), or if the day
/// has more stations than `limits.station_cap` allows.
pub fn solve_exact(
    plan: &DayPlan,
    mat: &Matrices,
    fleet: &Fleet,
    limits: &SearchLimits,
) -> Result<ExactResult, Error> {
    let stops = plan.stops();
    let m = stops.len();
    if m == 0 {
        return Ok(ExactResult { optimum_km: 0.0, routes: Vec::new(), nodes_explored: 0, proven: true });
    }
    let cap = limits.station_cap.min(64);
    if m > cap {
        return Err(Error::StationCapExceeded { count: m, cap });
    }
    for stop in stops {
        if mat.travel(0, stop.station) > stop.deadline_minutes {
            return Err(Error::Infeasible {
                day: Some(plan.day),
                station: stop.station,
                reason: format!(
                    "direct arrival {:.1} min is past the deadline {:.1} min",
                    mat.travel(0, stop.station),
                    stop.deadline_minutes
                ),
            });
        }
        if fleet.load_policy == LoadPolicy::Bounded && stop.demand_liters > fleet.capacity_liters {
            return Err(Error::Infeasible {
                day: Some(plan.day),
                station: stop.station,
                reason: format!(
                    "demand {} L exceeds tanker capacity {} L",
                    stop.demand_liters, fleet.capacity_liters
                ),
            });
        }
    }

    let mut search = Search {
        stops,
        mat,
        fleet,
        deadline: limits.max_time.map(|t| Instant::now() + t),
        max_nodes: limits.max_nodes,
        nodes: 0,
        truncated: false,
        best_km: f64::INFINITY,
        best_routes: Vec::new(),
        closed: Vec::new(),
    };
    search.warm_start(plan);

    let all = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    search.open_route(all, None, 0.0);

    let proven = !search.truncated;
    if search.best_km.is_infinite() && proven {
        return Err(Error::NoFeasibleSolution);
    }
    let routes = search
        .best_routes
        .iter()
        .map(|r| Route { day: plan.day, stops: r.iter().map(|&i| stops[i].station).collect() })
        .collect();
    Ok(ExactResult {
        optimum_km: search.best_km,
        routes,
        nodes_explored: search.nodes,
        proven,
    })
}

struct Search<'a> {
    stops: &'a [PlannedStop],
    mat: &'a Matrices,
    fleet: &'a Fleet,
    deadline: Option<Instant>,
    max_nodes: Option<u64>,
    nodes: u64,
    truncated: bool,
    best_km: f64,
    /// Plan indices per route of the incumbent, first stops increasing.
    best_routes: Vec<Vec<usize>>,
    /// Closed routes along the current branch.
    closed: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Seeds the incumbent with one construction draw, when that draw is
    /// feasible under the checker (construction ignores the full-load
    /// emptying rule, so the draw is verified before it is trusted).
    fn warm_start(&mut self, plan: &DayPlan) {
        let mut rng = Rng::seed_from(WARM_START_SEED);
        let Ok(routes) = construct::initial(plan, self.mat, self.fleet, &mut rng) else {
            return;
        };
        if !routes.iter().all(|r| check_route(r, plan, self.mat, self.fleet).is_empty()) {
            return;
        }
        let station_index: std::collections::BTreeMap<usize, usize> =
            self.stops.iter().enumerate().map(|(i, s)| (s.station, i)).collect();
        let mut indexed: Vec<Vec<usize>> = routes
            .iter()
            .map(|r| r.stops.iter().map(|s| station_index[s]).collect())
            .collect();
        indexed.sort_by_key(|r| r[0]);
        let mut total = 0.0;
        for r in &indexed {
            total += self.indexed_route_km(r);
        }
        self.best_km = total;
        self.best_routes = indexed;
    }

    /// Canonical kilometers of one route given as plan indices.
    fn indexed_route_km(&self, route: &[usize]) -> f64 {
        let mut km = 0.0;
        let mut prev = 0usize;
        for &idx in route {
            km += self.mat.dist(prev, self.stops[idx].station);
            prev = self.stops[idx].station;
        }
        km + self.mat.dist(prev, 0)
    }

    fn hit_limit(&mut self) -> bool {
        if self.truncated {
            return true;
        }
        if self.max_nodes.is_some_and(|max| self.nodes >= max) {
            self.truncated = true;
            return true;
        }
        // Clock checks are amortized; the node counter is exact.
        if self.nodes & 0xff == 0 && self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.truncated = true;
            return true;
        }
        false
    }

    /// Starts a fresh route. `min_first` is the previous route's first
    /// stop; candidates must exceed it, which fixes the route order.
    fn open_route(&mut self, remaining: u64, min_first: Option<usize>, closed_km: f64) {
        if self.hit_limit() {
            return;
        }
        self.nodes += 1;
        let mut rest = remaining;
        while rest != 0 {
            let idx = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if min_first.is_some_and(|f| idx <= f) {
                continue;
            }
            let stop = &self.stops[idx];
            let arrival = self.mat.travel(0, stop.station);
            if arrival > stop.deadline_minutes {
                continue;
            }
            if self.fleet.load_policy == LoadPolicy::Bounded
                && stop.demand_liters > self.fleet.capacity_liters
            {
                continue;
            }
            let path_km = self.mat.dist(0, stop.station);
            if closed_km + path_km >= self.best_km {
                continue;
            }
            let mut open = vec![idx];
            self.extend_route(
                remaining & !(1 << idx),
                &mut open,
                stop.station,
                arrival + stop.service_minutes,
                stop.demand_liters,
                path_km,
                closed_km,
            );
        }
    }

    /// Branches on an open, nonempty route: either close it (and recurse
    /// into the rest) or append one more reachable station.
    #[allow(clippy::too_many_arguments)]
    fn extend_route(
        &mut self,
        remaining: u64,
        open: &mut Vec<usize>,
        last_station: usize,
        clock: f64,
        load: f64,
        path_km: f64,
        closed_km: f64,
    ) {
        if self.hit_limit() {
            return;
        }
        self.nodes += 1;

        let may_close = match self.fleet.load_policy {
            LoadPolicy::Bounded => true,
            LoadPolicy::FullLoad => load >= self.fleet.capacity_liters,
        };
        if may_close {
            let total = closed_km + self.indexed_route_km(open);
            if total < self.best_km {
                if remaining == 0 {
                    self.best_km = total;
                    let mut routes = self.closed.clone();
                    routes.push(open.clone());
                    self.best_routes = routes;
                } else {
                    self.closed.push(open.clone());
                    self.open_route(remaining, Some(open[0]), total);
                    self.closed.pop();
                }
            }
        }

        let mut rest = remaining;
        while rest != 0 {
            let idx = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let stop = &self.stops[idx];
            match self.fleet.load_policy {
                // The stop currently last loses that status, so the liters
                // already on the route must fit the tank outright.
                LoadPolicy::FullLoad => {
                    if load > self.fleet.capacity_liters {
                        continue;
                    }
                }
                LoadPolicy::Bounded => {
                    if load + stop.demand_liters > self.fleet.capacity_liters {
                        continue;
                    }
                }
            }
            let arrival = clock + self.mat.travel(last_station, stop.station);
            if arrival > stop.deadline_minutes {
                continue;
            }
            let next_path = path_km + self.mat.dist(last_station, stop.station);
            if closed_km + next_path >= self.best_km {
                continue;
            }
            open.push(idx);
            self.extend_route(
                remaining & !(1 << idx),
                open,
                stop.station,
                arrival + stop.service_minutes,
                load + stop.demand_liters,
                next_path,
                closed_km,
            );
            open.pop();
        }
    }
}

/// Renders an [`ExactResult`] as a single-line JSON document. An unproven
/// run with no feasible routes yet reports `"optimum_km": null`.
pub fn result_to_json(result: &ExactResult, day: u32) -> String {
    let mut out = String::from("{");
    out.push_str(&format!("\"day\": {day}, \"optimum_km\": "));
    if result.optimum_km.is_finite() {
        out.push_str(&fmt_num(result.optimum_km));
    } else {
        out.push_str("null");
    }
    out.push_str(", \"routes\": [");
    for (i, route) in result.routes.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push('[');
        for (j, stop) in route.stops.iter().enumerate() {
            if j > 0 {
                out.push_str(", ");
            }
            out.push_str(&stop.to_string());
        }
        out.push(']');
    }
    out.push_str(&format!(
        "], \"nodes_explored\": {}, \"proven\": {}}}\n",
        result.nodes_explored, result.proven
    ));
    out
}

// ---------------------------------------------------------------------------
// LP export

/// Horizon constant for the arc model's time-propagation rows: one more
/// than the largest deadline plus the largest service and travel times, so
/// a disabled row can never bind.
pub fn big_m(plan: &DayPlan, mat: &Matrices) -> f64 {
    let stops = plan.stops();
    let max_u = stops.iter().map(|s| s.deadline_minutes).fold(0.0, f64::max);
    let max_s = stops.iter().map(|s| s.service_minutes).fold(0.0, f64::max);
    let mut nodes: Vec<usize> = vec![0];
    nodes.extend(stops.iter().map(|s| s.station));
    let mut max_t = 0.0;
    for &a in &nodes {
        for &b in &nodes {
            if a != b {
                max_t = f64::max(max_t, mat.travel(a, b));
            }
        }
    }
    max_u + max_s + max_t + 1.0
}

/// Writes one day as a CPLEX-LP mixed-integer model over `routes` tankers.
///
/// Nodes are a start depot 0, stations renumbered 1..=m in station-id
/// order, and a terminal depot m+1 sharing the hub's distances. Binaries
/// `x_n_i_j` select arcs per route; continuous `y_n_j` are arrival times,
/// disabled arcs released by the big-M horizon. The tank-capacity row sums
/// station-to-station arcs only, so under the full-load policy (which adds
/// per-route emptying rows) the final delivery is exempt, matching the
/// checker's truncation of the last delivery.
///
/// Under the bounded policy, fails if `routes` is too few tankers to carry
/// the day's liters. No such bound exists under full-load: a route covers
/// at least a tankful of demand, so the day's volume caps the useful count
/// instead, and surplus tankers simply idle.
pub fn export_mip(
    plan: &DayPlan,
    mat: &Matrices,
    fleet: &Fleet,
    routes: usize,
) -> Result<String, Error> {
    let needed = match fleet.load_policy {
        LoadPolicy::Bounded => {
            ((plan.total_demand() / fleet.capacity_liters).ceil() as usize).max(1)
        }
        LoadPolicy::FullLoad => 1,
    };
    if routes < needed {
        return Err(Error::RouteBoundTooSmall { given: routes, needed });
    }

    let stops = plan.stops();
    let m = stops.len();
    let end = m + 1;
    // Model node -> instance matrix node (station id, or 0 for both depots).
    let node = |i: usize| -> usize {
        if i == 0 || i == end {
            0
        } else {
            stops[i - 1].station
        }
    };
    let service = |i: usize| -> f64 {
        if i == 0 || i == end {
            0.0
        } else {
            stops[i - 1].service_minutes
        }
    };
    let horizon = big_m(plan, mat);

    // Arcs are (i, j) with i any node but the terminal, j any node but the
    // start, no self-loops; 0 -> end makes an unused tanker representable.
    let arcs: Vec<(usize, usize)> = (0..=m)
        .flat_map(|i| (1..=end).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .collect();

    let mut out = String::new();
    out.push_str(&format!(
        "\\ day {}: {} tanker routes over {} stations, capacity {} L, policy {}\n",
        plan.day,
        routes,
        m,
        fmt_num(fleet.capacity_liters),
        fleet.load_policy.as_str(),
    ));
    for (k, stop) in stops.iter().enumerate() {
        out.push_str(&format!("\\ model station {} = instance station {}\n", k + 1, stop.station));
    }

    out.push_str("Minimize\n");
    let mut objective = Vec::new();
    for n in 1..=routes {
        for &(i, j) in &arcs {
            objective.push((mat.dist(node(i), node(j)), format!("x_{n}_{i}_{j}")));
        }
    }
    push_row(&mut out, "obj", &objective, "", 0.0, true);

    out.push_str("Subject To\n");
    for (k, _) in stops.iter().enumerate() {
        let j = k + 1;
        let terms: Vec<(f64, String)> = (1..=routes)
            .flat_map(|n| {
                (0..=m).filter(move |&i| i != j).map(move |i| (1.0, format!("x_{n}_{i}_{j}")))
            })
            .collect();
        push_row(&mut out, &format!("cover_{j}"), &terms, "=", 1.0, false);
    }
    for n in 1..=routes {
        let starts: Vec<(f64, String)> = (1..=end).map(|j| (1.0, format!("x_{n}_0_{j}"))).collect();
        push_row(&mut out, &format!("start_{n}"), &starts, "=", 1.0, false);
        let finishes: Vec<(f64, String)> =
            (0..=m).map(|i| (1.0, format!("x_{n}_{i}_{end}"))).collect();
        push_row(&mut out, &format!("finish_{n}"), &finishes, "=", 1.0, false);
        for i in 1..=m {
            let mut terms: Vec<(f64, String)> = (0..=m)
                .filter(|&j| j != i)
                .map(|j| (1.0, format!("x_{n}_{j}_{i}")))
                .collect();
            terms.extend((1..=end).filter(|&j| j != i).map(|j| (-1.0, format!("x_{n}_{i}_{j}"))));
            push_row(&mut out, &format!("flow_{n}_{i}"), &terms, "=", 0.0, false);
        }
    }
    for n in 1..=routes {
        for &(i, j) in &arcs {
            let terms = vec![
                (1.0, format!("y_{n}_{i}")),
                (-1.0, format!("y_{n}_{j}")),
                (horizon, format!("x_{n}_{i}_{j}")),
            ];
            let rhs = horizon - service(i) - mat.travel(node(i), node(j));
            push_row(&mut out, &format!("time_{n}_{i}_{j}"), &terms, "<=", rhs, false);
        }
    }
    if m > 1 {
        for n in 1..=routes {
            let terms: Vec<(f64, String)> = (1..=m)
                .flat_map(|i| {
                    (1..=m)
                        .filter(move |&j| j != i)
                        .map(move |j| (stops[i - 1].demand_liters, format!("x_{n}_{i}_{j}")))
                })
                .collect();
            push_row(&mut out, &format!("cap_{n}"), &terms, "<=", fleet.capacity_liters, false);
        }
    }
    if fleet.load_policy == LoadPolicy::FullLoad {
        for n in 1..=routes {
            let mut terms: Vec<(f64, String)> = (1..=m)
                .flat_map(|i| {
                    (1..=end)
                        .filter(move |&j| j != i)
                        .map(move |j| (stops[i - 1].demand_liters, format!("x_{n}_{i}_{j}")))
                })
                .collect();
            // The direct start -> terminal arc exempts an idle tanker from
            // emptying; a used one has it at zero and must cover a tankful.
            terms.push((fleet.capacity_liters, format!("x_{n}_0_{end}")));
            push_row(&mut out, &format!("empty_{n}"), &terms, ">=", fleet.capacity_liters, false);
        }
    }

    out.push_str("Bounds\n");
    for n in 1..=routes {
        out.push_str(&format!(" y_{n}_0 = 0\n"));
        for (k, stop) in stops.iter().enumerate() {
            out.push_str(&format!(
                " 0 <= y_{n}_{} <= {}\n",
                k + 1,
                fmt_num(stop.deadline_minutes)
            ));
        }
        out.push_str(&format!(" 0 <= y_{n}_{end} <= {}\n", fmt_num(horizon)));
    }

    out.push_str("Binary\n");
    for n in 1..=routes {
        for &(i, j) in &arcs {
            out.push_str(&format!(" x_{n}_{i}_{j}\n"));
        }
    }
    out.push_str("End\n");
    Ok(out)
}

/// Appends one LP row, skipping zero-coefficient terms and wrapping long
/// expressions. `keep_zero_row` pads an all-zero objective with its first
/// variable so the section is never empty.
fn push_row(
    out: &mut String,
    name: &str,
    terms: &[(f64, String)],
    rel: &str,
    rhs: f64,
    keep_zero_row: bool,
) {
    let mut line = format!(" {name}:");
    let mut width = line.len();
    let mut wrote = 0usize;
    for (coef, var) in terms {
        if *coef == 0.0 {
            continue;
        }
        let sign = if *coef < 0.0 { "-" } else { "+" };
        let magnitude = coef.abs();
        let term = if magnitude == 1.0 {
            var.clone()
        } else {
            format!("{} {var}", fmt_num(magnitude))
        };
        let piece = if wrote == 0 && sign == "+" {
            format!(" {term}")
        } else {
            format!(" {sign} {term}")
        };
        if width + piece.len() > 96 {
            line.push_str("\n   ");
            width = 3;
        }
        line.push_str(&piece);
        width += piece.len();
        wrote += 1;
    }
    if wrote == 0 {
        if keep_zero_row && !terms.is_empty() {
            line.push_str(&format!(" 0 {}", terms[0].1));
        } else if !keep_zero_row {
            // A constraint with no surviving terms is vacuous; emit nothing.
            return;
        }
    }
    if !rel.is_empty() {
        line.push_str(&format!(" {rel} {}", fmt_num(rhs)));
    }
    line.push('\n');
    out.push_str(&line);
}
