//! Problem instances: stations, distance/travel matrices, delivery requests,
//! fleet parameters; JSON schema IO, validation, per-day aggregation, and a
//! seeded random generator.
//!
//! Index 0 is always the fuel hub (depot); stations are 1..=G. Distances are
//! kilometers, times minutes, demands liters. Deadlines are minutes after
//! the day's epoch 0, at which every tanker is already loaded and ready, so
//! a request's deadline must at least exceed the direct drive from the hub.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};

use serde::Deserialize;

use crate::error::Error;
use crate::rng::Rng;

/// Minutes in one delivery day; generated deadlines fall within it.
pub const DAY_MINUTES: f64 = 1440.0;

#[derive(Clone, Debug, PartialEq)]
pub struct Station {
    /// 1-based dense id; doubles as the matrix index.
    pub id: usize,
    pub label: String,
    pub x_km: Option<f64>,
    pub y_km: Option<f64>,
}

/// Square distance and travel-time matrices over hub + stations.
///
/// Both are (G+1)² row-major with index 0 = hub. Kept flat; shape is
/// enforced at construction, value sanity by [`validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct Matrices {
    size: usize,
    dist: Vec<f64>,
    travel: Vec<f64>,
}

impl Matrices {
    /// Builds from row vectors. Fails if either matrix is ragged, not
    /// square, or the two differ in size.
    pub fn from_rows(dist: Vec<Vec<f64>>, travel: Vec<Vec<f64>>) -> Result<Self, String> {
        let size = dist.len();
        if size == 0 {
            return Err("dist matrix is empty".into());
        }
        if travel.len() != size {
            return Err(format!(
                "dist is {size}x{size} but travel has {} rows",
                travel.len()
            ));
        }
        let mut flat_dist = Vec::with_capacity(size * size);
        let mut flat_travel = Vec::with_capacity(size * size);
        for (name, rows, flat) in [
            ("dist", &dist, &mut flat_dist),
            ("travel", &travel, &mut flat_travel),
        ] {
            for (i, row) in rows.iter().enumerate() {
                if row.len() != size {
                    return Err(format!("{name} row {i} has {} entries, expected {size}", row.len()));
                }
                flat.extend_from_slice(row);
            }
        }
        Ok(Self {
            size,
            dist: flat_dist,
            travel: flat_travel,
        })
    }

    /// Matrix side length (stations + 1).
    pub fn size(&self) -> usize {
        self.size
    }

    /// Kilometers from node `i` to node `j` (0 = hub).
    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.size + j]
    }

    /// Minutes from node `i` to node `j` (0 = hub).
    #[inline]
    pub fn travel(&self, i: usize, j: usize) -> f64 {
        self.travel[i * self.size + j]
    }

    fn rows(&self, which: Which) -> impl Iterator<Item = &[f64]> {
        let flat = match which {
            Which::Dist => &self.dist,
            Which::Travel => &self.travel,
        };
        flat.chunks(self.size)
    }
}

#[derive(Clone, Copy)]
enum Which {
    Dist,
    Travel,
}

/// One delivery request: `demand_liters` to `station` on `day`, to be
/// started (tanker arrived) no later than `deadline_minutes`.
#[derive(Clone, Debug, PartialEq)]
pub struct ServiceRequest {
    pub day: u32,
    pub station: usize,
    pub demand_liters: f64,
    pub service_minutes: f64,
    pub deadline_minutes: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoadPolicy {
    /// A route's deliveries must fit in one tank: Σ demand ≤ capacity.
    Bounded,
    /// The tank must be emptied on every route: Σ demand ≥ capacity, the
    /// final stop absorbs whatever remains (its delivery is truncated), and
    /// only the stops before the final one count against capacity.
    FullLoad,
}

impl LoadPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            LoadPolicy::Bounded => "bounded",
            LoadPolicy::FullLoad => "full_load",
        }
    }
}

/// Homogeneous tanker fleet. Size is not a parameter: routes are opened as
/// needed and the count is an output of solving.
#[derive(Clone, Debug, PartialEq)]
pub struct Fleet {
    pub capacity_liters: f64,
    pub load_policy: LoadPolicy,
}

pub const DEFAULT_CAPACITY_LITERS: f64 = 39_000.0;

impl Default for Fleet {
    fn default() -> Self {
        Self {
            capacity_liters: DEFAULT_CAPACITY_LITERS,
            load_policy: LoadPolicy::Bounded,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub stations: Vec<Station>,
    pub matrices: Matrices,
    pub horizon_days: u32,
    pub requests: Vec<ServiceRequest>,
    pub fleet: Fleet,
}

impl Instance {
    pub fn station_count(&self) -> usize {
        self.stations.len()
    }
}

/// A station's aggregated workload for one day: total liters, total service
/// minutes, and the tightest deadline across its requests.
#[derive(Clone, Debug, PartialEq)]
pub struct PlannedStop {
    pub station: usize,
    pub demand_liters: f64,
    pub service_minutes: f64,
    pub deadline_minutes: f64,
}

/// One day's demand, aggregated per station and sorted by station id.
#[derive(Clone, Debug, PartialEq)]
pub struct DayPlan {
    pub day: u32,
    stops: Vec<PlannedStop>,
}

impl DayPlan {
    /// Builds a plan from explicit stops, sorting them by station id.
    /// Station ids must be unique; [`aggregate_day`] is the usual source.
    pub fn new(day: u32, mut stops: Vec<PlannedStop>) -> Self {
        stops.sort_by_key(|s| s.station);
        debug_assert!(stops.windows(2).all(|w| w[0].station != w[1].station));
        Self { day, stops }
    }

    pub fn stops(&self) -> &[PlannedStop] {
        &self.stops
    }

    pub fn stop(&self, station: usize) -> Option<&PlannedStop> {
        self.stops
            .binary_search_by_key(&station, |s| s.station)
            .ok()
            .map(|i| &self.stops[i])
    }

    pub fn len(&self) -> usize {
        self.stops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stops.is_empty()
    }

    pub fn total_demand(&self) -> f64 {
        self.stops.iter().map(|s| s.demand_liters).sum()
    }
}

// ---------------------------------------------------------------------------
// Validation

/// One defect found in an instance, with enough location detail to fix it.
#[derive(Clone, Debug, PartialEq)]
pub enum Finding {
    DuplicateStationId { id: usize },
    StationIdOutOfRange { id: usize, count: usize },
    BadCoordinate { station: usize, axis: &'static str, value: f64 },
    MatrixStructure { detail: String },
    MatrixShape { name: &'static str, expected: usize, actual: usize },
    NonzeroDiagonal { name: &'static str, index: usize, value: f64 },
    BadMatrixEntry { name: &'static str, i: usize, j: usize, value: f64 },
    NonPositiveCapacity { value: f64 },
    HorizonZero,
    RequestDayOutOfRange { request: usize, day: u32, horizon: u32 },
    UnknownStation { request: usize, station: usize },
    NonPositiveField { request: usize, field: &'static str, value: f64 },
    DemandExceedsCapacity { request: usize, demand: f64, capacity: f64 },
    UnreachableDeadline { request: usize, station: usize, deadline: f64, travel: f64 },
    AggregateExceedsCapacity { day: u32, station: usize, total: f64, capacity: f64 },
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::DuplicateStationId { id } => write!(f, "duplicate station id {id}"),
            Finding::StationIdOutOfRange { id, count } => {
                write!(f, "station id {id} outside dense range 1..={count}")
            }
            Finding::BadCoordinate { station, axis, value } => {
                write!(f, "station {station}: {axis} = {value} is not finite")
            }
            Finding::MatrixStructure { detail } => write!(f, "{detail}"),
            Finding::MatrixShape { name, expected, actual } => {
                write!(f, "{name} matrix is {actual}x{actual}, expected {expected}x{expected} (stations + hub)")
            }
            Finding::NonzeroDiagonal { name, index, value } => {
                write!(f, "nonzero {name} diagonal at {index}: {value}")
            }
            Finding::BadMatrixEntry { name, i, j, value } => {
                write!(f, "{name}[{i}][{j}] = {value} is not a finite nonnegative number")
            }
            Finding::NonPositiveCapacity { value } => {
                write!(f, "fleet capacity must be positive, got {value}")
            }
            Finding::HorizonZero => write!(f, "horizon_days must be at least 1"),
            Finding::RequestDayOutOfRange { request, day, horizon } => {
                write!(f, "request {request}: day {day} outside 1..={horizon}")
            }
            Finding::UnknownStation { request, station } => {
                write!(f, "request {request}: unknown station {station}")
            }
            Finding::NonPositiveField { request, field, value } => {
                write!(f, "request {request}: {field} must be positive, got {value}")
            }
            Finding::DemandExceedsCapacity { request, demand, capacity } => {
                write!(f, "request {request}: demand {demand} L exceeds tanker capacity {capacity} L")
            }
            Finding::UnreachableDeadline { request, station, deadline, travel } => {
                write!(
                    f,
                    "request {request}: deadline {deadline} min unreachable, hub to station {station} takes {travel} min"
                )
            }
            Finding::AggregateExceedsCapacity { day, station, total, capacity } => {
                write!(
                    f,
                    "station {station} day {day}: aggregated demand {total} L exceeds capacity {capacity} L (no split deliveries)"
                )
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for finding in &self.findings {
            writeln!(f, "- {finding}")?;
        }
        Ok(())
    }
}

/// Checks every structural and value invariant; an empty report means the
/// instance is well-formed and every request is at least individually
/// servable.
pub fn validate(inst: &Instance) -> ValidationReport {
    let mut findings = Vec::new();
    let g = inst.stations.len();

    let mut seen = vec![false; g + 1];
    for s in &inst.stations {
        if s.id == 0 || s.id > g {
            findings.push(Finding::StationIdOutOfRange { id: s.id, count: g });
        } else if seen[s.id] {
            findings.push(Finding::DuplicateStationId { id: s.id });
        } else {
            seen[s.id] = true;
        }
        // Coordinates are decorative, but a non-finite one would poison the
        // canonical serialization (JSON has no NaN/inf literals).
        for (axis, value) in [("x_km", s.x_km), ("y_km", s.y_km)] {
            if let Some(v) = value {
                if !v.is_finite() {
                    findings.push(Finding::BadCoordinate { station: s.id, axis, value: v });
                }
            }
        }
    }

    let expected = g + 1;
    let shape_ok = inst.matrices.size() == expected;
    if !shape_ok {
        findings.push(Finding::MatrixShape {
            name: "dist",
            expected,
            actual: inst.matrices.size(),
        });
    }
    for (name, which) in [("dist", Which::Dist), ("travel", Which::Travel)] {
        for (i, row) in inst.matrices.rows(which).enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    findings.push(Finding::BadMatrixEntry { name, i, j, value: v });
                } else if i == j && v != 0.0 {
                    findings.push(Finding::NonzeroDiagonal { name, index: i, value: v });
                }
            }
        }
    }

    if inst.horizon_days == 0 {
        findings.push(Finding::HorizonZero);
    }
    let capacity = inst.fleet.capacity_liters;
    if !capacity.is_finite() || capacity <= 0.0 {
        findings.push(Finding::NonPositiveCapacity { value: capacity });
    }

    for (idx, r) in inst.requests.iter().enumerate() {
        if r.day == 0 || r.day > inst.horizon_days {
            findings.push(Finding::RequestDayOutOfRange {
                request: idx,
                day: r.day,
                horizon: inst.horizon_days,
            });
        }
        let station_known = r.station >= 1 && r.station <= g && seen.get(r.station) == Some(&true);
        if !station_known {
            findings.push(Finding::UnknownStation { request: idx, station: r.station });
        }
        for (field, value) in [
            ("demand_liters", r.demand_liters),
            ("service_minutes", r.service_minutes),
            ("deadline_minutes", r.deadline_minutes),
        ] {
            if !value.is_finite() || value <= 0.0 {
                findings.push(Finding::NonPositiveField { request: idx, field, value });
            }
        }
        if r.demand_liters > capacity {
            findings.push(Finding::DemandExceedsCapacity {
                request: idx,
                demand: r.demand_liters,
                capacity,
            });
        }
        if station_known && shape_ok {
            let travel = inst.matrices.travel(0, r.station);
            if r.deadline_minutes <= travel {
                findings.push(Finding::UnreachableDeadline {
                    request: idx,
                    station: r.station,
                    deadline: r.deadline_minutes,
                    travel,
                });
            }
        }
    }

    // A station whose one-day total exceeds a tank can never be served:
    // deliveries are not split across routes.
    let mut totals: BTreeMap<(u32, usize), f64> = BTreeMap::new();
    for r in &inst.requests {
        *totals.entry((r.day, r.station)).or_insert(0.0) += r.demand_liters;
    }
    for ((day, station), total) in totals {
        if total > capacity {
            findings.push(Finding::AggregateExceedsCapacity { day, station, total, capacity });
        }
    }

    ValidationReport { findings }
}

// ---------------------------------------------------------------------------
// Aggregation

/// Builds the plan without the capacity gate; used by the checker, which
/// reports capacity problems as violations instead of refusing to run.
pub(crate) fn build_day_plan(inst: &Instance, day: u32) -> DayPlan {
    let mut agg: BTreeMap<usize, PlannedStop> = BTreeMap::new();
    for r in inst.requests.iter().filter(|r| r.day == day) {
        let stop = agg.entry(r.station).or_insert_with(|| PlannedStop {
            station: r.station,
            demand_liters: 0.0,
            service_minutes: 0.0,
            deadline_minutes: f64::INFINITY,
        });
        stop.demand_liters += r.demand_liters;
        stop.service_minutes += r.service_minutes;
        stop.deadline_minutes = stop.deadline_minutes.min(r.deadline_minutes);
    }
    DayPlan {
        day,
        stops: agg.into_values().collect(),
    }
}

/// Aggregates one day's requests per station: demands and service times sum,
/// deadlines take the tightest value. Stations without requests are skipped.
pub fn aggregate_day(inst: &Instance, day: u32) -> Result<DayPlan, Error> {
    if day == 0 || day > inst.horizon_days {
        return Err(Error::DayOutOfRange { day, horizon: inst.horizon_days });
    }
    let plan = build_day_plan(inst, day);
    for stop in &plan.stops {
        if stop.demand_liters > inst.fleet.capacity_liters {
            return Err(Error::InfeasibleStation {
                day,
                station: stop.station,
                demand: stop.demand_liters,
                capacity: inst.fleet.capacity_liters,
            });
        }
    }
    Ok(plan)
}

// ---------------------------------------------------------------------------
// JSON schema

#[derive(Deserialize)]
struct RawInstance {
    stations: Vec<RawStation>,
    dist: Vec<Vec<f64>>,
    travel: Vec<Vec<f64>>,
    horizon_days: u32,
    requests: Vec<RawRequest>,
    fleet: RawFleet,
}

#[derive(Deserialize)]
struct RawStation {
    id: usize,
    label: String,
    #[serde(default)]
    x_km: Option<f64>,
    #[serde(default)]
    y_km: Option<f64>,
}

#[derive(Deserialize)]
struct RawRequest {
    day: u32,
    station: usize,
    demand_liters: f64,
    service_minutes: f64,
    deadline_minutes: f64,
}

#[derive(Deserialize)]
struct RawFleet {
    capacity_liters: f64,
    #[serde(default = "default_policy")]
    load_policy: LoadPolicy,
}

fn default_policy() -> LoadPolicy {
    LoadPolicy::Bounded
}

/// Parses and fully validates an instance document.
pub fn from_json(text: &str) -> Result<Instance, Error> {
    let raw: RawInstance = serde_json::from_str(text)?;
    let matrices = Matrices::from_rows(raw.dist, raw.travel).map_err(|detail| {
        Error::InvalidInstance(ValidationReport {
            findings: vec![Finding::MatrixStructure { detail }],
        })
    })?;
    let inst = Instance {
        stations: raw
            .stations
            .into_iter()
            .map(|s| Station { id: s.id, label: s.label, x_km: s.x_km, y_km: s.y_km })
            .collect(),
        matrices,
        horizon_days: raw.horizon_days,
        requests: raw
            .requests
            .into_iter()
            .map(|r| ServiceRequest {
                day: r.day,
                station: r.station,
                demand_liters: r.demand_liters,
                service_minutes: r.service_minutes,
                deadline_minutes: r.deadline_minutes,
            })
            .collect(),
        fleet: Fleet {
            capacity_liters: raw.fleet.capacity_liters,
            load_policy: raw.fleet.load_policy,
        },
    };
    let report = validate(&inst);
    if report.is_empty() {
        Ok(inst)
    } else {
        Err(Error::InvalidInstance(report))
    }
}

/// Reads and validates an instance document from `reader`.
pub fn load_instance(mut reader: impl Read) -> Result<Instance, Error> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    from_json(&text)
}

/// Formats a number with at most six decimal places, trailing zeros trimmed.
/// Canonical-form documents round-trip byte-identically through this.
pub(crate) fn fmt_num(x: f64) -> String {
    let mut s = format!("{x:.6}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

/// Serializes to canonical form: fixed field order, numbers via [`fmt_num`],
/// requests stably sorted by (day, station). `parse ∘ serialize` is the
/// identity on canonical documents.
pub fn to_canonical_json(inst: &Instance) -> String {
    let mut out = String::with_capacity(4096);
    out.push_str("{\n  \"stations\": [\n");
    for (i, s) in inst.stations.iter().enumerate() {
        out.push_str("    {\"id\": ");
        out.push_str(&s.id.to_string());
        out.push_str(", \"label\": ");
        out.push_str(&json_string(&s.label));
        if let Some(x) = s.x_km {
            out.push_str(", \"x_km\": ");
            out.push_str(&fmt_num(x));
        }
        if let Some(y) = s.y_km {
            out.push_str(", \"y_km\": ");
            out.push_str(&fmt_num(y));
        }
        out.push('}');
        if i + 1 < inst.stations.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("  ],\n");

    for (key, which) in [("dist", Which::Dist), ("travel", Which::Travel)] {
        out.push_str("  \"");
        out.push_str(key);
        out.push_str("\": [\n");
        let size = inst.matrices.size();
        for (i, row) in inst.matrices.rows(which).enumerate() {
            out.push_str("    [");
            for (j, &v) in row.iter().enumerate() {
                out.push_str(&fmt_num(v));
                if j + 1 < row.len() {
                    out.push_str(", ");
                }
            }
            out.push(']');
            if i + 1 < size {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("  ],\n");
    }

    out.push_str("  \"horizon_days\": ");
    out.push_str(&inst.horizon_days.to_string());
    out.push_str(",\n  \"requests\": [\n");
    let mut requests: Vec<&ServiceRequest> = inst.requests.iter().collect();
    requests.sort_by_key(|r| (r.day, r.station));
    for (i, r) in requests.iter().enumerate() {
        out.push_str("    {\"day\": ");
        out.push_str(&r.day.to_string());
        out.push_str(", \"station\": ");
        out.push_str(&r.station.to_string());
        out.push_str(", \"demand_liters\": ");
        out.push_str(&fmt_num(r.demand_liters));
        out.push_str(", \"service_minutes\": ");
        out.push_str(&fmt_num(r.service_minutes));
        out.push_str(", \"deadline_minutes\": ");
        out.push_str(&fmt_num(r.deadline_minutes));
        out.push('}');
        if i + 1 < requests.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("  ],\n  \"fleet\": {\"capacity_liters\": ");
    out.push_str(&fmt_num(inst.fleet.capacity_liters));
    out.push_str(", \"load_policy\": \"");
    out.push_str(inst.fleet.load_policy.as_str());
    out.push_str("\"}\n}\n");
    out
}

/// Writes the canonical form to `writer`.
pub fn save_instance(inst: &Instance, mut writer: impl Write) -> Result<(), Error> {
    writer.write_all(to_canonical_json(inst).as_bytes())?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Random instance generator

/// Parameters for [`generate_instance`]. Defaults describe a regional fuel
/// network: 65 stations in a 300 km box, 166 requests over 3 days,
/// gamma-distributed demands averaging 5369 L in [200, 15500], 54-minute
/// mean service, 39 m³ tankers at 60 km/h.
#[derive(Clone, Debug)]
pub struct GeneratorParams {
    pub stations: usize,
    pub horizon_days: u32,
    pub requests: usize,
    pub gamma_shape: f64,
    pub gamma_scale: f64,
    /// Closed bounds on a single request's liters; must fit in a tanker.
    pub demand_bounds: (f64, f64),
    pub mean_service_minutes: f64,
    /// Stations scatter uniformly in a square of this side; hub at center.
    pub box_km: f64,
    pub speed_kmh: f64,
    pub capacity_liters: f64,
    pub load_policy: LoadPolicy,
    pub seed: u64,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        Self {
            stations: 65,
            horizon_days: 3,
            requests: 166,
            gamma_shape: 2.0,
            gamma_scale: 2684.5,
            demand_bounds: (200.0, 15_500.0),
            mean_service_minutes: 54.0,
            box_km: 300.0,
            speed_kmh: 60.0,
            capacity_liters: DEFAULT_CAPACITY_LITERS,
            load_policy: LoadPolicy::Bounded,
            seed: 0,
        }
    }
}

const RESAMPLE_CAP: u32 = 1000;

/// Draws one demand from the gamma law, kept inside `bounds`: draws below
/// the minimum are redrawn (up to [`RESAMPLE_CAP`] attempts), draws above
/// the maximum are capped at it — a forecast larger than the largest
/// deliverable request is served as a max-size request. Capping, unlike
/// redrawing, keeps the sample mean near shape·scale even when the upper
/// bound cuts into the distribution's tail.
fn sample_demand(
    gamma: &rand_distr::Gamma<f64>,
    bounds: (f64, f64),
    rng: &mut Rng,
) -> Result<f64, Error> {
    use rand_distr::Distribution;
    let (lo, hi) = bounds;
    for _ in 0..RESAMPLE_CAP {
        let x = gamma.sample(rng);
        if x >= lo {
            return Ok(x.min(hi));
        }
    }
    Err(Error::ResampleCapExceeded { attempts: RESAMPLE_CAP })
}

/// Draws `n` demands with the same law [`generate_instance`] uses.
pub fn sample_demands(
    shape: f64,
    scale: f64,
    bounds: (f64, f64),
    n: usize,
    rng: &mut Rng,
) -> Result<Vec<f64>, Error> {
    let gamma = new_gamma(shape, scale)?;
    (0..n).map(|_| sample_demand(&gamma, bounds, rng)).collect()
}

fn new_gamma(shape: f64, scale: f64) -> Result<rand_distr::Gamma<f64>, Error> {
    if !shape.is_finite() || shape <= 0.0 {
        return Err(Error::NonPositiveParam { name: "gamma_shape", value: shape });
    }
    if !scale.is_finite() || scale <= 0.0 {
        return Err(Error::NonPositiveParam { name: "gamma_scale", value: scale });
    }
    rand_distr::Gamma::new(shape, scale)
        .map_err(|_| Error::NonPositiveParam { name: "gamma_shape", value: shape })
}

fn check_params(p: &GeneratorParams) -> Result<(), Error> {
    for (name, value) in [
        ("stations", p.stations as f64),
        ("horizon_days", p.horizon_days as f64),
        ("mean_service_minutes", p.mean_service_minutes),
        ("box_km", p.box_km),
        ("speed_kmh", p.speed_kmh),
        ("capacity_liters", p.capacity_liters),
    ] {
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::NonPositiveParam { name, value });
        }
    }
    let (lo, hi) = p.demand_bounds;
    if !lo.is_finite() || !hi.is_finite() || lo <= 0.0 || hi < lo || hi > p.capacity_liters {
        return Err(Error::BadDemandBounds { lo, hi, capacity: p.capacity_liters });
    }
    Ok(())
}

/// Generates a valid instance, deterministically per seed.
///
/// Stations scatter uniformly in the box with the hub at its center;
/// distances are Euclidean kilometers and travel times follow from the
/// fleet speed. Requests land on uniform (day, station) slots, redrawing
/// the slot (never the demand) when it would push that station's daily
/// total over capacity. Deadlines are drawn late enough that every
/// aggregated stop can be served by a dedicated tanker.
pub fn generate_instance(params: &GeneratorParams) -> Result<Instance, Error> {
    check_params(params)?;
    let gamma = new_gamma(params.gamma_shape, params.gamma_scale)?;
    let mut rng = Rng::seed_from(params.seed);
    let g = params.stations;

    let mut xs = Vec::with_capacity(g + 1);
    let mut ys = Vec::with_capacity(g + 1);
    xs.push(params.box_km / 2.0);
    ys.push(params.box_km / 2.0);
    let mut stations = Vec::with_capacity(g);
    for id in 1..=g {
        let x = rng.uniform(0.0, params.box_km);
        let y = rng.uniform(0.0, params.box_km);
        xs.push(x);
        ys.push(y);
        stations.push(Station { id, label: format!("S{id}"), x_km: Some(x), y_km: Some(y) });
    }

    let n = g + 1;
    let minutes_per_km = 60.0 / params.speed_kmh;
    let mut dist = vec![0.0; n * n];
    let mut travel = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let d = ((xs[i] - xs[j]).powi(2) + (ys[i] - ys[j]).powi(2)).sqrt();
                dist[i * n + j] = d;
                travel[i * n + j] = d * minutes_per_km;
            }
        }
    }
    let matrices = Matrices { size: n, dist, travel };

    // Placement: (day, station) drawn uniformly, redrawn while the slot
    // cannot absorb the demand. The demand value itself is never redrawn.
    let mut slot_total: BTreeMap<(u32, usize), f64> = BTreeMap::new();
    let mut drafts = Vec::with_capacity(params.requests);
    for req_idx in 0..params.requests {
        let demand = sample_demand(&gamma, params.demand_bounds, &mut rng)?;
        let mut placed = None;
        for _ in 0..RESAMPLE_CAP {
            let day = rng.index(params.horizon_days as usize) as u32 + 1;
            let station = rng.index(g) + 1;
            let total = slot_total.entry((day, station)).or_insert(0.0);
            if *total + demand <= params.capacity_liters {
                *total += demand;
                placed = Some((day, station));
                break;
            }
        }
        let (day, station) = placed.ok_or(Error::PlacementSaturated { request: req_idx })?;
        let service = rng.uniform(0.5, 1.5) * params.mean_service_minutes;
        drafts.push((day, station, demand, service));
    }

    // Deadlines leave room for the full aggregated visit: a single tanker
    // must reach the station and finish every pooled request in time.
    let mut slot_service: BTreeMap<(u32, usize), f64> = BTreeMap::new();
    for &(day, station, _, service) in &drafts {
        *slot_service.entry((day, station)).or_insert(0.0) += service;
    }
    let mut requests = Vec::with_capacity(drafts.len());
    for (day, station, demand, service) in drafts {
        let earliest = matrices.travel(0, station) + slot_service[&(day, station)] + 1.0;
        let latest = DAY_MINUTES.max(earliest + 60.0);
        let deadline = rng.uniform(earliest, latest);
        requests.push(ServiceRequest {
            day,
            station,
            demand_liters: demand,
            service_minutes: service,
            deadline_minutes: deadline,
        });
    }
    requests.sort_by_key(|r| (r.day, r.station));

    Ok(Instance {
        stations,
        matrices,
        horizon_days: params.horizon_days,
        requests,
        fleet: Fleet {
            capacity_liters: params.capacity_liters,
            load_policy: params.load_policy,
        },
    })
}

// ---------------------------------------------------------------------------
