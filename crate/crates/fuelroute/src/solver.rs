//! Day-level solving pipeline: aggregate the day's demand, build the best
//! of R random constructions, then anneal each route's stop order.
//!
//! Seeding is layered so results never depend on execution order. A master
//! seed and a day index derive the day seed; construction trial `t` draws
//! from substream `t + 1` of the day seed and the annealing stage keys off
//! substream 0. Solving day 5 therefore gives the same routes whether or
//! not days 1 through 4 were solved first, and construction trials can be
//! distributed over threads freely.

use std::time::{Duration, Instant};

use crate::anneal::{self, SaParams, TraceEntry};
use crate::construct::{self, McParams};
use crate::error::Error;
use crate::feasibility::Solution;
use crate::instance::{aggregate_day, Instance};
use crate::rng::{derive_seed, Rng};

/// Substream of the day seed reserved for annealing; construction trials
/// use substreams 1 and up.
const SA_STREAM: u64 = 0;

/// Everything the two-stage solver needs besides the instance.
#[derive(Clone, Debug, Default)]
pub struct SolverParams {
    pub mc: McParams,
    pub sa: SaParams,
}

/// Knobs that affect how a run executes but never what it produces.
#[derive(Default)]
pub struct RunOptions<'a> {
    /// Worker threads for construction trials; 0 or 1 means sequential.
    pub jobs: usize,
    /// Called as `(trial, km)` whenever a construction trial improves on
    /// the best so far. Forces sequential trials.
    pub on_improvement: Option<&'a mut dyn FnMut(usize, f64)>,
    /// Record per-route annealing traces into [`DayRun::sa_traces`].
    pub capture_traces: bool,
}

/// One solved day with stage measurements.
#[derive(Clone, Debug)]
pub struct DayRun {
    pub solution: Solution,
    /// Kilometers of the best constructed route set, before annealing.
    pub construction_km: f64,
    pub construction_time: Duration,
    pub annealing_time: Duration,
    /// Per-route annealing traces (aligned with `solution.routes`), when
    /// requested via [`RunOptions::capture_traces`].
    pub sa_traces: Option<Vec<Vec<TraceEntry>>>,
}

/// Solves one day of the instance. Days are indexed from 1.
pub fn solve_day(inst: &Instance, day: u32, params: &SolverParams) -> Result<Solution, Error> {
    Ok(solve_day_opts(inst, day, params, RunOptions::default())?.solution)
}

/// Solves every day of the horizon in order.
pub fn solve(inst: &Instance, params: &SolverParams) -> Result<Vec<Solution>, Error> {
    (1..=inst.horizon_days).map(|day| solve_day(inst, day, params)).collect()
}

/// [`solve_day`] with execution options and stage timings.
pub fn solve_day_opts(
    inst: &Instance,
    day: u32,
    params: &SolverParams,
    opts: RunOptions<'_>,
) -> Result<DayRun, Error> {
    if !params.sa.t_end.is_finite() || params.sa.t_end <= 0.0 {
        return Err(Error::NonPositiveParam { name: "t_end", value: params.sa.t_end });
    }
    if !params.sa.t0.is_finite() || params.sa.t0 <= 0.0 {
        return Err(Error::NonPositiveParam { name: "t0", value: params.sa.t0 });
    }
    let plan = aggregate_day(inst, day)?;
    if plan.is_empty() {
        return Ok(DayRun {
            solution: Solution::empty(),
            construction_km: 0.0,
            construction_time: Duration::ZERO,
            annealing_time: Duration::ZERO,
            sa_traces: opts.capture_traces.then(Vec::new),
        });
    }

    let day_seed = derive_seed(params.mc.seed, day as u64);
    let mc = McParams { trials: params.mc.trials, seed: day_seed };

    let started = Instant::now();
    let (routes, construction_km) = match opts.on_improvement {
        Some(observer) => {
            construct::best_of_observed(&plan, &inst.matrices, &inst.fleet, &mc, observer)?
        }
        None => construct::best_of_parallel(&plan, &inst.matrices, &inst.fleet, &mc, opts.jobs)?,
    };
    let construction_time = started.elapsed();

    let started = Instant::now();
    let mut sa_rng = Rng::substream(day_seed, SA_STREAM);
    let (solution, sa_traces) = if opts.capture_traces {
        let (solution, traces) =
            anneal::improve_solution_traced(&routes, &plan, &inst.matrices, &params.sa, &mut sa_rng);
        (solution, Some(traces))
    } else {
        let solution =
            anneal::improve_solution(&routes, &plan, &inst.matrices, &params.sa, &mut sa_rng);
        (solution, None)
    };
    let annealing_time = started.elapsed();

    Ok(DayRun { solution, construction_km, construction_time, annealing_time, sa_traces })
}
