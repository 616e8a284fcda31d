//! Randomized construction of feasible route sets.
//!
//! One trial fills routes greedily: stations are drawn uniformly at random
//! from the still-unserved pool and appended to the open route whenever the
//! tanker can finish serving them before their deadline and still has the
//! liters on board. A station that fails either test is set aside for the
//! rest of this route only; when every unserved station has been set aside
//! (or the tank is full), the route closes and a fresh tanker starts. Each
//! accepted stop leaves the pool, so construction always terminates.
//!
//! The construction acceptance rule is end-of-service ≤ deadline, slightly
//! stricter than the checker's arrival ≤ deadline, so every constructed
//! route passes [`check_route`](crate::feasibility::check_route).

use crate::error::Error;
use crate::feasibility::{total_distance, Route};
use crate::instance::{DayPlan, Fleet, Matrices};
use crate::rng::Rng;

/// Best-of-R parameters. Trial `t` always draws from substream `t + 1` of
/// `seed` (stream 0 is reserved for the annealing stage), so prefixes agree
/// across different `trials` values and trials can run in any order.
#[derive(Clone, Debug)]
pub struct McParams {
    pub trials: usize,
    pub seed: u64,
}

impl Default for McParams {
    fn default() -> Self {
        Self { trials: 1000, seed: 0 }
    }
}

/// Stream carrying trial `t`'s draws.
pub(crate) fn trial_stream(t: usize) -> u64 {
    t as u64 + 1
}

/// Builds one random feasible route set covering every stop in the plan.
///
/// Fails only if some station cannot be served even by a dedicated tanker
/// (hub leg plus full service past its deadline, or demand over capacity);
/// rejections for any other reason just defer a station to a later route.
pub fn initial(
    plan: &DayPlan,
    mat: &Matrices,
    fleet: &Fleet,
    rng: &mut Rng,
) -> Result<Vec<Route>, Error> {
    let stops = plan.stops();
    for stop in stops {
        let finish = mat.travel(0, stop.station) + stop.service_minutes;
        if finish > stop.deadline_minutes {
            return Err(Error::Infeasible {
                day: Some(plan.day),
                station: stop.station,
                reason: format!(
                    "earliest possible finish {finish:.1} min is past the deadline {:.1} min",
                    stop.deadline_minutes
                ),
            });
        }
        if stop.demand_liters > fleet.capacity_liters {
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

    let mut unserved: Vec<usize> = (0..stops.len()).collect();
    let mut routes = Vec::new();
    while !unserved.is_empty() {
        let mut candidates = unserved.clone();
        let mut stop_ids = Vec::new();
        let mut volume = 0.0;
        let mut clock = 0.0;
        let mut last = 0usize;
        while volume < fleet.capacity_liters && !candidates.is_empty() {
            let pick = rng.index(candidates.len());
            let idx = candidates[pick];
            let stop = &stops[idx];
            let finish = clock + mat.travel(last, stop.station) + stop.service_minutes;
            if finish <= stop.deadline_minutes && volume + stop.demand_liters <= fleet.capacity_liters
            {
                stop_ids.push(stop.station);
                volume += stop.demand_liters;
                clock = finish;
                last = stop.station;
                candidates.swap_remove(pick);
                let pos = unserved.iter().position(|&u| u == idx).expect("still unserved");
                unserved.swap_remove(pos);
            } else {
                // Set aside for this route; time and load only grow, so the
                // station stays unservable here but open for later routes.
                candidates.swap_remove(pick);
            }
        }
        debug_assert!(!stop_ids.is_empty(), "first pick of a fresh route always fits");
        routes.push(Route { day: plan.day, stops: stop_ids });
    }
    Ok(routes)
}

/// Runs `trials` independent constructions and keeps the shortest.
///
/// Comparison is strict, so among equal-length results the earliest trial
/// wins. Returns the route set and its total kilometers.
pub fn best_of(
    plan: &DayPlan,
    mat: &Matrices,
    fleet: &Fleet,
    params: &McParams,
) -> Result<(Vec<Route>, f64), Error> {
    best_of_observed(plan, mat, fleet, params, |_, _| {})
}

/// [`best_of`] with a callback invoked as `(trial, km)` whenever a trial
/// improves on the best so far (including the first).
pub fn best_of_observed(
    plan: &DayPlan,
    mat: &Matrices,
    fleet: &Fleet,
    params: &McParams,
    mut on_improve: impl FnMut(usize, f64),
) -> Result<(Vec<Route>, f64), Error> {
    if params.trials == 0 {
        return Err(Error::NonPositiveParam { name: "trials", value: 0.0 });
    }
    let mut best: Option<(Vec<Route>, f64)> = None;
    for trial in 0..params.trials {
        let mut rng = Rng::substream(params.seed, trial_stream(trial));
        let routes = initial(plan, mat, fleet, &mut rng)?;
        let km = total_distance(&routes, mat);
        if best.as_ref().is_none_or(|(_, best_km)| km < *best_km) {
            on_improve(trial, km);
            best = Some((routes, km));
        }
    }
    Ok(best.expect("at least one trial"))
}

/// A worker's best trial so far: (trial index, routes, kilometers).
type TrialBest = Option<(usize, Vec<Route>, f64)>;

/// [`best_of`] split across `jobs` threads. Trials keep their substreams,
/// and the reduction prefers lower kilometers then lower trial index, so the
/// result is identical to the sequential run for any `jobs`.
pub fn best_of_parallel(
    plan: &DayPlan,
    mat: &Matrices,
    fleet: &Fleet,
    params: &McParams,
    jobs: usize,
) -> Result<(Vec<Route>, f64), Error> {
    if jobs <= 1 || params.trials <= 1 {
        return best_of(plan, mat, fleet, params);
    }
    if params.trials == 0 {
        return Err(Error::NonPositiveParam { name: "trials", value: 0.0 });
    }
    let workers = jobs.min(params.trials);
    let chunk = params.trials.div_ceil(workers);
    let results: Vec<Result<TrialBest, Error>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let lo = w * chunk;
                let hi = ((w + 1) * chunk).min(params.trials);
                s.spawn(move || {
                    let mut local: TrialBest = None;
                    for trial in lo..hi {
                        let mut rng = Rng::substream(params.seed, trial_stream(trial));
                        let routes = initial(plan, mat, fleet, &mut rng)?;
                        let km = total_distance(&routes, mat);
                        if local.as_ref().is_none_or(|(_, _, best)| km < *best) {
                            local = Some((trial, routes, km));
                        }
                    }
                    Ok(local)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });

    let mut best: TrialBest = None;
    for res in results {
        if let Some((trial, routes, km)) = res? {
            let better = best
                .as_ref()
                .is_none_or(|(bt, _, bkm)| km < *bkm || (km == *bkm && trial < *bt));
            if better {
                best = Some((trial, routes, km));
            }
        }
    }
    let (_, routes, km) = best.expect("at least one trial");
    Ok((routes, km))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility::check_route;
    use crate::instance::{
        aggregate_day, generate_instance, DayPlan, GeneratorParams, PlannedStop,
    };
    use crate::rng::Rng;
    use proptest::prelude::*;

    fn plan_of(stops: Vec<PlannedStop>) -> DayPlan {
        DayPlan::new(1, stops)
    }

    fn stop(station: usize, demand: f64, service: f64, deadline: f64) -> PlannedStop {
        PlannedStop {
            station,
            demand_liters: demand,
            service_minutes: service,
            deadline_minutes: deadline,
        }
    }

    fn grid_matrices(n: usize, step: f64) -> Matrices {
        // Stations on a line: dist(i, j) = step * |i - j|, travel equal.
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| step * i.abs_diff(j) as f64).collect())
            .collect();
        Matrices::from_rows(rows.clone(), rows).unwrap()
    }

    #[test]
    fn single_station_gets_one_route() {
        let plan = plan_of(vec![stop(1, 5_000.0, 30.0, 200.0)]);
        let mat = grid_matrices(2, 10.0);
        let fleet = Fleet::default();
        for seed in 0..20 {
            let routes = initial(&plan, &mat, &fleet, &mut Rng::seed_from(seed)).unwrap();
            assert_eq!(routes.len(), 1);
            assert_eq!(routes[0].stops, vec![1]);
            assert_eq!(routes[0].day, 1);
        }
    }

    #[test]
    fn capacity_rejection_forces_a_split_every_trial() {
        // Two stations at 60% capacity each can never share a tanker.
        let fleet = Fleet::default();
        let q = 0.6 * fleet.capacity_liters;
        let plan = plan_of(vec![stop(1, q, 30.0, 1_000.0), stop(2, q, 30.0, 1_000.0)]);
        let mat = grid_matrices(3, 10.0);
        for seed in 0..50 {
            let routes = initial(&plan, &mat, &fleet, &mut Rng::seed_from(seed)).unwrap();
            assert_eq!(routes.len(), 2, "seed {seed}");
            assert!(routes.iter().all(|r| r.stops.len() == 1));
        }
    }

    #[test]
    fn deadline_rejection_defers_station_to_its_own_route() {
        // Station 2's deadline only admits the direct hub leg.
        let mat = grid_matrices(3, 10.0);
        let fleet = Fleet::default();
        let plan = plan_of(vec![
            stop(1, 1_000.0, 30.0, 1_000.0),
            stop(2, 1_000.0, 30.0, 51.0), // travel 20 + service 30 = 50
        ]);
        for seed in 0..50 {
            let routes = initial(&plan, &mat, &fleet, &mut Rng::seed_from(seed)).unwrap();
            for r in &routes {
                assert!(check_route(r, &plan, &mat, &fleet).is_empty(), "seed {seed}");
            }
            let all: Vec<usize> = routes.iter().flat_map(|r| r.stops.clone()).collect();
            let mut sorted = all.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, vec![1, 2], "seed {seed}");
        }
    }

    #[test]
    fn unservable_station_is_an_error() {
        let mat = grid_matrices(2, 100.0);
        let plan = plan_of(vec![stop(1, 1_000.0, 30.0, 120.0)]); // 100 + 30 > 120
        let err = initial(&plan, &mat, &Fleet::default(), &mut Rng::seed_from(0));
        assert!(matches!(err, Err(Error::Infeasible { station: 1, .. })));
    }

    #[test]
    fn empty_plan_builds_no_routes() {
        let plan = plan_of(vec![]);
        let mat = grid_matrices(1, 1.0);
        let routes = initial(&plan, &mat, &Fleet::default(), &mut Rng::seed_from(0)).unwrap();
        assert!(routes.is_empty());
    }

    #[test]
    fn best_of_one_trial_equals_initial_on_its_stream() {
        let inst = generate_instance(&GeneratorParams {
            stations: 12,
            requests: 20,
            horizon_days: 1,
            seed: 5,
            ..Default::default()
        })
        .unwrap();
        let plan = aggregate_day(&inst, 1).unwrap();
        let params = McParams { trials: 1, seed: 99 };
        let (routes, km) = best_of(&plan, &inst.matrices, &inst.fleet, &params).unwrap();
        let direct = initial(
            &plan,
            &inst.matrices,
            &inst.fleet,
            &mut Rng::substream(99, trial_stream(0)),
        )
        .unwrap();
        assert_eq!(routes, direct);
        assert_eq!(km, total_distance(&direct, &inst.matrices));
    }

    #[test]
    fn more_trials_never_hurt_on_shared_streams() {
        let inst = generate_instance(&GeneratorParams {
            stations: 15,
            requests: 25,
            horizon_days: 1,
            seed: 2,
            ..Default::default()
        })
        .unwrap();
        let plan = aggregate_day(&inst, 1).unwrap();
        let mut prev = f64::INFINITY;
        for trials in [5, 20, 50, 200] {
            let params = McParams { trials, seed: 7 };
            let (_, km) = best_of(&plan, &inst.matrices, &inst.fleet, &params).unwrap();
            assert!(km <= prev, "{trials} trials worsened: {km} > {prev}");
            prev = km;
        }
    }

    #[test]
    fn equal_trials_keep_the_earliest() {
        // Single station: every trial builds the identical route, so only
        // the first may report an improvement.
        let plan = plan_of(vec![stop(1, 5_000.0, 30.0, 200.0)]);
        let mat = grid_matrices(2, 10.0);
        let mut improvements = Vec::new();
        best_of_observed(
            &plan,
            &mat,
            &Fleet::default(),
            &McParams { trials: 50, seed: 0 },
            |trial, km| improvements.push((trial, km)),
        )
        .unwrap();
        assert_eq!(improvements.len(), 1);
        assert_eq!(improvements[0].0, 0);
    }

    #[test]
    fn zero_trials_is_an_error() {
        let plan = plan_of(vec![stop(1, 5_000.0, 30.0, 200.0)]);
        let mat = grid_matrices(2, 10.0);
        let r = best_of(&plan, &mat, &Fleet::default(), &McParams { trials: 0, seed: 0 });
        assert!(r.is_err());
    }

    #[test]
    fn parallel_best_of_matches_sequential() {
        let inst = generate_instance(&GeneratorParams {
            stations: 14,
            requests: 24,
            horizon_days: 1,
            seed: 9,
            ..Default::default()
        })
        .unwrap();
        let plan = aggregate_day(&inst, 1).unwrap();
        let params = McParams { trials: 37, seed: 3 };
        let seq = best_of(&plan, &inst.matrices, &inst.fleet, &params).unwrap();
        for jobs in [2, 3, 8, 64] {
            let par =
                best_of_parallel(&plan, &inst.matrices, &inst.fleet, &params, jobs).unwrap();
            assert_eq!(par.0, seq.0, "jobs={jobs}");
            assert_eq!(par.1.to_bits(), seq.1.to_bits(), "jobs={jobs}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        /// Every construction is a partition: each planned station appears
        /// in exactly one route, and every route passes the checker.
        #[test]
        fn construction_partitions_the_plan(gen_seed in 0u64..1_000, rng_seed in 0u64..1_000, g in 1usize..14) {
            let inst = generate_instance(&GeneratorParams {
                stations: g,
                requests: 2 * g,
                horizon_days: 1,
                seed: gen_seed,
                ..Default::default()
            }).unwrap();
            let plan = aggregate_day(&inst, 1).unwrap();
            let routes = initial(&plan, &inst.matrices, &inst.fleet, &mut Rng::seed_from(rng_seed)).unwrap();

            let mut seen: Vec<usize> = routes.iter().flat_map(|r| r.stops.iter().copied()).collect();
            seen.sort_unstable();
            let expected: Vec<usize> = plan.stops().iter().map(|s| s.station).collect();
            prop_assert_eq!(seen, expected);
            for r in &routes {
                prop_assert!(!r.stops.is_empty());
                let v = check_route(r, &plan, &inst.matrices, &inst.fleet);
                prop_assert!(v.is_empty(), "violations: {:?}", v);
            }
        }
    }
}
