//! Benchmark harness: repeated solves over a grid of trial counts, plus
//! anytime trajectories, all emitted as CSV.
//!
//! Repetition `rep` always runs with the seed derived from `(seed, rep)`
//! regardless of the trial level, so a higher level replays the lower
//! level's construction trials and then keeps drawing. Kilometer columns
//! are therefore exactly reproducible run to run and can only improve as
//! the level grows; the millisecond columns measure the machine.

use std::time::{Duration, Instant};

use crate::anneal::SaParams;
use crate::construct::McParams;
use crate::error::Error;
use crate::instance::{fmt_num, Instance};
use crate::rng::derive_seed;
use crate::solver::{self, RunOptions, SolverParams};

/// One repetition at one trial level, in CSV column order.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub r_level: usize,
    pub repetition: usize,
    /// Construction stage wall time.
    pub mc_ms: f64,
    /// Annealing stage wall time.
    pub sa_ms: f64,
    /// Best constructed total before annealing.
    pub mc_km: f64,
    /// Final total after annealing.
    pub sa_km: f64,
}

/// All repetitions of one trial level.
#[derive(Clone, Debug, PartialEq)]
pub struct RunStats {
    pub r_level: usize,
    pub rows: Vec<BenchRow>,
}

impl RunStats {
    pub fn mean_mc_ms(&self) -> f64 {
        mean(self.rows.iter().map(|r| r.mc_ms))
    }

    pub fn mean_sa_ms(&self) -> f64 {
        mean(self.rows.iter().map(|r| r.sa_ms))
    }

    pub fn mean_mc_km(&self) -> f64 {
        mean(self.rows.iter().map(|r| r.mc_km))
    }

    pub fn mean_sa_km(&self) -> f64 {
        mean(self.rows.iter().map(|r| r.sa_km))
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut n = 0usize;
    for v in values {
        sum += v;
        n += 1;
    }
    sum / n as f64
}

fn to_ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// Runs `repetitions` independent solves of `day` at each trial level.
pub fn run_bench(
    inst: &Instance,
    day: u32,
    r_levels: &[usize],
    repetitions: usize,
    seed: u64,
    sa: &SaParams,
) -> Result<Vec<RunStats>, Error> {
    run_bench_jobs(inst, day, r_levels, repetitions, seed, sa, 1)
}

/// [`run_bench`] with repetitions spread over `jobs` threads. Kilometer
/// columns are unaffected; timing columns become unreliable under
/// contention, which callers should surface when enabling this.
pub fn run_bench_jobs(
    inst: &Instance,
    day: u32,
    r_levels: &[usize],
    repetitions: usize,
    seed: u64,
    sa: &SaParams,
    jobs: usize,
) -> Result<Vec<RunStats>, Error> {
    if repetitions == 0 {
        return Err(Error::NonPositiveParam { name: "repetitions", value: 0.0 });
    }
    let mut stats = Vec::with_capacity(r_levels.len());
    for &level in r_levels {
        let one_rep = |rep: usize| -> Result<BenchRow, Error> {
            let params = SolverParams {
                mc: McParams { trials: level, seed: derive_seed(seed, rep as u64) },
                sa: sa.clone(),
            };
            let run = solver::solve_day_opts(inst, day, &params, RunOptions::default())?;
            Ok(BenchRow {
                r_level: level,
                repetition: rep,
                mc_ms: to_ms(run.construction_time),
                sa_ms: to_ms(run.annealing_time),
                mc_km: run.construction_km,
                sa_km: run.solution.total_km,
            })
        };

        let rows: Vec<BenchRow> = if jobs <= 1 || repetitions <= 1 {
            (0..repetitions).map(one_rep).collect::<Result<_, _>>()?
        } else {
            let workers = jobs.min(repetitions);
            let chunk = repetitions.div_ceil(workers);
            let collected: Vec<Result<Vec<BenchRow>, Error>> = std::thread::scope(|s| {
                let handles: Vec<_> = (0..workers)
                    .map(|w| {
                        let lo = w * chunk;
                        let hi = ((w + 1) * chunk).min(repetitions);
                        let one_rep = &one_rep;
                        s.spawn(move || (lo..hi).map(one_rep).collect())
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
            });
            let mut rows = Vec::with_capacity(repetitions);
            for part in collected {
                rows.extend(part?);
            }
            rows
        };
        stats.push(RunStats { r_level: level, rows });
    }
    Ok(stats)
}

/// One point on an anytime curve: best total known after `elapsed_ms`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryPoint {
    pub elapsed_ms: f64,
    pub best_km: f64,
}

/// Solves one day recording every construction improvement as it lands,
/// with the post-annealing total as the final point. Empty days produce an
/// empty trajectory.
pub fn run_trajectory(
    inst: &Instance,
    day: u32,
    trials: usize,
    seed: u64,
    sa: &SaParams,
) -> Result<Vec<TrajectoryPoint>, Error> {
    let params = SolverParams { mc: McParams { trials, seed }, sa: sa.clone() };
    let started = Instant::now();
    let mut points: Vec<TrajectoryPoint> = Vec::new();
    let mut observer = |_trial: usize, km: f64| {
        points.push(TrajectoryPoint { elapsed_ms: to_ms(started.elapsed()), best_km: km });
    };
    let run = solver::solve_day_opts(
        inst,
        day,
        &params,
        RunOptions { on_improvement: Some(&mut observer), ..Default::default() },
    )?;
    if !run.solution.routes.is_empty() {
        points.push(TrajectoryPoint {
            elapsed_ms: to_ms(started.elapsed()),
            best_km: run.solution.total_km,
        });
    }
    Ok(points)
}

// ---------------------------------------------------------------------------
// CSV

const ROWS_HEADER: [&str; 6] = ["r_level", "repetition", "mc_ms", "sa_ms", "mc_km", "sa_km"];
const TRAJECTORY_HEADER: [&str; 2] = ["elapsed_ms", "best_km"];
const SUMMARY_METRICS: [&str; 4] = ["mc_km_mean", "mc_ms_mean", "sa_km_mean", "sa_ms_mean"];

fn crlf_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new())
}

fn finish(writer: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("ascii output")
}

/// Per-repetition rows, one line per (level, repetition).
pub fn rows_to_csv(stats: &[RunStats]) -> String {
    let mut w = crlf_writer();
    w.write_record(ROWS_HEADER).expect("header");
    for level in stats {
        for row in &level.rows {
            w.write_record([
                row.r_level.to_string(),
                row.repetition.to_string(),
                fmt_num(row.mc_ms),
                fmt_num(row.sa_ms),
                fmt_num(row.mc_km),
                fmt_num(row.sa_km),
            ])
            .expect("row");
        }
    }
    finish(w)
}

/// Four metric rows by one column per trial level.
pub fn summary_to_csv(stats: &[RunStats]) -> String {
    let mut w = crlf_writer();
    let mut header = vec!["metric".to_string()];
    header.extend(stats.iter().map(|s| format!("r_{}", s.r_level)));
    w.write_record(&header).expect("header");
    for metric in SUMMARY_METRICS {
        let mut record = vec![metric.to_string()];
        for s in stats {
            let value = match metric {
                "mc_km_mean" => s.mean_mc_km(),
                "mc_ms_mean" => s.mean_mc_ms(),
                "sa_km_mean" => s.mean_sa_km(),
                "sa_ms_mean" => s.mean_sa_ms(),
                _ => unreachable!(),
            };
            record.push(fmt_num(value));
        }
        w.write_record(&record).expect("row");
    }
    finish(w)
}

/// Anytime curve rows; an empty trajectory is just the header.
pub fn trajectory_to_csv(points: &[TrajectoryPoint]) -> String {
    let mut w = crlf_writer();
    w.write_record(TRAJECTORY_HEADER).expect("header");
    for p in points {
        w.write_record([fmt_num(p.elapsed_ms), fmt_num(p.best_km)]).expect("row");
    }
    finish(w)
}

/// Parses text produced by [`rows_to_csv`] (or hand-edited equivalents).
/// The header must match exactly; numeric fields must be finite and the
/// kilometer and millisecond columns nonnegative.
pub fn parse_rows_csv(text: &str) -> Result<Vec<BenchRow>, Error> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| csv_error(1, e.to_string()))?;
    if headers.iter().ne(ROWS_HEADER) {
        return Err(csv_error(1, format!("expected header {}", ROWS_HEADER.join(","))));
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i as u64 + 2; // header is line 1
        let record = record.map_err(|e| csv_error(line, e.to_string()))?;
        if record.len() != ROWS_HEADER.len() {
            return Err(csv_error(line, format!("expected 6 fields, got {}", record.len())));
        }
        let int = |i: usize, name: &str| -> Result<usize, Error> {
            record[i]
                .parse::<usize>()
                .map_err(|e| csv_error(line, format!("{name}: {e}")))
        };
        let num = |i: usize, name: &str| -> Result<f64, Error> {
            let v: f64 = record[i]
                .parse()
                .map_err(|e| csv_error(line, format!("{name}: {e}")))?;
            if !v.is_finite() || v < 0.0 {
                return Err(csv_error(line, format!("{name} must be finite and nonnegative")));
            }
            Ok(v)
        };
        rows.push(BenchRow {
            r_level: int(0, "r_level")?,
            repetition: int(1, "repetition")?,
            mc_ms: num(2, "mc_ms")?,
            sa_ms: num(3, "sa_ms")?,
            mc_km: num(4, "mc_km")?,
            sa_km: num(5, "sa_km")?,
        });
    }
    Ok(rows)
}

fn csv_error(line: u64, detail: String) -> Error {
    Error::CsvParse { line, detail }
}
