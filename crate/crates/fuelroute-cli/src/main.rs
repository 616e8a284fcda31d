//! Operator front end: one binary exposing instance generation and
//! validation, the two-stage solver, solution checking, the exact oracle,
//! LP export, and the benchmark harness.
//!
//! Exit codes: 0 on success, 1 on domain failure (unreadable input, broken
//! instance, infeasible day, failed evaluation), 2 on usage errors. Data
//! goes to stdout or `--out`; everything else goes to stderr, so the data
//! stream always parses in isolation.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use fuelroute::anneal::{trace_to_csv, ReturnPolicy, SaParams, TraceEntry};
use fuelroute::bench::{
    rows_to_csv, run_bench_jobs, run_trajectory, summary_to_csv, trajectory_to_csv,
};
use fuelroute::construct::McParams;
use fuelroute::exact::{export_mip, result_to_json, solve_exact, SearchLimits};
use fuelroute::feasibility::{
    check_solution, solution_from_json, solution_to_canonical_json, violations_to_json,
};
use fuelroute::instance::{
    aggregate_day, generate_instance, load_instance, to_canonical_json, GeneratorParams,
};
use fuelroute::solver::{solve_day_opts, RunOptions};
use fuelroute::{Instance, LoadPolicy, SolverParams};

/// Relative `--out` paths land under this directory when it is set.
const OUT_DIR_VAR: &str = "FUELROUTE_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "fuelroute",
    version,
    about = "Plan fuel tanker routes: build instances, solve them, check and benchmark the results."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a random instance and emit it as canonical JSON.
    Generate(GenerateArgs),
    /// Check an instance document; findings go to stderr.
    Validate(ValidateArgs),
    /// Construct and anneal routes; emit one solution document per day.
    Solve(SolveArgs),
    /// Re-check solution documents; emit one violation array per document.
    Evaluate(EvaluateArgs),
    /// Prove a day's optimum by branch and bound (small days only).
    Exact(ExactArgs),
    /// Emit a day's arc model as CPLEX-LP text for an external solver.
    ExportMip(ExportMipArgs),
    /// Repeat solves over trial budgets; emit timing/distance CSV.
    Bench(BenchArgs),
}

#[derive(clap::Args)]
struct GenerateArgs {
    /// Stations around the hub.
    #[arg(long, default_value_t = 65)]
    stations: usize,
    /// Planning horizon in days.
    #[arg(long, default_value_t = 3)]
    horizon: u32,
    /// Service requests spread over the horizon.
    #[arg(long, default_value_t = 166)]
    requests: usize,
    #[arg(long, default_value_t = 2.0)]
    gamma_shape: f64,
    #[arg(long, default_value_t = 2684.5)]
    gamma_scale: f64,
    /// Smallest request worth a truck, liters.
    #[arg(long, default_value_t = 200.0)]
    demand_min: f64,
    /// Largest single request, liters.
    #[arg(long, default_value_t = 15_500.0)]
    demand_max: f64,
    /// Mean on-site service time, minutes.
    #[arg(long, default_value_t = 54.0)]
    mean_service: f64,
    /// Side of the square the stations scatter in, km.
    #[arg(long, default_value_t = 300.0)]
    box_km: f64,
    #[arg(long, default_value_t = 60.0)]
    speed_kmh: f64,
    /// Tanker capacity, liters.
    #[arg(long, default_value_t = 39_000.0)]
    capacity: f64,
    #[arg(long, value_enum, default_value_t = PolicyArg::Bounded)]
    load_policy: PolicyArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ValidateArgs {
    #[arg(long)]
    instance: PathBuf,
}

#[derive(clap::Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Day number, or "all" for the whole horizon (one document per line).
    #[arg(long, default_value = "all", value_parser = parse_day)]
    day: DayArg,
    /// Construction trials per day.
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Annealing start temperature.
    #[arg(long, default_value_t = 1.0)]
    t0: f64,
    /// Annealing end temperature.
    #[arg(long, default_value_t = 0.001)]
    t_end: f64,
    /// Let annealing explore orderings that miss deadlines.
    #[arg(long)]
    no_window_check: bool,
    /// Report each chain's final state instead of its best state.
    #[arg(long)]
    final_state: bool,
    /// Worker threads for construction trials; the result is the same.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Directory for per-route annealing traces, one CSV per route.
    #[arg(long, value_name = "DIR")]
    sa_trace: Option<PathBuf>,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct EvaluateArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Solution documents, one per line; stdin when omitted.
    #[arg(long)]
    solution: Option<PathBuf>,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ExactArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = 1)]
    day: u32,
    /// Refuse days with more stations than this.
    #[arg(long, default_value_t = 10)]
    station_cap: usize,
    /// Stop after this many search nodes and report the best found.
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Stop after this many milliseconds and report the best found.
    #[arg(long, value_name = "MS")]
    max_time_ms: Option<u64>,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ExportMipArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = 1)]
    day: u32,
    /// Tanker count N. When omitted: bounded policy gets the least count
    /// that can carry the day's liters, full-load the most it can empty.
    #[arg(long)]
    routes: Option<usize>,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct BenchArgs {
    /// Instance document; a generated default-profile network when omitted.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    day: u32,
    /// Construction trial budgets, comma separated.
    #[arg(long = "r", value_name = "R", value_delimiter = ',', default_value = "1000,5000,10000")]
    r_levels: Vec<usize>,
    /// Repetitions per budget.
    #[arg(long, default_value_t = 100)]
    reps: usize,
    /// rows: one line per repetition; summary: means per budget;
    /// trajectory: anytime curve of one run (single --r budget).
    #[arg(long, value_enum, default_value_t = ShapeArg::Rows)]
    shape: ShapeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seed for the generated network when --instance is omitted.
    #[arg(long, default_value_t = 0)]
    gen_seed: u64,
    #[arg(long, default_value_t = 1.0)]
    t0: f64,
    #[arg(long, default_value_t = 0.001)]
    t_end: f64,
    /// Worker threads for repetitions; timing columns become unreliable.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    Bounded,
    FullLoad,
}

impl From<PolicyArg> for LoadPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Bounded => LoadPolicy::Bounded,
            PolicyArg::FullLoad => LoadPolicy::FullLoad,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ShapeArg {
    Rows,
    Summary,
    Trajectory,
}

#[derive(Clone, Copy)]
enum DayArg {
    All,
    One(u32),
}

fn parse_day(s: &str) -> Result<DayArg, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(DayArg::All);
    }
    s.parse::<u32>()
        .map(DayArg::One)
        .map_err(|_| format!("expected a day number or \"all\", got {s:?}"))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate(args) => cmd_generate(&args),
        Command::Validate(args) => cmd_validate(&args),
        Command::Solve(args) => cmd_solve(&args),
        Command::Evaluate(args) => cmd_evaluate(&args),
        Command::Exact(args) => cmd_exact(&args),
        Command::ExportMip(args) => cmd_export_mip(&args),
        Command::Bench(args) => cmd_bench(&args),
    }
}

fn cmd_generate(args: &GenerateArgs) -> Result<ExitCode> {
    let params = GeneratorParams {
        stations: args.stations,
        horizon_days: args.horizon,
        requests: args.requests,
        gamma_shape: args.gamma_shape,
        gamma_scale: args.gamma_scale,
        demand_bounds: (args.demand_min, args.demand_max),
        mean_service_minutes: args.mean_service,
        box_km: args.box_km,
        speed_kmh: args.speed_kmh,
        capacity_liters: args.capacity,
        load_policy: args.load_policy.into(),
        seed: args.seed,
    };
    let inst = generate_instance(&params)?;
    eprintln!(
        "generated {} stations, {} requests over a {}-day horizon (seed {})",
        inst.stations.len(),
        inst.requests.len(),
        inst.horizon_days,
        args.seed
    );
    write_data(&args.out, &to_canonical_json(&inst))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(args: &ValidateArgs) -> Result<ExitCode> {
    // load_instance runs full validation; a failed parse and a failed
    // invariant both land here, findings listed line by line.
    let inst = read_instance(&args.instance)?;
    eprintln!(
        "ok: {} stations, {} requests over a {}-day horizon",
        inst.stations.len(),
        inst.requests.len(),
        inst.horizon_days
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(args: &SolveArgs) -> Result<ExitCode> {
    let inst = read_instance(&args.instance)?;
    let params = SolverParams {
        mc: McParams { trials: args.trials, seed: args.seed },
        sa: SaParams {
            t0: args.t0,
            t_end: args.t_end,
            enforce_windows: !args.no_window_check,
            return_policy: if args.final_state {
                ReturnPolicy::FinalState
            } else {
                ReturnPolicy::BestSeen
            },
        },
    };
    let days: Vec<u32> = match args.day {
        DayArg::All => (1..=inst.horizon_days).collect(),
        DayArg::One(d) => vec![d],
    };

    let mut data = String::new();
    for &day in &days {
        let opts = RunOptions {
            jobs: args.jobs,
            capture_traces: args.sa_trace.is_some(),
            ..Default::default()
        };
        let run = solve_day_opts(&inst, day, &params, opts)?;
        eprintln!(
            "day {day}: {} routes, {:.3} km, construction {:.1} ms, annealing {:.1} ms",
            run.solution.routes.len(),
            run.solution.total_km,
            run.construction_time.as_secs_f64() * 1e3,
            run.annealing_time.as_secs_f64() * 1e3,
        );
        if let (Some(dir), Some(traces)) = (&args.sa_trace, &run.sa_traces) {
            let written = write_traces(dir, day, traces)?;
            eprintln!("day {day}: wrote {written} trace files under {}", dir.display());
        }
        data.push_str(&solution_to_canonical_json(&run.solution, &inst));
    }
    write_data(&args.out, &data)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_evaluate(args: &EvaluateArgs) -> Result<ExitCode> {
    let inst = read_instance(&args.instance)?;
    let text = match &args.solution {
        Some(path) => fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?,
        None => {
            let mut buf = String::new();
            io::stdin().read_to_string(&mut buf).context("reading stdin")?;
            buf
        }
    };

    let mut data = String::new();
    let mut documents = 0usize;
    let mut total = 0usize;
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let sol = solution_from_json(line)
            .with_context(|| format!("solution document on line {}", i + 1))?;
        let violations = check_solution(&sol, &inst);
        documents += 1;
        if violations.is_empty() {
            eprintln!("document {documents}: ok ({} routes)", sol.routes.len());
        } else {
            eprintln!("document {documents}: {} violations", violations.len());
        }
        total += violations.len();
        data.push_str(&violations_to_json(&violations));
    }
    if documents == 0 {
        bail!("no solution documents in the input");
    }
    write_data(&args.out, &data)?;
    Ok(if total == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_exact(args: &ExactArgs) -> Result<ExitCode> {
    let inst = read_instance(&args.instance)?;
    let plan = aggregate_day(&inst, args.day)?;
    let limits = SearchLimits {
        station_cap: args.station_cap,
        max_nodes: args.max_nodes,
        max_time: args.max_time_ms.map(Duration::from_millis),
    };
    let result = solve_exact(&plan, &inst.matrices, &inst.fleet, &limits)?;
    if result.proven {
        eprintln!(
            "day {}: optimum {:.3} km proven, {} nodes",
            args.day, result.optimum_km, result.nodes_explored
        );
    } else if result.optimum_km.is_finite() {
        eprintln!(
            "day {}: truncated after {} nodes; best {:.3} km is not proven",
            args.day, result.nodes_explored, result.optimum_km
        );
    } else {
        eprintln!(
            "day {}: truncated after {} nodes before any feasible route set",
            args.day, result.nodes_explored
        );
    }
    write_data(&args.out, &result_to_json(&result, args.day))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_export_mip(args: &ExportMipArgs) -> Result<ExitCode> {
    let inst = read_instance(&args.instance)?;
    let plan = aggregate_day(&inst, args.day)?;
    let routes = args.routes.unwrap_or_else(|| {
        let by_volume = plan.total_demand() / inst.fleet.capacity_liters;
        match inst.fleet.load_policy {
            LoadPolicy::Bounded => (by_volume.ceil() as usize).max(1),
            // Every used full-load tanker empties into at least a tankful
            // of demand, so volume caps the useful count from above.
            LoadPolicy::FullLoad => (by_volume.floor() as usize).max(1),
        }
    });
    let model = export_mip(&plan, &inst.matrices, &inst.fleet, routes)?;
    eprintln!("day {}: {} stations, {} tankers", args.day, plan.len(), routes);
    write_data(&args.out, &model)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(args: &BenchArgs) -> Result<ExitCode> {
    let inst = match &args.instance {
        Some(path) => read_instance(path)?,
        None => {
            eprintln!(
                "no --instance given; benchmarking a generated default-profile network (seed {})",
                args.gen_seed
            );
            generate_instance(&GeneratorParams { seed: args.gen_seed, ..Default::default() })?
        }
    };
    let sa = SaParams { t0: args.t0, t_end: args.t_end, ..Default::default() };

    let data = match args.shape {
        ShapeArg::Trajectory => {
            if args.r_levels.len() != 1 {
                Cli::command()
                    .error(
                        clap::error::ErrorKind::ArgumentConflict,
                        "--shape trajectory takes exactly one --r budget",
                    )
                    .exit();
            }
            let points = run_trajectory(&inst, args.day, args.r_levels[0], args.seed, &sa)?;
            eprintln!("day {}: {} trajectory points", args.day, points.len());
            trajectory_to_csv(&points)
        }
        shape => {
            if args.jobs > 1 {
                eprintln!(
                    "warning: --jobs {} makes the timing columns (mc_ms, sa_ms) unreliable; \
                     kilometer columns are unaffected",
                    args.jobs
                );
            }
            let stats = run_bench_jobs(
                &inst, args.day, &args.r_levels, args.reps, args.seed, &sa, args.jobs,
            )?;
            for s in &stats {
                eprintln!(
                    "R={}: mc {:.1} km / {:.0} ms, sa {:.1} km / {:.0} ms over {} reps",
                    s.r_level,
                    s.mean_mc_km(),
                    s.mean_mc_ms(),
                    s.mean_sa_km(),
                    s.mean_sa_ms(),
                    s.rows.len()
                );
            }
            match shape {
                ShapeArg::Rows => rows_to_csv(&stats),
                ShapeArg::Summary => summary_to_csv(&stats),
                ShapeArg::Trajectory => unreachable!("handled above"),
            }
        }
    };
    write_data(&args.out, &data)?;
    Ok(ExitCode::SUCCESS)
}

fn read_instance(path: &Path) -> Result<Instance> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    load_instance(io::BufReader::new(file))
        .with_context(|| format!("loading {}", path.display()))
}

/// Joins a relative path onto the directory named by [`OUT_DIR_VAR`], when
/// both apply; absolute paths and unset environments pass through.
fn resolve_out(path: &Path) -> PathBuf {
    if path.is_relative() {
        if let Some(dir) = std::env::var_os(OUT_DIR_VAR) {
            return PathBuf::from(dir).join(path);
        }
    }
    path.to_path_buf()
}

fn write_data(out: &Option<PathBuf>, data: &str) -> Result<()> {
    match out {
        Some(path) => {
            let path = resolve_out(path);
            fs::write(&path, data).with_context(|| format!("writing {}", path.display()))?;
        }
        None => io::stdout().write_all(data.as_bytes()).context("writing stdout")?,
    }
    Ok(())
}

fn write_traces(dir: &Path, day: u32, traces: &[Vec<TraceEntry>]) -> Result<usize> {
    let dir = resolve_out(dir);
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    for (i, trace) in traces.iter().enumerate() {
        let path = dir.join(format!("day{day}_route{:02}.csv", i + 1));
        fs::write(&path, trace_to_csv(trace))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(traces.len())
}
