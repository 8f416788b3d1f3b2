//! Command-line front end: solves instances, generates benchmarks, exports
//! MILP models, runs the exhaustive oracle, reports KPIs and checks
//! feasibility. Runs in-process by default; `--server URL` delegates the
//! work to a running darp-server instead.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use darp_core::engine::{run_eils, RunStats};
use darp_core::exact::{brute_force_solve, export_milp, ExactError, Limits, MilpOptions};
use darp_core::io::generate::{
    generate_instances, generate_suite, parse_trips, FleetRule, Scenario,
};
use darp_core::io::kpi::compute_kpis;
use darp_core::io::results::{results_table, summarize, InstanceSummary};
use darp_core::io::{parse_instance, parse_solution, write_instance, write_solution};
use darp_core::model::{validate_instance, Instance, SolverParams, StrictFlags};
use darp_core::schedule::{check_feasibility, Solution};
use darp_core::synthetic;

const EXIT_INFEASIBLE: i32 = 2;
const EXIT_ORACLE_REFUSED: i32 = 3;

#[derive(Parser)]
#[command(name = "darp", version, about = "Dial-a-ride solver with driver preferences")]
struct Cli {
    /// Delegate the command to a running darp-server (base URL).
    #[arg(long, global = true)]
    server: Option<String>,
    /// Output directory; DARP_OUT_DIR overrides the default of ".".
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the metaheuristic on an instance file.
    Solve(SolveArgs),
    /// Generate benchmark instances from taxi trip CSVs.
    Generate(GenerateArgs),
    /// Export the instance as a CPLEX-LP mixed-integer model.
    ExportLp(ExportLpArgs),
    /// Prove the optimum of a tiny instance by exhaustive search.
    Oracle(OracleArgs),
    /// Compute coverage, empty-mileage and excess-ride-time KPIs.
    Kpi(KpiArgs),
    /// Check a solution against every constraint family.
    Check(CheckArgs),
    /// Solve every instance of a directory and tabulate the results.
    Bench(BenchArgs),
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// JSON file with solver parameter overrides.
    #[arg(long)]
    params: Option<PathBuf>,
    /// Base random seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stop after this many outer iterations (deterministic runs).
    #[arg(long)]
    iter_budget: Option<u64>,
    /// Wall-clock budget in seconds.
    #[arg(long)]
    cpu_max: Option<f64>,
    /// Average the cluster radius over all vertices, endpoints included.
    #[arg(long)]
    strict_cluster_mean: bool,
    /// Perturb on odd no-improvement counts (the literal parity rule).
    #[arg(long)]
    strict_perturb_parity: bool,
    /// Log every accepted local-search move to stderr.
    #[arg(long)]
    verbose_moves: bool,
}

impl ParamArgs {
    fn build(&self) -> Result<SolverParams> {
        let mut params: SolverParams = match &self.params {
            Some(path) => serde_json::from_str(
                &fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?,
            )
            .context("parsing solver parameters")?,
            None => SolverParams::default(),
        };
        params.rng_seed = self.seed;
        if let Some(budget) = self.iter_budget {
            params.max_iterations = Some(budget);
            if self.cpu_max.is_none() {
                params.cpu_max = 1e9;
            }
        }
        if let Some(cpu) = self.cpu_max {
            params.cpu_max = cpu;
        }
        params.strict.cluster_mean_all_vertices |= self.strict_cluster_mean;
        params.strict.literal_perturb_parity |= self.strict_perturb_parity;
        params.log_moves |= self.verbose_moves;
        params.validate().map_err(anyhow::Error::msg)?;
        Ok(params)
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Instance JSON file.
    #[arg(long)]
    instance: PathBuf,
    /// Number of seeded replicas (seeds seed..seed+runs-1).
    #[arg(long, default_value_t = 1)]
    runs: u64,
    /// Write the per-iteration trace CSV next to the other outputs.
    #[arg(long)]
    trace: bool,
    /// Also report the travel term in raw miles.
    #[arg(long)]
    report_miles: bool,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args)]
struct GenerateArgs {
    /// Trip CSV (PULocationID, DOLocationID, tpep pickup/dropoff datetimes,
    /// trip_distance).
    #[arg(long, requires = "zones")]
    trips: Option<PathBuf>,
    /// Zone centroid CSV (LocationID,x,y).
    #[arg(long)]
    zones: Option<PathBuf>,
    /// Generate this many synthetic trips instead of reading CSVs.
    #[arg(long, conflicts_with = "trips")]
    synthetic_trips: Option<usize>,
    /// Generate the full 28-instance benchmark suite.
    #[arg(long)]
    suite: bool,
    /// Request counts, e.g. --sizes 10,20,50.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    /// Client window type: a = 5 minutes, b = 10 minutes.
    #[arg(long, value_enum, default_value_t = WindowType::A)]
    window: WindowType,
    /// Fleet sizing rule applied to n/9.
    #[arg(long, value_enum, default_value_t = FleetArg::Floor)]
    fleet: FleetArg,
    /// Generator seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum WindowType {
    A,
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum FleetArg {
    Floor,
    Ceil,
}

#[derive(Args)]
struct ExportLpArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    lp_out: Option<PathBuf>,
    /// Skip the route-duration rows.
    #[arg(long)]
    no_duration_row: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Refuse instances with more requests than this.
    #[arg(long, default_value_t = 7)]
    max_requests: usize,
    /// Refuse instances with more vehicles than this.
    #[arg(long, default_value_t = 2)]
    max_vehicles: usize,
}

#[derive(Args)]
struct KpiArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    solution: PathBuf,
    /// Sum per-vehicle empty-mileage ratios instead of averaging.
    #[arg(long)]
    strict_kpi2_sum: bool,
    /// Divide excess ride time by all requests instead of served ones.
    #[arg(long)]
    strict_kpi3_all: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    solution: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of instance JSON files.
    #[arg(long)]
    instances: PathBuf,
    /// Seeded replicas per instance.
    #[arg(long, default_value_t = 10)]
    runs: u64,
    /// Baseline results CSV for the gap column.
    #[arg(long)]
    baseline: Option<PathBuf>,
    #[command(flatten)]
    params: ParamArgs,
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}

fn out_dir(cli_out: &Option<PathBuf>) -> PathBuf {
    cli_out
        .clone()
        .or_else(|| std::env::var_os("DARP_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn run(cli: Cli) -> Result<i32> {
    let out = out_dir(&cli.out);
    match cli.command {
        Command::Solve(args) => cmd_solve(cli.server.as_deref(), &out, args),
        Command::Generate(args) => cmd_generate(cli.server.as_deref(), &out, args),
        Command::ExportLp(args) => cmd_export_lp(cli.server.as_deref(), args),
        Command::Oracle(args) => cmd_oracle(cli.server.as_deref(), &out, args),
        Command::Kpi(args) => cmd_kpi(cli.server.as_deref(), args),
        Command::Check(args) => cmd_check(cli.server.as_deref(), args),
        Command::Bench(args) => cmd_bench(&out, args),
    }
}

fn load_instance(path: &Path) -> Result<Instance> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_solution(path: &Path, inst: &Instance, params: &SolverParams) -> Result<Solution> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_solution(&text, inst, params).with_context(|| format!("parsing {}", path.display()))
}

fn doc(text: &str) -> serde_json::Value {
    serde_json::from_str(text).expect("own serialization parses")
}

fn cmd_solve(server: Option<&str>, out: &Path, args: SolveArgs) -> Result<i32> {
    if args.runs == 0 {
        bail!("--runs must be at least 1");
    }
    let inst = load_instance(&args.instance)?;
    let mut params = args.params.build()?;
    params.record_trace |= args.trace;

    struct RunData {
        seed: u64,
        solution: Solution,
        stats: RunStats,
    }
    let mut runs: Vec<RunData> = Vec::new();

    if let Some(base) = server {
        let client = darp_client::Client::new(base);
        let result = client
            .solve(
                &darp_client::types::SolveRequest {
                    instance: doc(&write_instance(&inst)),
                    params: Some(params.clone()),
                    runs: args.runs,
                    seed: Some(params.rng_seed),
                },
                Duration::from_secs_f64(params.cpu_max * args.runs as f64 + 300.0),
            )
            .context("remote solve")?;
        for outcome in result.runs {
            let solution = parse_solution(&outcome.solution.to_string(), &inst, &params)
                .context("re-validating remote solution")?;
            runs.push(RunData { seed: outcome.seed, solution, stats: outcome.stats });
        }
    } else {
        for offset in 0..args.runs {
            let mut p = params.clone();
            p.rng_seed = params.rng_seed + offset;
            let (solution, stats) = run_eils(&inst, &p).map_err(anyhow::Error::msg)?;
            runs.push(RunData { seed: p.rng_seed, solution, stats });
        }
    }

    let best = runs
        .iter()
        .min_by(|a, b| {
            (!a.stats.feasible, a.stats.best_cost)
                .partial_cmp(&(!b.stats.feasible, b.stats.best_cost))
                .unwrap()
        })
        .expect("at least one run");

    fs::create_dir_all(out)?;
    let stem = &inst.name;
    let solution_path = out.join(format!("{stem}_best.solution.json"));
    fs::write(&solution_path, write_solution(&inst, &best.solution)?)?;
    let stats_path = out.join(format!("{stem}_runstats.json"));
    let all_stats: Vec<&RunStats> = runs.iter().map(|r| &r.stats).collect();
    fs::write(&stats_path, serde_json::to_string_pretty(&all_stats)?)?;

    let bests: Vec<f64> = runs.iter().map(|r| r.stats.best_cost).collect();
    let cpus: Vec<f64> = runs.iter().map(|r| r.stats.elapsed_seconds).collect();
    let summary = summarize(stem, &bests, &cpus);
    let csv_path = out.join(format!("{stem}_results.csv"));
    fs::write(&csv_path, results_table(&[summary], None))?;

    if args.trace {
        for run in &runs {
            let mut text = String::from(
                "iteration,current_cost,best_cost,temperature,p_relocate,p_exchange,\
                 p_exchange_natural,p_r4opt,p_shift\n",
            );
            for line in &run.stats.trace {
                text.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    line.iteration,
                    line.current_cost,
                    line.best_cost,
                    line.temperature,
                    line.probabilities[0],
                    line.probabilities[1],
                    line.probabilities[2],
                    line.probabilities[3],
                    line.probabilities[4],
                ));
            }
            fs::write(out.join(format!("{stem}_seed{}_trace.csv", run.seed)), text)?;
        }
    }

    println!(
        "best cost {:.6} (seed {}), served {}/{}, {} runs",
        best.stats.best_cost,
        best.seed,
        best.solution.served_count(&inst),
        inst.num_requests(),
        runs.len()
    );
    if args.report_miles {
        println!(
            "travel: {:.3} minutes = {:.3} miles at {} min/mile",
            best.solution.cost.travel,
            best.solution.cost.travel / inst.time_factor,
            inst.time_factor
        );
    }
    println!("wrote {}", solution_path.display());
    println!("wrote {}", stats_path.display());
    println!("wrote {}", csv_path.display());

    if check_feasibility(&inst, &best.solution).is_feasible() {
        Ok(0)
    } else {
        eprintln!("no run satisfied every constraint (service level included)");
        Ok(EXIT_INFEASIBLE)
    }
}

fn cmd_generate(server: Option<&str>, out: &Path, args: GenerateArgs) -> Result<i32> {
    let (trips_csv, zones_csv) = match (&args.synthetic_trips, &args.trips, &args.zones) {
        (Some(count), _, _) => synthetic::random_trips_csv(*count, args.seed),
        (None, Some(trips), Some(zones)) => (
            fs::read_to_string(trips).with_context(|| format!("reading {}", trips.display()))?,
            fs::read_to_string(zones).with_context(|| format!("reading {}", zones.display()))?,
        ),
        _ => bail!("provide --trips with --zones, or --synthetic-trips"),
    };

    let instances: Vec<Instance> = if let Some(base) = server {
        let client = darp_client::Client::new(base);
        let scenario = scenario_from(&args);
        let response = client
            .generate(&darp_client::types::GenerateRequest {
                trips_csv,
                zones_csv,
                suite: args.suite,
                sizes: args.sizes.clone(),
                scenario: Some(scenario),
                seed: args.seed,
            })
            .context("remote generate")?;
        response
            .instances
            .iter()
            .map(|d| parse_instance(&d.to_string()).map_err(anyhow::Error::from))
            .collect::<Result<_>>()?
    } else {
        let trips = parse_trips(&trips_csv, &zones_csv)?;
        if args.suite {
            generate_suite(&trips, args.seed)?
        } else {
            if args.sizes.is_empty() {
                bail!("provide --sizes or --suite");
            }
            generate_instances(&trips, &args.sizes, &scenario_from(&args), args.seed)?
        }
    };

    fs::create_dir_all(out)?;
    for inst in &instances {
        debug_assert!(validate_instance(inst).is_valid());
        let path = out.join(format!("{}.json", inst.name));
        fs::write(&path, write_instance(inst))?;
        println!("wrote {}", path.display());
    }
    println!("{} instances", instances.len());
    Ok(0)
}

fn scenario_from(args: &GenerateArgs) -> Scenario {
    let rule = match args.fleet {
        FleetArg::Floor => FleetRule::Floor,
        FleetArg::Ceil => FleetRule::Ceil,
    };
    match args.window {
        WindowType::A => Scenario::type_a(rule),
        WindowType::B => Scenario::type_b(rule),
    }
}

fn cmd_export_lp(server: Option<&str>, args: ExportLpArgs) -> Result<i32> {
    let inst = load_instance(&args.instance)?;
    let options = MilpOptions { include_duration: !args.no_duration_row };
    let lp = if let Some(base) = server {
        darp_client::Client::new(base)
            .export_lp(&darp_client::types::ExportLpRequest {
                instance: doc(&write_instance(&inst)),
                options,
                params: None,
            })
            .context("remote export")?
    } else {
        export_milp(&inst, &SolverParams::default(), options)
    };
    match &args.lp_out {
        Some(path) => {
            fs::write(path, lp)?;
            println!("wrote {}", path.display());
        }
        None => print!("{lp}"),
    }
    Ok(0)
}

fn cmd_oracle(server: Option<&str>, out: &Path, args: OracleArgs) -> Result<i32> {
    let inst = load_instance(&args.instance)?;
    let limits = Limits { max_requests: args.max_requests, max_vehicles: args.max_vehicles };
    let params = SolverParams::default();

    let result = if let Some(base) = server {
        match darp_client::Client::new(base).oracle(&darp_client::types::OracleRequest {
            instance: doc(&write_instance(&inst)),
            limits: Some(limits),
            params: None,
        }) {
            Ok(result) => result,
            Err(darp_client::ClientError::Api { kind, error }) if kind == "over_limits" => {
                eprintln!("{error}");
                return Ok(EXIT_ORACLE_REFUSED);
            }
            Err(darp_client::ClientError::Api { kind, error }) if kind == "infeasible" => {
                eprintln!("{error}");
                return Ok(EXIT_INFEASIBLE);
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        match brute_force_solve(&inst, &params, limits) {
            Ok(result) => result,
            Err(e @ ExactError::OverLimits { .. }) => {
                eprintln!("{e}");
                return Ok(EXIT_ORACLE_REFUSED);
            }
            Err(e @ ExactError::Infeasible(_)) => {
                eprintln!("{e}");
                return Ok(EXIT_INFEASIBLE);
            }
            Err(e) => return Err(e.into()),
        }
    };

    println!(
        "proven optimum {:.6} (served {}, {} orderings explored)",
        result.optimum.weighted, result.optimum.served, result.nodes_explored
    );
    fs::create_dir_all(out)?;
    let path = out.join(format!("{}_oracle.solution.json", inst.name));
    fs::write(&path, write_solution(&inst, &result.solution)?)?;
    println!("wrote {}", path.display());
    Ok(0)
}

fn cmd_kpi(server: Option<&str>, args: KpiArgs) -> Result<i32> {
    let inst = load_instance(&args.instance)?;
    let params = SolverParams::default();
    let strict = StrictFlags {
        kpi2_sum_routes: args.strict_kpi2_sum,
        kpi3_all_requests: args.strict_kpi3_all,
        ..Default::default()
    };
    let report = if let Some(base) = server {
        let solution_text = fs::read_to_string(&args.solution)
            .with_context(|| format!("reading {}", args.solution.display()))?;
        darp_client::Client::new(base)
            .kpi(&darp_client::types::KpiRequest {
                instance: doc(&write_instance(&inst)),
                solution: serde_json::from_str(&solution_text).context("solution JSON")?,
                strict,
            })
            .context("remote kpi")?
    } else {
        let sol = load_solution(&args.solution, &inst, &params)?;
        compute_kpis(&inst, &sol, &strict).map_err(anyhow::Error::msg)?
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(0)
}

fn cmd_check(server: Option<&str>, args: CheckArgs) -> Result<i32> {
    let inst = load_instance(&args.instance)?;
    let report = if let Some(base) = server {
        let solution_text = fs::read_to_string(&args.solution)
            .with_context(|| format!("reading {}", args.solution.display()))?;
        darp_client::Client::new(base)
            .check(&darp_client::types::CheckRequest {
                instance: doc(&write_instance(&inst)),
                solution: serde_json::from_str(&solution_text).context("solution JSON")?,
            })
            .context("remote check")?
    } else {
        let sol = load_solution(&args.solution, &inst, &SolverParams::default())?;
        check_feasibility(&inst, &sol)
    };
    if report.is_feasible() {
        println!("feasible");
        Ok(0)
    } else {
        for violation in &report.violations {
            println!("violation: {violation}");
        }
        Ok(EXIT_INFEASIBLE)
    }
}

fn cmd_bench(out: &Path, args: BenchArgs) -> Result<i32> {
    if args.runs == 0 {
        bail!("--runs must be at least 1");
    }
    let params = args.params.build()?;
    let mut paths: Vec<PathBuf> = fs::read_dir(&args.instances)
        .with_context(|| format!("listing {}", args.instances.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        bail!("no .json instances under {}", args.instances.display());
    }

    let baseline: Option<HashMap<String, f64>> = match &args.baseline {
        Some(path) => Some(parse_baseline(path)?),
        None => None,
    };

    let mut rows: Vec<InstanceSummary> = Vec::new();
    for path in &paths {
        let inst = load_instance(path)?;
        let mut bests = Vec::new();
        let mut cpus = Vec::new();
        for offset in 0..args.runs {
            let mut p = params.clone();
            p.rng_seed = params.rng_seed + offset;
            let (_, stats) = run_eils(&inst, &p).map_err(anyhow::Error::msg)?;
            bests.push(stats.best_cost);
            cpus.push(stats.elapsed_seconds);
        }
        let summary = summarize(&inst.name, &bests, &cpus);
        println!(
            "{}: best {:.6}, avg {:.6}, cpu {:.2}s",
            summary.instance, summary.best, summary.avg, summary.cpu_s
        );
        rows.push(summary);
    }

    fs::create_dir_all(out)?;
    let path = out.join("results.csv");
    fs::write(&path, results_table(&rows, baseline.as_ref()))?;
    println!("wrote {}", path.display());
    Ok(0)
}

fn parse_baseline(path: &Path) -> Result<HashMap<String, f64>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut map = HashMap::new();
    for (idx, line) in text.lines().enumerate() {
        if idx == 0 && line.starts_with("instance,") {
            continue;
        }
        let mut cols = line.split(',');
        let (Some(name), Some(best)) = (cols.next(), cols.next()) else {
            continue;
        };
        map.insert(
            name.to_string(),
            best.parse::<f64>()
                .with_context(|| format!("bad best value on line {}", idx + 1))?,
        );
    }
    Ok(map)
}
