use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use wfsched::derive::{parse_schedule_csv, validate_schedule, Weights};
use wfsched::exact::DEFAULT_CAP;
use wfsched::harness::{
    emit_csv, gen_scenario, run_bench, run_sweep, write_schedules, BenchConfig, BenchRecord,
    RunStatus, ScenarioName, DEFAULT_INTENSITY,
};
use wfsched::model::{parse_cluster, parse_workflow, validate_dag, ClusterSpec, Workflow};
use wfsched::solver::{solve, Algorithm, SolveOptions};
use wfsched::twin::{filter_nodes, AnomalyPolicy, CarbonTrace, TelemetrySnapshot};

#[derive(Parser)]
#[command(
    name = "wfsched",
    version,
    about = "Map workflow DAGs onto heterogeneous clusters"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a workflow and cluster, and optionally a schedule against them.
    Validate {
        workflow: PathBuf,
        cluster: PathBuf,
        /// Schedule CSV to check.
        #[arg(long)]
        schedule: Option<PathBuf>,
    },
    /// Solve one instance and write its schedule.
    Schedule(ScheduleArgs),
    /// Run the named scenarios against a set of algorithms.
    Bench(BenchArgs),
    /// Run random instances of growing size.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct ObjectiveArgs {
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    /// Carbon-intensity CSV (time_s,g_per_kwh). Defaults to a constant 400.
    #[arg(long)]
    carbon_trace: Option<PathBuf>,
}

impl ObjectiveArgs {
    fn weights(&self) -> Result<Weights> {
        Ok(Weights::new(self.alpha, self.beta, self.gamma)?)
    }

    fn trace(&self) -> Result<CarbonTrace> {
        match &self.carbon_trace {
            Some(path) => Ok(CarbonTrace::parse(&read(path)?)?),
            None => Ok(CarbonTrace::constant(DEFAULT_INTENSITY)?),
        }
    }
}

#[derive(Args)]
struct ScheduleArgs {
    #[arg(long)]
    workflow: PathBuf,
    #[arg(long)]
    cluster: PathBuf,
    #[arg(long)]
    algo: Algorithm,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    objective: ObjectiveArgs,
    /// Telemetry CSV; anomalous nodes are removed before solving.
    #[arg(long, requires_all = ["temp_limit", "load_limit"])]
    snapshot: Option<PathBuf>,
    #[arg(long)]
    temp_limit: Option<f64>,
    #[arg(long)]
    load_limit: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    exact_cap: u128,
    /// Schedule CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_delimiter = ',', default_values_t = Algorithm::ALL.to_vec())]
    algos: Vec<Algorithm>,
    #[arg(long, default_value_t = 1)]
    reps: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    objective: ObjectiveArgs,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    exact_cap: u128,
    /// Run one job at a time.
    #[arg(long)]
    sequential: bool,
    /// Worker threads for parallel runs.
    #[arg(long)]
    threads: Option<usize>,
    /// Also write every schedule as CSV into this directory.
    #[arg(long)]
    schedules_dir: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = ScenarioName::ALL.map(|s| s.to_string()).to_vec())]
    scenarios: Vec<String>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Task counts; each point uses min(size, max-nodes) nodes.
    #[arg(long, value_delimiter = ',', default_values_t = [10usize, 100, 1000])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    max_nodes: usize,
    /// Edge probability for each forward task pair.
    #[arg(long, default_value_t = 0.1)]
    density: f64,
    #[command(flatten)]
    run: RunArgs,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(workflow: &Path, cluster: &Path) -> Result<(Workflow, ClusterSpec)> {
    let wf = parse_workflow(&read(workflow)?).with_context(|| workflow.display().to_string())?;
    let cl = parse_cluster(&read(cluster)?).with_context(|| cluster.display().to_string())?;
    Ok((wf, cl))
}

fn validate(workflow: &Path, cluster: &Path, schedule: Option<&Path>) -> Result<bool> {
    let (wf, cl) = load_instance(workflow, cluster)?;
    let order = validate_dag(&wf)?;
    println!(
        "instance ok: {} tasks, {} edges, {} nodes",
        wf.len(),
        wf.edges().len(),
        cl.len()
    );
    println!("topological order: {}", order.join(" "));
    for task in wf.tasks() {
        if cl.feasible_nodes(task).is_empty() {
            println!("task {} fits on no node", task.id);
            return Ok(false);
        }
    }
    let Some(path) = schedule else {
        return Ok(true);
    };
    let sched = parse_schedule_csv(&read(path)?).with_context(|| path.display().to_string())?;
    match validate_schedule(&wf, &cl, &sched) {
        Ok(()) => {
            println!("schedule ok: makespan {}", sched.makespan);
            Ok(true)
        }
        Err(violations) => {
            println!("schedule has {} violation(s):", violations.len());
            for v in violations {
                println!("  {v}");
            }
            Ok(false)
        }
    }
}

fn schedule(args: &ScheduleArgs) -> Result<bool> {
    let (wf, mut cl) = load_instance(&args.workflow, &args.cluster)?;
    if let Some(path) = &args.snapshot {
        let snapshot = TelemetrySnapshot::parse(&read(path)?)?;
        let policy = AnomalyPolicy::new(
            args.temp_limit.expect("enforced by clap"),
            args.load_limit.expect("enforced by clap"),
        )?;
        let kept = filter_nodes(&cl, &snapshot, &policy)?;
        for node in cl.nodes() {
            if kept.index_of(&node.id).is_none() {
                eprintln!("excluding anomalous node {}", node.id);
            }
        }
        cl = kept;
    }
    let options = SolveOptions {
        weights: args.objective.weights()?,
        seed: args.seed,
        heuristic: None,
        exact_cap: args.exact_cap,
    };
    let trace = args.objective.trace()?;
    let (solution, stats) = solve(args.algo, &wf, &cl, &trace, &options)?;
    if let Err(violations) = validate_schedule(&wf, &cl, &solution.schedule) {
        eprintln!("solver produced an invalid schedule:");
        for v in violations {
            eprintln!("  {v}");
        }
        return Ok(false);
    }
    write_or_print(args.out.as_deref(), &solution.schedule.to_csv())?;
    eprint!("{}", solution.report);
    if let Some(s) = stats {
        eprintln!("nodes_explored={}", s.nodes_explored);
        eprintln!("nodes_pruned={}", s.nodes_pruned);
    }
    Ok(true)
}

fn bench_config(run: &RunArgs) -> Result<BenchConfig> {
    Ok(BenchConfig {
        weights: run.objective.weights()?,
        trace: run.objective.trace()?,
        repetitions: run.reps,
        seed: run.seed,
        exact_cap: run.exact_cap,
        sequential: run.sequential,
        ..BenchConfig::default()
    })
}

fn in_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
            Ok(pool.install(job))
        }
        None => Ok(job()),
    }
}

/// Writes the CSV and any schedules; reports records that did not finish
/// with `ok`. Invalid or errored runs fail the command.
fn finish_run(run: &RunArgs, records: &[BenchRecord]) -> Result<bool> {
    fs::write(&run.out, emit_csv(records))
        .with_context(|| format!("writing {}", run.out.display()))?;
    if let Some(dir) = &run.schedules_dir {
        write_schedules(records, dir)?;
    }
    let mut ok = true;
    for r in records.iter().filter(|r| r.status != RunStatus::Ok) {
        eprintln!(
            "{} {} rep {}: {}: {}",
            r.scenario,
            r.algorithm,
            r.repetition,
            r.status.as_str(),
            r.message.as_deref().unwrap_or("")
        );
        ok &= matches!(r.status, RunStatus::Capped | RunStatus::Infeasible);
    }
    eprintln!("wrote {} records to {}", records.len(), run.out.display());
    Ok(ok)
}

fn bench(args: &BenchArgs) -> Result<bool> {
    let names = args
        .scenarios
        .iter()
        .map(|s| s.parse::<ScenarioName>())
        .collect::<Result<Vec<_>, _>>()?;
    let scenarios: Vec<_> = names.into_iter().map(gen_scenario).collect();
    let config = bench_config(&args.run)?;
    let records = in_pool(args.run.threads, || {
        run_bench(&scenarios, &args.run.algos, &config)
    })??;
    finish_run(&args.run, &records)
}

fn sweep(args: &SweepArgs) -> Result<bool> {
    if args.sizes.contains(&0) || args.max_nodes == 0 {
        bail!("sizes and max-nodes must be at least 1");
    }
    if !(0.0..=1.0).contains(&args.density) {
        bail!("density must be in [0, 1]");
    }
    let points: Vec<(usize, usize)> = args
        .sizes
        .iter()
        .map(|&n| (n, n.min(args.max_nodes)))
        .collect();
    let config = bench_config(&args.run)?;
    let records = in_pool(args.run.threads, || {
        run_sweep(&points, args.density, &args.run.algos, &config)
    })??;
    finish_run(&args.run, &records)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Validate {
            workflow,
            cluster,
            schedule: sched,
        } => validate(workflow, cluster, sched.as_deref()),
        Command::Schedule(args) => schedule(args),
        Command::Bench(args) => bench(args),
        Command::Sweep(args) => sweep(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
