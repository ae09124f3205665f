//! Scenario generators and the benchmark runner.
//!
//! `W1`, `W2`, and `W3` are fixed instances of growing dependency density;
//! [`gen_random_instance`] produces sweep points of any size. [`run_bench`]
//! solves every (scenario, algorithm, repetition) triple, validates each
//! schedule, and times only the solve call.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::derive::{validate_schedule, ObjectiveReport, Schedule, Weights};
use crate::exact::{SearchStats, DEFAULT_CAP};
use crate::heuristics::HeuristicConfig;
use crate::model::{ClusterSpec, DependencyEdge, NodeSpec, Task, Workflow};
use crate::rng::SeededRng;
use crate::solver::{solve, Algorithm, SolveError, SolveOptions};
use crate::twin::CarbonTrace;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("no scenarios given")]
    NoScenarios,
    #[error("no algorithms given")]
    NoAlgorithms,
    #[error("repetitions must be at least 1")]
    NoRepetitions,
    #[error("unknown scenario `{0}` (expected W1, W2 or W3)")]
    UnknownScenario(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScenarioName {
    W1,
    W2,
    W3,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 3] = [ScenarioName::W1, ScenarioName::W2, ScenarioName::W3];
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScenarioName::W1 => "W1",
            ScenarioName::W2 => "W2",
            ScenarioName::W3 => "W3",
        })
    }
}

impl FromStr for ScenarioName {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "W1" => Ok(ScenarioName::W1),
            "W2" => Ok(ScenarioName::W2),
            "W3" => Ok(ScenarioName::W3),
            _ => Err(HarnessError::UnknownScenario(s.to_string())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub workflow: Workflow,
    pub cluster: ClusterSpec,
    pub seed: u64,
}

/// Value ranges every generator draws from, all half-open.
pub mod ranges {
    /// Task work units.
    pub const WORK: (f64, f64) = (1.0, 10.0);
    /// Task memory demand, GiB.
    pub const TASK_MEM: (f64, f64) = (0.5, 4.0);
    /// Edge data units.
    pub const DATA: (f64, f64) = (0.0, 20.0);
    /// Node speed, work units per second.
    pub const SPEED: (f64, f64) = (1.0, 4.0);
    /// Node memory, GiB; always above the largest task demand.
    pub const NODE_MEM: (f64, f64) = (8.0, 64.0);
    /// Busy power, watts.
    pub const P_BUSY: (f64, f64) = (80.0, 250.0);
    /// Idle power as a fraction of busy power.
    pub const IDLE_FRACTION: (f64, f64) = (0.1, 0.3);
    /// Uniform link bandwidth, data units per second.
    pub const BANDWIDTH: f64 = 10.0;
    /// Node classes, assigned round-robin.
    pub const CLASSES: [&str; 3] = ["hpc", "cloud", "edge"];
}

fn pad(prefix: char, i: usize, count: usize) -> String {
    let width = count.to_string().len().max(2);
    format!("{prefix}{:0width$}", i + 1)
}

fn draw(rng: &mut SeededRng, (lo, hi): (f64, f64)) -> f64 {
    rng.range(lo, hi)
}

fn gen_nodes(rng: &mut SeededRng, count: usize) -> ClusterSpec {
    let nodes = (0..count)
        .map(|i| {
            let speed = draw(rng, ranges::SPEED);
            let mem_capacity = draw(rng, ranges::NODE_MEM);
            let p_busy = draw(rng, ranges::P_BUSY);
            let p_idle = p_busy * draw(rng, ranges::IDLE_FRACTION);
            NodeSpec {
                id: pad('N', i, count),
                speed,
                mem_capacity,
                class: ranges::CLASSES[i % ranges::CLASSES.len()].to_string(),
                p_busy,
                p_idle,
            }
        })
        .collect();
    ClusterSpec::new(nodes, ranges::BANDWIDTH).expect("generated cluster is valid")
}

fn gen_tasks(rng: &mut SeededRng, count: usize) -> Vec<Task> {
    (0..count)
        .map(|i| {
            Task::new(pad('T', i, count), draw(rng, ranges::WORK))
                .with_mem(draw(rng, ranges::TASK_MEM))
        })
        .collect()
}

fn edges_from(
    rng: &mut SeededRng,
    tasks: &[Task],
    pairs: &[(usize, usize)],
) -> Vec<DependencyEdge> {
    pairs
        .iter()
        .map(|&(s, d)| {
            DependencyEdge::new(
                tasks[s].id.clone(),
                tasks[d].id.clone(),
                draw(rng, ranges::DATA),
            )
        })
        .collect()
}

/// Seeds pinned for the named scenarios.
pub const W1_SEED: u64 = 0x5731;
pub const W2_SEED: u64 = 0x5732;
pub const W3_SEED: u64 = 0x5733;

/// The named benchmark scenarios.
///
/// * `W1`: 5 tasks, a 4-task chain with one fork (4 edges), 3 nodes.
/// * `W2`: 10 tasks in layers of 2, 3, 3, 2 with 14 edges, 4 nodes.
/// * `W3`: 15 tasks, 5 nodes; every task from the third on depends on three
///   earlier tasks (four from the ninth on), 46 edges in total.
///
/// Works, memory, data volumes, and node attributes come from [`ranges`]
/// through the pinned seed, so every call returns the same instance.
pub fn gen_scenario(name: ScenarioName) -> Scenario {
    let (seed, tasks, nodes) = match name {
        ScenarioName::W1 => (W1_SEED, 5, 3),
        ScenarioName::W2 => (W2_SEED, 10, 4),
        ScenarioName::W3 => (W3_SEED, 15, 5),
    };
    let mut rng = SeededRng::new(seed);
    let cluster = gen_nodes(&mut rng, nodes);
    let tasks = gen_tasks(&mut rng, tasks);
    let pairs: Vec<(usize, usize)> = match name {
        ScenarioName::W1 => vec![(0, 1), (1, 2), (2, 3), (1, 4)],
        ScenarioName::W2 => vec![
            (0, 2),
            (0, 3),
            (1, 3),
            (1, 4),
            (2, 5),
            (3, 5),
            (3, 6),
            (4, 6),
            (4, 7),
            (2, 7),
            (5, 8),
            (6, 8),
            (6, 9),
            (7, 9),
        ],
        ScenarioName::W3 => {
            let mut pairs = Vec::new();
            for dst in 1..tasks.len() {
                let wanted = if dst >= 8 { 4 } else { 3 }.min(dst);
                let mut chosen: Vec<usize> = Vec::with_capacity(wanted);
                while chosen.len() < wanted {
                    let src = rng.below(dst);
                    if !chosen.contains(&src) {
                        chosen.push(src);
                    }
                }
                chosen.sort_unstable();
                pairs.extend(chosen.into_iter().map(|src| (src, dst)));
            }
            pairs
        }
    };
    let edges = edges_from(&mut rng, &tasks, &pairs);
    Scenario {
        name: name.to_string(),
        workflow: Workflow::new(tasks, edges).expect("generated workflow is acyclic"),
        cluster,
        seed,
    }
}

/// Random sweep instance: `n_tasks` tasks, `n_nodes` nodes, and each forward
/// edge `i -> j` (`i < j` in id order) present with probability `density`.
pub fn gen_random_instance(n_tasks: usize, n_nodes: usize, density: f64, seed: u64) -> Scenario {
    assert!(
        n_tasks >= 1 && n_nodes >= 1,
        "instance needs a task and a node"
    );
    assert!((0.0..=1.0).contains(&density), "density must be in [0, 1]");
    let mut rng = SeededRng::new(seed);
    let cluster = gen_nodes(&mut rng, n_nodes);
    let tasks = gen_tasks(&mut rng, n_tasks);
    let mut pairs = Vec::new();
    for src in 0..n_tasks {
        for dst in src + 1..n_tasks {
            if rng.chance(density) {
                pairs.push((src, dst));
            }
        }
    }
    let edges = edges_from(&mut rng, &tasks, &pairs);
    Scenario {
        name: format!("n{n_tasks}x{n_nodes}"),
        workflow: Workflow::new(tasks, edges).expect("forward edges are acyclic"),
        cluster,
        seed,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Ok,
    /// Exact search space above the cap; nothing was solved.
    Capped,
    /// Some task fits on no node.
    Infeasible,
    /// The solver returned a schedule that failed validation.
    Invalid,
    Error,
}

impl RunStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RunStatus::Ok => "ok",
            RunStatus::Capped => "capped",
            RunStatus::Infeasible => "infeasible",
            RunStatus::Invalid => "invalid",
            RunStatus::Error => "error",
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchRecord {
    pub scenario: String,
    pub algorithm: Algorithm,
    pub repetition: usize,
    pub seed: u64,
    /// Present whenever the solver produced a schedule.
    pub report: Option<ObjectiveReport>,
    pub runtime_s: f64,
    pub stats: Option<SearchStats>,
    pub status: RunStatus,
    pub schedule: Option<Schedule>,
    pub message: Option<String>,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub weights: Weights,
    pub trace: CarbonTrace,
    pub repetitions: usize,
    /// Seed of repetition 0; repetition `r` uses `seed + r`.
    pub seed: u64,
    pub heuristic: HeuristicConfig,
    pub exact_cap: u128,
    /// Run one job at a time for stable timings.
    pub sequential: bool,
}

/// Intensity used when no carbon trace is supplied, g CO2 per kWh.
pub const DEFAULT_INTENSITY: f64 = 400.0;

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            weights: Weights::MAKESPAN,
            trace: CarbonTrace::constant(DEFAULT_INTENSITY).expect("positive constant trace"),
            repetitions: 1,
            seed: 42,
            heuristic: HeuristicConfig::default(),
            exact_cap: DEFAULT_CAP,
            sequential: false,
        }
    }
}

fn run_one(
    scenario: &Scenario,
    algorithm: Algorithm,
    repetition: usize,
    config: &BenchConfig,
) -> BenchRecord {
    let seed = config.seed.wrapping_add(repetition as u64);
    let options = SolveOptions {
        weights: config.weights,
        seed,
        heuristic: Some(config.heuristic.clone()),
        exact_cap: config.exact_cap,
    };
    let started = Instant::now();
    let outcome = solve(
        algorithm,
        &scenario.workflow,
        &scenario.cluster,
        &config.trace,
        &options,
    );
    let runtime_s = started.elapsed().as_secs_f64();

    let mut record = BenchRecord {
        scenario: scenario.name.clone(),
        algorithm,
        repetition,
        seed,
        report: None,
        runtime_s,
        stats: None,
        status: RunStatus::Ok,
        schedule: None,
        message: None,
    };
    match outcome {
        Ok((solution, stats)) => {
            if let Err(violations) =
                validate_schedule(&scenario.workflow, &scenario.cluster, &solution.schedule)
            {
                record.status = RunStatus::Invalid;
                record.message = Some(
                    violations
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join("; "),
                );
            }
            record.report = Some(solution.report);
            record.stats = stats;
            record.schedule = Some(solution.schedule);
        }
        Err(err) => {
            record.status = match err {
                SolveError::Capped { .. } => RunStatus::Capped,
                SolveError::Infeasible(_) => RunStatus::Infeasible,
                _ => RunStatus::Error,
            };
            record.message = Some(err.to_string());
        }
    }
    record
}

/// Runs every (scenario, algorithm, repetition) triple.
///
/// Records come back ordered by scenario, then algorithm, then repetition,
/// in the order given, regardless of how the jobs were scheduled on threads.
/// Solver failures become records with a non-`ok` status.
pub fn run_bench(
    scenarios: &[Scenario],
    algorithms: &[Algorithm],
    config: &BenchConfig,
) -> Result<Vec<BenchRecord>, HarnessError> {
    if scenarios.is_empty() {
        return Err(HarnessError::NoScenarios);
    }
    if algorithms.is_empty() {
        return Err(HarnessError::NoAlgorithms);
    }
    if config.repetitions == 0 {
        return Err(HarnessError::NoRepetitions);
    }
    let jobs: Vec<(usize, usize, usize)> = (0..scenarios.len())
        .flat_map(|s| {
            (0..algorithms.len()).flat_map(move |a| (0..config.repetitions).map(move |r| (s, a, r)))
        })
        .collect();
    let job = |&(s, a, r): &(usize, usize, usize)| {
        ((s, a, r), run_one(&scenarios[s], algorithms[a], r, config))
    };
    let mut records: Vec<_> = if config.sequential {
        jobs.iter().map(job).collect()
    } else {
        jobs.par_iter().map(job).collect()
    };
    records.sort_by_key(|(key, _)| *key);
    Ok(records.into_iter().map(|(_, rec)| rec).collect())
}

/// Sweep points `(n_tasks, n_nodes)` solved with `algorithms`.
pub fn run_sweep(
    sizes: &[(usize, usize)],
    density: f64,
    algorithms: &[Algorithm],
    config: &BenchConfig,
) -> Result<Vec<BenchRecord>, HarnessError> {
    let scenarios: Vec<Scenario> = sizes
        .iter()
        .map(|&(n, m)| gen_random_instance(n, m, density, config.seed))
        .collect();
    run_bench(&scenarios, algorithms, config)
}

pub const CSV_HEADER: &str =
    "scenario,algorithm,seed,makespan,energy,carbon,runtime_s,status,nodes_explored,nodes_pruned";

/// Benchmark CSV. Numbers use the shortest exact representation; objective
/// columns are empty when no schedule was produced, search columns are
/// empty for heuristics.
pub fn emit_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let (makespan, energy, carbon) = match &r.report {
            Some(rep) => (
                rep.makespan.to_string(),
                rep.energy.to_string(),
                rep.carbon.to_string(),
            ),
            None => Default::default(),
        };
        let (explored, pruned) = match &r.stats {
            Some(s) => (s.nodes_explored.to_string(), s.nodes_pruned.to_string()),
            None => Default::default(),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.scenario,
            r.algorithm,
            r.seed,
            makespan,
            energy,
            carbon,
            r.runtime_s,
            r.status.as_str(),
            explored,
            pruned
        ));
    }
    out
}

/// File name used by [`write_schedules`] for a record.
pub fn schedule_file_name(record: &BenchRecord) -> String {
    format!(
        "{}__{}__r{}.csv",
        record.scenario, record.algorithm, record.repetition
    )
}

/// Writes each record's schedule as CSV into `dir`; returns the number
/// of files written.
pub fn write_schedules(records: &[BenchRecord], dir: &Path) -> Result<usize, HarnessError> {
    std::fs::create_dir_all(dir)?;
    let mut written = 0;
    for r in records {
        if let Some(schedule) = &r.schedule {
            std::fs::write(dir.join(schedule_file_name(r)), schedule.to_csv())?;
            written += 1;
        }
    }
    Ok(written)
}
