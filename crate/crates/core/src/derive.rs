//! Schedule derivation from a fixed mapping, and the objectives computed on
//! the resulting schedule.
//!
//! The canonical policy is append-only list scheduling: tasks are taken in
//! the workflow's deterministic topological order, and each starts as soon as
//! both its node is free and every predecessor's output has arrived. A
//! transfer between distinct nodes takes `data / bandwidth`; a transfer on
//! the same node is free. Nothing is ever back-filled into an earlier gap, so
//! a mapping determines exactly one schedule.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::model::{ClusterSpec, Workflow};
use crate::twin::CarbonTrace;

/// Joules per kilowatt-hour.
pub const JOULES_PER_KWH: f64 = 3.6e6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScheduleError {
    #[error("unknown task `{0}`")]
    UnknownTask(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("task `{0}` is not assigned to any node")]
    Unassigned(String),
    #[error("task `{0}` is assigned more than once")]
    DuplicateAssignment(String),
    #[error("mapping covers {got} tasks, workflow has {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("task `{task}` requires class `{required}` but node `{node}` is `{actual}`")]
    ClassViolation {
        task: String,
        node: String,
        required: String,
        actual: String,
    },
    #[error("invalid weights ({alpha}, {beta}, {gamma}): {reason}")]
    InvalidWeights {
        alpha: f64,
        beta: f64,
        gamma: f64,
        reason: &'static str,
    },
    #[error("malformed schedule: {0}")]
    Malformed(String),
}

/// Task → node assignment, stored as one node index per task in workflow
/// document order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mapping {
    nodes: Vec<usize>,
}

impl Mapping {
    /// Wraps raw node indices; [`Mapping::check`] validates them.
    pub fn from_indices(nodes: Vec<usize>) -> Self {
        Self { nodes }
    }

    /// Builds a mapping from `(task id, node id)` pairs covering every task.
    pub fn from_pairs<T, N>(
        workflow: &Workflow,
        cluster: &ClusterSpec,
        pairs: impl IntoIterator<Item = (T, N)>,
    ) -> Result<Self, ScheduleError>
    where
        T: AsRef<str>,
        N: AsRef<str>,
    {
        let mut nodes = vec![usize::MAX; workflow.len()];
        for (task, node) in pairs {
            let (task, node) = (task.as_ref(), node.as_ref());
            let t = workflow
                .index_of(task)
                .ok_or_else(|| ScheduleError::UnknownTask(task.to_string()))?;
            let n = cluster
                .index_of(node)
                .ok_or_else(|| ScheduleError::UnknownNode(node.to_string()))?;
            if nodes[t] != usize::MAX {
                return Err(ScheduleError::DuplicateAssignment(task.to_string()));
            }
            nodes[t] = n;
        }
        if let Some(t) = nodes.iter().position(|&n| n == usize::MAX) {
            return Err(ScheduleError::Unassigned(workflow.task(t).id.clone()));
        }
        let mapping = Self { nodes };
        mapping.check(workflow, cluster)?;
        Ok(mapping)
    }

    /// Every task maps to one node in `cluster` whose class it accepts.
    pub fn check(&self, workflow: &Workflow, cluster: &ClusterSpec) -> Result<(), ScheduleError> {
        if self.nodes.len() != workflow.len() {
            return Err(ScheduleError::LengthMismatch {
                expected: workflow.len(),
                got: self.nodes.len(),
            });
        }
        for (t, &n) in self.nodes.iter().enumerate() {
            let task = workflow.task(t);
            if n >= cluster.len() {
                return Err(ScheduleError::UnknownNode(format!("#{n}")));
            }
            let node = cluster.node(n);
            if let Some(required) = &task.required_class {
                if *required != node.class {
                    return Err(ScheduleError::ClassViolation {
                        task: task.id.clone(),
                        node: node.id.clone(),
                        required: required.clone(),
                        actual: node.class.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn node_of(&self, task: usize) -> usize {
        self.nodes[task]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.nodes
    }

    /// `(task id, node id)` pairs in workflow order.
    pub fn to_pairs(&self, workflow: &Workflow, cluster: &ClusterSpec) -> Vec<(String, String)> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(t, &n)| (workflow.task(t).id.clone(), cluster.node(n).id.clone()))
            .collect()
    }

    /// Lexicographic comparison by node id, task by task in workflow order.
    pub fn cmp_by_ids(&self, other: &Mapping, cluster: &ClusterSpec) -> std::cmp::Ordering {
        self.nodes
            .iter()
            .zip(&other.nodes)
            .map(|(&a, &b)| cluster.node(a).id.cmp(&cluster.node(b).id))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleEntry {
    pub task: String,
    pub node: String,
    pub start: f64,
    pub finish: f64,
}

/// Start/finish interval for every task, in workflow document order.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub entries: Vec<ScheduleEntry>,
    pub makespan: f64,
}

impl Schedule {
    /// Builds a schedule from entries; the makespan is their latest finish.
    pub fn from_entries(entries: Vec<ScheduleEntry>) -> Self {
        let makespan = entries.iter().map(|e| e.finish).fold(0.0, f64::max);
        Self { entries, makespan }
    }

    /// CSV with header `task,node,start,finish`, one row per task in
    /// workflow order. Times use the shortest representation that parses
    /// back to the same `f64`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("task,node,start,finish\n");
        for e in &self.entries {
            out.push_str(&format!("{},{},{},{}\n", e.task, e.node, e.start, e.finish));
        }
        out
    }
}

/// Parses a schedule written by [`Schedule::to_csv`].
pub fn parse_schedule_csv(text: &str) -> Result<Schedule, ScheduleError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| ScheduleError::Malformed(e.to_string()))?;
    if headers != vec!["task", "node", "start", "finish"] {
        return Err(ScheduleError::Malformed(format!(
            "expected header task,node,start,finish, got {}",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut entries = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| ScheduleError::Malformed(e.to_string()))?;
        let num = |i: usize| -> Result<f64, ScheduleError> {
            record[i]
                .parse()
                .map_err(|_| ScheduleError::Malformed(format!("bad number `{}`", &record[i])))
        };
        entries.push(ScheduleEntry {
            task: record[0].to_string(),
            node: record[1].to_string(),
            start: num(2)?,
            finish: num(3)?,
        });
    }
    Ok(Schedule::from_entries(entries))
}

/// Places task `t` on `nodes[t]` under the canonical policy, given the
/// finish times of its predecessors and the node's next-free time. Returns
/// `(start, finish)`.
#[inline]
pub(crate) fn place_task(
    workflow: &Workflow,
    cluster: &ClusterSpec,
    nodes: &[usize],
    finish: &[f64],
    node_free: &[f64],
    t: usize,
) -> (f64, f64) {
    let n = nodes[t];
    let mut start = node_free[n];
    for &(p, data) in workflow.predecessors(t) {
        let arrival = if nodes[p] == n {
            finish[p]
        } else {
            finish[p] + cluster.comm_time(data)
        };
        start = start.max(arrival);
    }
    (
        start,
        start + cluster.node(n).exec_time(workflow.task(t).work),
    )
}

/// Index-based schedule used on the hot paths of the solvers.
#[derive(Debug, Clone, Default)]
pub(crate) struct Timeline {
    pub start: Vec<f64>,
    pub finish: Vec<f64>,
    pub makespan: f64,
    node_free: Vec<f64>,
}

impl Timeline {
    pub fn derive(&mut self, workflow: &Workflow, cluster: &ClusterSpec, nodes: &[usize]) {
        let n_tasks = workflow.len();
        self.start.clear();
        self.start.resize(n_tasks, 0.0);
        self.finish.clear();
        self.finish.resize(n_tasks, 0.0);
        self.node_free.clear();
        self.node_free.resize(cluster.len(), 0.0);
        let mut makespan = 0.0f64;
        for &t in workflow.topo_order() {
            let (s, f) = place_task(workflow, cluster, nodes, &self.finish, &self.node_free, t);
            self.start[t] = s;
            self.finish[t] = f;
            self.node_free[nodes[t]] = f;
            makespan = makespan.max(f);
        }
        self.makespan = makespan;
    }
}

/// Derives the canonical schedule for `mapping`.
pub fn derive_schedule(
    workflow: &Workflow,
    cluster: &ClusterSpec,
    mapping: &Mapping,
) -> Result<Schedule, ScheduleError> {
    mapping.check(workflow, cluster)?;
    let mut timeline = Timeline::default();
    timeline.derive(workflow, cluster, mapping.as_slice());
    Ok(build_schedule(
        workflow,
        cluster,
        mapping.as_slice(),
        &timeline,
    ))
}

pub(crate) fn build_schedule(
    workflow: &Workflow,
    cluster: &ClusterSpec,
    nodes: &[usize],
    timeline: &Timeline,
) -> Schedule {
    let entries = (0..workflow.len())
        .map(|t| ScheduleEntry {
            task: workflow.task(t).id.clone(),
            node: cluster.node(nodes[t]).id.clone(),
            start: timeline.start[t],
            finish: timeline.finish[t],
        })
        .collect();
    Schedule {
        entries,
        makespan: timeline.makespan,
    }
}

fn energy_indexed(
    cluster: &ClusterSpec,
    nodes: &[usize],
    start: &[f64],
    finish: &[f64],
    makespan: f64,
) -> f64 {
    let mut busy = vec![0.0; cluster.len()];
    let mut used = vec![false; cluster.len()];
    for ((&n, &s), &f) in nodes.iter().zip(start).zip(finish) {
        busy[n] += f - s;
        used[n] = true;
    }
    (0..cluster.len())
        .filter(|&n| used[n])
        .map(|n| {
            let node = cluster.node(n);
            node.p_idle * makespan + (node.p_busy - node.p_idle) * busy[n]
        })
        .sum()
}

fn carbon_indexed(
    cluster: &ClusterSpec,
    trace: &CarbonTrace,
    nodes: &[usize],
    start: &[f64],
    finish: &[f64],
    makespan: f64,
) -> f64 {
    let points = trace.breakpoints();
    // Segment k covers [points[k].0, points[k + 1].0) clipped to [0, makespan).
    let segments = points.partition_point(|&(t, _)| t < makespan).max(1);
    let seg_start = |k: usize| points[k].0;
    let seg_end = |k: usize| {
        if k + 1 < segments {
            points[k + 1].0
        } else {
            makespan
        }
    };

    let mut used = vec![false; cluster.len()];
    for &n in nodes {
        used[n] = true;
    }
    let idle_power: f64 = (0..cluster.len())
        .filter(|&n| used[n])
        .map(|n| cluster.node(n).p_idle)
        .sum();

    let mut seg_energy: Vec<f64> = (0..segments)
        .map(|k| idle_power * (seg_end(k) - seg_start(k)).max(0.0))
        .collect();
    for ((&n, &s), &f) in nodes.iter().zip(start).zip(finish) {
        let node = cluster.node(n);
        let extra = node.p_busy - node.p_idle;
        let first = points[..segments]
            .partition_point(|&(t, _)| t <= s)
            .saturating_sub(1);
        for (k, energy) in seg_energy.iter_mut().enumerate().skip(first) {
            let lo = seg_start(k).max(s);
            let hi = seg_end(k).min(f);
            if seg_start(k) >= f {
                break;
            }
            if hi > lo {
                *energy += extra * (hi - lo);
            }
        }
    }
    seg_energy
        .iter()
        .zip(points)
        .map(|(e, &(_, intensity))| e * intensity)
        .sum::<f64>()
        / JOULES_PER_KWH
}

/// Node index, start, and finish per entry.
type Indexed = (Vec<usize>, Vec<f64>, Vec<f64>);

fn indexed_entries(schedule: &Schedule, cluster: &ClusterSpec) -> Result<Indexed, ScheduleError> {
    let mut nodes = Vec::with_capacity(schedule.entries.len());
    let mut start = Vec::with_capacity(schedule.entries.len());
    let mut finish = Vec::with_capacity(schedule.entries.len());
    for e in &schedule.entries {
        nodes.push(
            cluster
                .index_of(&e.node)
                .ok_or_else(|| ScheduleError::UnknownNode(e.node.clone()))?,
        );
        start.push(e.start);
        finish.push(e.finish);
    }
    Ok((nodes, start, finish))
}

/// Joules consumed by the nodes the schedule uses.
///
/// A used node draws `p_idle` for the whole makespan plus `p_busy - p_idle`
/// while one of its tasks runs; nodes without tasks are treated as off.
pub fn compute_energy(schedule: &Schedule, cluster: &ClusterSpec) -> Result<f64, ScheduleError> {
    let (nodes, start, finish) = indexed_entries(schedule, cluster)?;
    Ok(energy_indexed(
        cluster,
        &nodes,
        &start,
        &finish,
        schedule.makespan,
    ))
}

/// Grams of CO2 emitted over `[0, makespan)`.
///
/// Integration is exact: cluster power is piecewise constant between task
/// boundaries and the trace is piecewise constant between its breakpoints, so
/// each trace segment contributes its energy in kWh times its intensity.
pub fn compute_carbon(
    schedule: &Schedule,
    cluster: &ClusterSpec,
    trace: &CarbonTrace,
) -> Result<f64, ScheduleError> {
    let (nodes, start, finish) = indexed_entries(schedule, cluster)?;
    Ok(carbon_indexed(
        cluster,
        trace,
        &nodes,
        &start,
        &finish,
        schedule.makespan,
    ))
}

/// Non-negative weights of the scalarized objective
/// `alpha * makespan + beta * energy + gamma * carbon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Default for Weights {
    fn default() -> Self {
        Self::MAKESPAN
    }
}

impl Weights {
    pub const MAKESPAN: Weights = Weights {
        alpha: 1.0,
        beta: 0.0,
        gamma: 0.0,
    };

    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self, ScheduleError> {
        let w = Self { alpha, beta, gamma };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<(), ScheduleError> {
        let err = |reason| ScheduleError::InvalidWeights {
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
            reason,
        };
        let all = [self.alpha, self.beta, self.gamma];
        if all.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(err("weights must be finite and non-negative"));
        }
        if all.iter().all(|&w| w == 0.0) {
            return Err(err("at least one weight must be positive"));
        }
        Ok(())
    }

    /// True when energy and carbon carry no weight.
    pub fn makespan_only(&self) -> bool {
        self.beta == 0.0 && self.gamma == 0.0
    }

    fn combine(&self, makespan: f64, energy: f64, carbon: f64) -> f64 {
        self.alpha * makespan + self.beta * energy + self.gamma * carbon
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveReport {
    pub makespan: f64,
    pub energy: f64,
    pub carbon: f64,
    pub weighted: f64,
    pub weights: Weights,
}

impl fmt::Display for ObjectiveReport {
    /// Flat `key=value` block, one pair per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "makespan={}", self.makespan)?;
        writeln!(f, "energy={}", self.energy)?;
        writeln!(f, "carbon={}", self.carbon)?;
        writeln!(f, "weighted={}", self.weighted)?;
        writeln!(f, "alpha={}", self.weights.alpha)?;
        writeln!(f, "beta={}", self.weights.beta)?;
        writeln!(f, "gamma={}", self.weights.gamma)
    }
}

/// Computes all three objective components and their weighted sum.
pub fn objective(
    schedule: &Schedule,
    cluster: &ClusterSpec,
    trace: &CarbonTrace,
    weights: Weights,
) -> Result<ObjectiveReport, ScheduleError> {
    weights.validate()?;
    let energy = compute_energy(schedule, cluster)?;
    let carbon = compute_carbon(schedule, cluster, trace)?;
    Ok(ObjectiveReport {
        makespan: schedule.makespan,
        energy,
        carbon,
        weighted: weights.combine(schedule.makespan, energy, carbon),
        weights,
    })
}

/// Scores raw mappings for the solvers.
///
/// Produces exactly the value [`objective`] reports for the derived schedule
/// of the same mapping. Energy and carbon are skipped when their weights are
/// zero, which leaves the weighted sum bit-identical.
pub struct Scorer<'a> {
    pub workflow: &'a Workflow,
    pub cluster: &'a ClusterSpec,
    pub trace: &'a CarbonTrace,
    pub weights: Weights,
    timeline: Timeline,
}

impl<'a> Scorer<'a> {
    pub fn new(
        workflow: &'a Workflow,
        cluster: &'a ClusterSpec,
        trace: &'a CarbonTrace,
        weights: Weights,
    ) -> Result<Self, ScheduleError> {
        weights.validate()?;
        Ok(Self {
            workflow,
            cluster,
            trace,
            weights,
            timeline: Timeline::default(),
        })
    }

    /// Weighted objective of the canonical schedule of `nodes`.
    pub fn score(&mut self, nodes: &[usize]) -> f64 {
        self.report(nodes).weighted
    }

    pub fn report(&mut self, nodes: &[usize]) -> ObjectiveReport {
        self.timeline.derive(self.workflow, self.cluster, nodes);
        let tl = &self.timeline;
        let energy = if self.weights.beta > 0.0 {
            energy_indexed(self.cluster, nodes, &tl.start, &tl.finish, tl.makespan)
        } else {
            0.0
        };
        let carbon = if self.weights.gamma > 0.0 {
            carbon_indexed(
                self.cluster,
                self.trace,
                nodes,
                &tl.start,
                &tl.finish,
                tl.makespan,
            )
        } else {
            0.0
        };
        ObjectiveReport {
            makespan: tl.makespan,
            energy,
            carbon,
            weighted: self.weights.combine(tl.makespan, energy, carbon),
            weights: self.weights,
        }
    }

    /// Full schedule and report for `mapping`, via the public path.
    pub fn finish(&self, mapping: &Mapping) -> Result<(Schedule, ObjectiveReport), ScheduleError> {
        let schedule = derive_schedule(self.workflow, self.cluster, mapping)?;
        let report = objective(&schedule, self.cluster, self.trace, self.weights)?;
        Ok((schedule, report))
    }
}

/// One broken schedule invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    UnknownTask(String),
    DuplicateTask(String),
    MissingTask(String),
    UnknownNode {
        task: String,
        node: String,
    },
    ClassMismatch {
        task: String,
        node: String,
    },
    NegativeStart {
        task: String,
        start: f64,
    },
    Duration {
        task: String,
        expected: f64,
        actual: f64,
    },
    Overlap {
        node: String,
        first: String,
        second: String,
    },
    Precedence {
        src: String,
        dst: String,
        earliest: f64,
        start: f64,
    },
    Memory {
        node: String,
        at: f64,
        demand: f64,
        capacity: f64,
    },
    Makespan {
        expected: f64,
        actual: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownTask(t) => write!(f, "unknown task `{t}`"),
            Violation::DuplicateTask(t) => write!(f, "task `{t}` scheduled twice"),
            Violation::MissingTask(t) => write!(f, "task `{t}` not scheduled"),
            Violation::UnknownNode { task, node } => {
                write!(f, "task `{task}` placed on unknown node `{node}`")
            }
            Violation::ClassMismatch { task, node } => {
                write!(f, "task `{task}` not allowed on node `{node}`")
            }
            Violation::NegativeStart { task, start } => {
                write!(f, "task `{task}` starts at {start}")
            }
            Violation::Duration {
                task,
                expected,
                actual,
            } => write!(f, "task `{task}` runs {actual}s, expected {expected}s"),
            Violation::Overlap {
                node,
                first,
                second,
            } => write!(f, "tasks `{first}` and `{second}` overlap on node `{node}`"),
            Violation::Precedence {
                src,
                dst,
                earliest,
                start,
            } => write!(
                f,
                "edge {src} -> {dst}: `{dst}` starts at {start}, before data arrives at {earliest}"
            ),
            Violation::Memory {
                node,
                at,
                demand,
                capacity,
            } => write!(
                f,
                "node `{node}` holds {demand} GiB at t={at}, capacity {capacity}"
            ),
            Violation::Makespan { expected, actual } => {
                write!(f, "makespan {actual} but latest finish is {expected}")
            }
        }
    }
}

const TOLERANCE: f64 = 1e-9;

fn approx_le(a: f64, b: f64) -> bool {
    a <= b + TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

/// Checks every schedule invariant and returns all violations found.
pub fn validate_schedule(
    workflow: &Workflow,
    cluster: &ClusterSpec,
    schedule: &Schedule,
) -> Result<(), Vec<Violation>> {
    let mut violations = Vec::new();
    // Per task: (entry index, node index) once resolved.
    let mut placed: Vec<Option<(usize, usize)>> = vec![None; workflow.len()];

    for (i, e) in schedule.entries.iter().enumerate() {
        let Some(t) = workflow.index_of(&e.task) else {
            violations.push(Violation::UnknownTask(e.task.clone()));
            continue;
        };
        if placed[t].is_some() {
            violations.push(Violation::DuplicateTask(e.task.clone()));
            continue;
        }
        let Some(n) = cluster.index_of(&e.node) else {
            violations.push(Violation::UnknownNode {
                task: e.task.clone(),
                node: e.node.clone(),
            });
            continue;
        };
        placed[t] = Some((i, n));
        let task = workflow.task(t);
        let node = cluster.node(n);
        if task
            .required_class
            .as_ref()
            .is_some_and(|c| *c != node.class)
        {
            violations.push(Violation::ClassMismatch {
                task: e.task.clone(),
                node: e.node.clone(),
            });
        }
        if e.start.is_nan() || e.start < 0.0 {
            violations.push(Violation::NegativeStart {
                task: e.task.clone(),
                start: e.start,
            });
        }
        let expected = node.exec_time(task.work);
        let actual = e.finish - e.start;
        if !(approx_le(actual, expected) && approx_le(expected, actual)) {
            violations.push(Violation::Duration {
                task: e.task.clone(),
                expected,
                actual,
            });
        }
    }
    for (t, p) in placed.iter().enumerate() {
        if p.is_none() && !violations.iter().any(|v| matches!(v, Violation::UnknownNode { task, .. } if *task == workflow.task(t).id)) {
            violations.push(Violation::MissingTask(workflow.task(t).id.clone()));
        }
    }

    // Overlap and memory, node by node.
    let mut per_node: HashMap<usize, Vec<usize>> = HashMap::new();
    for (t, p) in placed.iter().enumerate() {
        if let Some((_, n)) = p {
            per_node.entry(*n).or_default().push(t);
        }
    }
    let entry = |t: usize| &schedule.entries[placed[t].unwrap().0];
    let mut node_ids: Vec<usize> = per_node.keys().copied().collect();
    node_ids.sort_by(|&a, &b| cluster.node(a).id.cmp(&cluster.node(b).id));
    for n in node_ids {
        let node = cluster.node(n);
        let tasks = &mut per_node.get_mut(&n).unwrap();
        tasks.sort_by(|&a, &b| {
            entry(a)
                .start
                .total_cmp(&entry(b).start)
                .then_with(|| entry(a).task.cmp(&entry(b).task))
        });
        let mut latest: Option<usize> = None;
        for &t in tasks.iter() {
            if let Some(prev) = latest {
                if !approx_le(entry(prev).finish, entry(t).start) {
                    violations.push(Violation::Overlap {
                        node: node.id.clone(),
                        first: entry(prev).task.clone(),
                        second: entry(t).task.clone(),
                    });
                }
                if entry(t).finish > entry(prev).finish {
                    latest = Some(t);
                }
            } else {
                latest = Some(t);
            }
        }
        // Memory in use can only rise at a start time.
        for &t in tasks.iter() {
            let at = entry(t).start;
            let demand: f64 = tasks
                .iter()
                .filter(|&&o| entry(o).start <= at && at < entry(o).finish)
                .map(|&o| workflow.task(o).mem_demand)
                .sum();
            if demand > node.mem_capacity {
                violations.push(Violation::Memory {
                    node: node.id.clone(),
                    at,
                    demand,
                    capacity: node.mem_capacity,
                });
            }
        }
    }

    for edge in workflow.edges() {
        let (s, d) = (
            workflow.index_of(&edge.src).unwrap(),
            workflow.index_of(&edge.dst).unwrap(),
        );
        let (Some((_, ns)), Some((_, nd))) = (placed[s], placed[d]) else {
            continue;
        };
        let comm = if ns == nd {
            0.0
        } else {
            cluster.comm_time(edge.data)
        };
        let earliest = entry(s).finish + comm;
        if !approx_le(earliest, entry(d).start) {
            violations.push(Violation::Precedence {
                src: edge.src.clone(),
                dst: edge.dst.clone(),
                earliest,
                start: entry(d).start,
            });
        }
    }

    let latest = schedule
        .entries
        .iter()
        .map(|e| e.finish)
        .fold(0.0, f64::max);
    if !(approx_le(latest, schedule.makespan) && approx_le(schedule.makespan, latest)) {
        violations.push(Violation::Makespan {
            expected: latest,
            actual: schedule.makespan,
        });
    }

    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}
