#![allow(dead_code)]

use wfsched::derive::{Mapping, Schedule};
use wfsched::harness::{gen_random_instance, Scenario};
use wfsched::model::{ClusterSpec, Workflow};
use wfsched::rng::SeededRng;
use wfsched::twin::CarbonTrace;

/// Small random instance where roughly a third of the tasks are pinned to
/// the class of some node, so class constraints get exercised too.
pub fn small_instance(n_tasks: usize, n_nodes: usize, density: f64, seed: u64) -> Scenario {
    let mut s = gen_random_instance(n_tasks, n_nodes, density, seed);
    let mut rng = SeededRng::new(seed ^ 0xC1A5);
    let tasks = s
        .workflow
        .tasks()
        .iter()
        .map(|t| {
            if rng.chance(1.0 / 3.0) {
                let node = s.cluster.node(rng.below(s.cluster.len()));
                t.clone().with_class(node.class.clone())
            } else {
                t.clone()
            }
        })
        .collect();
    s.workflow = Workflow::new(tasks, s.workflow.edges().to_vec()).unwrap();
    s
}

pub fn random_mapping(workflow: &Workflow, cluster: &ClusterSpec, seed: u64) -> Mapping {
    let mut rng = SeededRng::new(seed);
    let nodes = workflow
        .tasks()
        .iter()
        .map(|t| {
            let options = cluster.feasible_nodes(t);
            options[rng.below(options.len())]
        })
        .collect();
    Mapping::from_indices(nodes)
}

/// Trace starting at 0 with up to `max_segments` breakpoints spread over
/// `[0, horizon)`.
pub fn random_trace(horizon: f64, max_segments: usize, seed: u64) -> CarbonTrace {
    let mut rng = SeededRng::new(seed);
    let count = 1 + rng.below(max_segments.max(1));
    let mut points = vec![(0.0, rng.range(50.0, 800.0))];
    for _ in 1..count {
        points.push((rng.range(0.0, horizon.max(1.0)), rng.range(50.0, 800.0)));
    }
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    points.dedup_by(|a, b| a.0 == b.0);
    CarbonTrace::new(points).unwrap()
}

/// Cuts `[0, makespan)` at every task boundary (and every extra cut) and
/// returns `(start, end, watts)` for each piece.
fn power_pieces(schedule: &Schedule, cluster: &ClusterSpec, extra: &[f64]) -> Vec<(f64, f64, f64)> {
    let makespan = schedule.makespan;
    let mut cuts = vec![0.0, makespan];
    for e in &schedule.entries {
        cuts.push(e.start);
        cuts.push(e.finish);
    }
    cuts.extend(extra.iter().copied().filter(|&t| t > 0.0 && t < makespan));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let used: Vec<&str> = {
        let mut ids: Vec<&str> = schedule.entries.iter().map(|e| e.node.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    };
    let mut pieces = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let mid = 0.5 * (a + b);
        let mut watts = 0.0;
        for &id in &used {
            let node = &cluster.nodes()[cluster.index_of(id).unwrap()];
            let busy = schedule
                .entries
                .iter()
                .any(|e| e.node == id && e.start <= mid && mid < e.finish);
            watts += if busy { node.p_busy } else { node.p_idle };
        }
        pieces.push((a, b, watts));
    }
    pieces
}

/// Energy by summing power over every elementary interval.
pub fn energy_by_intervals(schedule: &Schedule, cluster: &ClusterSpec) -> f64 {
    power_pieces(schedule, cluster, &[])
        .into_iter()
        .map(|(a, b, w)| w * (b - a))
        .sum()
}

/// Carbon by summing power times intensity over every elementary interval,
/// with the trace breakpoints as extra cuts.
pub fn carbon_by_intervals(schedule: &Schedule, cluster: &ClusterSpec, trace: &CarbonTrace) -> f64 {
    let cuts: Vec<f64> = trace.breakpoints().iter().map(|p| p.0).collect();
    power_pieces(schedule, cluster, &cuts)
        .into_iter()
        .map(|(a, b, w)| w * (b - a) * trace.intensity_at(a).unwrap() / 3.6e6)
        .sum()
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}
