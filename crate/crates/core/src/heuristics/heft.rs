use std::cmp::Ordering;

use crate::derive::Mapping;
use crate::model::{ClusterSpec, Workflow};
use crate::solver::{feasible_nodes, SolveError};

/// Upward rank of every task, indexed in workflow order.
#[derive(Debug, Clone, PartialEq)]
pub struct RankTable {
    pub ranks: Vec<f64>,
}

impl RankTable {
    pub fn rank(&self, task: usize) -> f64 {
        self.ranks[task]
    }

    /// Task indices by descending rank, ties broken by ascending task id.
    pub fn priority_order(&self, workflow: &Workflow) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.ranks.len()).collect();
        order.sort_by(|&a, &b| {
            self.ranks[b]
                .total_cmp(&self.ranks[a])
                .then_with(|| workflow.task(a).id.cmp(&workflow.task(b).id))
        });
        order
    }
}

/// Upward ranks: `rank(t) = mean_exec(t) + max over successors s of
/// (data(t, s) / bandwidth + rank(s))`, where `mean_exec(t)` is the work
/// times the mean of `1 / speed` over all nodes. Transfers are always
/// charged, even though a same-node transfer would be free.
pub fn heft_rank(workflow: &Workflow, cluster: &ClusterSpec) -> RankTable {
    let mean_inverse_speed =
        cluster.nodes().iter().map(|n| 1.0 / n.speed).sum::<f64>() / cluster.len() as f64;
    let mut ranks = vec![0.0; workflow.len()];
    for &t in workflow.topo_order().iter().rev() {
        let tail = workflow
            .successors(t)
            .iter()
            .map(|&(s, data)| cluster.comm_time(data) + ranks[s])
            .fold(0.0, f64::max);
        ranks[t] = workflow.task(t).work * mean_inverse_speed + tail;
    }
    RankTable { ranks }
}

/// Earliest start `>= ready` of a `duration`-long slot among the busy
/// intervals (sorted by start), and the index at which to insert it.
fn earliest_slot(busy: &[(f64, f64)], ready: f64, duration: f64) -> (f64, usize) {
    let mut candidate = ready;
    for (i, &(start, finish)) in busy.iter().enumerate() {
        if candidate + duration <= start {
            return (candidate, i);
        }
        candidate = candidate.max(finish);
    }
    (candidate, busy.len())
}

/// HEFT: tasks by descending upward rank, each placed on the node with the
/// earliest finish time, allowing insertion into idle gaps.
///
/// Only the mapping is returned; its schedule is the canonical derivation,
/// which may differ from HEFT's internal insertion schedule.
pub fn heft_map(workflow: &Workflow, cluster: &ClusterSpec) -> Result<Mapping, SolveError> {
    let feasible = feasible_nodes(workflow, cluster)?;
    let ranks = heft_rank(workflow, cluster);

    let mut busy: Vec<Vec<(f64, f64)>> = vec![Vec::new(); cluster.len()];
    let mut placed = vec![usize::MAX; workflow.len()];
    let mut finish = vec![0.0; workflow.len()];
    for t in ranks.priority_order(workflow) {
        let mut best: Option<(f64, f64, usize, usize)> = None;
        for &n in &feasible[t] {
            let ready = workflow
                .predecessors(t)
                .iter()
                .map(|&(p, data)| {
                    debug_assert_ne!(placed[p], usize::MAX, "rank order respects edges");
                    if placed[p] == n {
                        finish[p]
                    } else {
                        finish[p] + cluster.comm_time(data)
                    }
                })
                .fold(0.0, f64::max);
            let duration = cluster.node(n).exec_time(workflow.task(t).work);
            let (start, slot) = earliest_slot(&busy[n], ready, duration);
            let eft = start + duration;
            let better = match best {
                None => true,
                Some((best_eft, ..)) => eft.total_cmp(&best_eft) == Ordering::Less,
            };
            if better {
                best = Some((eft, start, n, slot));
            }
        }
        let (eft, start, n, slot) = best.expect("feasible set is non-empty");
        busy[n].insert(slot, (start, eft));
        placed[t] = n;
        finish[t] = eft;
    }
    Ok(Mapping::from_indices(placed))
}
