use crate::derive::Mapping;
use crate::model::{ClusterSpec, Workflow};
use crate::solver::{feasible_nodes, SolveError};

/// Opportunistic load balancing: in topological order, each task goes to
/// the feasible node that frees up first (ties by node id).
///
/// Bookkeeping ignores transfer times but still waits for predecessors to
/// finish, so a node's availability reflects the tasks already queued on it.
pub fn olb_map(workflow: &Workflow, cluster: &ClusterSpec) -> Result<Mapping, SolveError> {
    let feasible = feasible_nodes(workflow, cluster)?;
    let mut next_free = vec![0.0; cluster.len()];
    let mut finish = vec![0.0; workflow.len()];
    let mut placed = vec![0usize; workflow.len()];
    for &t in workflow.topo_order() {
        let n = feasible[t]
            .iter()
            .copied()
            .reduce(|best, n| {
                if next_free[n] < next_free[best] {
                    n
                } else {
                    best
                }
            })
            .expect("feasible set is non-empty");
        let ready = workflow
            .predecessors(t)
            .iter()
            .map(|&(p, _)| finish[p])
            .fold(next_free[n], f64::max);
        finish[t] = ready + cluster.node(n).exec_time(workflow.task(t).work);
        next_free[n] = finish[t];
        placed[t] = n;
    }
    Ok(Mapping::from_indices(placed))
}
