//! Exact mapping optimizers: exhaustive enumeration and depth-first
//! branch-and-bound.
//!
//! Both search mappings only; the schedule of a mapping is always the
//! canonical derivation, so "optimal" means optimal over mappings under that
//! derivation. Branch-and-bound reuses the derivation's placement step
//! verbatim, which makes its optimal value bit-equal to the exhaustive one.

use std::time::Instant;

use crate::derive::{place_task, Mapping, Scorer, Weights};
use crate::model::{ClusterSpec, Workflow};
use crate::solver::{feasible_nodes, Solution, SolveError};
use crate::twin::CarbonTrace;

/// Largest search space either solver accepts by default.
pub const DEFAULT_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchStats {
    /// Assignment-tree nodes visited (one per task-to-node assignment tried).
    pub nodes_explored: u64,
    /// Assignments discarded because their bound reached the incumbent.
    pub nodes_pruned: u64,
    /// Wall-clock seconds spent searching.
    pub runtime: f64,
    pub optimal_value: f64,
}

fn search_space(feasible: &[Vec<usize>]) -> u128 {
    feasible
        .iter()
        .fold(1u128, |acc, f| acc.saturating_mul(f.len() as u128))
}

fn check_cap(feasible: &[Vec<usize>], cap: u128) -> Result<(), SolveError> {
    let size = search_space(feasible);
    if size > cap {
        return Err(SolveError::Capped { size, cap });
    }
    Ok(())
}

/// Number of nodes in the full assignment tree over `order`, root excluded.
pub fn assignment_tree_size(
    workflow: &Workflow,
    cluster: &ClusterSpec,
) -> Result<u128, SolveError> {
    let feasible = feasible_nodes(workflow, cluster)?;
    let mut level = 1u128;
    let mut total = 0u128;
    for &t in workflow.topo_order() {
        level = level.saturating_mul(feasible[t].len() as u128);
        total = total.saturating_add(level);
    }
    Ok(total)
}

pub fn enumerate_optimal(
    workflow: &Workflow,
    cluster: &ClusterSpec,
    weights: Weights,
    trace: &CarbonTrace,
) -> Result<(Solution, SearchStats), SolveError> {
    enumerate_optimal_with_cap(workflow, cluster, weights, trace, DEFAULT_CAP)
}

/// Scores every feasible mapping and keeps the best.
///
/// Mappings are visited in lexicographic order (tasks in workflow order,
/// nodes by ascending id) and only a strictly better one replaces the
/// incumbent, so the result is the lexicographically first optimum.
pub fn enumerate_optimal_with_cap(
    workflow: &Workflow,
    cluster: &ClusterSpec,
    weights: Weights,
    trace: &CarbonTrace,
    cap: u128,
) -> Result<(Solution, SearchStats), SolveError> {
    let started = Instant::now();
    let feasible = feasible_nodes(workflow, cluster)?;
    check_cap(&feasible, cap)?;
    let mut scorer = Scorer::new(workflow, cluster, trace, weights)?;

    let n = workflow.len();
    let mut digits = vec![0usize; n];
    let mut nodes: Vec<usize> = feasible.iter().map(|f| f[0]).collect();
    let mut best_nodes = nodes.clone();
    let mut best = f64::INFINITY;
    let mut evaluated = 0u64;
    loop {
        let value = scorer.score(&nodes);
        evaluated += 1;
        if value < best {
            best = value;
            best_nodes.copy_from_slice(&nodes);
        }
        // Odometer step; the last task turns fastest.
        let mut pos = n;
        loop {
            if pos == 0 {
                let solution = Solution::from_mapping(&scorer, Mapping::from_indices(best_nodes))?;
                let stats = SearchStats {
                    nodes_explored: evaluated,
                    nodes_pruned: 0,
                    runtime: started.elapsed().as_secs_f64(),
                    optimal_value: solution.report.weighted,
                };
                return Ok((solution, stats));
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < feasible[pos].len() {
                nodes[pos] = feasible[pos][digits[pos]];
                break;
            }
            digits[pos] = 0;
            nodes[pos] = feasible[pos][0];
        }
    }
}

/// Longest work-sum path from each task to a sink, the task included.
pub fn critical_path_work(workflow: &Workflow) -> Vec<f64> {
    let mut cp = vec![0.0; workflow.len()];
    for &t in workflow.topo_order().iter().rev() {
        let tail = workflow
            .successors(t)
            .iter()
            .map(|&(s, _)| cp[s])
            .fold(0.0, f64::max);
        cp[t] = workflow.task(t).work + tail;
    }
    cp
}

/// Makespan lower bound once the first `assigned.len()` tasks of the
/// topological order are placed on `assigned` (in that order).
///
/// The bound is the larger of the partial makespan and the longest remaining
/// critical path run at the fastest node's speed.
pub fn makespan_lower_bound(workflow: &Workflow, cluster: &ClusterSpec, assigned: &[usize]) -> f64 {
    let order = workflow.topo_order();
    let mut nodes = vec![0usize; workflow.len()];
    let mut finish = vec![0.0; workflow.len()];
    let mut node_free = vec![0.0; cluster.len()];
    let mut partial = 0.0f64;
    for (&t, &n) in order.iter().zip(assigned) {
        nodes[t] = n;
        let (_, f) = place_task(workflow, cluster, &nodes, &finish, &node_free, t);
        finish[t] = f;
        node_free[n] = f;
        partial = partial.max(f);
    }
    let cp = critical_path_work(workflow);
    let remaining = order[assigned.len()..]
        .iter()
        .map(|&t| cp[t])
        .fold(0.0, f64::max);
    partial.max(remaining / cluster.max_speed())
}

pub fn branch_and_bound(
    workflow: &Workflow,
    cluster: &ClusterSpec,
    weights: Weights,
    trace: &CarbonTrace,
) -> Result<(Solution, SearchStats), SolveError> {
    branch_and_bound_with_cap(workflow, cluster, weights, trace, DEFAULT_CAP)
}

/// Depth-first branch-and-bound over tasks in topological order.
///
/// The critical-path bound is only admissible for makespan, so any weight on
/// energy or carbon falls back to [`enumerate_optimal_with_cap`]. Children are
/// tried in ascending node-id order and a branch is pruned as soon as its
/// bound reaches the incumbent; among tied optima the first one found wins.
pub fn branch_and_bound_with_cap(
    workflow: &Workflow,
    cluster: &ClusterSpec,
    weights: Weights,
    trace: &CarbonTrace,
    cap: u128,
) -> Result<(Solution, SearchStats), SolveError> {
    weights.validate()?;
    if !weights.makespan_only() {
        return enumerate_optimal_with_cap(workflow, cluster, weights, trace, cap);
    }
    let started = Instant::now();
    let feasible = feasible_nodes(workflow, cluster)?;
    check_cap(&feasible, cap)?;
    let scorer = Scorer::new(workflow, cluster, trace, weights)?;

    let order = workflow.topo_order();
    let cp = critical_path_work(workflow);
    let max_speed = cluster.max_speed();
    // tail_bound[k]: bound from the tasks at topological positions k.. alone.
    let mut tail_bound = vec![0.0f64; order.len() + 1];
    for k in (0..order.len()).rev() {
        tail_bound[k] = tail_bound[k + 1].max(cp[order[k]] / max_speed);
    }

    let mut search = Search {
        workflow,
        cluster,
        feasible: &feasible,
        alpha: weights.alpha,
        tail_bound,
        nodes: vec![0; workflow.len()],
        finish: vec![0.0; workflow.len()],
        node_free: vec![0.0; cluster.len()],
        best: f64::INFINITY,
        best_nodes: Vec::new(),
        explored: 0,
        pruned: 0,
    };
    search.descend(0, 0.0);

    let solution = Solution::from_mapping(&scorer, Mapping::from_indices(search.best_nodes))?;
    debug_assert_eq!(solution.report.weighted.to_bits(), search.best.to_bits());
    let stats = SearchStats {
        nodes_explored: search.explored,
        nodes_pruned: search.pruned,
        runtime: started.elapsed().as_secs_f64(),
        optimal_value: solution.report.weighted,
    };
    Ok((solution, stats))
}

struct Search<'a> {
    workflow: &'a Workflow,
    cluster: &'a ClusterSpec,
    feasible: &'a [Vec<usize>],
    alpha: f64,
    tail_bound: Vec<f64>,
    nodes: Vec<usize>,
    finish: Vec<f64>,
    node_free: Vec<f64>,
    best: f64,
    best_nodes: Vec<usize>,
    explored: u64,
    pruned: u64,
}

impl Search<'_> {
    fn descend(&mut self, depth: usize, makespan: f64) {
        let order = self.workflow.topo_order();
        let t = order[depth];
        let last = depth + 1 == order.len();
        for &n in &self.feasible[t] {
            self.explored += 1;
            self.nodes[t] = n;
            let (_, f) = place_task(
                self.workflow,
                self.cluster,
                &self.nodes,
                &self.finish,
                &self.node_free,
                t,
            );
            let partial = makespan.max(f);
            let bound = self.alpha * partial.max(self.tail_bound[depth + 1]);
            if bound >= self.best {
                self.pruned += 1;
                continue;
            }
            if last {
                self.best = self.alpha * partial;
                self.best_nodes.clone_from(&self.nodes);
                continue;
            }
            let saved = self.node_free[n];
            self.finish[t] = f;
            self.node_free[n] = f;
            self.descend(depth + 1, partial);
            self.node_free[n] = saved;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn flat() -> CarbonTrace {
        CarbonTrace::constant(400.0).unwrap()
    }

    #[test]
    fn fixture_optima() {
        let fx = fixtures::single();
        let (sol, stats) =
            enumerate_optimal(&fx.workflow, &fx.cluster, Weights::MAKESPAN, &flat()).unwrap();
        assert_eq!(sol.report.makespan, 5.0);
        assert_eq!(stats.nodes_explored, 1);

        let fx = fixtures::chain3();
        let (sol, _) =
            enumerate_optimal(&fx.workflow, &fx.cluster, Weights::MAKESPAN, &flat()).unwrap();
        assert_eq!(sol.report.makespan, 6.0);
        assert_eq!(sol.mapping.as_slice(), &[1, 1, 1]);

        let fx = fixtures::diamond4();
        let (sol, stats) =
            enumerate_optimal(&fx.workflow, &fx.cluster, Weights::MAKESPAN, &flat()).unwrap();
        assert_eq!(sol.report.makespan, 8.0);
        assert_eq!(stats.nodes_explored, 16);
        // Lexicographically first optimum: everything on N1 (2 + 3 + 3 + 2 = 10)
        // loses to the split, and A,B,C on N1 / D on N2 is worse still.
        assert_eq!(sol.mapping.to_pairs(&fx.workflow, &fx.cluster)[0].1, "N1");
    }

    #[test]
    fn bnb_matches_enumeration_on_fixtures() {
        for fx in [fixtures::single(), fixtures::chain3(), fixtures::diamond4()] {
            let (e, _) =
                enumerate_optimal(&fx.workflow, &fx.cluster, Weights::MAKESPAN, &flat()).unwrap();
            let (b, stats) =
                branch_and_bound(&fx.workflow, &fx.cluster, Weights::MAKESPAN, &flat()).unwrap();
            assert_eq!(
                e.report.weighted.to_bits(),
                b.report.weighted.to_bits(),
                "{}",
                fx.name
            );
            assert!(stats.nodes_explored >= 1);
            let tree = assignment_tree_size(&fx.workflow, &fx.cluster).unwrap();
            assert!(u128::from(stats.nodes_explored) <= tree);
        }
        let fx = fixtures::single();
        let (b, stats) =
            branch_and_bound(&fx.workflow, &fx.cluster, Weights::MAKESPAN, &flat()).unwrap();
        assert_eq!(b.report.weighted, 5.0);
        assert_eq!(stats.nodes_explored, 1);
    }

    #[test]
    fn bnb_falls_back_for_energy_weights() {
        let fx = fixtures::chain3();
        let w = Weights::new(1.0, 0.01, 0.0).unwrap();
        let (e, _) = enumerate_optimal(&fx.workflow, &fx.cluster, w, &flat()).unwrap();
        let (b, stats) = branch_and_bound(&fx.workflow, &fx.cluster, w, &flat()).unwrap();
        assert_eq!(e, b);
        assert_eq!(stats.nodes_pruned, 0);
    }

    #[test]
    fn cap_and_infeasibility() {
        let fx = fixtures::chain3();
        let err =
            enumerate_optimal_with_cap(&fx.workflow, &fx.cluster, Weights::MAKESPAN, &flat(), 7)
                .unwrap_err();
        assert_eq!(err, SolveError::Capped { size: 8, cap: 7 });
        assert!(branch_and_bound_with_cap(
            &fx.workflow,
            &fx.cluster,
            Weights::MAKESPAN,
            &flat(),
            7
        )
        .is_err());

        let wf = Workflow::new(
            vec![crate::model::Task::new("X", 1.0).with_class("gpu")],
            vec![],
        )
        .unwrap();
        assert_eq!(
            enumerate_optimal(&wf, &fx.cluster, Weights::MAKESPAN, &flat()).unwrap_err(),
            SolveError::Infeasible("X".into())
        );
    }

    #[test]
    fn class_constraints_shrink_the_space() {
        let fx = fixtures::chain3();
        let tasks = vec![
            crate::model::Task::new("A", 4.0).with_class("edge"),
            crate::model::Task::new("B", 2.0),
        ];
        let wf = Workflow::new(
            tasks,
            vec![crate::model::DependencyEdge::new("A", "B", 8.0)],
        )
        .unwrap();
        let (sol, stats) = enumerate_optimal(&wf, &fx.cluster, Weights::MAKESPAN, &flat()).unwrap();
        assert_eq!(stats.nodes_explored, 2);
        assert_eq!(sol.mapping.node_of(0), 0);
        // A on N1 finishes at 4; B stays (4 + 2) rather than moving (4 + 2 + 1).
        assert_eq!(sol.report.makespan, 6.0);
    }

    #[test]
    fn critical_paths() {
        let fx = fixtures::diamond4();
        assert_eq!(critical_path_work(&fx.workflow), vec![7.0, 5.0, 5.0, 2.0]);
        assert_eq!(makespan_lower_bound(&fx.workflow, &fx.cluster, &[]), 7.0);
        // A, B on N1 then C on N1: partial makespan 8.
        assert_eq!(
            makespan_lower_bound(&fx.workflow, &fx.cluster, &[0, 0, 0]),
            8.0
        );
    }
}
