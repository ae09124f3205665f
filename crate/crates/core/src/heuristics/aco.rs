use crate::derive::{Mapping, Scorer, Weights};
use crate::model::{ClusterSpec, Workflow};
use crate::rng::SeededRng;
use crate::solver::{feasible_nodes, SolveError};
use crate::twin::CarbonTrace;

use super::HeuristicConfig;

/// Ant colony optimization over a (task, node) pheromone matrix.
///
/// Each ant walks the tasks in topological order and picks a feasible node
/// with probability proportional to `pheromone^alpha * desirability^beta`.
/// Desirability is `speed / max_speed`: the task's best execution time over
/// its execution time on that node, which is independent of the task's work.
/// When every weight is zero the pick is uniform. After each round all
/// pheromone evaporates by `evaporation`, then the round's best ant deposits
/// `best_so_far / round_best` (1 when the round best is 0) on each of its
/// assignments. Pheromone starts at 1 everywhere.
pub fn aco_map(
    workflow: &Workflow,
    cluster: &ClusterSpec,
    weights: Weights,
    trace: &CarbonTrace,
    config: &HeuristicConfig,
) -> Result<Mapping, SolveError> {
    let pheromone = vec![vec![1.0; cluster.len()]; workflow.len()];
    run(workflow, cluster, weights, trace, config, pheromone)
}

/// [`aco_map`] with an explicit initial pheromone matrix, indexed
/// `[task][node]` in workflow and cluster order.
pub fn aco_map_with_pheromone(
    workflow: &Workflow,
    cluster: &ClusterSpec,
    weights: Weights,
    trace: &CarbonTrace,
    config: &HeuristicConfig,
    pheromone: Vec<Vec<f64>>,
) -> Result<Mapping, SolveError> {
    let shape_ok = pheromone.len() == workflow.len()
        && pheromone.iter().all(|row| {
            row.len() == cluster.len() && row.iter().all(|&x| x.is_finite() && x >= 0.0)
        });
    if !shape_ok {
        return Err(SolveError::InvalidConfig(format!(
            "pheromone must be a non-negative {}x{} matrix",
            workflow.len(),
            cluster.len()
        )));
    }
    run(workflow, cluster, weights, trace, config, pheromone)
}

fn run(
    workflow: &Workflow,
    cluster: &ClusterSpec,
    weights: Weights,
    trace: &CarbonTrace,
    config: &HeuristicConfig,
    mut pheromone: Vec<Vec<f64>>,
) -> Result<Mapping, SolveError> {
    config.validate()?;
    let feasible = feasible_nodes(workflow, cluster)?;
    let mut scorer = Scorer::new(workflow, cluster, trace, weights)?;
    let mut rng = SeededRng::new(config.seed);
    let params = &config.aco;
    let max_speed = cluster.max_speed();
    let desirability: Vec<f64> = cluster
        .nodes()
        .iter()
        .map(|n| (n.speed / max_speed).powf(params.beta))
        .collect();

    let mut ant = vec![0usize; workflow.len()];
    let mut round_best = vec![0usize; workflow.len()];
    let mut best = Vec::new();
    let mut best_value = f64::INFINITY;
    let mut weights_buf = Vec::with_capacity(cluster.len());
    for _ in 0..params.rounds {
        let mut round_value = f64::INFINITY;
        for _ in 0..params.ants {
            for &t in workflow.topo_order() {
                let options = &feasible[t];
                weights_buf.clear();
                weights_buf.extend(
                    options
                        .iter()
                        .map(|&n| pheromone[t][n].powf(params.alpha) * desirability[n]),
                );
                let total: f64 = weights_buf.iter().sum();
                ant[t] = if total > 0.0 && total.is_finite() {
                    let target = rng.uniform() * total;
                    let mut acc = 0.0;
                    let mut pick = options[options.len() - 1];
                    for (k, &w) in weights_buf.iter().enumerate() {
                        acc += w;
                        if target < acc {
                            pick = options[k];
                            break;
                        }
                    }
                    pick
                } else {
                    options[rng.below(options.len())]
                };
            }
            let value = scorer.score(&ant);
            if value < round_value {
                round_value = value;
                round_best.copy_from_slice(&ant);
            }
        }
        if round_value < best_value {
            best_value = round_value;
            best.clone_from(&round_best);
        }

        let keep = 1.0 - params.evaporation;
        for row in pheromone.iter_mut() {
            for x in row.iter_mut() {
                *x *= keep;
            }
        }
        let deposit = if round_value > 0.0 {
            best_value / round_value
        } else {
            1.0
        };
        for (t, &n) in round_best.iter().enumerate() {
            pheromone[t][n] += deposit;
        }
    }
    Ok(Mapping::from_indices(best))
}
