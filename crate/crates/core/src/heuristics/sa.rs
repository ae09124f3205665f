use crate::derive::{Mapping, Scorer, Weights};
use crate::model::{ClusterSpec, Workflow};
use crate::rng::SeededRng;
use crate::solver::{feasible_nodes, SolveError};
use crate::twin::CarbonTrace;

use super::{olb_map, HeuristicConfig};

/// Simulated annealing from the OLB mapping.
///
/// Each iteration moves one uniformly drawn task to a uniformly drawn
/// feasible node (possibly its current one). Improvements are always taken;
/// otherwise the move is taken when a fresh uniform draw is below
/// `exp(-delta / T)`. The temperature starts at `initial_temp_factor` times
/// the starting objective and is multiplied by `cooling` every iteration.
pub fn sa_map(
    workflow: &Workflow,
    cluster: &ClusterSpec,
    weights: Weights,
    trace: &CarbonTrace,
    config: &HeuristicConfig,
) -> Result<Mapping, SolveError> {
    config.validate()?;
    let feasible = feasible_nodes(workflow, cluster)?;
    let mut scorer = Scorer::new(workflow, cluster, trace, weights)?;
    let mut rng = SeededRng::new(config.seed);
    let params = &config.sa;

    let mut current = olb_map(workflow, cluster)?.as_slice().to_vec();
    let mut current_value = scorer.score(&current);
    let mut best = current.clone();
    let mut best_value = current_value;
    let mut temperature = params.initial_temp_factor * current_value;

    let mut candidate = current.clone();
    for _ in 0..params.iterations {
        let t = rng.below(workflow.len());
        let options = &feasible[t];
        let n = options[rng.below(options.len())];
        candidate.copy_from_slice(&current);
        candidate[t] = n;
        let value = scorer.score(&candidate);
        let delta = value - current_value;
        let accept = delta < 0.0 || {
            let u = rng.uniform();
            temperature > 0.0 && u < (-delta / temperature).exp()
        };
        if accept {
            current.copy_from_slice(&candidate);
            current_value = value;
            if value < best_value {
                best.copy_from_slice(&candidate);
                best_value = value;
            }
        }
        temperature *= params.cooling;
    }
    Ok(Mapping::from_indices(best))
}
