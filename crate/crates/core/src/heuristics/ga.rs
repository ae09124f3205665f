use crate::derive::{Mapping, Scorer, Weights};
use crate::model::{ClusterSpec, Workflow};
use crate::rng::SeededRng;
use crate::solver::{feasible_nodes, SolveError};
use crate::twin::CarbonTrace;

use super::HeuristicConfig;

/// Genetic algorithm over node-assignment chromosomes.
///
/// Gene `k` is the node of the `k`-th task in topological order. The initial
/// population is uniform over feasible nodes; each generation keeps the best
/// individual and fills the rest with children of two size-2 tournament
/// winners (uniform crossover with probability `crossover_rate`, otherwise
/// a copy of the first parent), then mutates each gene with probability
/// `mutation_rate` to a uniformly drawn feasible node.
pub fn ga_map(
    workflow: &Workflow,
    cluster: &ClusterSpec,
    weights: Weights,
    trace: &CarbonTrace,
    config: &HeuristicConfig,
) -> Result<Mapping, SolveError> {
    run(workflow, cluster, weights, trace, config, None)
}

/// [`ga_map`] starting from the given mappings instead of a random
/// population. The population size is the number of mappings supplied.
pub fn ga_map_with_population(
    workflow: &Workflow,
    cluster: &ClusterSpec,
    weights: Weights,
    trace: &CarbonTrace,
    config: &HeuristicConfig,
    population: &[Mapping],
) -> Result<Mapping, SolveError> {
    if population.is_empty() {
        return Err(SolveError::InvalidConfig("empty initial population".into()));
    }
    for m in population {
        m.check(workflow, cluster)?;
    }
    run(workflow, cluster, weights, trace, config, Some(population))
}

fn run(
    workflow: &Workflow,
    cluster: &ClusterSpec,
    weights: Weights,
    trace: &CarbonTrace,
    config: &HeuristicConfig,
    seeded: Option<&[Mapping]>,
) -> Result<Mapping, SolveError> {
    config.validate()?;
    let feasible = feasible_nodes(workflow, cluster)?;
    let mut scorer = Scorer::new(workflow, cluster, trace, weights)?;
    let mut rng = SeededRng::new(config.seed);
    let params = &config.ga;
    let order = workflow.topo_order();
    let genes = order.len();
    let mutation = params.mutation_rate.unwrap_or(1.0 / genes as f64);

    // Chromosomes are in topological order; the scorer wants workflow order.
    let mut nodes = vec![0usize; genes];
    let mut evaluate = |chromosome: &[usize]| {
        for (k, &t) in order.iter().enumerate() {
            nodes[t] = chromosome[k];
        }
        scorer.score(&nodes)
    };

    let mut population: Vec<Vec<usize>> = match seeded {
        Some(mappings) => mappings
            .iter()
            .map(|m| order.iter().map(|&t| m.node_of(t)).collect())
            .collect(),
        None => (0..params.population)
            .map(|_| {
                order
                    .iter()
                    .map(|&t| feasible[t][rng.below(feasible[t].len())])
                    .collect()
            })
            .collect(),
    };
    let size = population.len();
    let mut fitness: Vec<f64> = population.iter().map(|c| evaluate(c)).collect();

    let fittest = |fitness: &[f64]| {
        (1..fitness.len()).fold(
            0,
            |best, i| if fitness[i] < fitness[best] { i } else { best },
        )
    };

    for _ in 0..params.generations {
        let elite = fittest(&fitness);
        let mut next = Vec::with_capacity(size);
        let mut next_fitness = Vec::with_capacity(size);
        next.push(population[elite].clone());
        next_fitness.push(fitness[elite]);

        while next.len() < size {
            let tournament = |rng: &mut SeededRng| {
                let a = rng.below(size);
                let b = rng.below(size);
                if fitness[b] < fitness[a] {
                    b
                } else {
                    a
                }
            };
            let first = tournament(&mut rng);
            let second = tournament(&mut rng);
            let mut child = if rng.chance(params.crossover_rate) {
                population[first]
                    .iter()
                    .zip(&population[second])
                    .map(|(&x, &y)| if rng.chance(0.5) { x } else { y })
                    .collect()
            } else {
                population[first].clone()
            };
            for (k, gene) in child.iter_mut().enumerate() {
                if rng.chance(mutation) {
                    let options = &feasible[order[k]];
                    *gene = options[rng.below(options.len())];
                }
            }
            next_fitness.push(evaluate(&child));
            next.push(child);
        }
        population = next;
        fitness = next_fitness;
    }

    let best = &population[fittest(&fitness)];
    let mut mapping = vec![0usize; genes];
    for (k, &t) in order.iter().enumerate() {
        mapping[t] = best[k];
    }
    Ok(Mapping::from_indices(mapping))
}
