use crate::derive::{Mapping, Scorer, Weights};
use crate::model::{ClusterSpec, Workflow};
use crate::rng::SeededRng;
use crate::solver::{feasible_nodes, SolveError};
use crate::twin::CarbonTrace;

use super::HeuristicConfig;

/// Particle swarm over continuous positions, one coordinate per task.
///
/// A coordinate in `[0, m)` (with `m` nodes) decodes to `floor(x)` clamped to
/// `[0, m - 1]`, then to the nearest feasible node index (ties toward the
/// lower index). Velocities follow
/// `v = w v + c1 r1 (personal - x) + c2 r2 (global - x)` with fresh uniform
/// `r1`, `r2` per coordinate, are clamped to `[-m, m]`, and positions are
/// clamped back into `[0, m)`. Initial positions are uniform in `[0, m)`,
/// initial velocities uniform in `[-1, 1)`.
pub fn pso_map(
    workflow: &Workflow,
    cluster: &ClusterSpec,
    weights: Weights,
    trace: &CarbonTrace,
    config: &HeuristicConfig,
) -> Result<Mapping, SolveError> {
    run(workflow, cluster, weights, trace, config, None)
}

/// [`pso_map`] with explicit initial positions, one vector of task
/// coordinates per particle.
pub fn pso_map_with_swarm(
    workflow: &Workflow,
    cluster: &ClusterSpec,
    weights: Weights,
    trace: &CarbonTrace,
    config: &HeuristicConfig,
    positions: &[Vec<f64>],
) -> Result<Mapping, SolveError> {
    if positions.is_empty() || positions.iter().any(|p| p.len() != workflow.len()) {
        return Err(SolveError::InvalidConfig(format!(
            "swarm positions must be non-empty vectors of length {}",
            workflow.len()
        )));
    }
    run(workflow, cluster, weights, trace, config, Some(positions))
}

fn decode(position: &[f64], feasible: &[Vec<usize>], m: usize, out: &mut [usize]) {
    for (t, &x) in position.iter().enumerate() {
        let raw = (x.floor().max(0.0) as usize).min(m - 1);
        out[t] = feasible[t]
            .iter()
            .copied()
            .min_by_key(|&n| (n.abs_diff(raw), n))
            .expect("feasible set is non-empty");
    }
}

fn run(
    workflow: &Workflow,
    cluster: &ClusterSpec,
    weights: Weights,
    trace: &CarbonTrace,
    config: &HeuristicConfig,
    seeded: Option<&[Vec<f64>]>,
) -> Result<Mapping, SolveError> {
    config.validate()?;
    let feasible = feasible_nodes(workflow, cluster)?;
    let mut scorer = Scorer::new(workflow, cluster, trace, weights)?;
    let mut rng = SeededRng::new(config.seed);
    let params = &config.pso;
    let m = cluster.len();
    let upper = (m as f64).next_down();
    let dims = workflow.len();

    let mut positions: Vec<Vec<f64>> = match seeded {
        Some(p) => p
            .iter()
            .map(|v| v.iter().map(|x| x.clamp(0.0, upper)).collect())
            .collect(),
        None => (0..params.swarm)
            .map(|_| (0..dims).map(|_| rng.range(0.0, m as f64)).collect())
            .collect(),
    };
    let mut velocities: Vec<Vec<f64>> = (0..positions.len())
        .map(|_| (0..dims).map(|_| rng.range(-1.0, 1.0)).collect())
        .collect();

    let mut decoded = vec![0usize; dims];
    let mut personal = positions.clone();
    let mut personal_value = Vec::with_capacity(positions.len());
    for p in &positions {
        decode(p, &feasible, m, &mut decoded);
        personal_value.push(scorer.score(&decoded));
    }
    let leader = (1..positions.len()).fold(0, |best, i| {
        if personal_value[i] < personal_value[best] {
            i
        } else {
            best
        }
    });
    let mut global = personal[leader].clone();
    let mut global_value = personal_value[leader];

    let vmax = m as f64;
    for _ in 0..params.iterations {
        for i in 0..positions.len() {
            for d in 0..dims {
                let r1 = rng.uniform();
                let r2 = rng.uniform();
                let x = positions[i][d];
                let v = params.inertia * velocities[i][d]
                    + params.cognitive * r1 * (personal[i][d] - x)
                    + params.social * r2 * (global[d] - x);
                let v = v.clamp(-vmax, vmax);
                velocities[i][d] = v;
                positions[i][d] = (x + v).clamp(0.0, upper);
            }
            decode(&positions[i], &feasible, m, &mut decoded);
            let value = scorer.score(&decoded);
            if value < personal_value[i] {
                personal[i].clone_from(&positions[i]);
                personal_value[i] = value;
                if value < global_value {
                    global.clone_from(&positions[i]);
                    global_value = value;
                }
            }
        }
    }
    decode(&global, &feasible, m, &mut decoded);
    Ok(Mapping::from_indices(decoded))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derive::{derive_schedule, validate_schedule};
    use crate::fixtures;
    use crate::model::Task;

    fn trace() -> CarbonTrace {
        CarbonTrace::constant(400.0).unwrap()
    }

    #[test]
    fn single_has_one_answer() {
        let fx = fixtures::single();
        let m = pso_map(
            &fx.workflow,
            &fx.cluster,
            Weights::MAKESPAN,
            &trace(),
            &HeuristicConfig::with_seed(2),
        )
        .unwrap();
        assert_eq!(m.as_slice(), &[0]);
    }

    #[test]
    fn chain_is_feasible_and_bounded_by_optimum() {
        let fx = fixtures::chain3();
        let mut config = HeuristicConfig::with_seed(3);
        config.pso.swarm = 15;
        config.pso.iterations = 60;
        let m = pso_map(
            &fx.workflow,
            &fx.cluster,
            Weights::MAKESPAN,
            &trace(),
            &config,
        )
        .unwrap();
        let s = derive_schedule(&fx.workflow, &fx.cluster, &m).unwrap();
        assert!(s.makespan >= 6.0);
        assert_eq!(validate_schedule(&fx.workflow, &fx.cluster, &s), Ok(()));
    }

    #[test]
    fn frozen_swarm_returns_its_starting_point() {
        let fx = fixtures::diamond4();
        let mut config = HeuristicConfig::with_seed(4);
        config.pso.inertia = 0.0;
        config.pso.cognitive = 0.0;
        config.pso.social = 0.0;
        // Decodes to A,B on N1 and C,D on N2.
        let point = vec![0.3, 0.9, 1.2, 1.7];
        let swarm = vec![point; 6];
        let m = pso_map_with_swarm(
            &fx.workflow,
            &fx.cluster,
            Weights::MAKESPAN,
            &trace(),
            &config,
            &swarm,
        )
        .unwrap();
        assert_eq!(m.as_slice(), &[0, 0, 1, 1]);
    }

    #[test]
    fn decoding_projects_onto_feasible_nodes() {
        let feasible = vec![vec![0, 1, 2], vec![2], vec![0, 3]];
        let mut out = vec![0; 3];
        decode(&[2.99, 0.0, 1.5], &feasible, 4, &mut out);
        assert_eq!(out, vec![2, 2, 0]);
        decode(&[-3.0, 9.0, 2.0], &feasible, 4, &mut out);
        assert_eq!(out, vec![0, 2, 3]);
    }

    #[test]
    fn respects_class_constraints() {
        let fx = fixtures::chain3();
        let wf = Workflow::new(
            vec![Task::new("a", 1.0).with_class("edge"), Task::new("b", 1.0)],
            vec![],
        )
        .unwrap();
        let m = pso_map(
            &wf,
            &fx.cluster,
            Weights::MAKESPAN,
            &trace(),
            &HeuristicConfig::with_seed(9),
        )
        .unwrap();
        assert_eq!(m.node_of(0), 0);
    }

    #[test]
    fn same_seed_same_mapping() {
        let fx = fixtures::diamond4();
        let config = HeuristicConfig::with_seed(12);
        let a = pso_map(
            &fx.workflow,
            &fx.cluster,
            Weights::MAKESPAN,
            &trace(),
            &config,
        )
        .unwrap();
        let b = pso_map(
            &fx.workflow,
            &fx.cluster,
            Weights::MAKESPAN,
            &trace(),
            &config,
        )
        .unwrap();
        assert_eq!(a, b);
    }
}
