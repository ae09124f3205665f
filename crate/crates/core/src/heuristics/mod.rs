//! Heuristic mappers.
//!
//! HEFT and OLB are deterministic list heuristics. SA, GA, PSO, and ACO are
//! seeded metaheuristics that search mappings directly and score each
//! candidate with the canonical derivation, so their results are comparable
//! with the exact solvers. Every mapper only ever assigns a task to a node
//! that admits it (class affinity and memory).

mod aco;
mod ga;
mod heft;
mod olb;
mod pso;
mod sa;

pub use aco::{aco_map, aco_map_with_pheromone};
pub use ga::{ga_map, ga_map_with_population};
pub use heft::{heft_map, heft_rank, RankTable};
pub use olb::olb_map;
pub use pso::{pso_map, pso_map_with_swarm};
pub use sa::sa_map;

use crate::solver::SolveError;

/// Simulated annealing parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SaParams {
    /// Neighbor evaluations, `>= 1`.
    pub iterations: usize,
    /// Initial temperature as a multiple of the starting objective, in `(0, 1e6]`.
    pub initial_temp_factor: f64,
    /// Per-iteration temperature multiplier, in `(0, 1]`.
    pub cooling: f64,
}

/// Genetic algorithm parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct GaParams {
    pub population: usize,
    pub generations: usize,
    /// Probability that a child is a uniform crossover rather than a copy, in `[0, 1]`.
    pub crossover_rate: f64,
    /// Per-gene mutation probability in `[0, 1]`; `None` means `1 / |tasks|`.
    pub mutation_rate: Option<f64>,
}

/// Particle swarm parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct PsoParams {
    pub swarm: usize,
    pub iterations: usize,
    /// In `[0, 1]`.
    pub inertia: f64,
    /// In `[0, 4]`.
    pub cognitive: f64,
    /// In `[0, 4]`.
    pub social: f64,
}

/// Ant colony parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct AcoParams {
    pub ants: usize,
    pub rounds: usize,
    /// Pheromone exponent, in `[0, 10]`.
    pub alpha: f64,
    /// Desirability exponent, in `[0, 10]`.
    pub beta: f64,
    /// Fraction of pheromone removed each round, in `[0, 1]`.
    pub evaporation: f64,
}

/// Seed and hyperparameters for the stochastic mappers.
///
/// | algorithm | defaults |
/// |-----------|----------|
/// | SA  | 2000 iterations, T0 = 10 × starting objective, cooling 0.995 |
/// | GA  | population 40, 100 generations, crossover 0.9, mutation 1/\|tasks\| |
/// | PSO | swarm 30, 100 iterations, inertia 0.7, cognitive = social = 1.4 |
/// | ACO | 20 ants, 50 rounds, α = 1, β = 2, evaporation 0.1 |
#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicConfig {
    pub seed: u64,
    pub sa: SaParams,
    pub ga: GaParams,
    pub pso: PsoParams,
    pub aco: AcoParams,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            sa: SaParams {
                iterations: 2000,
                initial_temp_factor: 10.0,
                cooling: 0.995,
            },
            ga: GaParams {
                population: 40,
                generations: 100,
                crossover_rate: 0.9,
                mutation_rate: None,
            },
            pso: PsoParams {
                swarm: 30,
                iterations: 100,
                inertia: 0.7,
                cognitive: 1.4,
                social: 1.4,
            },
            aco: AcoParams {
                ants: 20,
                rounds: 50,
                alpha: 1.0,
                beta: 2.0,
                evaporation: 0.1,
            },
        }
    }
}

fn in_range(name: &str, value: f64, lo: f64, hi: f64) -> Result<(), SolveError> {
    if value >= lo && value <= hi {
        Ok(())
    } else {
        Err(SolveError::InvalidConfig(format!(
            "{name} = {value} outside [{lo}, {hi}]"
        )))
    }
}

fn at_least_one(name: &str, value: usize) -> Result<(), SolveError> {
    if value >= 1 {
        Ok(())
    } else {
        Err(SolveError::InvalidConfig(format!(
            "{name} must be at least 1"
        )))
    }
}

impl HeuristicConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        at_least_one("sa.iterations", self.sa.iterations)?;
        if !(self.sa.initial_temp_factor > 0.0 && self.sa.initial_temp_factor <= 1e6) {
            return Err(SolveError::InvalidConfig(format!(
                "sa.initial_temp_factor = {} outside (0, 1e6]",
                self.sa.initial_temp_factor
            )));
        }
        if !(self.sa.cooling > 0.0 && self.sa.cooling <= 1.0) {
            return Err(SolveError::InvalidConfig(format!(
                "sa.cooling = {} outside (0, 1]",
                self.sa.cooling
            )));
        }

        at_least_one("ga.population", self.ga.population)?;
        at_least_one("ga.generations", self.ga.generations)?;
        in_range("ga.crossover_rate", self.ga.crossover_rate, 0.0, 1.0)?;
        if let Some(rate) = self.ga.mutation_rate {
            in_range("ga.mutation_rate", rate, 0.0, 1.0)?;
        }

        at_least_one("pso.swarm", self.pso.swarm)?;
        at_least_one("pso.iterations", self.pso.iterations)?;
        in_range("pso.inertia", self.pso.inertia, 0.0, 1.0)?;
        in_range("pso.cognitive", self.pso.cognitive, 0.0, 4.0)?;
        in_range("pso.social", self.pso.social, 0.0, 4.0)?;

        at_least_one("aco.ants", self.aco.ants)?;
        at_least_one("aco.rounds", self.aco.rounds)?;
        in_range("aco.alpha", self.aco.alpha, 0.0, 10.0)?;
        in_range("aco.beta", self.aco.beta, 0.0, 10.0)?;
        in_range("aco.evaporation", self.aco.evaporation, 0.0, 1.0)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        HeuristicConfig::default().validate().unwrap();
    }

    #[test]
    fn out_of_range_values_are_rejected() {
        let mut c = HeuristicConfig::default();
        c.ga.crossover_rate = 1.5;
        assert!(c.validate().is_err());

        let mut c = HeuristicConfig::default();
        c.sa.cooling = 0.0;
        assert!(c.validate().is_err());

        let mut c = HeuristicConfig::default();
        c.pso.swarm = 0;
        assert!(c.validate().is_err());

        let mut c = HeuristicConfig::default();
        c.aco.evaporation = -0.1;
        assert!(c.validate().is_err());

        let mut c = HeuristicConfig::default();
        c.ga.mutation_rate = Some(f64::NAN);
        assert!(c.validate().is_err());
    }
}
