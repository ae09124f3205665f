//! Shared solver vocabulary: the error type, the solution bundle, and the
//! algorithm selector used by the harness and the CLI.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::derive::{Mapping, ObjectiveReport, Schedule, ScheduleError, Scorer, Weights};
use crate::exact::{self, SearchStats};
use crate::heuristics::{self, HeuristicConfig};
use crate::model::{ClusterSpec, Workflow};
use crate::twin::CarbonTrace;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("search space of {size} mappings exceeds the cap of {cap}")]
    Capped { size: u128, cap: u128 },
    #[error("no node can host task `{0}`")]
    Infeasible(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
}

/// A mapping together with its canonical schedule and objective.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub mapping: Mapping,
    pub schedule: Schedule,
    pub report: ObjectiveReport,
}

impl Solution {
    pub(crate) fn from_mapping(scorer: &Scorer<'_>, mapping: Mapping) -> Result<Self, SolveError> {
        let (schedule, report) = scorer.finish(&mapping)?;
        Ok(Self {
            mapping,
            schedule,
            report,
        })
    }
}

/// Class- and memory-feasible nodes per task (ascending node id), or the
/// first task that fits nowhere.
pub fn feasible_nodes(
    workflow: &Workflow,
    cluster: &ClusterSpec,
) -> Result<Vec<Vec<usize>>, SolveError> {
    workflow
        .tasks()
        .iter()
        .map(|task| {
            let nodes = cluster.feasible_nodes(task);
            if nodes.is_empty() {
                Err(SolveError::Infeasible(task.id.clone()))
            } else {
                Ok(nodes)
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Heft,
    Olb,
    Ga,
    Pso,
    Aco,
    Sa,
    Bnb,
    Exhaustive,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::Heft,
        Algorithm::Olb,
        Algorithm::Ga,
        Algorithm::Pso,
        Algorithm::Aco,
        Algorithm::Sa,
        Algorithm::Bnb,
        Algorithm::Exhaustive,
    ];

    pub const HEURISTICS: [Algorithm; 6] = [
        Algorithm::Heft,
        Algorithm::Olb,
        Algorithm::Ga,
        Algorithm::Pso,
        Algorithm::Aco,
        Algorithm::Sa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Heft => "heft",
            Algorithm::Olb => "olb",
            Algorithm::Ga => "ga",
            Algorithm::Pso => "pso",
            Algorithm::Aco => "aco",
            Algorithm::Sa => "sa",
            Algorithm::Bnb => "bnb",
            Algorithm::Exhaustive => "exhaustive",
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Algorithm::Bnb | Algorithm::Exhaustive)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

/// Everything a single solve needs besides the instance.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub weights: Weights,
    pub seed: u64,
    /// `None` uses the default configuration.
    pub heuristic: Option<HeuristicConfig>,
    pub exact_cap: u128,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            weights: Weights::MAKESPAN,
            seed: 0,
            heuristic: None,
            exact_cap: exact::DEFAULT_CAP,
        }
    }
}

/// Runs `algorithm` and scores its mapping under the canonical derivation.
/// Search statistics are returned for the exact solvers only.
pub fn solve(
    algorithm: Algorithm,
    workflow: &Workflow,
    cluster: &ClusterSpec,
    trace: &CarbonTrace,
    options: &SolveOptions,
) -> Result<(Solution, Option<SearchStats>), SolveError> {
    let weights = options.weights;
    let config = || {
        let mut c = options.heuristic.clone().unwrap_or_default();
        c.seed = options.seed;
        c
    };
    let mapping = match algorithm {
        Algorithm::Exhaustive => {
            let (sol, stats) = exact::enumerate_optimal_with_cap(
                workflow,
                cluster,
                weights,
                trace,
                options.exact_cap,
            )?;
            return Ok((sol, Some(stats)));
        }
        Algorithm::Bnb => {
            let (sol, stats) = exact::branch_and_bound_with_cap(
                workflow,
                cluster,
                weights,
                trace,
                options.exact_cap,
            )?;
            return Ok((sol, Some(stats)));
        }
        Algorithm::Heft => heuristics::heft_map(workflow, cluster)?,
        Algorithm::Olb => heuristics::olb_map(workflow, cluster)?,
        Algorithm::Sa => heuristics::sa_map(workflow, cluster, weights, trace, &config())?,
        Algorithm::Ga => heuristics::ga_map(workflow, cluster, weights, trace, &config())?,
        Algorithm::Pso => heuristics::pso_map(workflow, cluster, weights, trace, &config())?,
        Algorithm::Aco => heuristics::aco_map(workflow, cluster, weights, trace, &config())?,
    };
    let scorer = Scorer::new(workflow, cluster, trace, weights)?;
    Ok((Solution::from_mapping(&scorer, mapping)?, None))
}
