//! Workflow scheduling on heterogeneous clusters, split into two steps:
//! choose a task-to-node [`Mapping`], then derive the one canonical
//! [`Schedule`] that mapping implies.
//!
//! * [`model`]: workflows, clusters, and their JSON documents.
//! * [`derive`]: canonical schedule derivation, energy and carbon
//!   objectives, and the schedule validator.
//! * [`exact`]: exhaustive enumeration and branch-and-bound.
//! * [`heuristics`]: HEFT, OLB, SA, GA, PSO, and ACO mappers.
//! * [`twin`]: carbon-intensity traces, telemetry, and anomaly exclusion.
//! * [`harness`]: scenario generators and the benchmark runner.
//!
//! ```
//! use wfsched::prelude::*;
//!
//! let fx = wfsched::fixtures::chain3();
//! let trace = CarbonTrace::constant(400.0).unwrap();
//! let mapping = heft_map(&fx.workflow, &fx.cluster).unwrap();
//! let schedule = derive_schedule(&fx.workflow, &fx.cluster, &mapping).unwrap();
//! let report = objective(&schedule, &fx.cluster, &trace, Weights::MAKESPAN).unwrap();
//! assert_eq!(report.makespan, 6.0);
//! ```
//!
//! The guide in `book/` walks through each step; its code listings are
//! compiled and run as doc-tests of this crate.

pub mod derive;
pub mod exact;
pub mod fixtures;
pub mod harness;
pub mod heuristics;
pub mod model;
pub mod rng;
pub mod solver;
pub mod twin;

pub use derive::{Mapping, ObjectiveReport, Schedule, Weights};
pub use model::{ClusterSpec, Workflow};
pub use solver::{Algorithm, Solution, SolveError};

pub mod prelude {
    pub use crate::derive::{
        compute_carbon, compute_energy, derive_schedule, objective, validate_schedule, Mapping,
        ObjectiveReport, Schedule, Weights,
    };
    pub use crate::exact::{branch_and_bound, enumerate_optimal};
    pub use crate::heuristics::{
        aco_map, ga_map, heft_map, heft_rank, olb_map, pso_map, sa_map, HeuristicConfig,
    };
    pub use crate::model::{parse_cluster, parse_workflow, validate_dag, ClusterSpec, Workflow};
    pub use crate::solver::{solve, Algorithm, Solution, SolveError, SolveOptions};
    pub use crate::twin::{filter_nodes, AnomalyPolicy, CarbonTrace, TelemetrySnapshot};
}

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/derivation.md")]
    mod derivation {}
    #[doc = include_str!("../../../book/src/objectives.md")]
    mod objectives {}
    #[doc = include_str!("../../../book/src/exact.md")]
    mod exact {}
    #[doc = include_str!("../../../book/src/heuristics.md")]
    mod heuristics {}
    #[doc = include_str!("../../../book/src/twin.md")]
    mod twin {}
    #[doc = include_str!("../../../book/src/harness.md")]
    mod harness {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
