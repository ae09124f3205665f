//! The small instances shipped with the crate.
//!
//! | name       | workflow                                   | cluster                  |
//! |------------|--------------------------------------------|--------------------------|
//! | `SINGLE`   | `T` (work 5)                               | `N1` speed 1             |
//! | `CHAIN3`   | `A`(4) → `B`(2) → `C`(6), data 8 per edge  | `N1` speed 1, `N2` speed 2, bandwidth 4 |
//! | `DIAMOND4` | `A`(2) → {`B`(3), `C`(3)} → `D`(2), data 4 | two speed-1 nodes, bandwidth 4 |
//!
//! The JSON documents live in `crates/core/fixtures/` and are embedded here.

use crate::model::{parse_cluster, parse_workflow, ClusterSpec, Workflow};

pub const SINGLE_WORKFLOW: &str = include_str!("../fixtures/single.workflow.json");
pub const SINGLE_CLUSTER: &str = include_str!("../fixtures/single.cluster.json");
pub const CHAIN3_WORKFLOW: &str = include_str!("../fixtures/chain3.workflow.json");
pub const HET2_CLUSTER: &str = include_str!("../fixtures/het2.cluster.json");
pub const DIAMOND4_WORKFLOW: &str = include_str!("../fixtures/diamond4.workflow.json");
pub const PAIR2_CLUSTER: &str = include_str!("../fixtures/pair2.cluster.json");
/// Telemetry for `HET2` with the fast node `N2` running hot.
pub const HET2_SNAPSHOT: &str = include_str!("../fixtures/het2.snapshot.csv");
/// 300 g/kWh from t = 0, 600 g/kWh from t = 4 s.
pub const TWO_SEGMENT_TRACE: &str = include_str!("../fixtures/two_segment.trace.csv");

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub workflow: Workflow,
    pub cluster: ClusterSpec,
}

fn load(name: &'static str, workflow: &str, cluster: &str) -> Fixture {
    Fixture {
        name,
        workflow: parse_workflow(workflow).expect("bundled workflow fixture is valid"),
        cluster: parse_cluster(cluster).expect("bundled cluster fixture is valid"),
    }
}

pub fn single() -> Fixture {
    load("SINGLE", SINGLE_WORKFLOW, SINGLE_CLUSTER)
}

pub fn chain3() -> Fixture {
    load("CHAIN3", CHAIN3_WORKFLOW, HET2_CLUSTER)
}

pub fn diamond4() -> Fixture {
    load("DIAMOND4", DIAMOND4_WORKFLOW, PAIR2_CLUSTER)
}
