//! Workflows, clusters, and the canonical JSON documents they are read from.
//!
//! A [`Workflow`] is an acyclic task graph; a [`ClusterSpec`] is a set of
//! heterogeneous nodes joined by one uniform link. Both are validated on
//! construction and immutable afterwards, so every other module can index
//! into them without re-checking invariants.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("workflow has no tasks")]
    EmptyWorkflow,
    #[error("duplicate task id `{0}`")]
    DuplicateTask(String),
    #[error("invalid task `{id}`: {reason}")]
    InvalidTask { id: String, reason: String },
    #[error("edge {src} -> {dst} references unknown task `{missing}`")]
    UnknownTask {
        src: String,
        dst: String,
        missing: String,
    },
    #[error("edge {src} -> {dst}: {reason}")]
    InvalidEdge {
        src: String,
        dst: String,
        reason: String,
    },
    #[error("dependency cycle through {}", cycle.join(" -> "))]
    Cycle {
        /// One cycle, in edge order, starting from its smallest id.
        cycle: Vec<String>,
        /// Every task left in the residual graph once no source remains.
        residual: Vec<String>,
    },
    #[error("cluster has no nodes")]
    EmptyCluster,
    #[error("duplicate node id `{0}`")]
    DuplicateNode(String),
    #[error("invalid node `{id}`: {reason}")]
    InvalidNode { id: String, reason: String },
    #[error("bandwidth must be positive and finite, got {0}")]
    InvalidBandwidth(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Task {
    pub id: String,
    /// Abstract compute units; execution time on a node is `work / speed`.
    pub work: f64,
    /// GiB held while the task runs.
    pub mem_demand: f64,
    /// When set, the task may only run on nodes of this class.
    pub required_class: Option<String>,
    pub labels: BTreeSet<String>,
}

impl Task {
    pub fn new(id: impl Into<String>, work: f64) -> Self {
        Self {
            id: id.into(),
            work,
            mem_demand: 0.0,
            required_class: None,
            labels: BTreeSet::new(),
        }
    }

    pub fn with_mem(mut self, mem: f64) -> Self {
        self.mem_demand = mem;
        self
    }

    pub fn with_class(mut self, class: impl Into<String>) -> Self {
        self.required_class = Some(class.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DependencyEdge {
    pub src: String,
    pub dst: String,
    /// Data units shipped from `src` to `dst`.
    pub data: f64,
}

impl DependencyEdge {
    pub fn new(src: impl Into<String>, dst: impl Into<String>, data: f64) -> Self {
        Self {
            src: src.into(),
            dst: dst.into(),
            data,
        }
    }
}

/// Validated, acyclic task graph.
///
/// Tasks keep document order; every index-based accessor refers to that
/// order. Adjacency lists and the deterministic topological order are
/// computed once at construction.
#[derive(Debug, Clone)]
pub struct Workflow {
    tasks: Vec<Task>,
    edges: Vec<DependencyEdge>,
    index: HashMap<String, usize>,
    preds: Vec<Vec<(usize, f64)>>,
    succs: Vec<Vec<(usize, f64)>>,
    topo: Vec<usize>,
}

impl PartialEq for Workflow {
    fn eq(&self, other: &Self) -> bool {
        self.tasks == other.tasks && self.edges == other.edges
    }
}

impl Workflow {
    pub fn new(tasks: Vec<Task>, edges: Vec<DependencyEdge>) -> Result<Self, ModelError> {
        if tasks.is_empty() {
            return Err(ModelError::EmptyWorkflow);
        }
        let mut index = HashMap::with_capacity(tasks.len());
        for (i, task) in tasks.iter().enumerate() {
            if !(task.work.is_finite() && task.work > 0.0) {
                return Err(ModelError::InvalidTask {
                    id: task.id.clone(),
                    reason: format!("work must be positive, got {}", task.work),
                });
            }
            if !(task.mem_demand.is_finite() && task.mem_demand >= 0.0) {
                return Err(ModelError::InvalidTask {
                    id: task.id.clone(),
                    reason: format!("mem must be non-negative, got {}", task.mem_demand),
                });
            }
            if index.insert(task.id.clone(), i).is_some() {
                return Err(ModelError::DuplicateTask(task.id.clone()));
            }
        }

        let mut preds = vec![Vec::new(); tasks.len()];
        let mut succs = vec![Vec::new(); tasks.len()];
        let mut seen = HashSet::with_capacity(edges.len());
        for edge in &edges {
            let lookup = |id: &str| {
                index
                    .get(id)
                    .copied()
                    .ok_or_else(|| ModelError::UnknownTask {
                        src: edge.src.clone(),
                        dst: edge.dst.clone(),
                        missing: id.to_string(),
                    })
            };
            let s = lookup(&edge.src)?;
            let d = lookup(&edge.dst)?;
            let invalid = |reason: &str| ModelError::InvalidEdge {
                src: edge.src.clone(),
                dst: edge.dst.clone(),
                reason: reason.to_string(),
            };
            if s == d {
                return Err(invalid("self-loop"));
            }
            if !(edge.data.is_finite() && edge.data >= 0.0) {
                return Err(invalid("data must be non-negative"));
            }
            if !seen.insert((s, d)) {
                return Err(invalid("duplicate edge"));
            }
            preds[d].push((s, edge.data));
            succs[s].push((d, edge.data));
        }

        let ids: Vec<&str> = tasks.iter().map(|t| t.id.as_str()).collect();
        let topo = kahn_order(&ids, &preds, &succs)?;
        Ok(Self {
            tasks,
            edges,
            index,
            preds,
            succs,
            topo,
        })
    }

    pub fn tasks(&self) -> &[Task] {
        &self.tasks
    }

    pub fn edges(&self) -> &[DependencyEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    pub fn task(&self, idx: usize) -> &Task {
        &self.tasks[idx]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// `(predecessor index, data)` pairs, in edge-document order.
    pub fn predecessors(&self, idx: usize) -> &[(usize, f64)] {
        &self.preds[idx]
    }

    pub fn successors(&self, idx: usize) -> &[(usize, f64)] {
        &self.succs[idx]
    }

    /// Kahn order with ties broken by ascending task id.
    pub fn topo_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn to_json(&self) -> String {
        let doc = WorkflowDoc {
            tasks: self
                .tasks
                .iter()
                .map(|t| TaskDoc {
                    id: t.id.clone(),
                    work: t.work,
                    mem: t.mem_demand,
                    class: t.required_class.clone(),
                    labels: t.labels.clone(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    src: e.src.clone(),
                    dst: e.dst.clone(),
                    data: e.data,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("workflow serializes")
    }
}

fn kahn_order(
    ids: &[&str],
    preds: &[Vec<(usize, f64)>],
    succs: &[Vec<(usize, f64)>],
) -> Result<Vec<usize>, ModelError> {
    let n = ids.len();
    let mut indegree: Vec<usize> = preds.iter().map(Vec::len).collect();
    let mut ready: BinaryHeap<Reverse<(&str, usize)>> = (0..n)
        .filter(|&i| indegree[i] == 0)
        .map(|i| Reverse((ids[i], i)))
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse((_, i))) = ready.pop() {
        order.push(i);
        for &(s, _) in &succs[i] {
            indegree[s] -= 1;
            if indegree[s] == 0 {
                ready.push(Reverse((ids[s], s)));
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }

    let in_residual: Vec<bool> = indegree.iter().map(|&d| d > 0).collect();
    let mut residual: Vec<&str> = (0..n).filter(|&i| in_residual[i]).map(|i| ids[i]).collect();
    residual.sort_unstable();

    // Every residual task has a residual predecessor; walking predecessors
    // from any of them must revisit a task, closing a cycle.
    let start = (0..n)
        .filter(|&i| in_residual[i])
        .min_by_key(|&i| ids[i])
        .expect("residual is non-empty");
    let mut walk = vec![start];
    let mut position = HashMap::from([(start, 0usize)]);
    let cycle_start = loop {
        let cur = *walk.last().unwrap();
        let prev = preds[cur]
            .iter()
            .map(|&(p, _)| p)
            .filter(|&p| in_residual[p])
            .min_by_key(|&p| ids[p])
            .expect("residual task has a residual predecessor");
        if let Some(&pos) = position.get(&prev) {
            break pos;
        }
        position.insert(prev, walk.len());
        walk.push(prev);
    };
    // `walk` follows edges backwards; reverse to edge order.
    let mut cycle: Vec<&str> = walk[cycle_start..].iter().rev().map(|&i| ids[i]).collect();
    let min_pos = (0..cycle.len()).min_by_key(|&k| cycle[k]).unwrap();
    cycle.rotate_left(min_pos);

    Err(ModelError::Cycle {
        cycle: cycle.into_iter().map(String::from).collect(),
        residual: residual.into_iter().map(String::from).collect(),
    })
}

/// Topological order of the workflow's task ids.
///
/// Kahn's algorithm, always releasing the ready task with the smallest id, so
/// the order is fully determined by the graph. On a cyclic graph the error
/// lists the unresolvable residual tasks.
pub fn validate_dag(workflow: &Workflow) -> Result<Vec<String>, ModelError> {
    let ids: Vec<&str> = workflow.tasks.iter().map(|t| t.id.as_str()).collect();
    let order = kahn_order(&ids, &workflow.preds, &workflow.succs)?;
    Ok(order.into_iter().map(|i| ids[i].to_string()).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeSpec {
    pub id: String,
    /// Work units per second.
    pub speed: f64,
    /// GiB.
    pub mem_capacity: f64,
    pub class: String,
    /// Watts drawn while running a task.
    pub p_busy: f64,
    /// Watts drawn while powered but idle.
    pub p_idle: f64,
}

impl NodeSpec {
    /// Whether `task` may run here: class affinity and memory both fit.
    pub fn admits(&self, task: &Task) -> bool {
        task.required_class
            .as_ref()
            .is_none_or(|c| *c == self.class)
            && task.mem_demand <= self.mem_capacity
    }

    /// Execution time of `work` on this node.
    pub fn exec_time(&self, work: f64) -> f64 {
        work / self.speed
    }
}

/// Validated set of nodes sharing one uniform inter-node link.
#[derive(Debug, Clone)]
pub struct ClusterSpec {
    nodes: Vec<NodeSpec>,
    bandwidth: f64,
    index: HashMap<String, usize>,
    by_id: Vec<usize>,
}

impl PartialEq for ClusterSpec {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.bandwidth == other.bandwidth
    }
}

impl ClusterSpec {
    pub fn new(nodes: Vec<NodeSpec>, bandwidth: f64) -> Result<Self, ModelError> {
        if nodes.is_empty() {
            return Err(ModelError::EmptyCluster);
        }
        if !(bandwidth.is_finite() && bandwidth > 0.0) {
            return Err(ModelError::InvalidBandwidth(bandwidth));
        }
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, node) in nodes.iter().enumerate() {
            let invalid = |reason: String| ModelError::InvalidNode {
                id: node.id.clone(),
                reason,
            };
            if !(node.speed.is_finite() && node.speed > 0.0) {
                return Err(invalid(format!(
                    "speed must be positive, got {}",
                    node.speed
                )));
            }
            if !(node.mem_capacity.is_finite() && node.mem_capacity > 0.0) {
                return Err(invalid(format!(
                    "mem must be positive, got {}",
                    node.mem_capacity
                )));
            }
            if !(node.p_busy.is_finite() && node.p_busy > 0.0) {
                return Err(invalid(format!(
                    "p_busy must be positive, got {}",
                    node.p_busy
                )));
            }
            if !(node.p_idle.is_finite() && node.p_idle >= 0.0) {
                return Err(invalid(format!(
                    "p_idle must be non-negative, got {}",
                    node.p_idle
                )));
            }
            if node.p_idle > node.p_busy {
                return Err(invalid(format!(
                    "p_idle {} exceeds p_busy {}",
                    node.p_idle, node.p_busy
                )));
            }
            if index.insert(node.id.clone(), i).is_some() {
                return Err(ModelError::DuplicateNode(node.id.clone()));
            }
        }
        let mut by_id: Vec<usize> = (0..nodes.len()).collect();
        by_id.sort_by(|&a, &b| nodes[a].id.cmp(&nodes[b].id));
        Ok(Self {
            nodes,
            bandwidth,
            index,
            by_id,
        })
    }

    pub fn nodes(&self) -> &[NodeSpec] {
        &self.nodes
    }

    pub fn node(&self, idx: usize) -> &NodeSpec {
        &self.nodes[idx]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Node indices sorted by ascending node id.
    pub fn by_id(&self) -> &[usize] {
        &self.by_id
    }

    pub fn max_speed(&self) -> f64 {
        self.nodes.iter().map(|n| n.speed).fold(0.0, f64::max)
    }

    /// Transfer time for `data` between two distinct nodes.
    pub fn comm_time(&self, data: f64) -> f64 {
        data / self.bandwidth
    }

    /// Nodes that admit `task`, in ascending id order.
    pub fn feasible_nodes(&self, task: &Task) -> Vec<usize> {
        self.by_id
            .iter()
            .copied()
            .filter(|&n| self.nodes[n].admits(task))
            .collect()
    }

    /// Copy keeping only the nodes for which `keep` is true.
    pub fn retain(&self, mut keep: impl FnMut(&NodeSpec) -> bool) -> Result<Self, ModelError> {
        let nodes = self.nodes.iter().filter(|n| keep(n)).cloned().collect();
        Self::new(nodes, self.bandwidth)
    }

    pub fn to_json(&self) -> String {
        let doc = ClusterDoc {
            bandwidth: self.bandwidth,
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeDoc {
                    id: n.id.clone(),
                    speed: n.speed,
                    mem: n.mem_capacity,
                    class: n.class.clone(),
                    p_busy: n.p_busy,
                    p_idle: n.p_idle,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("cluster serializes")
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WorkflowDoc {
    tasks: Vec<TaskDoc>,
    #[serde(default)]
    edges: Vec<EdgeDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TaskDoc {
    id: String,
    work: f64,
    #[serde(default)]
    mem: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    class: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    labels: BTreeSet<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    src: String,
    dst: String,
    #[serde(default)]
    data: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClusterDoc {
    bandwidth: f64,
    nodes: Vec<NodeDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: String,
    speed: f64,
    mem: f64,
    class: String,
    p_busy: f64,
    p_idle: f64,
}

/// Parses a canonical workflow document.
pub fn parse_workflow(text: &str) -> Result<Workflow, ModelError> {
    let doc: WorkflowDoc =
        serde_json::from_str(text).map_err(|e| ModelError::Malformed(e.to_string()))?;
    let tasks = doc
        .tasks
        .into_iter()
        .map(|t| Task {
            id: t.id,
            work: t.work,
            mem_demand: t.mem,
            required_class: t.class,
            labels: t.labels,
        })
        .collect();
    let edges = doc
        .edges
        .into_iter()
        .map(|e| DependencyEdge {
            src: e.src,
            dst: e.dst,
            data: e.data,
        })
        .collect();
    Workflow::new(tasks, edges)
}

/// Parses a canonical cluster document.
pub fn parse_cluster(text: &str) -> Result<ClusterSpec, ModelError> {
    let doc: ClusterDoc =
        serde_json::from_str(text).map_err(|e| ModelError::Malformed(e.to_string()))?;
    let nodes = doc
        .nodes
        .into_iter()
        .map(|n| NodeSpec {
            id: n.id,
            speed: n.speed,
            mem_capacity: n.mem,
            class: n.class,
            p_busy: n.p_busy,
            p_idle: n.p_idle,
        })
        .collect();
    ClusterSpec::new(nodes, doc.bandwidth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn minimal_workflow() {
        let wf = parse_workflow(r#"{"tasks": [{"id": "A", "work": 5}]}"#).unwrap();
        assert_eq!(wf.len(), 1);
        assert!(wf.edges().is_empty());
        assert_eq!(wf.task(0).mem_demand, 0.0);
    }

    #[test]
    fn two_cycle_is_reported() {
        let err = parse_workflow(
            r#"{"tasks": [{"id": "A", "work": 1}, {"id": "B", "work": 1}],
                "edges": [{"src": "A", "dst": "B"}, {"src": "B", "dst": "A"}]}"#,
        )
        .unwrap_err();
        match err {
            ModelError::Cycle { cycle, residual } => {
                assert_eq!(cycle, vec!["A", "B"]);
                assert_eq!(residual, vec!["A", "B"]);
            }
            other => panic!("expected cycle, got {other:?}"),
        }
    }

    #[test]
    fn cycle_excludes_downstream_tasks() {
        // X -> Y -> Z -> X, plus Z -> W hanging off the cycle.
        let tasks = ["W", "X", "Y", "Z"].map(|id| Task::new(id, 1.0)).to_vec();
        let edges = vec![
            DependencyEdge::new("X", "Y", 0.0),
            DependencyEdge::new("Y", "Z", 0.0),
            DependencyEdge::new("Z", "X", 0.0),
            DependencyEdge::new("Z", "W", 0.0),
        ];
        match Workflow::new(tasks, edges).unwrap_err() {
            ModelError::Cycle { cycle, residual } => {
                assert_eq!(cycle, vec!["X", "Y", "Z"]);
                assert_eq!(residual, vec!["W", "X", "Y", "Z"]);
            }
            other => panic!("expected cycle, got {other:?}"),
        }
    }

    #[test]
    fn workflow_errors() {
        let dup = r#"{"tasks": [{"id": "A", "work": 1}, {"id": "A", "work": 2}]}"#;
        assert_eq!(
            parse_workflow(dup).unwrap_err(),
            ModelError::DuplicateTask("A".into())
        );

        let unknown = r#"{"tasks": [{"id": "A", "work": 1}], "edges": [{"src": "A", "dst": "Q"}]}"#;
        assert!(matches!(
            parse_workflow(unknown).unwrap_err(),
            ModelError::UnknownTask { missing, .. } if missing == "Q"
        ));

        let zero = r#"{"tasks": [{"id": "A", "work": 0}]}"#;
        assert!(matches!(
            parse_workflow(zero).unwrap_err(),
            ModelError::InvalidTask { .. }
        ));

        let extra = r#"{"tasks": [{"id": "A", "work": 1, "cores": 4}]}"#;
        assert!(matches!(
            parse_workflow(extra).unwrap_err(),
            ModelError::Malformed(_)
        ));

        assert!(matches!(
            parse_workflow("{not json").unwrap_err(),
            ModelError::Malformed(_)
        ));
        assert_eq!(
            parse_workflow(r#"{"tasks": []}"#).unwrap_err(),
            ModelError::EmptyWorkflow
        );

        let self_loop =
            r#"{"tasks": [{"id": "A", "work": 1}], "edges": [{"src": "A", "dst": "A"}]}"#;
        assert!(matches!(
            parse_workflow(self_loop).unwrap_err(),
            ModelError::InvalidEdge { .. }
        ));
        let twice = r#"{"tasks": [{"id": "A", "work": 1}, {"id": "B", "work": 1}],
            "edges": [{"src": "A", "dst": "B"}, {"src": "A", "dst": "B", "data": 2}]}"#;
        assert!(matches!(
            parse_workflow(twice).unwrap_err(),
            ModelError::InvalidEdge { .. }
        ));
    }

    #[test]
    fn cluster_parsing() {
        let one = r#"{"bandwidth": 4, "nodes": [
            {"id": "N1", "speed": 1, "mem": 8, "class": "hpc", "p_busy": 100, "p_idle": 10}]}"#;
        let c = parse_cluster(one).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.bandwidth(), 4.0);

        let dup = r#"{"bandwidth": 4, "nodes": [
            {"id": "N1", "speed": 1, "mem": 8, "class": "hpc", "p_busy": 100, "p_idle": 10},
            {"id": "N1", "speed": 2, "mem": 8, "class": "hpc", "p_busy": 100, "p_idle": 10}]}"#;
        assert_eq!(
            parse_cluster(dup).unwrap_err(),
            ModelError::DuplicateNode("N1".into())
        );

        let slow = one.replace(r#""speed": 1"#, r#""speed": 0"#);
        assert!(matches!(
            parse_cluster(&slow).unwrap_err(),
            ModelError::InvalidNode { .. }
        ));
        let idle = one.replace(r#""p_idle": 10"#, r#""p_idle": 101"#);
        assert!(matches!(
            parse_cluster(&idle).unwrap_err(),
            ModelError::InvalidNode { .. }
        ));
        let bw = one.replace(r#""bandwidth": 4"#, r#""bandwidth": 0"#);
        assert_eq!(
            parse_cluster(&bw).unwrap_err(),
            ModelError::InvalidBandwidth(0.0)
        );
    }

    #[test]
    fn fixtures_parse() {
        let het2 = fixtures::chain3().cluster;
        assert_eq!(het2.len(), 2);
        assert_eq!(het2.node(0).speed, 1.0);
        assert_eq!(het2.node(1).speed, 2.0);
        assert_eq!(het2.bandwidth(), 4.0);

        let chain = fixtures::chain3().workflow;
        assert_eq!(chain.len(), 3);
        assert_eq!(chain.edges().len(), 2);
        assert_eq!(validate_dag(&chain).unwrap(), vec!["A", "B", "C"]);
    }

    #[test]
    fn topological_orders() {
        let diamond = fixtures::diamond4().workflow;
        assert_eq!(validate_dag(&diamond).unwrap(), vec!["A", "B", "C", "D"]);
        let single = fixtures::single().workflow;
        assert_eq!(validate_dag(&single).unwrap(), vec!["T"]);
    }

    #[test]
    fn ties_break_by_id_not_document_order() {
        let tasks = ["z", "b", "a"].map(|id| Task::new(id, 1.0)).to_vec();
        let wf = Workflow::new(tasks, vec![]).unwrap();
        assert_eq!(validate_dag(&wf).unwrap(), vec!["a", "b", "z"]);
    }

    #[test]
    fn feasibility_respects_class_and_memory() {
        let cluster = fixtures::chain3().cluster;
        let small = Task::new("x", 1.0).with_mem(1.0);
        assert_eq!(cluster.feasible_nodes(&small), vec![0, 1]);
        let huge = Task::new("x", 1.0).with_mem(1e9);
        assert!(cluster.feasible_nodes(&huge).is_empty());
        let pinned = Task::new("x", 1.0).with_class("nowhere");
        assert!(cluster.feasible_nodes(&pinned).is_empty());
    }
}
