//! Digital-twin inputs: carbon-intensity trace playback, node telemetry, and
//! threshold-based anomaly exclusion.

use thiserror::Error;

use crate::model::ClusterSpec;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TwinError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("carbon trace has no breakpoints")]
    EmptyTrace,
    #[error("carbon trace must start at t=0, starts at {0}")]
    FirstNotZero(f64),
    #[error("breakpoint {index} at t={time} does not follow t={previous}")]
    NotAscending {
        index: usize,
        previous: f64,
        time: f64,
    },
    #[error("negative intensity {intensity} at t={time}")]
    NegativeIntensity { time: f64, intensity: f64 },
    #[error("trace queried at negative time {0}")]
    NegativeTime(f64),
    #[error("node `{node}` reports load {load} outside [0, 1]")]
    InvalidLoad { node: String, load: f64 },
    #[error("invalid anomaly policy: {0}")]
    InvalidPolicy(String),
    #[error("every node was excluded as anomalous")]
    NoHealthyNodes,
}

/// Piecewise-constant carbon intensity in g CO2 per kWh.
///
/// Breakpoint `(t, i)` sets the intensity to `i` from `t` (inclusive) until
/// the next breakpoint; the last value holds forever.
#[derive(Debug, Clone, PartialEq)]
pub struct CarbonTrace {
    points: Vec<(f64, f64)>,
}

impl CarbonTrace {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, TwinError> {
        let Some(&(first, _)) = points.first() else {
            return Err(TwinError::EmptyTrace);
        };
        if first != 0.0 {
            return Err(TwinError::FirstNotZero(first));
        }
        for (k, &(time, intensity)) in points.iter().enumerate() {
            if !time.is_finite() {
                return Err(TwinError::Malformed(format!("time {time}")));
            }
            if k > 0 && time.partial_cmp(&points[k - 1].0) != Some(std::cmp::Ordering::Greater) {
                return Err(TwinError::NotAscending {
                    index: k,
                    previous: points[k - 1].0,
                    time,
                });
            }
            if !(intensity.is_finite() && intensity >= 0.0) {
                return Err(TwinError::NegativeIntensity { time, intensity });
            }
        }
        Ok(Self { points })
    }

    pub fn constant(intensity: f64) -> Result<Self, TwinError> {
        Self::new(vec![(0.0, intensity)])
    }

    /// Parses `time_seconds,intensity_g_per_kwh` lines; a header line is
    /// skipped when its first field is not a number.
    pub fn parse(text: &str) -> Result<Self, TwinError> {
        let rows = read_rows(text)?;
        let mut points = Vec::with_capacity(rows.len());
        for (k, row) in rows.iter().enumerate() {
            if row.len() != 2 {
                return Err(TwinError::Malformed(format!(
                    "expected 2 fields, got {}",
                    row.len()
                )));
            }
            let time = row[0].parse::<f64>();
            if k == 0 && time.is_err() {
                continue;
            }
            let time = time.map_err(|_| TwinError::Malformed(format!("bad time `{}`", row[0])))?;
            let intensity = row[1]
                .parse::<f64>()
                .map_err(|_| TwinError::Malformed(format!("bad intensity `{}`", row[1])))?;
            points.push((time, intensity));
        }
        Self::new(points)
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Intensity in effect at `t`.
    pub fn intensity_at(&self, t: f64) -> Result<f64, TwinError> {
        if t.is_nan() || t < 0.0 {
            return Err(TwinError::NegativeTime(t));
        }
        let k = self.points.partition_point(|&(time, _)| time <= t);
        Ok(self.points[k - 1].1)
    }
}

/// Alias for [`CarbonTrace::parse`].
pub fn load_trace(text: &str) -> Result<CarbonTrace, TwinError> {
    CarbonTrace::parse(text)
}

fn read_rows(text: &str) -> Result<Vec<Vec<String>>, TwinError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    reader
        .records()
        .map(|r| {
            r.map(|rec| rec.iter().map(String::from).collect::<Vec<String>>())
                .map_err(|e| TwinError::Malformed(e.to_string()))
        })
        .filter(|r| !matches!(r, Ok(fields) if fields.iter().all(|f: &String| f.is_empty())))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeReading {
    pub node: String,
    /// Fraction in `[0, 1]`.
    pub load: f64,
    /// Degrees Celsius.
    pub temperature: f64,
    /// Watts.
    pub power: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TelemetrySnapshot {
    pub timestamp: f64,
    pub readings: Vec<NodeReading>,
}

impl TelemetrySnapshot {
    pub fn new(timestamp: f64, readings: Vec<NodeReading>) -> Result<Self, TwinError> {
        for r in &readings {
            if !(0.0..=1.0).contains(&r.load) {
                return Err(TwinError::InvalidLoad {
                    node: r.node.clone(),
                    load: r.load,
                });
            }
        }
        Ok(Self {
            timestamp,
            readings,
        })
    }

    /// Parses `node,load,temperature,power` lines, header optional. The
    /// timestamp is set to 0.
    pub fn parse(text: &str) -> Result<Self, TwinError> {
        let rows = read_rows(text)?;
        let mut readings = Vec::with_capacity(rows.len());
        for (k, row) in rows.iter().enumerate() {
            if row.len() != 4 {
                return Err(TwinError::Malformed(format!(
                    "expected 4 fields, got {}",
                    row.len()
                )));
            }
            if k == 0 && row[1].parse::<f64>().is_err() {
                continue;
            }
            let num = |i: usize| {
                row[i]
                    .parse::<f64>()
                    .map_err(|_| TwinError::Malformed(format!("bad number `{}`", row[i])))
            };
            readings.push(NodeReading {
                node: row[0].clone(),
                load: num(1)?,
                temperature: num(2)?,
                power: num(3)?,
            });
        }
        Self::new(0.0, readings)
    }
}

/// Thresholds above which a node is considered anomalous.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnomalyPolicy {
    pub temp_limit: f64,
    pub load_limit: f64,
}

impl AnomalyPolicy {
    pub fn new(temp_limit: f64, load_limit: f64) -> Result<Self, TwinError> {
        if temp_limit.is_nan() || temp_limit <= 0.0 {
            return Err(TwinError::InvalidPolicy(format!(
                "temp_limit must be positive, got {temp_limit}"
            )));
        }
        if !(load_limit > 0.0 && load_limit <= 1.0) {
            return Err(TwinError::InvalidPolicy(format!(
                "load_limit must be in (0, 1], got {load_limit}"
            )));
        }
        Ok(Self {
            temp_limit,
            load_limit,
        })
    }

    pub fn is_anomalous(&self, reading: &NodeReading) -> bool {
        reading.temperature > self.temp_limit || reading.load > self.load_limit
    }
}

/// Drops every node whose reading breaches `policy`. Nodes absent from the
/// snapshot are kept, and readings for nodes not in `cluster` are ignored,
/// which makes filtering twice with one snapshot the same as filtering once.
pub fn filter_nodes(
    cluster: &ClusterSpec,
    snapshot: &TelemetrySnapshot,
    policy: &AnomalyPolicy,
) -> Result<ClusterSpec, TwinError> {
    let excluded: Vec<&str> = snapshot
        .readings
        .iter()
        .filter(|r| policy.is_anomalous(r))
        .map(|r| r.node.as_str())
        .collect();
    cluster
        .retain(|n| !excluded.contains(&n.id.as_str()))
        .map_err(|_| TwinError::NoHealthyNodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn trace_parsing() {
        let t = load_trace("0,300\n3600,500").unwrap();
        assert_eq!(t.breakpoints(), &[(0.0, 300.0), (3600.0, 500.0)]);
        assert!(matches!(
            load_trace("0,300\n0,500").unwrap_err(),
            TwinError::NotAscending { index: 1, .. }
        ));
        assert_eq!(
            load_trace("0,400").unwrap(),
            CarbonTrace::constant(400.0).unwrap()
        );
        assert_eq!(
            load_trace("5,400").unwrap_err(),
            TwinError::FirstNotZero(5.0)
        );
        assert!(matches!(
            load_trace("0,-1").unwrap_err(),
            TwinError::NegativeIntensity { .. }
        ));
        assert_eq!(load_trace("").unwrap_err(), TwinError::EmptyTrace);
        assert!(load_trace("0,1,2").is_err());
        let with_header = load_trace("time_seconds,intensity_g_per_kwh\n0,300\n4,600\n").unwrap();
        assert_eq!(with_header.breakpoints().len(), 2);
    }

    #[test]
    fn intensity_lookup() {
        let t = load_trace("0,300\n3600,500").unwrap();
        assert_eq!(t.intensity_at(0.0).unwrap(), 300.0);
        assert_eq!(t.intensity_at(1800.0).unwrap(), 300.0);
        assert_eq!(t.intensity_at(3600.0).unwrap(), 500.0);
        assert_eq!(t.intensity_at(1e6).unwrap(), 500.0);
        assert_eq!(
            t.intensity_at(-1.0).unwrap_err(),
            TwinError::NegativeTime(-1.0)
        );
    }

    fn reading(node: &str, load: f64, temperature: f64) -> NodeReading {
        NodeReading {
            node: node.into(),
            load,
            temperature,
            power: 0.0,
        }
    }

    #[test]
    fn hot_node_is_excluded() {
        let cluster = fixtures::chain3().cluster;
        let snap = TelemetrySnapshot::parse(fixtures::HET2_SNAPSHOT).unwrap();
        let policy = AnomalyPolicy::new(90.0, 0.9).unwrap();
        let kept = filter_nodes(&cluster, &snap, &policy).unwrap();
        assert_eq!(kept.len(), 1);
        assert_eq!(kept.node(0), cluster.node(0));
    }

    #[test]
    fn healthy_cluster_is_unchanged() {
        let cluster = fixtures::chain3().cluster;
        let snap = TelemetrySnapshot::new(
            0.0,
            vec![reading("N1", 0.1, 40.0), reading("N2", 0.5, 60.0)],
        )
        .unwrap();
        let policy = AnomalyPolicy::new(90.0, 0.9).unwrap();
        assert_eq!(filter_nodes(&cluster, &snap, &policy).unwrap(), cluster);
    }

    #[test]
    fn all_anomalous_is_an_error() {
        let cluster = fixtures::chain3().cluster;
        let snap = TelemetrySnapshot::new(
            0.0,
            vec![reading("N1", 0.95, 40.0), reading("N2", 0.1, 99.0)],
        )
        .unwrap();
        let policy = AnomalyPolicy::new(90.0, 0.9).unwrap();
        assert_eq!(
            filter_nodes(&cluster, &snap, &policy).unwrap_err(),
            TwinError::NoHealthyNodes
        );
    }

    #[test]
    fn snapshot_and_policy_validation() {
        assert!(matches!(
            TelemetrySnapshot::new(0.0, vec![reading("N1", 1.5, 40.0)]).unwrap_err(),
            TwinError::InvalidLoad { .. }
        ));
        assert!(AnomalyPolicy::new(0.0, 0.5).is_err());
        assert!(AnomalyPolicy::new(80.0, 0.0).is_err());
        assert!(AnomalyPolicy::new(80.0, 1.0).is_ok());
        assert!(TelemetrySnapshot::parse("N1,0.5,40").is_err());

        let cluster = fixtures::chain3().cluster;
        let snap = TelemetrySnapshot::new(0.0, vec![reading("N9", 0.1, 40.0)]).unwrap();
        let policy = AnomalyPolicy::new(90.0, 0.9).unwrap();
        assert_eq!(filter_nodes(&cluster, &snap, &policy).unwrap(), cluster);
    }
}
