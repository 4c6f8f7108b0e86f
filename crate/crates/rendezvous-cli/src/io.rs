//! Instance files, exact-rational strings, and run records.
//!
//! Instances travel as JSON:
//!
//! ```json
//! {
//!   "nodes": [0, 1, 2],
//!   "edges": [{"u": 0, "v": 1, "wA": 1, "wB": 3}],
//!   "sA": 0,
//!   "sB": 1
//! }
//! ```
//!
//! Times and fractions are exact rationals rendered as `"p/q"` (plain `"p"`
//! when integral), never floats.

use std::path::Path;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use rendezvous_core::graph::WeightError;
use rendezvous_core::oracle::MeetingLocation;
use rendezvous_core::simulator::{MeetingKind, RunOutcome};
use rendezvous_core::{Graph, GraphError, Instance, InstanceError, NodeId, WeightFn};

#[derive(Debug, Error)]
pub enum InstanceIoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed instance JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// One edge of the wire format, carrying both agents' weights.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeFile {
    pub u: u64,
    pub v: u64,
    #[serde(rename = "wA")]
    pub w_a: u64,
    #[serde(rename = "wB")]
    pub w_b: u64,
}

/// The on-disk instance format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub nodes: Vec<u64>,
    pub edges: Vec<EdgeFile>,
    #[serde(rename = "sA")]
    pub s_a: u64,
    #[serde(rename = "sB")]
    pub s_b: u64,
}

impl InstanceFile {
    pub fn from_instance(instance: &Instance) -> Self {
        let graph = instance.graph();
        let edges = graph
            .edges()
            .map(|e| EdgeFile {
                u: e.u.0,
                v: e.v.0,
                w_a: instance.weights_a().get(e.index),
                w_b: instance.weights_b().get(e.index),
            })
            .collect();
        InstanceFile {
            nodes: graph.nodes().map(|n| n.0).collect(),
            edges,
            s_a: instance.start_a().0,
            s_b: instance.start_b().0,
        }
    }

    pub fn to_instance(&self) -> Result<Instance, InstanceIoError> {
        let pairs: Vec<(u64, u64)> = self.edges.iter().map(|e| (e.u, e.v)).collect();
        let graph = Graph::new(&self.nodes, &pairs)?;
        let m = self.edges.len();
        let w_a = WeightFn::new(self.edges.iter().map(|e| e.w_a).collect(), m)?;
        let w_b = WeightFn::new(self.edges.iter().map(|e| e.w_b).collect(), m)?;
        Ok(Instance::new(graph, w_a, w_b, NodeId(self.s_a), NodeId(self.s_b))?)
    }
}

pub fn instance_to_json(instance: &Instance) -> String {
    serde_json::to_string_pretty(&InstanceFile::from_instance(instance))
        .expect("instance files always serialize")
}

pub fn parse_instance_json(text: &str) -> Result<Instance, InstanceIoError> {
    let file: InstanceFile = serde_json::from_str(text)?;
    file.to_instance()
}

pub fn read_instance(path: &Path) -> Result<Instance, InstanceIoError> {
    let text = std::fs::read_to_string(path).map_err(|source| InstanceIoError::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse_instance_json(&text)
}

pub fn write_instance(path: &Path, instance: &Instance) -> Result<(), InstanceIoError> {
    std::fs::write(path, instance_to_json(instance) + "\n").map_err(|source| {
        InstanceIoError::Write {
            path: path.display().to_string(),
            source,
        }
    })
}

/// Render an exact rational as `"p/q"`, or plain `"p"` when it is integral.
pub fn rational_string(value: &BigRational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RationalParseError {
    #[error("expected `p` or `p/q`, got {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Parse `"p"` or `"p/q"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational, RationalParseError> {
    let mut parts = text.splitn(2, '/');
    let numer_text = parts.next().unwrap_or("");
    let numer = BigInt::from_str(numer_text.trim())
        .map_err(|_| RationalParseError::Malformed(text.to_string()))?;
    let denom = match parts.next() {
        None => BigInt::one(),
        Some(d) => BigInt::from_str(d.trim())
            .map_err(|_| RationalParseError::Malformed(text.to_string()))?,
    };
    if denom.is_zero() {
        return Err(RationalParseError::ZeroDenominator(text.to_string()));
    }
    Ok(BigRational::new(numer, denom))
}

/// Where a recorded meeting happened.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeetingRecord {
    /// Exact meeting time, `"p/q"`.
    pub time: String,
    /// `"at-node"`, `"pass"`, or `"overtake"`.
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub node: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge: Option<[u64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fraction: Option<String>,
}

/// One agent's plan, summarized.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanRecord {
    pub origin: u64,
    pub actions: usize,
    pub final_node: u64,
    pub duration: u128,
}

/// Everything a `run` invocation reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub protocol: String,
    pub horizon: u128,
    pub bits_exchanged: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meeting: Option<MeetingRecord>,
    pub plan_a: PlanRecord,
    pub plan_b: PlanRecord,
}

pub fn record_from_outcome(instance: &Instance, outcome: &RunOutcome) -> RunRecord {
    let meeting = outcome.meeting.as_ref().map(|m| {
        let kind = match m.kind {
            MeetingKind::AtNode => "at-node",
            MeetingKind::Pass => "pass",
            MeetingKind::Overtake => "overtake",
        };
        let (node, edge, fraction) = match &m.location {
            MeetingLocation::Node(id) => (Some(id.0), None, None),
            MeetingLocation::EdgeInterior { edge, fraction } => (
                None,
                Some([edge.u.0, edge.v.0]),
                Some(rational_string(fraction)),
            ),
        };
        MeetingRecord {
            time: rational_string(&m.time),
            kind: kind.to_string(),
            node,
            edge,
            fraction,
        }
    });
    let summarize = |plan: &rendezvous_core::protocols::Plan, w: &WeightFn| PlanRecord {
        origin: plan.origin.0,
        actions: plan.actions.len(),
        final_node: plan.final_node().0,
        duration: plan.duration(w),
    };
    RunRecord {
        protocol: outcome.protocol.to_string(),
        horizon: outcome.horizon,
        bits_exchanged: outcome.bits_exchanged,
        meeting,
        plan_a: summarize(&outcome.plan_a, instance.weights_a()),
        plan_b: summarize(&outcome.plan_b, instance.weights_b()),
    }
}

pub fn record_to_json(record: &RunRecord) -> String {
    serde_json::to_string_pretty(record).expect("run records always serialize")
}
