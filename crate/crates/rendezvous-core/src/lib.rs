//! Deterministic simulation of the two-agent rendezvous problem on connected
//! graphs where each agent has its own integer edge-traversal costs.
//!
//! The crate is organized bottom-up:
//!
//! * [`graph`] — the shared graph model, per-agent weight functions, shortest
//!   paths with lexicographic tie-breaking, dyadic interval indices and
//!   bottleneck thresholds;
//! * [`oracle`] — offline optima computed with full knowledge of both weight
//!   functions: the best meeting node and the exact optimal meeting time
//!   (which may lie in the interior of an edge);
//! * [`message`] — the bit-exact encoding layer for the single message
//!   exchange (Elias-gamma and fixed-width fields);
//! * [`protocols`] — the four rendezvous strategies, each mapping one agent's
//!   partial view (and the received message, if any) to a deterministic plan;
//! * [`simulator`] — exact trajectory realization and first-meeting detection
//!   with rational meeting times;
//! * [`generators`] — deterministic instance families used by the test suites
//!   and the benchmark harness.

pub mod graph;
pub mod oracle;
pub mod message;
#[path = "protocols/mod.rs"]
pub mod protocols;
pub mod simulator;
pub mod generators;

pub use graph::{
    bottleneck_threshold, interval_index, sorted_edges, Edge, Graph, GraphError, Instance,
    InstanceClass, InstanceError, NodeId, WeightFn,
};
