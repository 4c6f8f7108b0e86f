//! The four rendezvous strategies. Each maps one agent's *partial* view of
//! the instance — the graph, both start nodes, and only that agent's own
//! weight function — plus the message received at time zero (if the strategy
//! uses one) to a deterministic [`Plan`]. Both agents run the same code; any
//! asymmetry is derived from comparable public data (start node identifiers),
//! never from which weight function the agent happens to hold.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Edge, Graph, Instance, InstanceClass, NodeId, WeightFn};
use crate::message::MessageError;

mod a1;
mod a2;
mod a3;
mod a4;

pub use a1::{a1_encode, a1_plan, a1_schema};
pub use a2::{
    a2_encode, a2_encode_round1, a2_encode_round2, a2_plan, a2_resolve, a2_schema,
    a2_threshold_index, A2ExchangeMode, A2Resolution, EdgeApprox,
};
pub use a3::{a3_plan, a3_plan_lambda};
pub use a4::{a4_plan, a4_stage_meeting_deadline};

/// Which of the instance's two agents a view belongs to. This is a label for
/// wiring views up, not a source of asymmetry: protocol logic never branches
/// on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agent {
    A,
    B,
}

/// Everything one agent knows before moving: the graph, both start nodes and
/// its own weight function. Constructing a view is the only place the full
/// instance is touched; protocol code cannot reach the other agent's weights.
#[derive(Debug, Clone)]
pub struct AgentView<'a> {
    graph: &'a Graph,
    own_start: NodeId,
    other_start: NodeId,
    own_weights: &'a WeightFn,
}

impl<'a> AgentView<'a> {
    pub fn of(instance: &'a Instance, agent: Agent) -> Self {
        let (own_start, other_start, own_weights) = match agent {
            Agent::A => (instance.start_a(), instance.start_b(), instance.weights_a()),
            Agent::B => (instance.start_b(), instance.start_a(), instance.weights_b()),
        };
        AgentView { graph: instance.graph(), own_start, other_start, own_weights }
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    pub fn own_start(&self) -> NodeId {
        self.own_start
    }

    pub fn other_start(&self) -> NodeId {
        self.other_start
    }

    pub fn own_weights(&self) -> &WeightFn {
        self.own_weights
    }
}

/// One step of a plan. Waits are positive integer durations; traversals name
/// the edge and the endpoint they depart from, and take the moving agent's
/// own weight of that edge in time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    Wait(u128),
    Traverse { edge: Edge, from: NodeId },
}

/// A deterministic itinerary: a start node and a finite action sequence.
/// After the last action the agent stays where it is forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    pub origin: NodeId,
    pub actions: Vec<Action>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlanError {
    #[error("wait durations must be positive")]
    ZeroWait,
    #[error("action {index}: traversal departs from {from}, but the agent is at {at}")]
    DisconnectedStep { index: usize, from: u64, at: u64 },
    #[error("action {index}: node {from} is not an endpoint of edge {edge}")]
    NotAnEndpoint { index: usize, from: u64, edge: usize },
}

impl Plan {
    /// Check the action sequence is walkable: waits are positive and each
    /// traversal departs from the node the previous actions end at.
    pub fn validate(&self) -> Result<(), PlanError> {
        let mut at = self.origin;
        for (index, action) in self.actions.iter().enumerate() {
            match action {
                Action::Wait(0) => return Err(PlanError::ZeroWait),
                Action::Wait(_) => {}
                Action::Traverse { edge, from } => {
                    if *from != edge.u && *from != edge.v {
                        return Err(PlanError::NotAnEndpoint {
                            index,
                            from: from.0,
                            edge: edge.index,
                        });
                    }
                    if *from != at {
                        return Err(PlanError::DisconnectedStep {
                            index,
                            from: from.0,
                            at: at.0,
                        });
                    }
                    at = if *from == edge.u { edge.v } else { edge.u };
                }
            }
        }
        Ok(())
    }

    /// Where the plan ends (and the agent then stays forever).
    pub fn final_node(&self) -> NodeId {
        let mut at = self.origin;
        for action in &self.actions {
            if let Action::Traverse { edge, from } = action {
                at = if *from == edge.u { edge.v } else { edge.u };
            }
        }
        at
    }

    /// Total time the plan takes under the given weight function.
    pub fn duration(&self, w: &WeightFn) -> u128 {
        self.actions
            .iter()
            .map(|action| match action {
                Action::Wait(d) => *d,
                Action::Traverse { edge, .. } => u128::from(w.get(edge.index)),
            })
            .sum()
    }
}

/// Append a path (as produced by [`Graph::shortest_path`]) to an action list,
/// starting from `at`; returns the node the path ends at.
pub(crate) fn push_path(actions: &mut Vec<Action>, path: &[Edge], mut at: NodeId) -> NodeId {
    for &edge in path {
        actions.push(Action::Traverse { edge, from: at });
        at = if at == edge.u { edge.v } else { edge.u };
    }
    at
}

/// Stable identifiers for the implemented strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolId {
    /// Exchange per-node distance interval indices; meet at the node with the
    /// best shared bound. Works on arbitrary instances.
    A1Arbitrary,
    /// Exchange per-interval edge counts over the shared edge ordering;
    /// requires the ordered-edges class.
    A2OrderedEdges,
    /// No messages; wait-and-sweep with roles fixed by start node ids;
    /// requires the ordered-agents class.
    A3OrderedAgents,
    /// No messages; tour all nodes with doubled reach each phase. Works on
    /// arbitrary instances.
    A4NoComm,
}

impl ProtocolId {
    pub const ALL: [ProtocolId; 4] = [
        ProtocolId::A1Arbitrary,
        ProtocolId::A2OrderedEdges,
        ProtocolId::A3OrderedAgents,
        ProtocolId::A4NoComm,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProtocolId::A1Arbitrary => "a1-arbitrary",
            ProtocolId::A2OrderedEdges => "a2-ordered-edges",
            ProtocolId::A3OrderedAgents => "a3-ordered-agents",
            ProtocolId::A4NoComm => "a4-no-comm",
        }
    }

    /// The structural class the instance must satisfy, beyond connectivity.
    pub fn required_class(self) -> InstanceClass {
        match self {
            ProtocolId::A1Arbitrary | ProtocolId::A4NoComm => InstanceClass::Arbitrary,
            ProtocolId::A2OrderedEdges => InstanceClass::OrderedEdges,
            ProtocolId::A3OrderedAgents => InstanceClass::OrderedAgents,
        }
    }

    pub fn sends_messages(self) -> bool {
        matches!(self, ProtocolId::A1Arbitrary | ProtocolId::A2OrderedEdges)
    }
}

impl fmt::Display for ProtocolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProtocolId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProtocolId::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = ProtocolId::ALL.iter().map(|p| p.as_str()).collect();
                format!("unknown protocol {s:?}; expected one of {}", names.join(", "))
            })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProtocolError {
    #[error("received message malformed: {0}")]
    Malformed(#[from] MessageError),
    #[error("received message has {got} fields, expected {expected}")]
    WrongFieldCount { expected: usize, got: usize },
    #[error("received counts are inconsistent: {0}")]
    InconsistentCounts(String),
    #[error("no candidate meeting node is reachable for both agents")]
    NoCommonCandidate,
    #[error("the wait scale must be at least 1")]
    ScaleBelowOne,
    #[error("scaled wait duration overflows")]
    WaitOverflow,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphError;

    #[test]
    fn protocol_ids_round_trip() {
        for p in ProtocolId::ALL {
            assert_eq!(p.as_str().parse::<ProtocolId>(), Ok(p));
        }
        assert!("a5-unknown".parse::<ProtocolId>().is_err());
    }

    #[test]
    fn plan_validation_catches_broken_walks() {
        let graph = Graph::new(&[0, 1, 2], &[(0, 1), (1, 2)]).unwrap();
        let e01 = graph.edge(0);
        let e12 = graph.edge(1);

        let ok = Plan {
            origin: NodeId(0),
            actions: vec![
                Action::Wait(2),
                Action::Traverse { edge: e01, from: NodeId(0) },
                Action::Traverse { edge: e12, from: NodeId(1) },
            ],
        };
        assert_eq!(ok.validate(), Ok(()));
        assert_eq!(ok.final_node(), NodeId(2));

        let zero_wait = Plan { origin: NodeId(0), actions: vec![Action::Wait(0)] };
        assert_eq!(zero_wait.validate(), Err(PlanError::ZeroWait));

        let teleport = Plan {
            origin: NodeId(0),
            actions: vec![Action::Traverse { edge: e12, from: NodeId(1) }],
        };
        assert_eq!(
            teleport.validate(),
            Err(PlanError::DisconnectedStep { index: 0, from: 1, at: 0 })
        );

        let wrong_end = Plan {
            origin: NodeId(0),
            actions: vec![Action::Traverse { edge: e12, from: NodeId(0) }],
        };
        assert_eq!(
            wrong_end.validate(),
            Err(PlanError::NotAnEndpoint { index: 0, from: 0, edge: 1 })
        );

        // Unrelated sanity: GraphError is comparable for test assertions.
        assert_ne!(GraphError::Empty, GraphError::Disconnected);
    }

    #[test]
    fn plan_duration_uses_the_owners_weights() {
        let graph = Graph::new(&[0, 1], &[(0, 1)]).unwrap();
        let w = WeightFn::new(vec![7], 1).unwrap();
        let plan = Plan {
            origin: NodeId(0),
            actions: vec![
                Action::Wait(3),
                Action::Traverse { edge: graph.edge(0), from: NodeId(0) },
            ],
        };
        assert_eq!(plan.duration(&w), 10);
    }

    #[test]
    fn views_expose_only_own_weights() {
        let graph = Graph::new(&[0, 1], &[(0, 1)]).unwrap();
        let wa = WeightFn::new(vec![1], 1).unwrap();
        let wb = WeightFn::new(vec![9], 1).unwrap();
        let inst = Instance::new(graph, wa, wb, NodeId(0), NodeId(1)).unwrap();
        let va = AgentView::of(&inst, Agent::A);
        let vb = AgentView::of(&inst, Agent::B);
        assert_eq!(va.own_start(), NodeId(0));
        assert_eq!(va.other_start(), NodeId(1));
        assert_eq!(va.own_weights().get(0), 1);
        assert_eq!(vb.own_start(), NodeId(1));
        assert_eq!(vb.own_weights().get(0), 9);
    }
}
