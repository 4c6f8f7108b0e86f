//! Executing plans on the shared clock and finding the first co-location.
//!
//! A realized plan becomes a [`Trajectory`]: a contiguous list of closed time
//! segments, each either staying at a node or crossing one edge from a named
//! side. All segment boundaries are integers (weights and waits are
//! integers), so trajectories never touch rational arithmetic; exact
//! [`Time`] values appear only when a candidate pair of segments is solved
//! for a crossing, keeping precision without a rational hot path.
//!
//! Meeting detection sweeps both trajectories with two pointers. Segments
//! are closed intervals, so an agent pausing at a node for a single instant
//! between two crossings is still visible to the other agent — the instant
//! is the shared endpoint of its neighbouring segments. Within one
//! overlapping pair, co-location is found exactly: stays meet stays at the
//! overlap start, a stay meets a crossing only when the crossing touches
//! that node at a segment boundary, crossings of different edges can only
//! meet at shared endpoints (again boundaries), and crossings of the same
//! edge reduce to one linear equation over rationals. Edge positions are
//! always measured from the edge's smaller-id endpoint, and boundary hits
//! normalize to node locations, so every meeting has one canonical
//! description and the earliest one is deterministic.

use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::graph::{Graph, Instance, InstanceClass, NodeId, WeightFn};
use crate::message::Message;
use crate::oracle::{rat_int, rendezvous_node, MeetingLocation, MeetingPoint, Time};
use crate::protocols::{
    a1_encode, a1_plan, a1_schema, a2_encode, a2_encode_round1, a2_encode_round2, a2_plan,
    a2_schema, a2_threshold_index, a3_plan, a3_plan_lambda, a4_plan, A2ExchangeMode, AgentView,
    Action, Agent, Plan, PlanError, ProtocolError, ProtocolId,
};

use thiserror::Error;

/// Where an agent is during one segment of its trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Locus {
    /// Parked at the node with this dense position.
    Stay(usize),
    /// Crossing edge `edge`, having entered at the endpoint with dense
    /// position `entered_from` at the segment start.
    Cross { edge: usize, entered_from: usize },
}

/// One closed time interval `[start, end]` of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Segment {
    start: u128,
    end: u128,
    locus: Locus,
}

/// A plan realized on the clock: contiguous closed segments from time 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    segments: Vec<Segment>,
}

impl Trajectory {
    /// Last instant the trajectory describes.
    pub fn end_time(&self) -> u128 {
        self.segments.last().map_or(0, |s| s.end)
    }

    /// Number of stored segments (waits between merges collapse).
    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }
}

/// Turn a validated plan into a trajectory covering at least `[0,
/// min_cover]`; after its last action the agent stays at its final node.
pub fn realize(
    graph: &Graph,
    weights: &WeightFn,
    plan: &Plan,
    min_cover: u128,
) -> Result<Trajectory, PlanError> {
    plan.validate()?;
    let mut at = graph.position(plan.origin).expect("plan origin is in the graph");
    let mut t: u128 = 0;
    let mut segments: Vec<Segment> = Vec::new();
    let stay = |segments: &mut Vec<Segment>, at: usize, from: u128, to: u128| {
        if let Some(last) = segments.last_mut() {
            if last.locus == Locus::Stay(at) && last.end == from {
                last.end = to;
                return;
            }
        }
        segments.push(Segment { start: from, end: to, locus: Locus::Stay(at) });
    };
    for action in &plan.actions {
        match action {
            Action::Wait(d) => {
                stay(&mut segments, at, t, t + d);
                t += d;
            }
            Action::Traverse { edge, from } => {
                let w = u128::from(weights.get(edge.index));
                let entered_from = graph.position(*from).expect("endpoint is in the graph");
                segments.push(Segment {
                    start: t,
                    end: t + w,
                    locus: Locus::Cross { edge: edge.index, entered_from },
                });
                t += w;
                let arrived = if *from == edge.u { edge.v } else { edge.u };
                at = graph.position(arrived).expect("endpoint is in the graph");
            }
        }
    }
    stay(&mut segments, at, t, t.max(min_cover));
    Ok(Trajectory { segments })
}

/// How the first co-location comes about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeetingKind {
    /// Both agents occupy the same node.
    AtNode,
    /// The agents cross one edge in opposite directions.
    Pass,
    /// One agent catches the other from behind on a shared edge.
    Overtake,
}

/// The earliest co-location of two trajectories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Meeting {
    pub time: Time,
    pub location: MeetingLocation,
    pub kind: MeetingKind,
}

/// Exact position described by one segment at rational time `t` within it.
fn segment_position(graph: &Graph, weights: &WeightFn, seg: &Segment, t: &Time) -> MeetingLocation {
    match seg.locus {
        Locus::Stay(p) => MeetingLocation::Node(graph.id_at(p)),
        Locus::Cross { edge, entered_from } => {
            let e = graph.edge(edge);
            let w = rat_int(u128::from(weights.get(edge)));
            let travelled = (t - rat_int(seg.start)) / w;
            let (pu, _) = graph.edge_positions(edge);
            let fraction =
                if entered_from == pu { travelled } else { BigRational::one() - travelled };
            if fraction.is_zero() {
                MeetingLocation::Node(e.u)
            } else if fraction.is_one() {
                MeetingLocation::Node(e.v)
            } else {
                MeetingLocation::EdgeInterior { edge: e, fraction }
            }
        }
    }
}

/// Position of an agent at rational time `t`, if the trajectory covers it.
/// Boundary instants are position-consistent across adjacent segments, so
/// any covering segment gives the same answer.
pub fn position_at(
    graph: &Graph,
    weights: &WeightFn,
    trajectory: &Trajectory,
    t: &Time,
) -> Option<MeetingLocation> {
    if t.is_negative() {
        return None;
    }
    let idx = trajectory.segments.partition_point(|s| &rat_int(s.end) < t);
    let seg = trajectory.segments.get(idx)?;
    (&rat_int(seg.start) <= t).then(|| segment_position(graph, weights, seg, t))
}

/// Line `fraction(t) = alpha + beta·t` describing one crossing, measured
/// from the edge's smaller-id endpoint. `towards_v` fixes the sign of beta.
fn crossing_line(
    graph: &Graph,
    weights: &WeightFn,
    seg: &Segment,
) -> (Time, Time, bool) {
    let Locus::Cross { edge, entered_from } = seg.locus else {
        unreachable!("only crossings have lines")
    };
    let w = rat_int(u128::from(weights.get(edge)));
    let s = rat_int(seg.start);
    let (pu, _) = graph.edge_positions(edge);
    if entered_from == pu {
        (-&s / &w, w.recip(), true)
    } else {
        (BigRational::one() + &s / &w, -w.recip(), false)
    }
}

/// Earliest co-location within one overlapping segment pair, if any.
fn pair_meeting(
    graph: &Graph,
    wa: &WeightFn,
    wb: &WeightFn,
    sa: &Segment,
    sb: &Segment,
    lo: u128,
    hi: u128,
) -> Option<Meeting> {
    match (sa.locus, sb.locus) {
        (Locus::Stay(u), Locus::Stay(v)) => (u == v).then(|| Meeting {
            time: rat_int(lo),
            location: MeetingLocation::Node(graph.id_at(u)),
            kind: MeetingKind::AtNode,
        }),
        (Locus::Cross { edge: ea, .. }, Locus::Cross { edge: eb, .. }) if ea == eb => {
            let (alpha_a, beta_a, towards_v_a) = crossing_line(graph, wa, sa);
            let (alpha_b, beta_b, towards_v_b) = crossing_line(graph, wb, sb);
            let t = if beta_a == beta_b {
                if alpha_a != alpha_b {
                    return None; // parallel: same speed, never touching
                }
                rat_int(lo) // co-travel begins at the shared entry instant
            } else {
                let t = (&alpha_b - &alpha_a) / (&beta_a - &beta_b);
                if t < rat_int(lo) || t > rat_int(hi) {
                    return None;
                }
                t
            };
            let location = segment_position(graph, wa, sa, &t);
            let kind = match &location {
                MeetingLocation::Node(_) => MeetingKind::AtNode,
                MeetingLocation::EdgeInterior { .. } if towards_v_a != towards_v_b => {
                    MeetingKind::Pass
                }
                MeetingLocation::EdgeInterior { .. } => MeetingKind::Overtake,
            };
            Some(Meeting { time: t, location, kind })
        }
        _ => {
            // Stay/cross or crossings of different edges: co-location takes
            // at least one agent sitting exactly on a node, which happens
            // only at that agent's segment boundaries.
            let mut instants: Vec<u128> = Vec::new();
            for seg in [sa, sb] {
                if matches!(seg.locus, Locus::Cross { .. }) {
                    instants.extend([seg.start, seg.end]);
                }
            }
            instants.retain(|t| (lo..=hi).contains(t));
            instants.sort_unstable();
            instants.dedup();
            for t in instants {
                let t = rat_int(t);
                let pa = segment_position(graph, wa, sa, &t);
                let pb = segment_position(graph, wb, sb, &t);
                if pa == pb {
                    return Some(Meeting { time: t, location: pa, kind: MeetingKind::AtNode });
                }
            }
            None
        }
    }
}

/// Earliest co-location of two trajectories, scanning the time range both
/// of them cover. Deterministic: the result is the unique earliest contact.
pub fn first_meeting(
    graph: &Graph,
    wa: &WeightFn,
    wb: &WeightFn,
    ta: &Trajectory,
    tb: &Trajectory,
) -> Option<Meeting> {
    let mut best: Option<Meeting> = None;
    let (mut i, mut j) = (0usize, 0usize);
    while i < ta.segments.len() && j < tb.segments.len() {
        let (sa, sb) = (&ta.segments[i], &tb.segments[j]);
        let lo = sa.start.max(sb.start);
        let hi = sa.end.min(sb.end);
        if lo <= hi {
            if let Some(found) = &best {
                if rat_int(lo) > found.time {
                    break; // later pairs cannot beat the current meeting
                }
            }
            if let Some(m) = pair_meeting(graph, wa, wb, sa, sb, lo, hi) {
                if best.as_ref().map_or(true, |b| m.time < b.time) {
                    best = Some(m);
                }
            }
        }
        if sa.end < sb.end {
            i += 1;
        } else if sb.end < sa.end {
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
    best
}

/// Realize both plans to a common coverage and find the first co-location.
pub fn simulate(
    instance: &Instance,
    plan_a: &Plan,
    plan_b: &Plan,
    horizon: u128,
) -> Result<Option<Meeting>, PlanError> {
    let graph = instance.graph();
    let ta = realize(graph, instance.weights_a(), plan_a, horizon)?;
    let tb = realize(graph, instance.weights_b(), plan_b, horizon)?;
    Ok(first_meeting(graph, instance.weights_a(), instance.weights_b(), &ta, &tb))
}

/// Referee-side plans that achieve a given optimal meeting point: each agent
/// walks straight to it with no waits. For an interior point each agent
/// approaches from its cheaper endpoint (at a strict interior optimum the
/// binding approaches come from opposite sides; exact ties split by sending
/// one agent to each side).
pub fn witness_plans(instance: &Instance, point: &MeetingPoint) -> (Plan, Plan) {
    let graph = instance.graph();
    let to_node = |w: &WeightFn, from: NodeId, to: NodeId| {
        let path = graph.shortest_path(w, from, to);
        let mut actions = Vec::new();
        crate::protocols::push_path(&mut actions, &path, from);
        Plan { origin: from, actions }
    };
    match &point.location {
        MeetingLocation::Node(v) => (
            to_node(instance.weights_a(), instance.start_a(), *v),
            to_node(instance.weights_b(), instance.start_b(), *v),
        ),
        MeetingLocation::EdgeInterior { edge, fraction } => {
            let into_edge = |w: &WeightFn, from: NodeId, tie_to_u: bool| {
                let we = rat_int(u128::from(w.get(edge.index)));
                let via_u = rat_int(graph.dist(w, from, edge.u)) + fraction * &we;
                let via_v = rat_int(graph.dist(w, from, edge.v))
                    + (BigRational::one() - fraction) * &we;
                let side = if via_u < via_v || (via_u == via_v && tie_to_u) {
                    edge.u
                } else {
                    edge.v
                };
                let mut plan = to_node(w, from, side);
                plan.actions.push(Action::Traverse { edge: *edge, from: side });
                plan
            };
            (
                into_edge(instance.weights_a(), instance.start_a(), true),
                into_edge(instance.weights_b(), instance.start_b(), false),
            )
        }
    }
}

/// Tunables for one protocol run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// The simulation horizon is this multiple of `n` times the minimax
    /// radius (every implemented strategy meets well within 16 of those).
    pub horizon_multiplier: u128,
    /// Waiting factor for the wait-and-sweep strategy (`None`: factor 1).
    pub lambda: Option<BigRational>,
    /// Exchange mode for the count-exchange strategy.
    pub a2_mode: A2ExchangeMode,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            horizon_multiplier: 16,
            lambda: None,
            a2_mode: A2ExchangeMode::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("protocol {protocol} requires the {required:?} instance class")]
    ClassMismatch { protocol: ProtocolId, required: InstanceClass },
    #[error("horizon computation overflows the clock range")]
    HorizonOverflow,
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error("produced plan does not execute: {0}")]
    Plan(#[from] PlanError),
}

/// Everything observable from one protocol run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub protocol: ProtocolId,
    /// Simulated time range `[0, horizon]`.
    pub horizon: u128,
    /// Total bits put on the wire, both directions, all rounds.
    pub bits_exchanged: u64,
    /// Earliest co-location within the horizon, if one occurs.
    pub meeting: Option<Meeting>,
    pub plan_a: Plan,
    pub plan_b: Plan,
}

/// Run one protocol end to end: check the instance class, produce both
/// agents' messages (encoding them to wire bits and decoding on receipt),
/// derive both plans, and simulate to the first co-location.
pub fn run_protocol(
    instance: &Instance,
    protocol: ProtocolId,
    config: &RunConfig,
) -> Result<RunOutcome, RunError> {
    let required = protocol.required_class();
    if !instance.classify().contains(&required) {
        return Err(RunError::ClassMismatch { protocol, required });
    }
    let graph = instance.graph();
    let n = graph.node_count();
    let (_, radius) = rendezvous_node(instance);
    let horizon = config
        .horizon_multiplier
        .checked_mul(n as u128)
        .and_then(|x| x.checked_mul(radius))
        .ok_or(RunError::HorizonOverflow)?;

    let va = AgentView::of(instance, Agent::A);
    let vb = AgentView::of(instance, Agent::B);
    let transmit = |m: &Message, schema: &[crate::message::FieldEncoding]| {
        Message::from_bits(&m.to_bits(), schema).map_err(ProtocolError::from)
    };

    let (plan_a, plan_b, bits_exchanged) = match protocol {
        ProtocolId::A1Arbitrary => {
            let schema = a1_schema(n);
            let sent_a = a1_encode(&va);
            let sent_b = a1_encode(&vb);
            let bits = sent_a.bit_count() + sent_b.bit_count();
            let plan_a = a1_plan(&va, &transmit(&sent_b, &schema)?)?;
            let plan_b = a1_plan(&vb, &transmit(&sent_a, &schema)?)?;
            (plan_a, plan_b, bits)
        }
        ProtocolId::A2OrderedEdges => {
            let schema = a2_schema(n, graph.edge_count());
            match config.a2_mode {
                A2ExchangeMode::SingleShot => {
                    let sent_a = a2_encode(&va);
                    let sent_b = a2_encode(&vb);
                    let bits = sent_a.bit_count() + sent_b.bit_count();
                    let plan_a =
                        a2_plan(&va, &transmit(&sent_b, &schema)?, config.a2_mode)?;
                    let plan_b =
                        a2_plan(&vb, &transmit(&sent_a, &schema)?, config.a2_mode)?;
                    (plan_a, plan_b, bits)
                }
                A2ExchangeMode::TwoRound => {
                    let r1_schema = &schema[..1];
                    let r2_schema = &schema[1..];
                    let r1_a = a2_encode_round1(&va);
                    let r1_b = a2_encode_round1(&vb);
                    let r1_a_recv = transmit(&r1_a, r1_schema)?;
                    let r1_b_recv = transmit(&r1_b, r1_schema)?;
                    // Each agent derives the agreed index from its own value
                    // and the received first round; the two minima coincide.
                    let agreed_at_a = a2_threshold_index(&va).min(r1_b_recv.values()[0]);
                    let agreed_at_b = a2_threshold_index(&vb).min(r1_a_recv.values()[0]);
                    let r2_a = a2_encode_round2(&va, agreed_at_a);
                    let r2_b = a2_encode_round2(&vb, agreed_at_b);
                    let bits = r1_a.bit_count()
                        + r1_b.bit_count()
                        + r2_a.bit_count()
                        + r2_b.bit_count();
                    let mut recv_a = r1_b_recv;
                    recv_a.extend(&transmit(&r2_b, r2_schema)?);
                    let mut recv_b = r1_a_recv;
                    recv_b.extend(&transmit(&r2_a, r2_schema)?);
                    let plan_a = a2_plan(&va, &recv_a, config.a2_mode)?;
                    let plan_b = a2_plan(&vb, &recv_b, config.a2_mode)?;
                    (plan_a, plan_b, bits)
                }
            }
        }
        ProtocolId::A3OrderedAgents => {
            let (plan_a, plan_b) = match &config.lambda {
                None => (a3_plan(&va), a3_plan(&vb)),
                Some(l) => (a3_plan_lambda(&va, l)?, a3_plan_lambda(&vb, l)?),
            };
            (plan_a, plan_b, 0)
        }
        ProtocolId::A4NoComm => (a4_plan(&va, horizon), a4_plan(&vb, horizon), 0),
    };

    let meeting = simulate(instance, &plan_a, &plan_b, horizon)?;
    Ok(RunOutcome { protocol, horizon, bits_exchanged, meeting, plan_a, plan_b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{rat, t_opt_exact};

    fn unit_edge_graph() -> (Graph, WeightFn) {
        (Graph::new(&[0, 1], &[(0, 1)]).unwrap(), WeightFn::new(vec![1], 1).unwrap())
    }

    fn edge_instance(wa: u64, wb: u64) -> Instance {
        let graph = Graph::new(&[0, 1], &[(0, 1)]).unwrap();
        Instance::new(
            graph,
            WeightFn::new(vec![wa], 1).unwrap(),
            WeightFn::new(vec![wb], 1).unwrap(),
            NodeId(0),
            NodeId(1),
        )
        .unwrap()
    }

    /// Plan crossing the listed (edge index, departing id) steps in order.
    fn cross(graph: &Graph, origin: u64, edges: &[(usize, u64)], lead_wait: u128) -> Plan {
        let mut actions = Vec::new();
        if lead_wait > 0 {
            actions.push(Action::Wait(lead_wait));
        }
        for &(e, from) in edges {
            actions.push(Action::Traverse { edge: graph.edge(e), from: NodeId(from) });
        }
        Plan { origin: NodeId(origin), actions }
    }

    #[test]
    fn realization_merges_stays_and_extends_coverage() {
        let (graph, w) = unit_edge_graph();
        let plan = Plan {
            origin: NodeId(0),
            actions: vec![
                Action::Wait(2),
                Action::Wait(3),
                Action::Traverse { edge: graph.edge(0), from: NodeId(0) },
            ],
        };
        let t = realize(&graph, &w, &plan, 20).unwrap();
        // Stays merge: [0,5] stay, [5,6] cross, [6,20] stay.
        assert_eq!(t.segment_count(), 3);
        assert_eq!(t.end_time(), 20);
    }

    #[test]
    fn invalid_plans_do_not_realize() {
        let (graph, w) = unit_edge_graph();
        let zero_wait = Plan { origin: NodeId(0), actions: vec![Action::Wait(0)] };
        assert_eq!(realize(&graph, &w, &zero_wait, 5), Err(PlanError::ZeroWait));
        let teleport = Plan {
            origin: NodeId(1),
            actions: vec![Action::Traverse { edge: graph.edge(0), from: NodeId(0) }],
        };
        assert!(matches!(
            realize(&graph, &w, &teleport, 5),
            Err(PlanError::DisconnectedStep { .. })
        ));
    }

    #[test]
    fn head_on_crossings_pass_at_the_weighted_midpoint() {
        // Equal speeds: pass halfway at time 1/2.
        let inst = edge_instance(1, 1);
        let graph = inst.graph();
        let pa = cross(graph, 0, &[(0, 0)], 0);
        let pb = cross(graph, 1, &[(0, 1)], 0);
        let m = simulate(&inst, &pa, &pb, 4).unwrap().unwrap();
        assert_eq!(m.time, rat(1, 2));
        assert_eq!(
            m.location,
            MeetingLocation::EdgeInterior { edge: graph.edge(0), fraction: rat(1, 2) }
        );
        assert_eq!(m.kind, MeetingKind::Pass);

        // One slow crosser: meet at 3/4 of the edge at time 3/4.
        let inst = edge_instance(1, 3);
        let graph = inst.graph();
        let pa = cross(graph, 0, &[(0, 0)], 0);
        let pb = cross(graph, 1, &[(0, 1)], 0);
        let m = simulate(&inst, &pa, &pb, 8).unwrap().unwrap();
        assert_eq!(m.time, rat(3, 4));
        assert_eq!(
            m.location,
            MeetingLocation::EdgeInterior { edge: graph.edge(0), fraction: rat(3, 4) }
        );
        assert_eq!(m.kind, MeetingKind::Pass);
    }

    #[test]
    fn faster_agent_overtakes_on_a_shared_edge() {
        // Path 2-0-1 by ids 0,1,2 with edges (0,1) and (0,2). A starts at 2,
        // reaches 0 at time 2, then chases B along (0,1); B starts at 0
        // moving slowly up the same edge. They meet mid-edge.
        let graph = Graph::new(&[0, 1, 2], &[(0, 1), (0, 2)]).unwrap();
        let wa = WeightFn::new(vec![4, 2], 2).unwrap();
        let wb = WeightFn::new(vec![8, 5], 2).unwrap();
        let inst = Instance::new(graph, wa, wb, NodeId(2), NodeId(0)).unwrap();
        let graph = inst.graph();
        let pa = cross(graph, 2, &[(1, 2), (0, 0)], 0);
        let pb = cross(graph, 0, &[(0, 0)], 0);
        let m = simulate(&inst, &pa, &pb, 20).unwrap().unwrap();
        assert_eq!(m.time, rat(4, 1));
        assert_eq!(
            m.location,
            MeetingLocation::EdgeInterior { edge: graph.edge(0), fraction: rat(1, 2) }
        );
        assert_eq!(m.kind, MeetingKind::Overtake);
    }

    #[test]
    fn arrival_instant_between_two_crossings_counts() {
        // A crosses (0,1) arriving at node 1 at time 3 and stops. B arrives
        // at node 1 at the same instant mid-walk and keeps going; the
        // instant itself is a meeting.
        let graph = Graph::new(&[0, 1, 2], &[(0, 1), (1, 2)]).unwrap();
        let wa = WeightFn::new(vec![3, 9], 2).unwrap();
        let wb = WeightFn::new(vec![4, 3], 2).unwrap();
        let inst = Instance::new(graph, wa, wb, NodeId(0), NodeId(2)).unwrap();
        let graph = inst.graph();
        let pa = cross(graph, 0, &[(0, 0)], 0);
        let pb = cross(graph, 2, &[(1, 2), (0, 1)], 0);
        let m = simulate(&inst, &pa, &pb, 20).unwrap().unwrap();
        assert_eq!(m.time, rat(3, 1));
        assert_eq!(m.location, MeetingLocation::Node(NodeId(1)));
        assert_eq!(m.kind, MeetingKind::AtNode);
    }

    #[test]
    fn co_entering_agents_meet_at_the_entry_node() {
        // Both enter the same edge from the same node at the same instant
        // and at the same speed: contact starts at the entry node.
        let (graph, _) = unit_edge_graph();
        let w5 = WeightFn::new(vec![5], 1).unwrap();
        let pa = cross(&graph, 0, &[(0, 0)], 0);
        let ta = realize(&graph, &w5, &pa, 10).unwrap();
        let tb = ta.clone();
        let m = first_meeting(&graph, &w5, &w5, &ta, &tb).unwrap();
        assert_eq!(m.time, rat(0, 1));
        assert_eq!(m.location, MeetingLocation::Node(NodeId(0)));
        assert_eq!(m.kind, MeetingKind::AtNode);
    }

    #[test]
    fn equal_speed_follower_only_catches_up_when_the_leader_parks() {
        // A enters (0,1) at t=0; B funnels in from a side node and enters
        // the same edge, same direction, same speed, at t=1. On the edge
        // their positions stay parallel; B finally reaches A at the far
        // node after A has parked there.
        let graph = Graph::new(&[0, 1, 2], &[(0, 1), (0, 2)]).unwrap();
        let w = WeightFn::new(vec![5, 1], 2).unwrap();
        let pa = cross(&graph, 0, &[(0, 0)], 0);
        let pb = cross(&graph, 2, &[(1, 2), (0, 0)], 0);
        let ta = realize(&graph, &w, &pa, 12).unwrap();
        let tb = realize(&graph, &w, &pb, 12).unwrap();
        let m = first_meeting(&graph, &w, &w, &ta, &tb).unwrap();
        assert_eq!(m.time, rat(6, 1));
        assert_eq!(m.location, MeetingLocation::Node(NodeId(1)));
        assert_eq!(m.kind, MeetingKind::AtNode);
    }

    #[test]
    fn meeting_is_symmetric_in_the_agents() {
        for seed in 0..30u64 {
            let inst = crate::oracle::tests_support::random_instance(seed, 7, 12);
            let point = t_opt_exact(&inst);
            let (pa, pb) = witness_plans(&inst, &point);
            let graph = inst.graph();
            let h = 4 * rendezvous_node(&inst).1.max(1);
            let ta = realize(graph, inst.weights_a(), &pa, h).unwrap();
            let tb = realize(graph, inst.weights_b(), &pb, h).unwrap();
            let fwd = first_meeting(graph, inst.weights_a(), inst.weights_b(), &ta, &tb);
            let rev = first_meeting(graph, inst.weights_b(), inst.weights_a(), &tb, &ta);
            let fwd = fwd.unwrap();
            let rev = rev.unwrap();
            assert_eq!(fwd.time, rev.time, "seed {seed}");
            assert_eq!(fwd.location, rev.location, "seed {seed}");
            assert_eq!(fwd.kind, rev.kind, "seed {seed}");
        }
    }

    #[test]
    fn witness_plans_achieve_the_exact_optimum() {
        for seed in 0..80u64 {
            let inst = crate::oracle::tests_support::random_instance(seed, 8, 25);
            let point = t_opt_exact(&inst);
            let (pa, pb) = witness_plans(&inst, &point);
            let h = 4 * rendezvous_node(&inst).1.max(1);
            let m = simulate(&inst, &pa, &pb, h)
                .unwrap()
                .unwrap_or_else(|| panic!("seed {seed}: witness plans never meet"));
            assert_eq!(m.time, point.time, "seed {seed}: wrong meeting time");
            assert_eq!(m.location, point.location, "seed {seed}: wrong meeting point");
        }
    }

    #[test]
    fn sampled_positions_agree_with_the_reported_first_meeting() {
        for seed in 0..25u64 {
            let inst = crate::oracle::tests_support::random_instance(seed, 6, 9);
            let out = run_protocol(&inst, ProtocolId::A1Arbitrary, &RunConfig::default())
                .unwrap();
            let meeting = out.meeting.expect("interval exchange always meets");
            let graph = inst.graph();
            let ta = realize(graph, inst.weights_a(), &out.plan_a, out.horizon).unwrap();
            let tb = realize(graph, inst.weights_b(), &out.plan_b, out.horizon).unwrap();
            // No co-location strictly before the reported meeting on a fine
            // irrational-phase-free grid; exact co-location at the meeting.
            let steps = 160u128;
            for k in 0..steps {
                let t = &meeting.time * rat(k as i128, steps as i128);
                let pa = position_at(graph, inst.weights_a(), &ta, &t).unwrap();
                let pb = position_at(graph, inst.weights_b(), &tb, &t).unwrap();
                assert_ne!(pa, pb, "seed {seed}: premature contact at {t}");
            }
            let pa = position_at(graph, inst.weights_a(), &ta, &meeting.time).unwrap();
            let pb = position_at(graph, inst.weights_b(), &tb, &meeting.time).unwrap();
            assert_eq!(pa, meeting.location, "seed {seed}");
            assert_eq!(pb, meeting.location, "seed {seed}");
        }
    }

    #[test]
    fn interval_exchange_run_on_the_unit_edge() {
        let inst = edge_instance(1, 1);
        let out = run_protocol(&inst, ProtocolId::A1Arbitrary, &RunConfig::default()).unwrap();
        // Both walk to node 0: B crosses, A stays; they meet when B lands.
        let m = out.meeting.unwrap();
        assert_eq!(m.time, rat(1, 1));
        assert_eq!(m.location, MeetingLocation::Node(NodeId(0)));
        // Unit distances all have interval index 0: two 1-bit fields each way.
        assert_eq!(out.bits_exchanged, 4);
        assert_eq!(out.horizon, 32);
    }

    #[test]
    fn sweep_run_on_the_unit_edge() {
        let inst = edge_instance(1, 1);
        let out = run_protocol(&inst, ProtocolId::A3OrderedAgents, &RunConfig::default()).unwrap();
        // Both wait 1 then cross: head-on pass at 3/2.
        let m = out.meeting.unwrap();
        assert_eq!(m.time, rat(3, 2));
        assert_eq!(
            m.location,
            MeetingLocation::EdgeInterior { edge: inst.graph().edge(0), fraction: rat(1, 2) }
        );
        assert_eq!(m.kind, MeetingKind::Pass);
        assert_eq!(out.bits_exchanged, 0);
    }

    #[test]
    fn doubling_tours_run_on_the_unit_edge() {
        let inst = edge_instance(1, 1);
        let out = run_protocol(&inst, ProtocolId::A4NoComm, &RunConfig::default()).unwrap();
        // In the first stage A holds its own node while B tours it.
        let m = out.meeting.unwrap();
        assert_eq!(m.time, rat(1, 1));
        assert_eq!(m.location, MeetingLocation::Node(NodeId(0)));
        assert_eq!(out.bits_exchanged, 0);
    }

    #[test]
    fn class_requirements_are_enforced() {
        // Edge ranks disagree between the agents: not ordered-edges, and
        // neither weight function dominates: not ordered-agents.
        let graph = Graph::new(&[0, 1, 2], &[(0, 1), (1, 2)]).unwrap();
        let inst = Instance::new(
            graph,
            WeightFn::new(vec![1, 5], 2).unwrap(),
            WeightFn::new(vec![5, 1], 2).unwrap(),
            NodeId(0),
            NodeId(2),
        )
        .unwrap();
        assert!(matches!(
            run_protocol(&inst, ProtocolId::A2OrderedEdges, &RunConfig::default()),
            Err(RunError::ClassMismatch { .. })
        ));
        assert!(matches!(
            run_protocol(&inst, ProtocolId::A3OrderedAgents, &RunConfig::default()),
            Err(RunError::ClassMismatch { .. })
        ));
        // The arbitrary-class strategies still run.
        assert!(run_protocol(&inst, ProtocolId::A1Arbitrary, &RunConfig::default()).is_ok());
        assert!(run_protocol(&inst, ProtocolId::A4NoComm, &RunConfig::default()).is_ok());
    }

    #[test]
    fn lambda_stretches_the_sweep_waits() {
        let inst = edge_instance(2, 3);
        let config = RunConfig {
            lambda: Some(rat(2, 1)),
            ..RunConfig::default()
        };
        let out = run_protocol(&inst, ProtocolId::A3OrderedAgents, &config).unwrap();
        assert!(matches!(out.plan_a.actions[0], Action::Wait(4))); // ⌈2·2⌉
        assert!(matches!(out.plan_b.actions[0], Action::Wait(6))); // ⌈2·3⌉
        assert!(out.meeting.is_some());
    }
}
