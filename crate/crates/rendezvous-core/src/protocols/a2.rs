//! Count exchange over the shared edge ordering (ordered-edges instances).
//!
//! Both weight functions induce the same edge ordering, so each agent can
//! talk about "the k-th cheapest edge" without naming edges. The message
//! describes the sender's weight multiset coarsely: how many edges fall in
//! each dyadic weight interval, restricted to a window of `2L + 1` intervals
//! (`L = ⌈log₂ n⌉`) around the sender's *threshold index* — the interval of
//! the largest weight that cannot be avoided on the way to the other agent
//! (the bottleneck, minus one). From the counts the receiver rebuilds an
//! approximate weight function over the shared ordering: everything below
//! the window is negligible (treated as zero), in-window intervals round to
//! their lower endpoint, and everything above the agreed window is useless
//! and treated as deleted. Both agents then walk to the node minimizing the
//! larger approximate distance.
//!
//! Two exchange modes are provided. `TwoRound` follows the layered
//! construction: the agents first agree on `c = min(c_A, c_B)` and then send
//! count windows centered at `c`. `SingleShot` (the default) sends one
//! message centered at the sender's own `c_K`; the receiver folds whatever
//! mass lies below the agreed window into the zero class. The modes coincide
//! when `c_A = c_B`, and the folding mode keeps the same asymptotics on
//! instances whose weight scales are not adversarially split; a test freezes
//! a crafted instance where only the two-round mode keeps the 8× guarantee.
//!
//! Approximate weights are kept *doubled* (`2·w̃` is an integer even when
//! the interval-0 approximation is one half), so all comparisons stay in
//! integer arithmetic; doubling both agents' functions uniformly does not
//! change any argmin.

use crate::graph::{bottleneck_threshold, interval_index, NodeId};
use crate::message::{fixed_width, FieldEncoding, Message};

use super::{push_path, AgentView, Plan, ProtocolError};

/// How the single message exchange is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum A2ExchangeMode {
    /// One message per agent, counts centered at the sender's own threshold
    /// index; below-window mass folds into the zero class on receipt.
    #[default]
    SingleShot,
    /// Threshold indices first, then counts centered at the agreed minimum.
    TwoRound,
}

/// What the receiver believes about one edge after reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeApprox {
    /// Below the window: negligible, traversal treated as free.
    Zero,
    /// In the window: weight rounded to `doubled / 2`.
    Rounded { doubled: u128 },
    /// Above the agreed window (or truncated away): unusable.
    Deleted,
}

impl EdgeApprox {
    fn cost(self) -> Option<u128> {
        match self {
            EdgeApprox::Zero => Some(0),
            EdgeApprox::Rounded { doubled } => Some(doubled),
            EdgeApprox::Deleted => None,
        }
    }
}

/// The sender's threshold index `c_K`: the dyadic interval of the largest
/// weight that every route to the other agent can avoid (bottleneck − 1).
pub fn a2_threshold_index(view: &AgentView) -> u64 {
    let m_w = bottleneck_threshold(
        view.graph(),
        view.own_weights(),
        view.own_start(),
        view.other_start(),
    );
    u64::from(interval_index(u128::from(m_w)))
}

/// Window radius: `L = ⌈log₂ n⌉`.
fn window_radius(node_count: usize) -> u64 {
    let n = node_count as u64;
    u64::from(64 - (n - 1).leading_zeros())
}

/// Per-interval edge counts of the sender's own weights, `counts[j]` being
/// the number of edges whose weight lies in dyadic interval `j`.
fn interval_counts(view: &AgentView) -> Vec<u64> {
    let mut counts = vec![0u64; 65];
    for e in 0..view.graph().edge_count() {
        counts[interval_index(u128::from(view.own_weights().get(e))) as usize] += 1;
    }
    counts
}

fn counts_message(view: &AgentView, center: u64) -> Message {
    let counts = interval_counts(view);
    let radius = window_radius(view.graph().node_count());
    let width = fixed_width(view.graph().edge_count() as u64);
    let at = |j: i128| -> u64 {
        if (0..counts.len() as i128).contains(&j) {
            counts[j as usize]
        } else {
            0
        }
    };
    let mut message = Message::new();
    let below: u64 = (0..(center as i128 - radius as i128)).map(at).sum();
    message.push_fixed(below, width);
    for t in 0..=2 * radius {
        message.push_fixed(at(center as i128 - radius as i128 + t as i128), width);
    }
    message
}

/// Single-shot message: `[gamma c_K, prefix, 2L+1 window counts]`, the window
/// centered at the sender's own threshold index.
pub fn a2_encode(view: &AgentView) -> Message {
    let mut message = a2_encode_round1(view);
    message.extend(&counts_message(view, a2_threshold_index(view)));
    message
}

/// First round of the two-round mode: just the threshold index.
pub fn a2_encode_round1(view: &AgentView) -> Message {
    let mut message = Message::new();
    message.push_gamma(a2_threshold_index(view));
    message
}

/// Second round of the two-round mode: prefix and window counts centered at
/// the agreed index `c = min(c_A, c_B)`.
pub fn a2_encode_round2(view: &AgentView, agreed: u64) -> Message {
    counts_message(view, agreed)
}

/// Receiver-side schema for a full exchange (either mode): one gamma index,
/// then `2L + 2` fixed-width count fields.
pub fn a2_schema(node_count: usize, edge_count: usize) -> Vec<FieldEncoding> {
    let radius = window_radius(node_count);
    let width = fixed_width(edge_count as u64);
    let mut schema = vec![FieldEncoding::Gamma];
    schema.extend(vec![FieldEncoding::Fixed(width); 2 * radius as usize + 2]);
    schema
}

/// Rebuild per-edge approximations from one agent's transmitted fields.
///
/// `order` is the shared weight ordering (edge indices, cheapest first) —
/// identical for both agents on ordered-edges instances. `center` is the
/// window position the message was built around and `agreed` the index both
/// agents settled on; window intervals above `agreed + L` are unusable.
fn reconstruct(
    order: &[usize],
    fields: &[u64],
    center: u64,
    agreed: u64,
    radius: u64,
) -> Result<Vec<EdgeApprox>, ProtocolError> {
    let m = order.len() as u64;
    let prefix = fields[0];
    let window = &fields[1..];
    let total = window.iter().try_fold(prefix, |acc, &c| acc.checked_add(c)).ok_or_else(
        || ProtocolError::InconsistentCounts("count total overflows".into()),
    )?;
    if total > m {
        return Err(ProtocolError::InconsistentCounts(format!(
            "{total} edges described, instance has {m}"
        )));
    }

    let mut approx = vec![EdgeApprox::Deleted; order.len()];
    let mut cursor = 0usize;
    let mut assign = |cursor: &mut usize, count: u64, class: EdgeApprox| {
        for _ in 0..count {
            approx[order[*cursor]] = class;
            *cursor += 1;
        }
    };
    assign(&mut cursor, prefix, EdgeApprox::Zero);
    for (t, &count) in window.iter().enumerate() {
        let j = center as i128 - radius as i128 + t as i128;
        if count == 0 {
            continue;
        }
        if j < 0 {
            return Err(ProtocolError::InconsistentCounts(format!(
                "nonzero count for negative interval {j}"
            )));
        }
        if j > 120 {
            return Err(ProtocolError::InconsistentCounts(format!(
                "interval index {j} out of range"
            )));
        }
        let class = if j > agreed as i128 + radius as i128 {
            EdgeApprox::Deleted
        } else {
            EdgeApprox::Rounded { doubled: 1u128 << j }
        };
        assign(&mut cursor, count, class);
    }
    Ok(approx)
}

/// Everything both agents deterministically agree on after the exchange.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct A2Resolution {
    /// `min(c_A, c_B)`.
    pub agreed_index: u64,
    /// The chosen meeting node.
    pub target: NodeId,
    /// Approximation of the agent's own weights as the *other* side rebuilt
    /// them (the agent simulates its own message to stay in lockstep).
    pub own_approx: Vec<EdgeApprox>,
    /// Approximation of the other agent's weights from the received fields.
    pub other_approx: Vec<EdgeApprox>,
}

/// Decode the received exchange and compute the agreed meeting node.
///
/// In either mode the received fields are `[c_sender, prefix, window…]`. The
/// agent rebuilds the other side's approximate weights from them, rebuilds
/// its *own* approximation by re-encoding exactly what it sent (so both
/// sides provably hold identical tables), and picks the node minimizing the
/// larger approximate distance, ties to the smaller id.
pub fn a2_resolve(
    view: &AgentView,
    received: &Message,
    mode: A2ExchangeMode,
) -> Result<A2Resolution, ProtocolError> {
    let graph = view.graph();
    let radius = window_radius(graph.node_count());
    let expected = 2 * radius as usize + 3;
    if received.field_count() != expected {
        return Err(ProtocolError::WrongFieldCount {
            expected,
            got: received.field_count(),
        });
    }
    let their_fields = received.values();
    let c_other = their_fields[0];
    let c_own = a2_threshold_index(view);
    let agreed = c_own.min(c_other);

    let order: Vec<usize> = crate::graph::sorted_edges(graph, view.own_weights())
        .iter()
        .map(|e| e.index)
        .collect();

    let (other_center, own_message) = match mode {
        A2ExchangeMode::SingleShot => (c_other, a2_encode(view)),
        A2ExchangeMode::TwoRound => {
            let mut own = a2_encode_round1(view);
            own.extend(&a2_encode_round2(view, agreed));
            (agreed, own)
        }
    };
    let own_fields = own_message.values();
    let own_center = match mode {
        A2ExchangeMode::SingleShot => c_own,
        A2ExchangeMode::TwoRound => agreed,
    };

    let other_approx = reconstruct(&order, &their_fields[1..], other_center, agreed, radius)?;
    let own_approx = reconstruct(&order, &own_fields[1..], own_center, agreed, radius)?;

    let own_pos = graph.position(view.own_start()).expect("start is in the graph");
    let other_pos = graph.position(view.other_start()).expect("start is in the graph");
    let own_dist = graph.distances_opt(&|e| own_approx[e].cost(), own_pos);
    let other_dist = graph.distances_opt(&|e| other_approx[e].cost(), other_pos);

    let mut best: Option<(u128, usize)> = None;
    for v in 0..graph.node_count() {
        if let (Some(a), Some(b)) = (own_dist[v], other_dist[v]) {
            let value = a.max(b);
            if best.map_or(true, |(cur, _)| value < cur) {
                best = Some((value, v));
            }
        }
    }
    let (_, target) = best.ok_or(ProtocolError::NoCommonCandidate)?;

    Ok(A2Resolution {
        agreed_index: agreed,
        target: graph.id_at(target),
        own_approx,
        other_approx,
    })
}

/// Full plan: resolve the exchange, then walk a true-weight shortest path to
/// the agreed node.
pub fn a2_plan(
    view: &AgentView,
    received: &Message,
    mode: A2ExchangeMode,
) -> Result<Plan, ProtocolError> {
    let resolution = a2_resolve(view, received, mode)?;
    let path = view.graph().shortest_path(view.own_weights(), view.own_start(), resolution.target);
    let mut actions = Vec::new();
    push_path(&mut actions, &path, view.own_start());
    Ok(Plan { origin: view.own_start(), actions })
}
