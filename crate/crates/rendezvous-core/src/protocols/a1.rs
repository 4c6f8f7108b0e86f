//! Distance-interval exchange for arbitrary instances.
//!
//! Each agent sends, for every node in ascending id order, the dyadic
//! interval index of its own distance to that node, gamma-encoded. Both
//! agents then hold the same table of index pairs and walk to the node
//! minimizing the larger index (ties to the smaller id). Rounding distances
//! up to powers of two costs at most a factor two over the true rendezvous
//! value, which itself is within a factor two of the optimum — so the
//! meeting lands within 4× of optimal.

use crate::graph::interval_index;
use crate::message::{FieldEncoding, Message};

use super::{push_path, AgentView, Plan, ProtocolError};

/// The sender's message: one gamma field per node, ascending id order.
pub fn a1_encode(view: &AgentView) -> Message {
    let graph = view.graph();
    let own = graph.position(view.own_start()).expect("start is in the graph");
    let dist = graph.distances(view.own_weights(), own);
    let mut message = Message::new();
    for v in 0..graph.node_count() {
        message.push_gamma(u64::from(interval_index(dist[v])));
    }
    message
}

/// The schema a receiver derives from public data: `n` gamma fields.
pub fn a1_schema(node_count: usize) -> Vec<FieldEncoding> {
    vec![FieldEncoding::Gamma; node_count]
}

/// Deterministic plan given the other agent's message: walk a shortest path
/// (own weights, lexicographic tie-break) to the node with the smallest
/// maximum interval index. Both agents evaluate identical tables, so they
/// choose the same node.
pub fn a1_plan(view: &AgentView, received: &Message) -> Result<Plan, ProtocolError> {
    let graph = view.graph();
    let n = graph.node_count();
    if received.field_count() != n {
        return Err(ProtocolError::WrongFieldCount { expected: n, got: received.field_count() });
    }
    let theirs = received.values();
    let own = graph.position(view.own_start()).expect("start is in the graph");
    let dist = graph.distances(view.own_weights(), own);

    let mut best: Option<(u64, usize)> = None;
    for v in 0..n {
        let bound = u64::from(interval_index(dist[v])).max(theirs[v]);
        if best.map_or(true, |(b, _)| bound < b) {
            best = Some((bound, v));
        }
    }
    let (_, target) = best.expect("graphs are non-empty");

    let path = graph.shortest_path(view.own_weights(), view.own_start(), graph.id_at(target));
    let mut actions = Vec::new();
    push_path(&mut actions, &path, view.own_start());
    Ok(Plan { origin: view.own_start(), actions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Graph, Instance, NodeId, WeightFn};
    use crate::protocols::{Action, Agent};

    fn exchange(inst: &Instance) -> (Plan, Plan, Message, Message) {
        let va = AgentView::of(inst, Agent::A);
        let vb = AgentView::of(inst, Agent::B);
        let ma = a1_encode(&va);
        let mb = a1_encode(&vb);
        let pa = a1_plan(&va, &mb).unwrap();
        let pb = a1_plan(&vb, &ma).unwrap();
        (pa, pb, ma, mb)
    }

    #[test]
    fn single_edge_payload_and_cost() {
        let graph = Graph::new(&[0, 1], &[(0, 1)]).unwrap();
        let w2 = WeightFn::new(vec![2], 1).unwrap();
        let inst =
            Instance::new(graph, w2.clone(), w2, NodeId(0), NodeId(1)).unwrap();
        let va = AgentView::of(&inst, Agent::A);
        let m = a1_encode(&va);
        // Distance 0 to own start (interval 0), distance 2 to the far node
        // (interval 1): gamma costs 1 + 3 bits.
        assert_eq!(m.values(), vec![0, 1]);
        assert_eq!(m.bit_count(), 4);
    }

    #[test]
    fn symmetric_edge_agrees_on_the_smaller_id() {
        let graph = Graph::new(&[0, 1], &[(0, 1)]).unwrap();
        let w2 = WeightFn::new(vec![2], 1).unwrap();
        let inst = Instance::new(graph, w2.clone(), w2, NodeId(0), NodeId(1)).unwrap();
        let (pa, pb, _, _) = exchange(&inst);
        // Both nodes have maximum index 1; the tie goes to node 0.
        assert_eq!(pa.final_node(), NodeId(0));
        assert_eq!(pb.final_node(), NodeId(0));
        assert!(pa.actions.is_empty());
        assert_eq!(pb.actions.len(), 1);
        assert!(matches!(pb.actions[0], Action::Traverse { from: NodeId(1), .. }));
    }

    #[test]
    fn unequal_speeds_pick_the_node_both_reach_quickly() {
        // Path 0–1–2: agent A at 0 is fast everywhere, agent B at 2 is slow
        // on the far edge, so node 2 (B's own start) has the best shared
        // interval bound.
        let graph = Graph::new(&[0, 1, 2], &[(0, 1), (1, 2)]).unwrap();
        let wa = WeightFn::new(vec![1, 1], 2).unwrap();
        let wb = WeightFn::new(vec![40, 40], 2).unwrap();
        let inst = Instance::new(graph, wa, wb, NodeId(0), NodeId(2)).unwrap();
        let (pa, pb, _, _) = exchange(&inst);
        // Indices: A = (0, 0, 1), B = (7, 6, 0) → maxima (7, 6, 1).
        assert_eq!(pa.final_node(), NodeId(2));
        assert_eq!(pb.final_node(), NodeId(2));
        assert!(pb.actions.is_empty());
    }

    #[test]
    fn both_plans_target_the_same_node_on_random_instances() {
        use rand::{Rng, SeedableRng};
        for seed in 0..80 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(2..=10u64);
            let ids: Vec<u64> = (0..n).collect();
            let mut pairs: Vec<(u64, u64)> =
                (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
            for a in 0..n {
                for b in (a + 1)..n {
                    if !pairs.contains(&(a, b)) && rng.gen_bool(0.3) {
                        pairs.push((a, b));
                    }
                }
            }
            let m = pairs.len();
            let graph = Graph::new(&ids, &pairs).unwrap();
            let wa = WeightFn::new((0..m).map(|_| rng.gen_range(1..=60)).collect(), m).unwrap();
            let wb = WeightFn::new((0..m).map(|_| rng.gen_range(1..=60)).collect(), m).unwrap();
            let sb = rng.gen_range(1..n);
            let inst = Instance::new(graph, wa, wb, NodeId(0), NodeId(sb)).unwrap();
            let (pa, pb, ma, mb) = exchange(&inst);
            assert_eq!(pa.final_node(), pb.final_node(), "seed {seed}");
            assert!(pa.validate().is_ok() && pb.validate().is_ok());
            // Wire round trip is lossless under the public schema.
            let schema = a1_schema(inst.graph().node_count());
            assert_eq!(Message::from_bits(&ma.to_bits(), &schema).unwrap(), ma);
            assert_eq!(Message::from_bits(&mb.to_bits(), &schema).unwrap(), mb);
        }
    }

    #[test]
    fn wrong_field_count_is_rejected() {
        let graph = Graph::new(&[0, 1], &[(0, 1)]).unwrap();
        let w = WeightFn::new(vec![1], 1).unwrap();
        let inst = Instance::new(graph, w.clone(), w, NodeId(0), NodeId(1)).unwrap();
        let va = AgentView::of(&inst, Agent::A);
        let mut short = Message::new();
        short.push_gamma(0);
        assert_eq!(
            a1_plan(&va, &short),
            Err(ProtocolError::WrongFieldCount { expected: 2, got: 1 })
        );
    }

    #[test]
    fn per_field_cost_is_bounded_by_the_largest_index() {
        use crate::message::gamma_cost;
        let graph = Graph::new(&[0, 1, 2], &[(0, 1), (1, 2)]).unwrap();
        let wa = WeightFn::new(vec![100, 1000], 2).unwrap();
        let inst = Instance::new(graph, wa.clone(), wa, NodeId(0), NodeId(2)).unwrap();
        let va = AgentView::of(&inst, Agent::A);
        let m = a1_encode(&va);
        let r_max = m.values().into_iter().max().unwrap();
        let n = inst.graph().node_count() as u64;
        assert!(m.bit_count() <= n * gamma_cost(r_max));
    }
}
