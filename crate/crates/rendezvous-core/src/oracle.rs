//! Offline optima computed with full knowledge of both weight functions.
//!
//! Two quantities matter downstream:
//!
//! * the **rendezvous node** — the node minimizing the larger of the two
//!   travel times, whose value sandwiches the true optimum within a factor
//!   of two and is what protocol guarantees are ultimately measured against;
//! * the **exact optimum** `t_opt` — the earliest meeting time any pair of
//!   plans can achieve, which may require meeting in the interior of an edge
//!   (the two agents traverse it simultaneously and cross).
//!
//! For a meeting point at fraction `f` along edge `{x, y}` (measured from the
//! smaller-id endpoint `x`), an agent's earliest arrival is
//! `min(d(x) + f·w, d(y) + (1−f)·w)` — a piecewise-linear tent in `f`. The
//! pointwise maximum of the two agents' tents is minimized either at a node,
//! at a tent's own breakpoint, or where two pieces from different agents
//! cross; enumerating those finitely many candidate fractions per edge and
//! evaluating exactly gives `t_opt` with no numeric error.

use num::{BigInt, BigRational, Signed, Zero};

use crate::graph::{Edge, Instance, NodeId};

/// Exact rational time.
pub type Time = BigRational;

pub(crate) fn rat_int(x: u128) -> Time {
    Time::from(BigInt::from(x))
}

#[cfg(test)]
pub(crate) fn rat(num: i128, den: i128) -> Time {
    Time::new(BigInt::from(num), BigInt::from(den))
}

/// Where a meeting happens: at a node, or strictly inside an edge at a
/// fraction (in `(0, 1)`) of the edge's length from its smaller-id endpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeetingLocation {
    Node(NodeId),
    EdgeInterior { edge: Edge, fraction: Time },
}

/// A meeting time together with where it is achieved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeetingPoint {
    pub time: Time,
    pub location: MeetingLocation,
}

/// The node minimizing the larger of the two agents' travel times, with ties
/// broken toward the smaller node id. Returns the node and its value
/// (the "rendezvous time"). The exact optimum `t_opt` satisfies
/// `t_opt ≤ rendezvous time ≤ 2·t_opt`.
pub fn rendezvous_node(instance: &Instance) -> (NodeId, u128) {
    let graph = instance.graph();
    let da = graph.distances(instance.weights_a(), graph.position(instance.start_a()).unwrap());
    let db = graph.distances(instance.weights_b(), graph.position(instance.start_b()).unwrap());
    let mut best: Option<(u128, usize)> = None;
    for v in 0..graph.node_count() {
        let value = da[v].max(db[v]);
        if best.map_or(true, |(b, _)| value < b) {
            best = Some((value, v));
        }
    }
    let (value, v) = best.expect("graph is non-empty");
    (graph.id_at(v), value)
}

/// The exact optimal meeting time over all pairs of plans, with a witness
/// location. Node witnesses are preferred over edge-interior witnesses at
/// equal time; among nodes the smallest id wins and among edge candidates the
/// smallest edge index, then the smallest fraction.
pub fn t_opt_exact(instance: &Instance) -> MeetingPoint {
    let graph = instance.graph();
    let wa = instance.weights_a();
    let wb = instance.weights_b();
    let da = graph.distances(wa, graph.position(instance.start_a()).unwrap());
    let db = graph.distances(wb, graph.position(instance.start_b()).unwrap());

    // Node candidates first, in id order, keeping strict improvements only:
    // this makes the preference order above fall out of iteration order.
    let mut best: Option<MeetingPoint> = None;
    for v in 0..graph.node_count() {
        let value = rat_int(da[v].max(db[v]));
        if best.as_ref().map_or(true, |b| value < b.time) {
            best = Some(MeetingPoint {
                time: value,
                location: MeetingLocation::Node(graph.id_at(v)),
            });
        }
    }

    for edge in graph.edges() {
        let (x, y) = graph.edge_positions(edge.index);
        let (wae, wbe) = (i128::from(wa.get(edge.index)), i128::from(wb.get(edge.index)));
        let (dax, day) = (da[x], da[y]);
        let (dbx, dby) = (db[x], db[y]);

        let arr = |d_near: u128, d_far: u128, w: i128, f: &Time| -> Time {
            let from_near = rat_int(d_near) + f * rat_int(w as u128);
            let from_far = rat_int(d_far) + (rat_int(1) - f) * rat_int(w as u128);
            from_near.min(from_far)
        };

        // Candidate fractions: each tent's own breakpoint plus every crossing
        // of one agent's linear piece with one of the other's.
        let mut candidates: Vec<Time> = Vec::with_capacity(6);
        let mut push = |num: BigInt, den: BigInt| {
            if den.is_zero() {
                return;
            }
            let f = Time::new(num, den);
            if f.is_positive() && f < rat_int(1) {
                candidates.push(f);
            }
        };
        let big = |v: u128| BigInt::from(v);

        // Tent breakpoints: d(x) + f·w = d(y) + (1−f)·w.
        push(big(day) + wae - big(dax), BigInt::from(2 * wae));
        push(big(dby) + wbe - big(dbx), BigInt::from(2 * wbe));
        // Opposite-side crossings.
        push(big(dby) + wbe - big(dax), BigInt::from(wae + wbe));
        push(big(day) + wae - big(dbx), BigInt::from(wae + wbe));
        // Same-side crossings (only exist at distinct speeds).
        push(big(dbx) - big(dax), BigInt::from(wae - wbe));
        let same_far_num = BigInt::from(wae - wbe) - (big(dby) - big(day));
        push(same_far_num, BigInt::from(wae - wbe));

        candidates.sort();
        candidates.dedup();
        for f in candidates {
            let value = arr(dax, day, wae, &f).max(arr(dbx, dby, wbe, &f));
            if best.as_ref().map_or(true, |b| value < b.time) {
                best = Some(MeetingPoint {
                    time: value,
                    location: MeetingLocation::EdgeInterior { edge, fraction: f },
                });
            }
        }
    }

    best.expect("graph is non-empty")
}

/// Grid search over meeting points: every node, plus `resolution + 1` evenly
/// spaced fractions on every edge. Always ≥ the exact optimum, and within
/// `max_weight / resolution` of it. Useful as an independent cross-check of
/// [`t_opt_exact`]; all arithmetic is exact over the common denominator.
pub fn t_opt_bruteforce(instance: &Instance, resolution: u32) -> Time {
    assert!(resolution >= 1, "resolution must be positive");
    let graph = instance.graph();
    let wa = instance.weights_a();
    let wb = instance.weights_b();
    let da = graph.distances(wa, graph.position(instance.start_a()).unwrap());
    let db = graph.distances(wb, graph.position(instance.start_b()).unwrap());
    let res = u128::from(resolution);

    // Track the minimum as a numerator over denominator `res`.
    let mut best_num: Option<u128> = None;
    let mut consider = |num: u128| {
        if best_num.map_or(true, |b| num < b) {
            best_num = Some(num);
        }
    };

    for v in 0..graph.node_count() {
        consider(da[v].max(db[v]) * res);
    }
    for e in 0..graph.edge_count() {
        let (x, y) = graph.edge_positions(e);
        let (wae, wbe) = (u128::from(wa.get(e)), u128::from(wb.get(e)));
        for i in 0..=res {
            let arr_a = (da[x] * res + i * wae).min(da[y] * res + (res - i) * wae);
            let arr_b = (db[x] * res + i * wbe).min(db[y] * res + (res - i) * wbe);
            consider(arr_a.max(arr_b));
        }
    }

    Time::new(BigInt::from(best_num.expect("graph is non-empty")), BigInt::from(res))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Graph, WeightFn};

    fn two_node(wa: u64, wb: u64) -> Instance {
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

    fn path_instance(weights: &[u64]) -> Instance {
        let n = weights.len() + 1;
        let ids: Vec<u64> = (0..n as u64).collect();
        let pairs: Vec<(u64, u64)> = (0..weights.len() as u64).map(|i| (i, i + 1)).collect();
        let graph = Graph::new(&ids, &pairs).unwrap();
        let w = WeightFn::new(weights.to_vec(), weights.len()).unwrap();
        Instance::new(graph, w.clone(), w, NodeId(0), NodeId(n as u64 - 1)).unwrap()
    }

    use super::tests_support::random_instance;

    #[test]
    fn symmetric_edge_meets_in_the_middle() {
        let inst = two_node(2, 2);
        let (node, value) = rendezvous_node(&inst);
        assert_eq!((node, value), (NodeId(0), 2));
        let opt = t_opt_exact(&inst);
        assert_eq!(opt.time, rat(1, 1));
        assert_eq!(
            opt.location,
            MeetingLocation::EdgeInterior {
                edge: inst.graph().edge(0),
                fraction: rat(1, 2)
            }
        );
    }

    #[test]
    fn asymmetric_edge_crossing_point() {
        // Speeds 1 and 3 across a single edge: the agents cross at time 3/4,
        // three quarters of the way along from the faster agent's side.
        let inst = two_node(1, 3);
        let opt = t_opt_exact(&inst);
        assert_eq!(opt.time, rat(3, 4));
        assert_eq!(
            opt.location,
            MeetingLocation::EdgeInterior {
                edge: inst.graph().edge(0),
                fraction: rat(3, 4)
            }
        );
        // Grid search with the crossing on-grid agrees exactly.
        assert_eq!(t_opt_bruteforce(&inst, 4), rat(3, 4));
        // A fine off-aligned grid converges from above.
        let b = t_opt_bruteforce(&inst, 1000);
        assert!(b >= opt.time);
        assert!(&b - &opt.time <= rat(3, 1000));
    }

    #[test]
    fn heavy_tail_path_prefers_interior_meeting() {
        // Path 0–1–2 with weights 1 then 10 for both agents: meeting at the
        // middle node costs 10, meeting inside the long edge costs 11/2.
        let inst = path_instance(&[1, 10]);
        let (node, value) = rendezvous_node(&inst);
        assert_eq!((node, value), (NodeId(1), 10));
        let opt = t_opt_exact(&inst);
        assert_eq!(opt.time, rat(11, 2));
        match opt.location {
            MeetingLocation::EdgeInterior { edge, fraction } => {
                assert_eq!(edge.index, 1);
                assert_eq!(fraction, rat(9, 20));
            }
            other => panic!("expected interior witness, got {other:?}"),
        }
    }

    #[test]
    fn node_witness_when_no_crossing_helps() {
        // Star: both agents one hop from the center at equal cost.
        let graph = Graph::new(&[0, 1, 2], &[(0, 2), (1, 2)]).unwrap();
        let w = WeightFn::new(vec![4, 4], 2).unwrap();
        let inst = Instance::new(graph, w.clone(), w, NodeId(0), NodeId(1)).unwrap();
        let opt = t_opt_exact(&inst);
        assert_eq!(opt.time, rat(4, 1));
        assert_eq!(opt.location, MeetingLocation::Node(NodeId(2)));
    }

    #[test]
    fn coarsest_grid_equals_the_rendezvous_value() {
        for seed in 0..40 {
            let inst = random_instance(seed, 8, 20);
            let (_, rv) = rendezvous_node(&inst);
            assert_eq!(t_opt_bruteforce(&inst, 1), rat_int(rv), "seed {seed}");
        }
    }

    #[test]
    fn rendezvous_value_sandwiches_the_optimum() {
        for seed in 0..150 {
            let inst = random_instance(seed, 10, 30);
            let (_, rv) = rendezvous_node(&inst);
            let opt = t_opt_exact(&inst).time;
            let rv = rat_int(rv);
            assert!(opt <= rv, "seed {seed}: optimum above rendezvous value");
            assert!(rv <= rat_int(2) * &opt, "seed {seed}: sandwich violated");
        }
    }

    #[test]
    fn exact_is_a_lower_bound_for_every_grid() {
        for seed in 0..40 {
            let inst = random_instance(seed, 8, 25);
            let exact = t_opt_exact(&inst).time;
            for res in [1, 2, 3, 7, 50] {
                assert!(exact <= t_opt_bruteforce(&inst, res), "seed {seed}, res {res}");
            }
        }
    }

    #[test]
    fn fine_grid_converges_to_exact() {
        for seed in 0..25 {
            let inst = random_instance(seed, 8, 25);
            let exact = t_opt_exact(&inst).time;
            let brute = t_opt_bruteforce(&inst, 10_000);
            assert!(exact <= brute, "seed {seed}");
            let gap = &brute - &exact;
            let tol = rat(i128::from(inst.max_weight()), 10_000);
            assert!(gap <= tol, "seed {seed}: gap {gap} over tolerance {tol}");
        }
    }

    #[test]
    fn relabeling_nodes_preserves_the_optimum() {
        for seed in 0..30 {
            let inst = random_instance(seed, 8, 20);
            // Send id k to 1000 - 3k: order-reversing, so positions flip too.
            let relabel = |id: NodeId| 1000 - 3 * id.0;
            let graph = inst.graph();
            let ids: Vec<u64> = graph.nodes().map(relabel).collect();
            let pairs: Vec<(u64, u64)> =
                graph.edges().map(|e| (relabel(e.u), relabel(e.v))).collect();
            let permuted = Graph::new(&ids, &pairs).unwrap();
            let inst2 = Instance::new(
                permuted,
                inst.weights_a().clone(),
                inst.weights_b().clone(),
                NodeId(relabel(inst.start_a())),
                NodeId(relabel(inst.start_b())),
                )
                .unwrap();
            assert_eq!(t_opt_exact(&inst).time, t_opt_exact(&inst2).time, "seed {seed}");
            let (_, rv1) = rendezvous_node(&inst);
            let (_, rv2) = rendezvous_node(&inst2);
            assert_eq!(rv1, rv2, "seed {seed}");
        }
    }

    #[test]
    fn scaling_both_weight_functions_scales_the_optimum() {
        for seed in 0..30 {
            let inst = random_instance(seed, 8, 20);
            let q = 7u64;
            let m = inst.graph().edge_count();
            let scale = |w: &WeightFn| {
                WeightFn::new(w.values().iter().map(|&x| x * q).collect(), m).unwrap()
            };
            let inst2 = Instance::new(
                inst.graph().clone(),
                scale(inst.weights_a()),
                scale(inst.weights_b()),
                inst.start_a(),
                inst.start_b(),
            )
            .unwrap();
            assert_eq!(
                t_opt_exact(&inst2).time,
                rat_int(u128::from(q)) * t_opt_exact(&inst).time,
                "seed {seed}"
            );
        }
    }

    #[test]
    fn interior_witness_fraction_is_strictly_inside() {
        for seed in 0..60 {
            let inst = random_instance(seed, 9, 25);
            if let MeetingLocation::EdgeInterior { fraction, .. } = t_opt_exact(&inst).location {
                assert!(fraction > rat(0, 1) && fraction < rat(1, 1), "seed {seed}");
            }
        }
    }
}
