//! Instance families.
//!
//! Four builders, each deterministic:
//!
//! * [`gen_bipartite`] — a double star `K_{2,n}`: both start nodes joined to
//!   `n` shared middle nodes, every edge either cheap (weight 1) or heavy
//!   (weight `x`), governed by two per-agent flag vectors.  The meeting time
//!   collapses to `1` exactly when the agents share a cheap middle node.
//! * [`gen_path_family`] — a ladder of `k` node-disjoint parallel branches
//!   between the two starts, weighted so both agents sort the edges
//!   identically while exactly one branch admits a fast meeting.
//! * [`adversary_bipartite`] — watches the silent doubling strategy's moves
//!   on a double star and plants the single cheap meeting point on a branch
//!   the observed agent provably ignores for its first `n` time units.
//! * [`gen_random`] — seeded random connected instances constrained to any
//!   structural class.

use std::collections::BTreeSet;

use num::rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, Instance, InstanceClass, NodeId, WeightFn};
use crate::protocols::{a4_plan, Action, Agent, AgentView, ProtocolId};
use crate::simulator::{run_protocol, RunConfig, RunError, RunOutcome};

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("cheap-edge flag vectors have different lengths ({a} vs {b})")]
    FlagLengthMismatch { a: usize, b: usize },
    #[error("the double star needs at least one middle node")]
    EmptyStar,
    #[error("the heavy weight must be positive")]
    ZeroScale,
    #[error("the ladder needs at least two branches, got {k}")]
    TooFewBranches { k: usize },
    #[error("branch {branch} does not exist (valid: 1..={k})")]
    BranchOutOfRange { branch: usize, k: usize },
    #[error("the adversarial builder needs at least two middle nodes, got {n}")]
    StarTooSmall { n: usize },
    #[error("the adversarial builder only targets the silent doubling strategy, not {protocol}")]
    UnsupportedAdversaryTarget { protocol: ProtocolId },
    #[error("a random instance needs at least two nodes, got {n}")]
    TooFewNodes { n: usize },
    #[error("edge density yields {target} edges but connectivity needs {minimum}")]
    DensityTooLow { target: usize, minimum: usize },
    #[error("need {needed} distinct weights but the cap is {max_weight}")]
    WeightRangeTooNarrow { max_weight: u64, needed: usize },
    #[error(transparent)]
    Run(#[from] RunError),
}

/// Parameters of the double-star family.
///
/// Middle node `v_j` (0-based flag index `j`, node id `j + 2`) hangs off both
/// starts; `a[j]` makes agent A's side of it cheap (weight 1 instead of `x`),
/// `b[j]` agent B's side.  Every other weight is `x`.
#[derive(Debug, Clone)]
pub struct BipartiteSpec {
    pub a: Vec<bool>,
    pub b: Vec<bool>,
    /// The heavy weight; [`BipartiteSpec::new`] defaults it to the number of
    /// middle nodes.
    pub x: u64,
}

impl BipartiteSpec {
    pub fn new(a: Vec<bool>, b: Vec<bool>) -> Self {
        let x = (a.len() as u64).max(1);
        BipartiteSpec { a, b, x }
    }
}

/// Build the double star `K_{2,n}`.
///
/// Node ids: agent A's start is `0`, agent B's start is `1`, middle nodes are
/// `2..n+2`.  Edge order: all of A's star `{0, j+2}` first (edge index `j`),
/// then B's star `{1, j+2}` (edge index `n + j`).
pub fn gen_bipartite(spec: &BipartiteSpec) -> Result<Instance, GeneratorError> {
    if spec.a.len() != spec.b.len() {
        return Err(GeneratorError::FlagLengthMismatch { a: spec.a.len(), b: spec.b.len() });
    }
    let n = spec.a.len();
    if n == 0 {
        return Err(GeneratorError::EmptyStar);
    }
    if spec.x == 0 {
        return Err(GeneratorError::ZeroScale);
    }

    let ids: Vec<u64> = (0..n as u64 + 2).collect();
    let mut pairs = Vec::with_capacity(2 * n);
    for j in 0..n as u64 {
        pairs.push((0, j + 2));
    }
    for j in 0..n as u64 {
        pairs.push((1, j + 2));
    }
    let graph = Graph::new(&ids, &pairs).expect("double star is simple and connected");

    let cheap = |flag: bool| if flag { 1 } else { spec.x };
    let mut w_a = Vec::with_capacity(2 * n);
    let mut w_b = Vec::with_capacity(2 * n);
    for j in 0..n {
        w_a.push(cheap(spec.a[j]));
        w_b.push(spec.x);
    }
    for j in 0..n {
        w_a.push(spec.x);
        w_b.push(cheap(spec.b[j]));
    }

    let m = 2 * n;
    let instance = Instance::new(
        graph,
        WeightFn::new(w_a, m).expect("one positive weight per edge"),
        WeightFn::new(w_b, m).expect("one positive weight per edge"),
        NodeId(0),
        NodeId(1),
    )
    .expect("distinct starts on a valid graph");
    Ok(instance)
}

/// Parameters of the ladder family: `k` parallel branches, one of which
/// (`cheap_branch`, 1-based) carries agent B's run of cheap interior edges.
#[derive(Debug, Clone, Copy)]
pub struct PathFamilySpec {
    pub k: usize,
    pub cheap_branch: usize,
}

impl PathFamilySpec {
    /// The weight scale `x = k^4`; every edge weighs between `x` and `2x` for
    /// agent A, and agent B's weights straddle the same scale.
    pub fn scale(&self) -> u64 {
        (self.k as u64).pow(4)
    }
}

fn check_ladder(k: usize, branch: usize) -> Result<(), GeneratorError> {
    if k < 2 {
        return Err(GeneratorError::TooFewBranches { k });
    }
    if branch == 0 || branch > k {
        return Err(GeneratorError::BranchOutOfRange { branch, k });
    }
    Ok(())
}

/// Interior node id of branch `branch` (1-based) at slot `r` (1-based,
/// counted from agent A's start).
fn ladder_node(k: usize, branch: usize, r: usize) -> u64 {
    (2 + (branch - 1) * (k + 1) + (r - 1)) as u64
}

/// Endpoints of 1-based edge number `i` in the ladder with `k` branches.
///
/// Numbering (the shared weight order): `1..=k²` are interior edges, branch
/// by branch, ascending from A's side; `k²+1..=k²+k` are the B-side end
/// edges in *reverse* branch order; `k²+k+1..=k²+2k` are the A-side end
/// edges in branch order.
fn ladder_edge(k: usize, i: usize) -> (u64, u64) {
    let kk = k * k;
    if i <= kk {
        let branch = (i - 1) / k + 1;
        let r = i - (branch - 1) * k;
        (ladder_node(k, branch, r), ladder_node(k, branch, r + 1))
    } else if i <= kk + k {
        let branch = kk + k - i + 1;
        (ladder_node(k, branch, k + 1), 1)
    } else {
        let branch = i - kk - k;
        (0, ladder_node(k, branch, 1))
    }
}

/// Build one ladder instance.
///
/// The graph has `k² + k + 2` nodes and `k² + 2k` edges forming `k`
/// node-disjoint branches of `k + 2` edges between start node `0` (agent A)
/// and start node `1` (agent B).  Agent A weighs 1-based edge `i` at `x + i`;
/// agent B weighs it `i` on the cheap branch's approach run (`i ≤ cheap·k`),
/// `x + i` in the middle band, and `k·x + i` beyond it — both agents sort
/// the edges identically, yet only the cheap branch admits a meeting well
/// under the scale's double.
pub fn gen_path_family(spec: &PathFamilySpec) -> Result<Instance, GeneratorError> {
    check_ladder(spec.k, spec.cheap_branch)?;
    let k = spec.k;
    let x = spec.scale();
    let node_count = k * k + k + 2;
    let edge_count = k * k + 2 * k;

    let ids: Vec<u64> = (0..node_count as u64).collect();
    let pairs: Vec<(u64, u64)> = (1..=edge_count).map(|i| ladder_edge(k, i)).collect();
    let graph = Graph::new(&ids, &pairs).expect("ladder is simple and connected");

    let band_top = k * k + k - spec.cheap_branch + 1;
    let mut w_a = Vec::with_capacity(edge_count);
    let mut w_b = Vec::with_capacity(edge_count);
    for i in 1..=edge_count {
        w_a.push(x + i as u64);
        w_b.push(if i <= spec.cheap_branch * k {
            i as u64
        } else if i <= band_top {
            x + i as u64
        } else {
            k as u64 * x + i as u64
        });
    }

    let instance = Instance::new(
        graph,
        WeightFn::new(w_a, edge_count).expect("one positive weight per edge"),
        WeightFn::new(w_b, edge_count).expect("one positive weight per edge"),
        NodeId(0),
        NodeId(1),
    )
    .expect("distinct starts on a valid graph");
    Ok(instance)
}

/// One branch of the ladder, in order from agent A's start to agent B's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchRoute {
    /// Node ids along the branch, starting `0` and ending `1`.
    pub nodes: Vec<NodeId>,
    /// 0-based edge indices along the branch.
    pub edges: Vec<usize>,
}

/// The nodes and edges of branch `branch` (1-based) in the `k`-branch ladder.
pub fn path_family_route(k: usize, branch: usize) -> Result<BranchRoute, GeneratorError> {
    check_ladder(k, branch)?;
    let kk = k * k;
    let mut nodes = vec![NodeId(0)];
    for r in 1..=k + 1 {
        nodes.push(NodeId(ladder_node(k, branch, r)));
    }
    nodes.push(NodeId(1));

    let mut edges = vec![kk + k + branch - 1];
    for i in (branch - 1) * k + 1..=branch * k {
        edges.push(i - 1);
    }
    edges.push(kk + k - branch);
    Ok(BranchRoute { nodes, edges })
}

/// Build a double star on which the silent doubling strategy provably needs
/// more than `n` time units despite an achievable meeting at time `1`.
///
/// The builder fixes agent A's weights (own star cheap, other star heavy),
/// replays A's doubling plan — which cannot depend on agent B's weights —
/// for `n` time units, picks a middle node whose edges A never touches in
/// that window, and makes that node cheap for B as well.  Both agents can
/// then meet there at time `1`, but the observed strategy cannot, so the
/// returned run's meeting time exceeds `n`.
///
/// Only the message-free doubling strategy is accepted: the construction
/// relies on the observed agent's moves being a fixed function of its own
/// weights alone, which any message exchange would break.
pub fn adversary_bipartite(
    n: usize,
    protocol: ProtocolId,
) -> Result<(Instance, RunOutcome), GeneratorError> {
    if protocol != ProtocolId::A4NoComm {
        return Err(GeneratorError::UnsupportedAdversaryTarget { protocol });
    }
    if n < 2 {
        return Err(GeneratorError::StarTooSmall { n });
    }

    // Probe instance: A's weights final, B's all heavy (irrelevant to A's plan).
    let probe_spec = BipartiteSpec::new(vec![true; n], vec![false; n]);
    let probe = gen_bipartite(&probe_spec)?;
    let budget = n as u128;
    let view_a = AgentView::of(&probe, Agent::A);
    let plan_a = a4_plan(&view_a, budget + 1);

    // Every node A's plan touches through a move started before the budget
    // runs out, counting an entered edge's far endpoint as touched.
    let mut touched = BTreeSet::new();
    touched.insert(plan_a.origin);
    let mut clock: u128 = 0;
    for action in &plan_a.actions {
        if clock >= budget {
            break;
        }
        match *action {
            Action::Wait(d) => clock += d,
            Action::Traverse { edge, from } => {
                let to = if edge.u == from { edge.v } else { edge.u };
                touched.insert(to);
                clock += u128::from(probe.weights_a().get(edge.index));
            }
        }
    }

    let blind = (0..n)
        .find(|j| !touched.contains(&NodeId(*j as u64 + 2)))
        .expect("a time budget of n covers at most n/2 of the n branch tours");

    let mut b = vec![false; n];
    b[blind] = true;
    let spec = BipartiteSpec::new(vec![true; n], b);
    let instance = gen_bipartite(&spec)?;
    let outcome = run_protocol(&instance, protocol, &RunConfig::default())?;
    Ok((instance, outcome))
}

/// Build a seeded random connected instance of the requested class.
///
/// The graph is a uniform spanning-tree skeleton plus random extra edges up
/// to `⌈edge_density · n(n−1)/2⌉` total.  Weights are drawn per class:
/// independently uniform (arbitrary), two independent draws of distinct
/// values laid over one shared random edge order (shared-order), or a
/// uniform draw for B with A at most B everywhere (dominated).  The same
/// seed reproduces the instance bit for bit.
pub fn gen_random(
    n: usize,
    edge_density: Ratio<u64>,
    class: InstanceClass,
    max_weight: u64,
    seed: u64,
) -> Result<Instance, GeneratorError> {
    if n < 2 {
        return Err(GeneratorError::TooFewNodes { n });
    }
    if max_weight == 0 {
        return Err(GeneratorError::WeightRangeTooNarrow { max_weight, needed: 1 });
    }

    let max_edges = n * (n - 1) / 2;
    let target = {
        let numer = u128::from(*edge_density.numer());
        let denom = u128::from(*edge_density.denom());
        let raw = (numer * max_edges as u128).div_ceil(denom);
        (raw.min(max_edges as u128)) as usize
    };
    if target < n - 1 {
        return Err(GeneratorError::DensityTooLow { target, minimum: n - 1 });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Random spanning tree, then extra edges drawn without replacement.
    let mut pairs: Vec<(u64, u64)> = (1..n as u64)
        .map(|i| (rng.gen_range(0..i), i))
        .collect();
    let present: BTreeSet<(u64, u64)> = pairs.iter().copied().collect();
    let mut rest: Vec<(u64, u64)> = (0..n as u64 - 1)
        .flat_map(|i| (i + 1..n as u64).map(move |j| (i, j)))
        .filter(|p| !present.contains(p))
        .collect();
    rest.shuffle(&mut rng);
    pairs.extend(rest.into_iter().take(target - (n - 1)));

    let ids: Vec<u64> = (0..n as u64).collect();
    let graph = Graph::new(&ids, &pairs).expect("tree skeleton keeps the graph connected");
    let m = pairs.len();

    let (w_a, w_b) = match class {
        InstanceClass::Arbitrary => {
            let w_a: Vec<u64> = (0..m).map(|_| rng.gen_range(1..=max_weight)).collect();
            let w_b: Vec<u64> = (0..m).map(|_| rng.gen_range(1..=max_weight)).collect();
            (w_a, w_b)
        }
        InstanceClass::OrderedEdges => {
            if (max_weight as usize) < m {
                return Err(GeneratorError::WeightRangeTooNarrow { max_weight, needed: m });
            }
            let mut order: Vec<usize> = (0..m).collect();
            order.shuffle(&mut rng);
            let draw_sorted = |rng: &mut ChaCha8Rng| {
                let mut values: Vec<u64> = rand::seq::index::sample(rng, max_weight as usize, m)
                    .into_iter()
                    .map(|v| v as u64 + 1)
                    .collect();
                values.sort_unstable();
                values
            };
            let ranked_a = draw_sorted(&mut rng);
            let ranked_b = draw_sorted(&mut rng);
            let mut w_a = vec![0; m];
            let mut w_b = vec![0; m];
            for (rank, &edge) in order.iter().enumerate() {
                w_a[edge] = ranked_a[rank];
                w_b[edge] = ranked_b[rank];
            }
            (w_a, w_b)
        }
        InstanceClass::OrderedAgents => {
            let w_b: Vec<u64> = (0..m).map(|_| rng.gen_range(1..=max_weight)).collect();
            let w_a: Vec<u64> = w_b.iter().map(|&cap| rng.gen_range(1..=cap)).collect();
            (w_a, w_b)
        }
    };

    let start_a = rng.gen_range(0..n as u64);
    let start_b = loop {
        let candidate = rng.gen_range(0..n as u64);
        if candidate != start_a {
            break candidate;
        }
    };

    let instance = Instance::new(
        graph,
        WeightFn::new(w_a, m).expect("one positive weight per edge"),
        WeightFn::new(w_b, m).expect("one positive weight per edge"),
        NodeId(start_a),
        NodeId(start_b),
    )
    .expect("distinct starts on a valid graph");
    Ok(instance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::sorted_edges;
    use crate::oracle::{rat, t_opt_exact, MeetingLocation};
    use num::BigRational;

    fn big(v: u64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn double_star_shared_cheap_index_meets_in_unit_time() {
        let spec = BipartiteSpec::new(
            vec![false, true, false, false],
            vec![false, true, true, false],
        );
        let instance = gen_bipartite(&spec).unwrap();
        assert_eq!(instance.graph().node_count(), 6);
        assert_eq!(instance.graph().edge_count(), 8);
        let opt = t_opt_exact(&instance);
        assert_eq!(opt.time, big(1));
        assert_eq!(opt.location, MeetingLocation::Node(NodeId(3)));
    }

    #[test]
    fn double_star_disjoint_cheap_edges_meet_mid_edge() {
        let spec = BipartiteSpec::new(
            vec![true, false, false, false],
            vec![false, true, false, false],
        );
        let instance = gen_bipartite(&spec).unwrap();
        let opt = t_opt_exact(&instance);
        // Half the heavy crossing plus the cheap head start: (x + 1) / 2.
        assert_eq!(opt.time, rat(5, 2));
        match opt.location {
            MeetingLocation::EdgeInterior { edge, ref fraction } => {
                assert_eq!(edge.index, 1);
                assert_eq!(edge.u, NodeId(0));
                assert_eq!(edge.v, NodeId(3));
                assert_eq!(*fraction, rat(5, 8));
            }
            other => panic!("expected an interior meeting, got {other:?}"),
        }
    }

    #[test]
    fn double_star_single_cheap_side_still_beats_the_heavy_time() {
        let spec = BipartiteSpec::new(
            vec![true, false, false, false],
            vec![false, false, false, false],
        );
        let instance = gen_bipartite(&spec).unwrap();
        let opt = t_opt_exact(&instance);
        assert_eq!(opt.time, rat(5, 2));
        match opt.location {
            MeetingLocation::EdgeInterior { edge, ref fraction } => {
                assert_eq!(edge.index, 4);
                assert_eq!(edge.u, NodeId(1));
                assert_eq!(edge.v, NodeId(2));
                assert_eq!(*fraction, rat(5, 8));
            }
            other => panic!("expected an interior meeting, got {other:?}"),
        }
    }

    #[test]
    fn double_star_without_cheap_edges_meets_at_the_heavy_time() {
        let spec = BipartiteSpec::new(vec![false; 4], vec![false; 4]);
        let instance = gen_bipartite(&spec).unwrap();
        let opt = t_opt_exact(&instance);
        assert_eq!(opt.time, big(4));
        assert_eq!(opt.location, MeetingLocation::Node(NodeId(2)));
    }

    #[test]
    fn double_star_minimal_member() {
        let spec = BipartiteSpec::new(vec![true], vec![true]);
        let instance = gen_bipartite(&spec).unwrap();
        assert_eq!(instance.graph().node_count(), 3);
        assert_eq!(instance.graph().edge_count(), 2);
        let opt = t_opt_exact(&instance);
        assert_eq!(opt.time, big(1));
        assert_eq!(opt.location, MeetingLocation::Node(NodeId(2)));
    }

    #[test]
    fn double_star_rejects_bad_specs() {
        let lopsided = BipartiteSpec::new(vec![true, false], vec![true]);
        assert!(matches!(
            gen_bipartite(&lopsided),
            Err(GeneratorError::FlagLengthMismatch { a: 2, b: 1 })
        ));
        let empty = BipartiteSpec::new(vec![], vec![]);
        assert!(matches!(gen_bipartite(&empty), Err(GeneratorError::EmptyStar)));
        let mut zeroed = BipartiteSpec::new(vec![true], vec![true]);
        zeroed.x = 0;
        assert!(matches!(gen_bipartite(&zeroed), Err(GeneratorError::ZeroScale)));
    }

    #[test]
    fn ladder_frozen_small_member() {
        let spec = PathFamilySpec { k: 2, cheap_branch: 1 };
        assert_eq!(spec.scale(), 16);
        let instance = gen_path_family(&spec).unwrap();
        assert_eq!(instance.graph().node_count(), 8);
        assert_eq!(instance.graph().edge_count(), 8);
        assert_eq!(instance.start_a(), NodeId(0));
        assert_eq!(instance.start_b(), NodeId(1));
        let expected_a: Vec<u64> = (17..=24).collect();
        assert_eq!(instance.weights_a().values(), &expected_a[..]);
        assert_eq!(
            instance.weights_b().values(),
            &[1, 2, 19, 20, 21, 22, 39, 40]
        );
    }

    #[test]
    fn ladder_members_share_the_edge_order_and_meet_before_twice_the_scale() {
        for k in 2..=4 {
            for branch in 1..=k {
                let spec = PathFamilySpec { k, cheap_branch: branch };
                let instance = gen_path_family(&spec).unwrap();
                assert!(
                    instance.classify().contains(&InstanceClass::OrderedEdges),
                    "k={k} branch={branch} should share the edge order"
                );
                let opt = t_opt_exact(&instance);
                let x = big(spec.scale());
                assert!(opt.time > x, "k={k} branch={branch}: {} ≤ x", opt.time);
                assert!(
                    opt.time < &x + &x,
                    "k={k} branch={branch}: {} ≥ 2x",
                    opt.time
                );
            }
        }
    }

    #[test]
    fn ladder_branches_partition_the_graph() {
        let k = 3;
        let instance = gen_path_family(&PathFamilySpec { k, cheap_branch: 2 }).unwrap();
        let mut seen_edges = BTreeSet::new();
        let mut seen_interior = BTreeSet::new();
        for branch in 1..=k {
            let route = path_family_route(k, branch).unwrap();
            assert_eq!(route.edges.len(), k + 2);
            assert_eq!(route.nodes.len(), k + 3);
            assert_eq!(route.nodes.first(), Some(&NodeId(0)));
            assert_eq!(route.nodes.last(), Some(&NodeId(1)));
            // Consecutive route nodes are joined by the listed edges.
            for (step, &edge_index) in route.edges.iter().enumerate() {
                let edge = instance.graph().edge(edge_index);
                let (from, to) = (route.nodes[step], route.nodes[step + 1]);
                assert!(
                    (edge.u == from && edge.v == to) || (edge.u == to && edge.v == from),
                    "branch {branch} step {step}: edge {edge_index} does not join {from:?}-{to:?}"
                );
                assert!(seen_edges.insert(edge_index), "edge {edge_index} repeats");
            }
            for node in &route.nodes[1..=k + 1] {
                assert!(seen_interior.insert(*node), "interior {node:?} repeats");
            }
        }
        assert_eq!(seen_edges.len(), instance.graph().edge_count());
        assert_eq!(seen_interior.len(), k * (k + 1));
    }

    #[test]
    fn ladder_frozen_routes() {
        let first = path_family_route(2, 1).unwrap();
        assert_eq!(first.edges, vec![6, 0, 1, 5]);
        let ids: Vec<u64> = first.nodes.iter().map(|n| n.0).collect();
        assert_eq!(ids, vec![0, 2, 3, 4, 1]);

        let second = path_family_route(2, 2).unwrap();
        assert_eq!(second.edges, vec![7, 2, 3, 4]);
        let ids: Vec<u64> = second.nodes.iter().map(|n| n.0).collect();
        assert_eq!(ids, vec![0, 5, 6, 7, 1]);
    }

    #[test]
    fn ladder_rejects_bad_specs() {
        assert!(matches!(
            gen_path_family(&PathFamilySpec { k: 1, cheap_branch: 1 }),
            Err(GeneratorError::TooFewBranches { k: 1 })
        ));
        assert!(matches!(
            path_family_route(2, 0),
            Err(GeneratorError::BranchOutOfRange { branch: 0, k: 2 })
        ));
        assert!(matches!(
            path_family_route(2, 3),
            Err(GeneratorError::BranchOutOfRange { branch: 3, k: 2 })
        ));
    }

    #[test]
    fn adversary_plants_the_cheap_meeting_point_in_the_doubling_tours_blind_spot() {
        for n in [8usize, 16] {
            let (instance, outcome) =
                adversary_bipartite(n, ProtocolId::A4NoComm).unwrap();
            let opt = t_opt_exact(&instance);
            assert_eq!(opt.time, big(1), "n={n}: the planted meeting takes time 1");

            let cheap_b: Vec<usize> = (n..2 * n)
                .filter(|&e| instance.weights_b().get(e) == 1)
                .collect();
            assert_eq!(cheap_b.len(), 1, "n={n}: exactly one planted cheap edge");

            let meeting = outcome.meeting.expect("doubling must meet within the horizon");
            assert!(
                meeting.time > big(n as u64),
                "n={n}: meeting at {} is inside the blind window",
                meeting.time
            );
        }
    }

    #[test]
    fn adversary_rejects_protocols_it_cannot_watch() {
        for protocol in [
            ProtocolId::A1Arbitrary,
            ProtocolId::A2OrderedEdges,
            ProtocolId::A3OrderedAgents,
        ] {
            assert!(matches!(
                adversary_bipartite(8, protocol),
                Err(GeneratorError::UnsupportedAdversaryTarget { .. })
            ));
        }
        assert!(matches!(
            adversary_bipartite(1, ProtocolId::A4NoComm),
            Err(GeneratorError::StarTooSmall { n: 1 })
        ));
    }

    #[test]
    fn random_instances_respect_their_class() {
        let classes = [
            InstanceClass::Arbitrary,
            InstanceClass::OrderedEdges,
            InstanceClass::OrderedAgents,
        ];
        for seed in 0..30u64 {
            let n = 3 + (seed as usize % 10);
            let class = classes[seed as usize % 3];
            let instance =
                gen_random(n, Ratio::new(1, 2), class, 64, seed).unwrap();
            assert!(
                instance.classify().contains(&class),
                "seed {seed}: class {class:?} not satisfied"
            );
            match class {
                InstanceClass::OrderedAgents => {
                    let dominated = instance
                        .weights_a()
                        .values()
                        .iter()
                        .zip(instance.weights_b().values())
                        .all(|(a, b)| a <= b);
                    assert!(dominated, "seed {seed}: A must never outweigh B");
                }
                InstanceClass::OrderedEdges => {
                    let order_a = sorted_edges(instance.graph(), instance.weights_a());
                    let order_b = sorted_edges(instance.graph(), instance.weights_b());
                    assert_eq!(order_a, order_b, "seed {seed}: shared order broken");
                }
                InstanceClass::Arbitrary => {}
            }
        }
    }

    #[test]
    fn random_same_seed_reproduces_the_instance_bit_for_bit() {
        let make = || {
            gen_random(10, Ratio::new(1, 2), InstanceClass::OrderedEdges, 64, 7).unwrap()
        };
        assert_eq!(make(), make());
        let other = gen_random(10, Ratio::new(1, 2), InstanceClass::OrderedEdges, 64, 8).unwrap();
        assert_ne!(make(), other);
    }

    #[test]
    fn random_rejects_unreachable_parameters() {
        assert!(matches!(
            gen_random(6, Ratio::new(1, 100), InstanceClass::Arbitrary, 10, 0),
            Err(GeneratorError::DensityTooLow { target: 1, minimum: 5 })
        ));
        assert!(matches!(
            gen_random(8, Ratio::new(1, 2), InstanceClass::OrderedEdges, 5, 0),
            Err(GeneratorError::WeightRangeTooNarrow { max_weight: 5, .. })
        ));
        assert!(matches!(
            gen_random(1, Ratio::new(1, 1), InstanceClass::Arbitrary, 10, 0),
            Err(GeneratorError::TooFewNodes { n: 1 })
        ));
        assert!(matches!(
            gen_random(4, Ratio::new(1, 1), InstanceClass::Arbitrary, 0, 0),
            Err(GeneratorError::WeightRangeTooNarrow { max_weight: 0, needed: 1 })
        ));
    }
}
