//! Shared graph model: one simple connected graph, two per-agent weight
//! functions over the same edge set, and the handful of primitives everything
//! else is built from (Dijkstra distances, lexicographically-least shortest
//! paths, dyadic interval indices, bottleneck thresholds).
//!
//! Node identifiers are arbitrary non-negative integers. Internally nodes are
//! stored sorted by identifier, so *position* order equals *identifier* order;
//! every deterministic tie-break in the workspace ("smallest node id wins")
//! is a comparison of positions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// External node identifier as it appears in instance files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An undirected edge; `u` is always the endpoint with the smaller identifier.
/// `index` is the edge's position in the instance's edge list and is the
/// tie-breaker wherever edges are sorted by weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub index: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has no nodes")]
    Empty,
    #[error("duplicate node id {0}")]
    DuplicateNode(u64),
    #[error("edge references unknown node id {0}")]
    UnknownEndpoint(u64),
    #[error("self-loop at node id {0}")]
    SelfLoop(u64),
    #[error("duplicate edge between node ids {0} and {1}")]
    DuplicateEdge(u64, u64),
    #[error("graph is not connected")]
    Disconnected,
}

/// Simple connected undirected graph. Construction validates simplicity and
/// connectivity; a `Graph` value is always well-formed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    /// Node identifiers in ascending order; position in this vector is the
    /// node's dense index.
    ids: Vec<u64>,
    /// Edge endpoints as dense indices, smaller index first.
    edges: Vec<(usize, usize)>,
    /// adjacency[x] = (edge index, neighbor), sorted by neighbor.
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    pub fn new(node_ids: &[u64], edge_pairs: &[(u64, u64)]) -> Result<Self, GraphError> {
        if node_ids.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut ids: Vec<u64> = node_ids.to_vec();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateNode(w[0]));
        }
        let positions: BTreeMap<u64, usize> =
            ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();

        let mut edges = Vec::with_capacity(edge_pairs.len());
        let mut seen = BTreeSet::new();
        for &(a, b) in edge_pairs {
            let &x = positions.get(&a).ok_or(GraphError::UnknownEndpoint(a))?;
            let &y = positions.get(&b).ok_or(GraphError::UnknownEndpoint(b))?;
            if x == y {
                return Err(GraphError::SelfLoop(a));
            }
            let (lo, hi) = if x < y { (x, y) } else { (y, x) };
            if !seen.insert((lo, hi)) {
                return Err(GraphError::DuplicateEdge(ids[lo], ids[hi]));
            }
            edges.push((lo, hi));
        }

        let mut adjacency = vec![Vec::new(); ids.len()];
        for (e, &(x, y)) in edges.iter().enumerate() {
            adjacency[x].push((e, y));
            adjacency[y].push((e, x));
        }
        for list in &mut adjacency {
            list.sort_unstable_by_key(|&(_, nbr)| nbr);
        }

        let graph = Graph { ids, edges, adjacency };
        if !graph.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(graph)
    }

    fn is_connected(&self) -> bool {
        let n = self.ids.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut reached = 1;
        while let Some(x) = stack.pop() {
            for &(_, y) in &self.adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    reached += 1;
                    stack.push(y);
                }
            }
        }
        reached == n
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Dense index of a node id (positions are assigned in ascending id order).
    pub fn position(&self, id: NodeId) -> Option<usize> {
        self.ids.binary_search(&id.0).ok()
    }

    /// Node id at a dense position.
    pub fn id_at(&self, position: usize) -> NodeId {
        NodeId(self.ids[position])
    }

    /// All node ids in ascending order.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.ids.iter().map(|&id| NodeId(id))
    }

    pub fn edge(&self, index: usize) -> Edge {
        let (x, y) = self.edges[index];
        Edge { u: self.id_at(x), v: self.id_at(y), index }
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.edges.len()).map(move |i| self.edge(i))
    }

    /// Edge endpoints as dense positions, smaller first.
    pub fn edge_positions(&self, index: usize) -> (usize, usize) {
        self.edges[index]
    }

    /// Neighbors of a dense position as (edge index, neighbor position),
    /// ascending by neighbor.
    pub fn neighbors(&self, position: usize) -> &[(usize, usize)] {
        &self.adjacency[position]
    }

    /// Single-source shortest-path distances under `w`, indexed by dense
    /// position. The graph is connected, so every entry is finite.
    pub fn distances(&self, w: &WeightFn, from: usize) -> Vec<u128> {
        self.distances_opt(&|e| Some(u128::from(w.get(e))), from)
            .into_iter()
            .map(|d| d.expect("connected graph with total weight function"))
            .collect()
    }

    /// Dijkstra over an arbitrary per-edge cost view: `cost(e) = None` means
    /// the edge is unusable, `Some(0)` is allowed. Returns `None` for
    /// unreachable nodes. This generalized form serves protocols that rebuild
    /// approximate weights with zero-cost and deleted edges.
    pub fn distances_opt(
        &self,
        cost: &dyn Fn(usize) -> Option<u128>,
        from: usize,
    ) -> Vec<Option<u128>> {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;

        let mut dist: Vec<Option<u128>> = vec![None; self.ids.len()];
        let mut heap = BinaryHeap::new();
        dist[from] = Some(0);
        heap.push(Reverse((0u128, from)));
        while let Some(Reverse((d, x))) = heap.pop() {
            if dist[x] != Some(d) {
                continue;
            }
            for &(e, y) in &self.adjacency[x] {
                let Some(c) = cost(e) else { continue };
                let nd = d + c;
                if dist[y].map_or(true, |cur| nd < cur) {
                    dist[y] = Some(nd);
                    heap.push(Reverse((nd, y)));
                }
            }
        }
        dist
    }

    /// Shortest-path distance between two nodes under `w`.
    pub fn dist(&self, w: &WeightFn, from: NodeId, to: NodeId) -> u128 {
        let s = self.position(from).expect("known node");
        let t = self.position(to).expect("known node");
        self.distances(w, s)[t]
    }

    /// The minimum-weight path from `from` to `to` under `w` whose node
    /// sequence is lexicographically least among all minimum-weight paths,
    /// returned as its edge sequence (empty when `from == to`).
    ///
    /// Works backwards: with exact distances-to-target in hand, repeatedly
    /// step to the smallest-id neighbor that stays on some optimal path.
    pub fn shortest_path(&self, w: &WeightFn, from: NodeId, to: NodeId) -> Vec<Edge> {
        let s = self.position(from).expect("known node");
        let t = self.position(to).expect("known node");
        let to_target = self.distances(w, t);
        let mut path = Vec::new();
        let mut cur = s;
        while cur != t {
            // Neighbors are sorted ascending, so the first optimal one wins.
            let (e, next) = self.adjacency[cur]
                .iter()
                .copied()
                .find(|&(e, y)| to_target[cur] == u128::from(w.get(e)) + to_target[y])
                .expect("connected graph always has an optimal next hop");
            path.push(self.edge(e));
            cur = next;
        }
        path
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeightError {
    #[error("expected {expected} edge weights, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("edge {0} has zero weight; traversal times must be positive integers")]
    ZeroWeight(usize),
}

/// One agent's traversal costs, indexed by edge index. All weights are
/// positive integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFn {
    weights: Vec<u64>,
}

impl WeightFn {
    pub fn new(weights: Vec<u64>, edge_count: usize) -> Result<Self, WeightError> {
        if weights.len() != edge_count {
            return Err(WeightError::WrongCount { expected: edge_count, got: weights.len() });
        }
        if let Some(e) = weights.iter().position(|&w| w == 0) {
            return Err(WeightError::ZeroWeight(e));
        }
        Ok(WeightFn { weights })
    }

    pub fn get(&self, edge_index: usize) -> u64 {
        self.weights[edge_index]
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn max_weight(&self) -> u64 {
        self.weights.iter().copied().max().unwrap_or(1)
    }

    pub fn values(&self) -> &[u64] {
        &self.weights
    }
}

/// Index of the dyadic interval a distance value falls in: 0 and 1 map to
/// interval 0, and any d ≥ 2 maps to the unique j ≥ 1 with 2^(j-1) < d ≤ 2^j.
pub fn interval_index(d: u128) -> u32 {
    if d <= 1 {
        0
    } else {
        128 - (d - 1).leading_zeros()
    }
}

/// All edges sorted by weight under `w`, ties broken by edge index. Both
/// agents of an instance whose weight functions induce identical orderings
/// compute the *same* sequence from their own weights; that shared sequence is
/// what the count-exchange protocol rebuilds approximate weights over.
pub fn sorted_edges(graph: &Graph, w: &WeightFn) -> Vec<Edge> {
    let mut order: Vec<usize> = (0..graph.edge_count()).collect();
    order.sort_by_key(|&e| (w.get(e), e));
    order.into_iter().map(|e| graph.edge(e)).collect()
}

/// Largest threshold m such that deleting every edge of weight > m leaves
/// `from` and `to` connected is m = B − 1, where B (returned threshold + 1) is
/// the minimax edge weight over all `from`–`to` paths. Computed by adding
/// edges in weight order to a union-find until the endpoints join.
pub fn bottleneck_threshold(graph: &Graph, w: &WeightFn, from: NodeId, to: NodeId) -> u64 {
    let s = graph.position(from).expect("known node");
    let t = graph.position(to).expect("known node");
    if s == t {
        return 0;
    }
    let mut parent: Vec<usize> = (0..graph.node_count()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut order: Vec<usize> = (0..graph.edge_count()).collect();
    order.sort_by_key(|&e| (w.get(e), e));
    for e in order {
        let (x, y) = graph.edge_positions(e);
        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
        if rx != ry {
            parent[rx] = ry;
        }
        if find(&mut parent, s) == find(&mut parent, t) {
            return w.get(e) - 1;
        }
    }
    unreachable!("graph is connected, so the endpoints always join")
}

/// Structural classes an instance can belong to. `Arbitrary` always holds;
/// the other two are refinements that specific protocols require.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum InstanceClass {
    /// No constraint relating the two weight functions.
    Arbitrary,
    /// Both weight functions induce the same total preorder on edges.
    OrderedEdges,
    /// One weight function dominates the other pointwise.
    OrderedAgents,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error("start node id {0} is not in the graph")]
    UnknownStart(u64),
    #[error("the two start nodes must be distinct")]
    IdenticalStarts,
}

/// A complete problem instance: shared graph, both agents' weight functions,
/// and the two distinct start nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    graph: Graph,
    w_a: WeightFn,
    w_b: WeightFn,
    start_a: usize,
    start_b: usize,
}

impl Instance {
    pub fn new(
        graph: Graph,
        w_a: WeightFn,
        w_b: WeightFn,
        start_a: NodeId,
        start_b: NodeId,
    ) -> Result<Self, InstanceError> {
        let m = graph.edge_count();
        if w_a.len() != m {
            return Err(WeightError::WrongCount { expected: m, got: w_a.len() }.into());
        }
        if w_b.len() != m {
            return Err(WeightError::WrongCount { expected: m, got: w_b.len() }.into());
        }
        let a = graph.position(start_a).ok_or(InstanceError::UnknownStart(start_a.0))?;
        let b = graph.position(start_b).ok_or(InstanceError::UnknownStart(start_b.0))?;
        if a == b {
            return Err(InstanceError::IdenticalStarts);
        }
        Ok(Instance { graph, w_a, w_b, start_a: a, start_b: b })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn weights_a(&self) -> &WeightFn {
        &self.w_a
    }

    pub fn weights_b(&self) -> &WeightFn {
        &self.w_b
    }

    pub fn start_a(&self) -> NodeId {
        self.graph.id_at(self.start_a)
    }

    pub fn start_b(&self) -> NodeId {
        self.graph.id_at(self.start_b)
    }

    /// Largest weight appearing in either weight function.
    pub fn max_weight(&self) -> u64 {
        self.w_a.max_weight().max(self.w_b.max_weight())
    }

    /// Every structural class this instance satisfies.
    pub fn classify(&self) -> BTreeSet<InstanceClass> {
        let mut classes = BTreeSet::new();
        classes.insert(InstanceClass::Arbitrary);

        let m = self.graph.edge_count();
        let same_order = {
            let mut ok = true;
            'outer: for e1 in 0..m {
                for e2 in (e1 + 1)..m {
                    let cmp_a = self.w_a.get(e1).cmp(&self.w_a.get(e2));
                    let cmp_b = self.w_b.get(e1).cmp(&self.w_b.get(e2));
                    if cmp_a != cmp_b {
                        ok = false;
                        break 'outer;
                    }
                }
            }
            ok
        };
        if same_order {
            classes.insert(InstanceClass::OrderedEdges);
        }

        let a_le_b = (0..m).all(|e| self.w_a.get(e) <= self.w_b.get(e));
        let b_le_a = (0..m).all(|e| self.w_b.get(e) <= self.w_a.get(e));
        if a_le_b || b_le_a {
            classes.insert(InstanceClass::OrderedAgents);
        }

        classes
    }
}
