//! Doubling tours for arbitrary instances with no communication at all.
//!
//! Time is cut into phases `x = 1, 2, 4, …`; each phase consists of one
//! stage of length `2x` per node, taken in id order. In the stage for node
//! `v`, an agent whose own distance `d` to `v` satisfies `0 < d ≤ x` walks
//! out, waits `x − d`, walks back and waits `x − d` again; otherwise it
//! waits the whole `2x` at its start (it also stays put in its own node's
//! stage, where it is trivially present). Both agents share this timetable —
//! stage boundaries depend only on the public node ids — so in the first
//! phase whose `x` reaches the larger of the two distances to some node,
//! both agents are present at that node late in its stage and must meet.
//!
//! Plans are truncated once the accumulated duration reaches the caller's
//! horizon (simulation keeps agents parked at their final node, so a
//! truncated plan stays valid).

use super::{push_path, Action, AgentView, Plan};
use crate::graph::Instance;
use crate::oracle::rendezvous_node;

/// Timetable of doubling tours truncated at `horizon`.
pub fn a4_plan(view: &AgentView, horizon: u128) -> Plan {
    let graph = view.graph();
    let n = graph.node_count();
    let start = graph.position(view.own_start()).expect("start is in the graph");
    let dist = graph.distances(view.own_weights(), start);
    let paths: Vec<_> = (0..n)
        .map(|v| graph.shortest_path(view.own_weights(), view.own_start(), graph.id_at(v)))
        .collect();

    let mut actions = Vec::new();
    let mut elapsed: u128 = 0;
    let mut x: u128 = 1;
    'phases: loop {
        for v in 0..n {
            if elapsed >= horizon {
                break 'phases;
            }
            let d = dist[v];
            if d == 0 || d > x {
                actions.push(Action::Wait(2 * x));
                elapsed += 2 * x;
            } else {
                let at = push_path(&mut actions, &paths[v], view.own_start());
                debug_assert_eq!(at, graph.id_at(v));
                if x > d {
                    actions.push(Action::Wait(x - d));
                }
                let reversed: Vec<_> = paths[v].iter().rev().cloned().collect();
                push_path(&mut actions, &reversed, at);
                if x > d {
                    actions.push(Action::Wait(x - d));
                }
                elapsed += 2 * x;
            }
        }
        x *= 2;
    }
    Plan { origin: view.own_start(), actions }
}

/// End of the first stage in which both agents provably sit at a common
/// node: stage `s` (the rank of the minimax meeting node) of the first phase
/// whose `x` covers both agents' distances to it. An upper bound on the
/// meeting time of two truncation-free timetables.
pub fn a4_stage_meeting_deadline(instance: &Instance) -> u128 {
    let n = instance.graph().node_count() as u128;
    let (node, radius) = rendezvous_node(instance);
    let s = instance.graph().position(node).expect("node is in the graph") as u128;
    // Smallest power of two at least `radius` (the larger of the two
    // distances to the chosen node).
    let mut x: u128 = 1;
    while x < radius {
        x *= 2;
    }
    let phase_start = 2 * n * (x - 1); // sum of all earlier phases: Σ 2n·2^q
    phase_start + (s + 1) * 2 * x
}
