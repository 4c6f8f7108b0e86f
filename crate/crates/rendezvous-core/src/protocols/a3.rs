//! Wait-and-sweep for ordered-agents instances (no communication).
//!
//! When one agent's weights dominate the other's pointwise, each agent can
//! bound how long the other needs to cross between the two start nodes using
//! only its own weights. Roles are fixed by start-node id (ids are public):
//! the agent on the smaller id waits out its own crossing time, walks to the
//! other start and back; the agent on the larger id waits out its own
//! crossing time and walks to the other start. Whichever agent is faster
//! finishes its sweep while the slower one is still inside a predictable
//! window, so the walks must cross. No bits are exchanged.
//!
//! `a3_plan_lambda` generalizes the waiting factor: waits of `⌈λ·T⌉` for any
//! rational `λ ≥ 1` preserve the crossing argument (both agents stretch
//! consistently) and allow exploring the constant's tradeoff.

use num::rational::BigRational;
use num::{BigInt, FromPrimitive, One, ToPrimitive};

use super::{push_path, Action, AgentView, Plan, ProtocolError};

/// Sweep plan with the canonical waiting factor `λ = 1`.
pub fn a3_plan(view: &AgentView) -> Plan {
    a3_plan_lambda(view, &BigRational::one()).expect("λ = 1 is valid and overflow-free")
}

/// Sweep plan with waiting factor `λ ≥ 1`: wait `⌈λ·T_own⌉`, then sweep.
pub fn a3_plan_lambda(view: &AgentView, lambda: &BigRational) -> Result<Plan, ProtocolError> {
    if lambda < &BigRational::one() {
        return Err(ProtocolError::ScaleBelowOne);
    }
    let crossing = view.graph().dist(view.own_weights(), view.own_start(), view.other_start());
    let wait = (lambda * BigRational::from_integer(big(crossing)))
        .ceil()
        .to_integer()
        .to_u128()
        .ok_or(ProtocolError::WaitOverflow)?;

    let path = view.graph().shortest_path(view.own_weights(), view.own_start(), view.other_start());
    let mut actions = Vec::new();
    if wait > 0 {
        actions.push(Action::Wait(wait));
    }
    push_path(&mut actions, &path, view.own_start());
    if view.own_start().0 < view.other_start().0 {
        // Smaller-id role: return leg of the sweep.
        let reversed: Vec<_> = path.iter().rev().cloned().collect();
        push_path(&mut actions, &reversed, view.other_start());
    }
    Ok(Plan { origin: view.own_start(), actions })
}

fn big(v: u128) -> BigInt {
    BigInt::from_u128(v).expect("u128 converts to BigInt")
}
