//! Deterministic benchmark table.
//!
//! Sweeps the instance families, runs every protocol its class admits, and
//! emits one CSV row per run with exact-rational columns. Identical seeds
//! produce byte-identical output.

use num::rational::Ratio;
use num::BigRational;

use rendezvous_core::generators::{adversary_bipartite, gen_path_family, gen_random, PathFamilySpec};
use rendezvous_core::oracle::t_opt_exact;
use rendezvous_core::protocols::{A2ExchangeMode, ProtocolId};
use rendezvous_core::simulator::{run_protocol, RunConfig, RunOutcome};
use rendezvous_core::{Instance, InstanceClass};

use crate::io::rational_string;

fn mode_name(protocol: ProtocolId, mode: A2ExchangeMode) -> &'static str {
    if protocol != ProtocolId::A2OrderedEdges {
        "-"
    } else {
        match mode {
            A2ExchangeMode::SingleShot => "single-shot",
            A2ExchangeMode::TwoRound => "two-round",
        }
    }
}

fn push_row(
    out: &mut String,
    family: &str,
    key: &str,
    protocol: ProtocolId,
    mode: A2ExchangeMode,
    instance: &Instance,
    outcome: &RunOutcome,
    optimum: &BigRational,
) {
    let meeting = outcome
        .meeting
        .as_ref()
        .map(|m| rational_string(&m.time))
        .unwrap_or_else(|| "-".to_string());
    let ratio = outcome
        .meeting
        .as_ref()
        .map(|m| rational_string(&(&m.time / optimum)))
        .unwrap_or_else(|| "-".to_string());
    out.push_str(&format!(
        "{family},{key},{},{},{},{},{},{meeting},{},{ratio}\n",
        protocol,
        mode_name(protocol, mode),
        instance.graph().node_count(),
        instance.graph().edge_count(),
        outcome.bits_exchanged,
        rational_string(optimum),
    ));
}

fn run_and_push(
    out: &mut String,
    family: &str,
    key: &str,
    protocol: ProtocolId,
    mode: A2ExchangeMode,
    instance: &Instance,
) {
    let config = RunConfig { a2_mode: mode, ..RunConfig::default() };
    let outcome = run_protocol(instance, protocol, &config)
        .expect("benchmark instances satisfy their protocols' classes");
    let optimum = t_opt_exact(instance).time;
    push_row(out, family, key, protocol, mode, instance, &outcome, &optimum);
}

/// Build the full benchmark table for one seed.
pub fn bench_csv(seed: u64) -> String {
    let mut out = String::from("family,key,protocol,mode,nodes,edges,bits,meeting,t_opt,ratio\n");

    // Seeded random instances over all three classes.
    let classes = [
        InstanceClass::Arbitrary,
        InstanceClass::OrderedEdges,
        InstanceClass::OrderedAgents,
    ];
    for i in 0..12u64 {
        let class = classes[(i % 3) as usize];
        let n = 6 + ((i / 3) % 4) as usize * 3;
        let max_weight = if class == InstanceClass::OrderedEdges { 64 } else { 40 };
        let instance = gen_random(n, Ratio::new(1, 2), class, max_weight, seed.wrapping_mul(1000) + i)
            .expect("benchmark random parameters are always generable");
        let key = format!("{i}");
        run_and_push(&mut out, "random", &key, ProtocolId::A1Arbitrary, A2ExchangeMode::SingleShot, &instance);
        if class == InstanceClass::OrderedEdges {
            for mode in [A2ExchangeMode::SingleShot, A2ExchangeMode::TwoRound] {
                run_and_push(&mut out, "random", &key, ProtocolId::A2OrderedEdges, mode, &instance);
            }
        }
        if class == InstanceClass::OrderedAgents {
            run_and_push(&mut out, "random", &key, ProtocolId::A3OrderedAgents, A2ExchangeMode::SingleShot, &instance);
        }
        run_and_push(&mut out, "random", &key, ProtocolId::A4NoComm, A2ExchangeMode::SingleShot, &instance);
    }

    // The ladder family: count-exchange in both modes, plus silent doubling.
    for k in 2..=4usize {
        for branch in 1..=k {
            let spec = PathFamilySpec { k, cheap_branch: branch };
            let instance = gen_path_family(&spec).expect("valid ladder spec");
            let key = format!("k{}b{}", k, branch);
            for mode in [A2ExchangeMode::SingleShot, A2ExchangeMode::TwoRound] {
                run_and_push(&mut out, "ladder", &key, ProtocolId::A2OrderedEdges, mode, &instance);
            }
            run_and_push(&mut out, "ladder", &key, ProtocolId::A4NoComm, A2ExchangeMode::SingleShot, &instance);
        }
    }

    // The adversarial double star against silent doubling.
    for n in [8usize, 16] {
        let (instance, outcome) =
            adversary_bipartite(n, ProtocolId::A4NoComm).expect("adversary accepts the doubling strategy");
        let optimum = t_opt_exact(&instance).time;
        push_row(
            &mut out,
            "adversary",
            &format!("n{n}"),
            ProtocolId::A4NoComm,
            A2ExchangeMode::SingleShot,
            &instance,
            &outcome,
            &optimum,
        );
    }

    out
}
