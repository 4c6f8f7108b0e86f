//! Verification suites: fixed seeded instance collections and the nine
//! acceptance criteria, each producing one pass/fail line.

use std::sync::OnceLock;

use num::rational::Ratio;
use num::{BigRational, One, Zero};

use rendezvous_core::generators::{
    adversary_bipartite, gen_path_family, gen_random, path_family_route, BranchRoute,
    PathFamilySpec,
};
use rendezvous_core::graph::interval_index;
use rendezvous_core::oracle::{rendezvous_node, t_opt_bruteforce, t_opt_exact, MeetingLocation};
use rendezvous_core::protocols::{
    a2_encode, a2_encode_round1, a2_encode_round2, a2_resolve, a2_threshold_index,
    A2ExchangeMode, Agent, AgentView, EdgeApprox, ProtocolId,
};
use rendezvous_core::simulator::{run_protocol, RunConfig, RunOutcome};
use rendezvous_core::{Graph, Instance, InstanceClass, NodeId, WeightFn};

use crate::io::rational_string;

/// Frozen cap on the count-exchange communication constant: measured bits
/// must stay within this multiple of `loglog M + (log n)²` on every run.
pub const COUNT_EXCHANGE_BIT_CONSTANT: u64 = 24;

/// One seeded member of a verification suite.
pub struct SuiteInstance {
    pub seed: u64,
    pub instance: Instance,
}

fn build_suite(class_for: impl Fn(u64) -> InstanceClass) -> Vec<SuiteInstance> {
    (0..500u64)
        .map(|seed| {
            let n = 4 + ((seed / 3) % 17) as usize;
            let class = class_for(seed);
            let max_weight = if class == InstanceClass::OrderedEdges { 64 } else { 50 };
            let density = if n <= 8 { Ratio::new(1, 2) } else { Ratio::new(1, 3) };
            let instance = gen_random(n, density, class, max_weight, seed)
                .expect("suite parameters are always generable");
            SuiteInstance { seed, instance }
        })
        .collect()
}

/// 500 instances cycling through all three structural classes, 4–20 nodes.
pub fn mixed_suite() -> &'static [SuiteInstance] {
    static SUITE: OnceLock<Vec<SuiteInstance>> = OnceLock::new();
    SUITE.get_or_init(|| {
        let classes = [
            InstanceClass::Arbitrary,
            InstanceClass::OrderedEdges,
            InstanceClass::OrderedAgents,
        ];
        build_suite(|seed| classes[(seed % 3) as usize])
    })
}

/// 500 instances whose agents sort the edges identically.
pub fn ordered_edges_suite() -> &'static [SuiteInstance] {
    static SUITE: OnceLock<Vec<SuiteInstance>> = OnceLock::new();
    SUITE.get_or_init(|| build_suite(|_| InstanceClass::OrderedEdges))
}

/// 500 instances where agent A is pointwise at most agent B.
pub fn ordered_agents_suite() -> &'static [SuiteInstance] {
    static SUITE: OnceLock<Vec<SuiteInstance>> = OnceLock::new();
    SUITE.get_or_init(|| build_suite(|_| InstanceClass::OrderedAgents))
}

/// The ladder family members exercised by the acceptance criteria.
pub fn ladder_members() -> Vec<(PathFamilySpec, Instance)> {
    let mut members = Vec::new();
    for k in 2..=6 {
        for branch in 1..=k {
            let spec = PathFamilySpec { k, cheap_branch: branch };
            let instance = gen_path_family(&spec).expect("valid ladder spec");
            members.push((spec, instance));
        }
    }
    members
}

/// Outcome of one acceptance criterion.
pub struct CriterionResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("{verdict}  {} — {}", self.name, self.detail)
    }
}

fn big(v: u128) -> BigRational {
    BigRational::from_integer(v.into())
}

fn scaled(value: &BigRational, factor: u128) -> BigRational {
    value * big(factor)
}

/// Running tracker: remembers the first failure and a worst-case statistic.
struct Tracker {
    failure: Option<String>,
    worst_ratio: BigRational,
}

impl Tracker {
    fn new() -> Self {
        Tracker { failure: None, worst_ratio: BigRational::zero() }
    }

    fn fail(&mut self, message: String) {
        if self.failure.is_none() {
            self.failure = Some(message);
        }
    }

    fn check(&mut self, condition: bool, message: impl FnOnce() -> String) {
        if !condition {
            self.fail(message());
        }
    }

    /// Track `achieved / reference` and enforce `achieved ≤ bound · reference`.
    fn bounded_ratio(
        &mut self,
        achieved: &BigRational,
        reference: &BigRational,
        bound: u128,
        context: impl Fn() -> String,
    ) {
        if reference.is_zero() {
            self.fail(format!("{}: zero reference time", context()));
            return;
        }
        let ratio = achieved / reference;
        if ratio > self.worst_ratio {
            self.worst_ratio = ratio.clone();
        }
        if &scaled(reference, bound) < achieved {
            self.fail(format!(
                "{}: {} exceeds {bound}× the reference {}",
                context(),
                achieved,
                reference
            ));
        }
    }

    fn result(self, name: &'static str, detail_on_pass: String) -> CriterionResult {
        match self.failure {
            None => CriterionResult { name, passed: true, detail: detail_on_pass },
            Some(detail) => CriterionResult { name, passed: false, detail },
        }
    }
}

fn meeting_of(outcome: &RunOutcome, tracker: &mut Tracker, context: impl Fn() -> String) -> Option<BigRational> {
    match &outcome.meeting {
        Some(meeting) => Some(meeting.time.clone()),
        None => {
            tracker.fail(format!("{}: no meeting within horizon {}", context(), outcome.horizon));
            None
        }
    }
}

/// Node rendezvous is sandwiched between the optimum and its double.
pub fn check_sandwich() -> CriterionResult {
    let mut tracker = Tracker::new();
    for member in mixed_suite() {
        let opt = t_opt_exact(&member.instance);
        let (_, rv) = rendezvous_node(&member.instance);
        let rv_time = big(rv);
        tracker.check(opt.time <= rv_time, || {
            format!("seed {}: node rendezvous {} beats the optimum {}", member.seed, rv, opt.time)
        });
        tracker.bounded_ratio(&rv_time, &opt.time, 2, || format!("seed {}", member.seed));
    }
    let detail = format!(
        "500 instances; node-rendezvous within [1, 2]× the optimum, worst {}",
        rational_string(&tracker.worst_ratio)
    );
    tracker.result("sandwich-bound", detail)
}

/// The distance-interval exchange meets within 4× the optimum, both agents
/// pick the same target, and the message spend stays within the per-node
/// interval-width budget.
pub fn check_interval_exchange() -> CriterionResult {
    let mut tracker = Tracker::new();
    let mut max_bits = 0u64;
    for member in mixed_suite() {
        let instance = &member.instance;
        let context = || format!("seed {}", member.seed);
        let opt = t_opt_exact(instance);
        match run_protocol(instance, ProtocolId::A1Arbitrary, &RunConfig::default()) {
            Ok(outcome) => {
                if let Some(time) = meeting_of(&outcome, &mut tracker, context) {
                    tracker.bounded_ratio(&time, &opt.time, 4, context);
                }
                tracker.check(
                    outcome.plan_a.final_node() == outcome.plan_b.final_node(),
                    || {
                        format!(
                            "seed {}: plans target {:?} and {:?}",
                            member.seed,
                            outcome.plan_a.final_node(),
                            outcome.plan_b.final_node()
                        )
                    },
                );

                let graph = instance.graph();
                let pos_a = graph.position(instance.start_a()).unwrap();
                let pos_b = graph.position(instance.start_b()).unwrap();
                let r_max = graph
                    .distances(instance.weights_a(), pos_a)
                    .into_iter()
                    .chain(graph.distances(instance.weights_b(), pos_b))
                    .map(interval_index)
                    .max()
                    .unwrap_or(0) as u64;
                let per_field = 2 * u64::from(64 - (r_max + 1).leading_zeros() - 1) + 1;
                let cap = 2 * graph.node_count() as u64 * per_field;
                max_bits = max_bits.max(outcome.bits_exchanged);
                tracker.check(outcome.bits_exchanged <= cap, || {
                    format!(
                        "seed {}: {} bits exceed the cap {}",
                        member.seed, outcome.bits_exchanged, cap
                    )
                });
            }
            Err(e) => tracker.fail(format!("seed {}: {}", member.seed, e)),
        }
    }
    let detail = format!(
        "500 runs; meeting within 4× the optimum (worst {}), shared target, ≤ {} bits per run",
        rational_string(&tracker.worst_ratio),
        max_bits
    );
    tracker.result("interval-exchange-bound", detail)
}

fn check_weight_bracketing(
    view: &AgentView,
    approx: &[EdgeApprox],
    tracker: &mut Tracker,
    context: impl Fn() -> String,
) {
    if view.graph().edge_count() != approx.len() {
        tracker.fail(format!(
            "{}: {} approximations for {} edges",
            context(),
            approx.len(),
            view.graph().edge_count()
        ));
        return;
    }
    for (index, entry) in approx.iter().enumerate() {
        let w = u128::from(view.own_weights().get(index));
        if let EdgeApprox::Rounded { doubled } = entry {
            tracker.check(w <= *doubled && *doubled < 2 * w, || {
                format!(
                    "{}: edge {} weight {} outside ({}/2, {}]",
                    context(),
                    index,
                    w,
                    doubled,
                    doubled
                )
            });
        }
    }
}

/// The count-exchange strategy meets within 8× the optimum in both exchange
/// modes on shared-order suites and every ladder member, reconstructed
/// weights bracket the truth within a factor two, and bits stay within the
/// frozen constant times `loglog M + (log n)²`.
pub fn check_count_exchange() -> CriterionResult {
    let mut tracker = Tracker::new();
    let mut max_constant = 0u64;
    let mut worst_single = BigRational::zero();

    let mut instances: Vec<(String, Instance)> = Vec::new();
    for member in ordered_edges_suite() {
        instances.push((format!("seed {}", member.seed), member.instance.clone()));
    }
    for (spec, instance) in ladder_members() {
        instances.push((
            format!("ladder k={} branch={}", spec.k, spec.cheap_branch),
            instance,
        ));
    }

    for (label, instance) in &instances {
        let opt = t_opt_exact(instance);
        for mode in [A2ExchangeMode::SingleShot, A2ExchangeMode::TwoRound] {
            let config = RunConfig { a2_mode: mode, ..RunConfig::default() };
            let context = || format!("{label} ({mode:?})");
            match run_protocol(instance, ProtocolId::A2OrderedEdges, &config) {
                Ok(outcome) => {
                    if let Some(time) = meeting_of(&outcome, &mut tracker, context) {
                        match mode {
                            A2ExchangeMode::TwoRound => {
                                tracker.bounded_ratio(&time, &opt.time, 8, context);
                            }
                            A2ExchangeMode::SingleShot => {
                                // Tracked for the report; the 8× guarantee is
                                // carried by the agreed-center exchange.
                                let ratio = &time / &opt.time;
                                if ratio > worst_single {
                                    worst_single = ratio;
                                }
                                tracker.bounded_ratio(&time, &opt.time, 8, context);
                            }
                        }
                    }

                    let n = instance.graph().node_count() as u64;
                    let m_weight = instance.max_weight();
                    let bit_len = |v: u64| u64::from(64 - v.leading_zeros());
                    let log_log_m = bit_len(bit_len(m_weight));
                    let log_n = bit_len(n - 1); // ⌈log₂ n⌉ for n ≥ 2
                    let measure = log_log_m + log_n * log_n;
                    let constant = outcome.bits_exchanged.div_ceil(measure);
                    max_constant = max_constant.max(constant);
                    tracker.check(
                        outcome.bits_exchanged <= COUNT_EXCHANGE_BIT_CONSTANT * measure,
                        || {
                            format!(
                                "{}: {} bits exceed {} × (loglog M + log²n = {})",
                                context(),
                                outcome.bits_exchanged,
                                COUNT_EXCHANGE_BIT_CONSTANT,
                                measure
                            )
                        },
                    );
                }
                Err(e) => tracker.fail(format!("{}: {}", context(), e)),
            }

            // Bracketing of the reconstructed weights, both directions.
            let va = AgentView::of(instance, Agent::A);
            let vb = AgentView::of(instance, Agent::B);
            let (recv_a, recv_b) = match mode {
                A2ExchangeMode::SingleShot => (a2_encode(&vb), a2_encode(&va)),
                A2ExchangeMode::TwoRound => {
                    let agreed = a2_threshold_index(&va).min(a2_threshold_index(&vb));
                    let mut to_a = a2_encode_round1(&vb);
                    to_a.extend(&a2_encode_round2(&vb, agreed));
                    let mut to_b = a2_encode_round1(&va);
                    to_b.extend(&a2_encode_round2(&va, agreed));
                    (to_a, to_b)
                }
            };
            match (
                a2_resolve(&va, &recv_a, mode),
                a2_resolve(&vb, &recv_b, mode),
            ) {
                (Ok(res_a), Ok(res_b)) => {
                    check_weight_bracketing(&va, &res_a.own_approx, &mut tracker, context);
                    check_weight_bracketing(&vb, &res_b.own_approx, &mut tracker, context);
                }
                (Err(e), _) | (_, Err(e)) => {
                    tracker.fail(format!("{}: resolution failed: {}", context(), e))
                }
            }
        }
    }

    let detail = format!(
        "{} instances × 2 modes; worst ratio {} (single-shot {}), kept weights bracket within 2×, bit constant {} ≤ {}",
        instances.len(),
        rational_string(&tracker.worst_ratio),
        rational_string(&worst_single),
        max_constant,
        COUNT_EXCHANGE_BIT_CONSTANT
    );
    tracker.result("count-exchange-bound", detail)
}

/// The silent wait-and-sweep strategy meets within six times the faster
/// agent's crossing time, hence within 12× the optimum, with zero bits.
pub fn check_wait_and_sweep() -> CriterionResult {
    let mut tracker = Tracker::new();
    for member in ordered_agents_suite() {
        let instance = &member.instance;
        let context = || format!("seed {}", member.seed);
        let opt = t_opt_exact(instance);
        match run_protocol(instance, ProtocolId::A3OrderedAgents, &RunConfig::default()) {
            Ok(outcome) => {
                tracker.check(outcome.bits_exchanged == 0, || {
                    format!("seed {}: {} bits sent", member.seed, outcome.bits_exchanged)
                });
                if let Some(time) = meeting_of(&outcome, &mut tracker, context) {
                    let graph = instance.graph();
                    let t_a = graph.dist(instance.weights_a(), instance.start_a(), instance.start_b());
                    let t_b = graph.dist(instance.weights_b(), instance.start_a(), instance.start_b());
                    let crossing = big(t_a.min(t_b));
                    tracker.check(time <= scaled(&crossing, 6), || {
                        format!(
                            "seed {}: meeting {} exceeds 6× the faster crossing {}",
                            member.seed, time, crossing
                        )
                    });
                    tracker.bounded_ratio(&time, &opt.time, 12, context);
                }
            }
            Err(e) => tracker.fail(format!("seed {}: {}", member.seed, e)),
        }
    }
    let detail = format!(
        "500 silent runs; within 6× the faster crossing and 12× the optimum (worst {})",
        rational_string(&tracker.worst_ratio)
    );
    tracker.result("wait-and-sweep-bound", detail)
}

/// The communication-free doubling strategy meets within its stage deadline,
/// which stays within 16·n times the node-rendezvous time.
pub fn check_doubling() -> CriterionResult {
    let mut tracker = Tracker::new();
    for member in mixed_suite() {
        let instance = &member.instance;
        let context = || format!("seed {}", member.seed);
        match run_protocol(instance, ProtocolId::A4NoComm, &RunConfig::default()) {
            Ok(outcome) => {
                if let Some(time) = meeting_of(&outcome, &mut tracker, context) {
                    let (_, rv) = rendezvous_node(instance);
                    let n = instance.graph().node_count() as u128;
                    tracker.bounded_ratio(&time, &big(rv), 16 * n, context);
                    let deadline = rendezvous_core::protocols::a4_stage_meeting_deadline(instance);
                    tracker.check(time <= big(deadline), || {
                        format!(
                            "seed {}: meeting {} after the stage deadline {}",
                            member.seed, time, deadline
                        )
                    });
                    tracker.check(big(deadline) <= big(16 * n * rv), || {
                        format!(
                            "seed {}: stage deadline {} exceeds 16·n·rv = {}",
                            member.seed,
                            deadline,
                            16 * n * rv
                        )
                    });
                }
            }
            Err(e) => tracker.fail(format!("seed {}: {}", member.seed, e)),
        }
    }
    let detail = format!(
        "500 silent runs; every meeting inside its doubling-stage deadline and within 16·n× node rendezvous"
    );
    tracker.result("doubling-bound", detail)
}

/// The adversarial double star keeps the doubling strategy away for more
/// than `n` time units even though a meeting at time 1 exists.
pub fn check_silent_lower_bound() -> CriterionResult {
    let mut tracker = Tracker::new();
    let mut ratios = Vec::new();
    for n in [8usize, 16, 32, 64] {
        match adversary_bipartite(n, ProtocolId::A4NoComm) {
            Ok((instance, outcome)) => {
                let opt = t_opt_exact(&instance);
                tracker.check(opt.time == BigRational::one(), || {
                    format!("n={n}: planted optimum is {}, not 1", opt.time)
                });
                match &outcome.meeting {
                    Some(meeting) => {
                        tracker.check(meeting.time > big(n as u128), || {
                            format!("n={n}: meeting at {} is within the blind window", meeting.time)
                        });
                        ratios.push(format!("n={n}: {}", rational_string(&meeting.time)));
                    }
                    None => tracker.fail(format!("n={n}: no meeting within the horizon")),
                }
            }
            Err(e) => tracker.fail(format!("n={n}: {e}")),
        }
    }
    let detail = format!(
        "optimum 1 with meetings delayed past n at every size ({})",
        ratios.join(", ")
    );
    tracker.result("silent-lower-bound", detail)
}

fn on_route(route: &BranchRoute, location: &MeetingLocation) -> bool {
    match location {
        MeetingLocation::Node(id) => route.nodes.contains(id),
        MeetingLocation::EdgeInterior { edge, .. } => route.edges.contains(&edge.index),
    }
}

/// Every ladder member shares the edge order, meets strictly between the
/// scale and its double, and any sufficiently early meeting — the oracle's
/// witness or a simulated count-exchange meeting — happens on the cheap
/// branch.
pub fn check_ladder_facts() -> CriterionResult {
    let mut tracker = Tracker::new();
    let mut members = 0;
    for (spec, instance) in ladder_members() {
        members += 1;
        let label = format!("k={} branch={}", spec.k, spec.cheap_branch);
        tracker.check(
            instance.classify().contains(&InstanceClass::OrderedEdges),
            || format!("{label}: edge order not shared"),
        );
        let x = big(u128::from(spec.scale()));
        let opt = t_opt_exact(&instance);
        tracker.check(opt.time > x, || {
            format!("{label}: optimum {} not above the scale {}", opt.time, x)
        });
        tracker.check(opt.time < scaled(&x, 2), || {
            format!("{label}: optimum {} not below twice the scale", opt.time)
        });

        let route = path_family_route(spec.k, spec.cheap_branch).expect("valid branch");
        let early = scaled(&x, spec.k as u128) / big(2);
        if opt.time <= early {
            tracker.check(on_route(&route, &opt.location), || {
                format!("{label}: optimal meeting {:?} leaves the cheap branch", opt.location)
            });
        }
        for mode in [A2ExchangeMode::SingleShot, A2ExchangeMode::TwoRound] {
            let config = RunConfig { a2_mode: mode, ..RunConfig::default() };
            match run_protocol(&instance, ProtocolId::A2OrderedEdges, &config) {
                Ok(outcome) => {
                    if let Some(meeting) = &outcome.meeting {
                        if meeting.time <= early {
                            tracker.check(on_route(&route, &meeting.location), || {
                                format!(
                                    "{label} ({mode:?}): early meeting {:?} leaves the cheap branch",
                                    meeting.location
                                )
                            });
                        }
                    }
                }
                Err(e) => tracker.fail(format!("{label} ({mode:?}): {e}")),
            }
        }
    }
    let detail = format!(
        "{members} ladder members; shared order, optimum strictly inside (x, 2x), early meetings confined to the cheap branch"
    );
    tracker.result("ladder-facts", detail)
}

/// The exact oracle agrees with an independent grid search, and with the
/// closed form on the smallest mixed-speed instance.
pub fn check_oracle_agreement() -> CriterionResult {
    let mut tracker = Tracker::new();
    let resolution: u32 = 10_000;
    for i in 0..200u64 {
        let n = 2 + (i as usize % 7);
        let max_weight = 12;
        let instance = gen_random(n, Ratio::new(2, 3), InstanceClass::Arbitrary, max_weight, 5000 + i)
            .expect("oracle suite parameters are always generable");
        let exact = t_opt_exact(&instance).time;
        let grid = t_opt_bruteforce(&instance, resolution);
        tracker.check(exact <= grid, || {
            format!("seed {}: grid minimum {} beats the exact optimum {}", 5000 + i, grid, exact)
        });
        let slack = BigRational::new(max_weight.into(), i128::from(resolution).into());
        tracker.check(&grid - &exact <= slack, || {
            format!(
                "seed {}: grid {} strays more than {} from exact {}",
                5000 + i,
                grid,
                slack,
                exact
            )
        });
    }

    let graph = Graph::new(&[0, 1], &[(0, 1)]).expect("single edge");
    let instance = Instance::new(
        graph,
        WeightFn::new(vec![1], 1).unwrap(),
        WeightFn::new(vec![3], 1).unwrap(),
        NodeId(0),
        NodeId(1),
    )
    .unwrap();
    let exact = t_opt_exact(&instance).time;
    tracker.check(
        exact == BigRational::new(3.into(), 4.into()),
        || format!("single mixed edge: optimum {} instead of 3/4", exact),
    );

    let detail = format!(
        "200 grid cross-checks within max-weight/{resolution}; closed-form 3/4 reproduced"
    );
    tracker.result("oracle-agreement", detail)
}

/// The benchmark table is byte-identical across repeated runs.
pub fn check_bench_determinism() -> CriterionResult {
    let mut tracker = Tracker::new();
    let first = crate::bench::bench_csv(42);
    let second = crate::bench::bench_csv(42);
    tracker.check(first == second, || "same-seed benchmark output differs".to_string());
    tracker.check(
        first.starts_with("family,"),
        || "benchmark output lacks the CSV header".to_string(),
    );
    let rows = first.lines().count();
    tracker.check(rows > 1, || "benchmark output has no data rows".to_string());
    let detail = format!("two identical runs, {rows} lines");
    tracker.result("bench-determinism", detail)
}

/// Every acceptance criterion, in reporting order.
pub fn verify_all() -> Vec<CriterionResult> {
    vec![
        check_sandwich(),
        check_interval_exchange(),
        check_count_exchange(),
        check_wait_and_sweep(),
        check_doubling(),
        check_silent_lower_bound(),
        check_ladder_facts(),
        check_oracle_agreement(),
        check_bench_determinism(),
    ]
}

/// Look up one criterion by its reporting name.
pub fn check_by_name(name: &str) -> Option<CriterionResult> {
    match name {
        "sandwich-bound" => Some(check_sandwich()),
        "interval-exchange-bound" => Some(check_interval_exchange()),
        "count-exchange-bound" => Some(check_count_exchange()),
        "wait-and-sweep-bound" => Some(check_wait_and_sweep()),
        "doubling-bound" => Some(check_doubling()),
        "silent-lower-bound" => Some(check_silent_lower_bound()),
        "ladder-facts" => Some(check_ladder_facts()),
        "oracle-agreement" => Some(check_oracle_agreement()),
        "bench-determinism" => Some(check_bench_determinism()),
        _ => None,
    }
}

/// The reporting names of all criteria, in order.
pub const CRITERION_NAMES: [&str; 9] = [
    "sandwich-bound",
    "interval-exchange-bound",
    "count-exchange-bound",
    "wait-and-sweep-bound",
    "doubling-bound",
    "silent-lower-bound",
    "ladder-facts",
    "oracle-agreement",
    "bench-determinism",
];
