//! `rendezvous` — run, verify, bench, and generate rendezvous instances.
//!
//! Exit codes: 0 success, 1 internal failure or failed verification,
//! 2 usage error, 3 unreadable or invalid instance, 4 instance class does
//! not admit the protocol, 5 no meeting within the horizon.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::rational::Ratio;
use num::{BigRational, Signed};

use rendezvous_cli::io::{
    self, parse_rational, read_instance, record_from_outcome, record_to_json, write_instance,
    InstanceIoError,
};
use rendezvous_cli::{bench, suite};
use rendezvous_core::generators::{
    adversary_bipartite, gen_bipartite, gen_path_family, gen_random, BipartiteSpec,
    GeneratorError, PathFamilySpec,
};
use rendezvous_core::protocols::{A2ExchangeMode, ProtocolId};
use rendezvous_core::simulator::{run_protocol, RunConfig, RunError};
use rendezvous_core::{Instance, InstanceClass};

#[derive(Parser)]
#[command(
    name = "rendezvous",
    version,
    about = "Deterministic simulator for two-agent rendezvous on dual-weighted graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one protocol on an instance file and report the outcome as JSON.
    Run(RunArgs),
    /// Run acceptance criteria and print one PASS/FAIL line per criterion.
    Verify(VerifyArgs),
    /// Emit the deterministic benchmark CSV.
    Bench(BenchArgs),
    /// Generate an instance file.
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Args)]
struct RunArgs {
    /// Instance JSON file.
    #[arg(long)]
    instance: PathBuf,
    /// One of: a1-arbitrary, a2-ordered-edges, a3-ordered-agents, a4-no-comm.
    #[arg(long)]
    protocol: String,
    /// Horizon = this multiple of node count times the node-rendezvous time.
    #[arg(long, default_value_t = 16)]
    horizon_multiplier: u128,
    /// Waiting factor for a3-ordered-agents, as `p` or `p/q` (≥ 1).
    #[arg(long)]
    lambda: Option<String>,
    /// Exchange mode for a2-ordered-edges.
    #[arg(long, value_enum, default_value_t = ExchangeModeArg::SingleShot)]
    a2_exchange_mode: ExchangeModeArg,
    /// Write the run record here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run only this criterion (may repeat); defaults to all of them.
    #[arg(long)]
    criterion: Vec<String>,
    /// List criterion names and exit.
    #[arg(long)]
    list: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExchangeModeArg {
    SingleShot,
    TwoRound,
}

impl From<ExchangeModeArg> for A2ExchangeMode {
    fn from(arg: ExchangeModeArg) -> Self {
        match arg {
            ExchangeModeArg::SingleShot => A2ExchangeMode::SingleShot,
            ExchangeModeArg::TwoRound => A2ExchangeMode::TwoRound,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassArg {
    Arbitrary,
    OrderedEdges,
    OrderedAgents,
}

impl From<ClassArg> for InstanceClass {
    fn from(arg: ClassArg) -> Self {
        match arg {
            ClassArg::Arbitrary => InstanceClass::Arbitrary,
            ClassArg::OrderedEdges => InstanceClass::OrderedEdges,
            ClassArg::OrderedAgents => InstanceClass::OrderedAgents,
        }
    }
}

#[derive(Subcommand)]
enum GenCommand {
    /// Seeded random connected instance of a structural class.
    Random {
        #[arg(long)]
        nodes: usize,
        /// Fraction of all possible edges, as `p/q`.
        #[arg(long, default_value = "1/2")]
        density: String,
        #[arg(long, value_enum, default_value_t = ClassArg::Arbitrary)]
        class: ClassArg,
        #[arg(long, default_value_t = 50)]
        max_weight: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Double star with per-agent cheap edges.
    Bipartite {
        /// Number of middle nodes.
        #[arg(long)]
        middles: usize,
        /// Comma-separated 0-based middle indices cheap for agent A.
        #[arg(long, value_delimiter = ',')]
        cheap_a: Vec<usize>,
        /// Comma-separated 0-based middle indices cheap for agent B.
        #[arg(long, value_delimiter = ',')]
        cheap_b: Vec<usize>,
        /// Heavy weight (default: the number of middles).
        #[arg(long)]
        scale: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ladder of parallel branches sharing one edge order.
    PathFamily {
        #[arg(long)]
        k: usize,
        /// Which branch (1-based) carries the cheap interior run.
        #[arg(long)]
        branch: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Double star tuned against the silent doubling strategy.
    Adversary {
        /// Number of middle nodes.
        #[arg(long)]
        middles: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum CliError {
    Usage(String),
    BadInstance(String),
    ClassMismatch(String),
    NoMeeting(String),
    Failure(String),
}

impl CliError {
    fn report(&self) -> (&str, u8) {
        match self {
            CliError::Usage(m) => (m, 2),
            CliError::BadInstance(m) => (m, 3),
            CliError::ClassMismatch(m) => (m, 4),
            CliError::NoMeeting(m) => (m, 5),
            CliError::Failure(m) => (m, 1),
        }
    }
}

impl From<InstanceIoError> for CliError {
    fn from(e: InstanceIoError) -> Self {
        match e {
            InstanceIoError::Write { .. } => CliError::Failure(e.to_string()),
            _ => CliError::BadInstance(e.to_string()),
        }
    }
}

impl From<RunError> for CliError {
    fn from(e: RunError) -> Self {
        match e {
            RunError::ClassMismatch { .. } => CliError::ClassMismatch(e.to_string()),
            RunError::HorizonOverflow => CliError::Usage(e.to_string()),
            RunError::Protocol(_) | RunError::Plan(_) => CliError::Failure(e.to_string()),
        }
    }
}

impl From<GeneratorError> for CliError {
    fn from(e: GeneratorError) -> Self {
        match e {
            GeneratorError::Run(inner) => inner.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

/// Write to stdout, treating a closed pipe (e.g. `| head`) as success.
fn write_stdout(content: &str) -> Result<(), CliError> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(content.as_bytes()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(CliError::Failure(format!("cannot write to stdout: {e}"))),
    }
}

fn emit(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        None => write_stdout(&format!("{content}\n")),
        Some(path) => std::fs::write(path, format!("{content}\n"))
            .map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display()))),
    }
}

fn emit_instance(out: Option<&Path>, instance: &Instance) -> Result<(), CliError> {
    match out {
        None => write_stdout(&format!("{}\n", io::instance_to_json(instance))),
        Some(path) => Ok(write_instance(path, instance)?),
    }
}

fn parse_lambda(text: &str) -> Result<BigRational, CliError> {
    let value = parse_rational(text)
        .map_err(|e| CliError::Usage(format!("invalid --lambda: {e}")))?;
    if value.is_negative() {
        return Err(CliError::Usage(format!("--lambda must be positive, got {text}")));
    }
    Ok(value)
}

fn parse_density(text: &str) -> Result<Ratio<u64>, CliError> {
    let bad = |detail: String| CliError::Usage(format!("invalid --density: {detail}"));
    let mut parts = text.splitn(2, '/');
    let numer: u64 = parts
        .next()
        .unwrap_or("")
        .trim()
        .parse()
        .map_err(|_| bad(format!("expected `p` or `p/q`, got {text:?}")))?;
    let denom: u64 = match parts.next() {
        None => 1,
        Some(d) => d
            .trim()
            .parse()
            .map_err(|_| bad(format!("expected `p` or `p/q`, got {text:?}")))?,
    };
    if denom == 0 {
        return Err(bad(format!("zero denominator in {text:?}")));
    }
    Ok(Ratio::new(numer, denom))
}

fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    let protocol = ProtocolId::from_str(&args.protocol).map_err(CliError::Usage)?;
    let instance = read_instance(&args.instance)?;
    let lambda = args.lambda.as_deref().map(parse_lambda).transpose()?;
    let config = RunConfig {
        horizon_multiplier: args.horizon_multiplier,
        lambda,
        a2_mode: args.a2_exchange_mode.into(),
    };
    let outcome = run_protocol(&instance, protocol, &config)?;
    let met = outcome.meeting.is_some();
    let record = record_from_outcome(&instance, &outcome);
    emit(args.out.as_deref(), &record_to_json(&record))?;
    if met {
        Ok(())
    } else {
        Err(CliError::NoMeeting(format!(
            "no meeting within horizon {} (raise --horizon-multiplier)",
            outcome.horizon
        )))
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    if args.list {
        for name in suite::CRITERION_NAMES {
            write_stdout(&format!("{name}\n"))?;
        }
        return Ok(());
    }
    let results = if args.criterion.is_empty() {
        suite::verify_all()
    } else {
        let mut results = Vec::new();
        for name in &args.criterion {
            let result = suite::check_by_name(name).ok_or_else(|| {
                CliError::Usage(format!(
                    "unknown criterion {name:?}; available: {}",
                    suite::CRITERION_NAMES.join(", ")
                ))
            })?;
            results.push(result);
        }
        results
    };
    let mut all_passed = true;
    for result in &results {
        write_stdout(&format!("{}\n", result.line()))?;
        all_passed &= result.passed;
    }
    if all_passed {
        Ok(())
    } else {
        Err(CliError::Failure("one or more criteria failed".to_string()))
    }
}

fn cmd_bench(args: &BenchArgs) -> Result<(), CliError> {
    let csv = bench::bench_csv(args.seed);
    match &args.out {
        None => write_stdout(&csv),
        Some(path) => std::fs::write(path, &csv)
            .map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display()))),
    }
}

fn cmd_gen(command: &GenCommand) -> Result<(), CliError> {
    match command {
        GenCommand::Random { nodes, density, class, max_weight, seed, out } => {
            let density = parse_density(density)?;
            let instance = gen_random(*nodes, density, (*class).into(), *max_weight, *seed)?;
            emit_instance(out.as_deref(), &instance)
        }
        GenCommand::Bipartite { middles, cheap_a, cheap_b, scale, out } => {
            let flag = |indices: &[usize]| -> Result<Vec<bool>, CliError> {
                let mut flags = vec![false; *middles];
                for &i in indices {
                    *flags.get_mut(i).ok_or_else(|| {
                        CliError::Usage(format!(
                            "cheap index {i} out of range for {middles} middles"
                        ))
                    })? = true;
                }
                Ok(flags)
            };
            let mut spec = BipartiteSpec::new(flag(cheap_a)?, flag(cheap_b)?);
            if let Some(scale) = scale {
                spec.x = *scale;
            }
            let instance = gen_bipartite(&spec)?;
            emit_instance(out.as_deref(), &instance)
        }
        GenCommand::PathFamily { k, branch, out } => {
            let spec = PathFamilySpec { k: *k, cheap_branch: *branch };
            let instance = gen_path_family(&spec)?;
            emit_instance(out.as_deref(), &instance)
        }
        GenCommand::Adversary { middles, out } => {
            let (instance, outcome) = adversary_bipartite(*middles, ProtocolId::A4NoComm)?;
            if let Some(meeting) = &outcome.meeting {
                eprintln!(
                    "planted optimum 1; observed doubling meets at {}",
                    io::rational_string(&meeting.time)
                );
            }
            emit_instance(out.as_deref(), &instance)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Gen(command) => cmd_gen(command),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (message, code) = e.report();
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
