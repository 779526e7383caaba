//! Command-line front end for the symgraph library.
//!
//! Every run prints one JSON report object to stdout (`bench` prints one
//! per case) and exits 0 on success, 2 on input errors, 3 on contract
//! violations. For a fixed input, flag set, and seed the JSON payload is
//! byte-identical across runs except for the wall-time field.

use std::path::Path;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use symgraph::diameter::{self, DiameterMode};
use symgraph::fileio;
use symgraph::objectives::{self, BuchiMethod, ObjectiveKind, SafeMethod};
use symgraph::oracles::{self, ExplicitGraph};
use symgraph::protocol::{self, AlgorithmKind, AlgorithmOutput, ReductionKind};
use symgraph::random;
use symgraph::reductions::{self, DisjointnessInstance, InstanceMode};
use symgraph::scc;
use symgraph::{CounterSnapshot, Graph, OpCounter, VertexSet};

/// Exit status paired with a diagnostic for stderr: 2 flags an input
/// problem, 3 a violated library contract.
type Failure = (u8, String);

fn input_error(message: impl Into<String>) -> Failure {
    (2, message.into())
}

fn lib_error(e: symgraph::Error) -> Failure {
    let code = if e.is_parse() { 2 } else { 3 };
    (code, e.to_string())
}

#[derive(Parser)]
#[command(
    name = "symgraph",
    version,
    about = "Symbolic graph algorithms: generators, solvers, protocol simulation, benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a reduction instance graph plus a JSON sidecar.
    Gen(GenArgs),
    /// Decompose a graph into strongly connected components.
    Scc(SccArgs),
    /// Compute the diameter exactly or approximately.
    Diameter(DiameterArgs),
    /// Solve a reach, safe, Buchi, or co-Buchi objective.
    Objective(ObjectiveArgs),
    /// Simulate the two-party communication transcript of a run.
    Protocol(ProtocolArgs),
    /// Sweep built-in instance families, one JSON line per run.
    Bench(BenchArgs),
    /// Explicit-graph reference computations.
    #[command(hide = true)]
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Random,
    Disjoint,
    Intersecting,
}

impl ModeArg {
    fn to_mode(self) -> InstanceMode {
        match self {
            ModeArg::Random => InstanceMode::Random,
            ModeArg::Disjoint => InstanceMode::ForcedDisjoint,
            ModeArg::Intersecting => InstanceMode::ForcedIntersecting,
        }
    }
}

/// Flags shared by every command that builds a Disjointness instance.
#[derive(Args)]
struct InstanceArgs {
    /// Disjointness universe size.
    #[arg(long)]
    k: usize,
    /// Block count for reduction 1; must divide k.
    #[arg(long, required_if_eq("reduction", "1"))]
    ell: Option<usize>,
    /// Alice's set as comma separated bit indices; requires --sy.
    #[arg(long, requires = "sy", conflicts_with_all = ["seed", "mode"])]
    sx: Option<String>,
    /// Bob's set as comma separated bit indices; requires --sx.
    #[arg(long, requires = "sx")]
    sy: Option<String>,
    /// RNG seed for sampled instances.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sampling mode for seeded instances.
    #[arg(long, value_enum, default_value_t = ModeArg::Random)]
    mode: ModeArg,
}

impl InstanceArgs {
    fn build(&self) -> Result<DisjointnessInstance, Failure> {
        match (&self.sx, &self.sy) {
            (Some(sx), Some(sy)) => {
                let xs = parse_index_list(sx)?;
                let ys = parse_index_list(sy)?;
                DisjointnessInstance::from_sets(self.k, &xs, &ys).map_err(lib_error)
            }
            _ => DisjointnessInstance::random(self.k, self.mode.to_mode(), self.seed)
                .map_err(lib_error),
        }
    }

    fn reduction_kind(&self, reduction: u8) -> Result<ReductionKind, Failure> {
        Ok(match reduction {
            1 => {
                let ell = self
                    .ell
                    .ok_or_else(|| input_error("--ell is required for reduction 1"))?;
                let kbar = self.k.checked_div(ell).unwrap_or(0);
                ReductionKind::SccLayered { ell, kbar }
            }
            2 => ReductionKind::SccTrivial,
            3 => ReductionKind::BuchiLoops,
            4 => ReductionKind::DiameterGadget,
            other => return Err(input_error(format!("unknown reduction {other}"))),
        })
    }
}

#[derive(Args)]
struct GenArgs {
    /// Reduction number.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    reduction: u8,
    #[command(flatten)]
    instance: InstanceArgs,
    /// Output graph file; the sidecar lands at <out>.json.
    #[arg(long)]
    out: String,
}

#[derive(Args)]
struct SccArgs {
    /// Graph file to decompose.
    #[arg(long)]
    input: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum DiamModeArg {
    Exact,
    #[value(name = "2approx")]
    TwoApprox,
    Eps,
}

#[derive(Args)]
struct DiameterArgs {
    /// Graph file to measure.
    #[arg(long)]
    input: String,
    /// exact, 2approx, or eps.
    #[arg(long, value_enum)]
    mode: DiamModeArg,
    /// Relative error bound for eps mode.
    #[arg(long, allow_negative_numbers = true)]
    eps: Option<f64>,
    /// Fixed neighborhood radius for eps mode, instead of --eps.
    #[arg(long)]
    x: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Reach,
    Safe,
    Buchi,
    Cobuchi,
}

impl KindArg {
    fn to_kind(self) -> ObjectiveKind {
        match self {
            KindArg::Reach => ObjectiveKind::Reach,
            KindArg::Safe => ObjectiveKind::Safe,
            KindArg::Buchi => ObjectiveKind::Buchi,
            KindArg::Cobuchi => ObjectiveKind::CoBuchi,
        }
    }

    fn name(self) -> &'static str {
        match self {
            KindArg::Reach => "reach",
            KindArg::Safe => "safe",
            KindArg::Buchi => "buchi",
            KindArg::Cobuchi => "cobuchi",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Fixpoint,
    #[value(name = "via-scc", alias = "via_scc")]
    ViaScc,
    #[value(name = "per-target", alias = "per_target")]
    PerTarget,
}

impl MethodArg {
    fn name(self) -> &'static str {
        match self {
            MethodArg::Fixpoint => "fixpoint",
            MethodArg::ViaScc => "via-scc",
            MethodArg::PerTarget => "per-target",
        }
    }
}

#[derive(Args)]
struct ObjectiveArgs {
    /// Graph file to solve on.
    #[arg(long)]
    input: String,
    /// Objective kind.
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Target set: a file path, or an inline list like "0,3,5" or "{v0,v3}".
    #[arg(long)]
    target: String,
    /// Solver variant: fixpoint or via-scc for safe, via-scc or per-target
    /// for buchi.
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgArg {
    Scc,
    Reach,
    Safe,
    Buchi,
    Cobuchi,
    #[value(name = "diameter-exact", alias = "diameter_exact")]
    DiameterExact,
}

impl AlgArg {
    fn to_alg(self) -> AlgorithmKind {
        match self {
            AlgArg::Scc => AlgorithmKind::Scc,
            AlgArg::Reach => AlgorithmKind::Reach,
            AlgArg::Safe => AlgorithmKind::Safe,
            AlgArg::Buchi => AlgorithmKind::Buchi,
            AlgArg::Cobuchi => AlgorithmKind::CoBuchi,
            AlgArg::DiameterExact => AlgorithmKind::DiameterExact,
        }
    }
}

#[derive(Args)]
struct ProtocolArgs {
    /// Reduction number.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    reduction: u8,
    /// Algorithm to replay.
    #[arg(long, value_enum)]
    algorithm: AlgArg,
    #[command(flatten)]
    instance: InstanceArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Scc,
    Diameter,
    Objectives,
    Protocol,
}

impl SuiteArg {
    fn name(self) -> &'static str {
        match self {
            SuiteArg::Scc => "scc",
            SuiteArg::Diameter => "diameter",
            SuiteArg::Objectives => "objectives",
            SuiteArg::Protocol => "protocol",
        }
    }
}

#[derive(Args)]
struct BenchArgs {
    /// Instance family to sweep.
    #[arg(long, value_enum)]
    suite: SuiteArg,
    /// Seeds per configuration.
    #[arg(long, default_value_t = 3)]
    seeds: u64,
    /// Worker threads; the SYMGRAPH_THREADS environment variable caps this.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhatArg {
    Scc,
    Diameter,
    Objective,
}

#[derive(Args)]
struct OracleArgs {
    /// Graph file to analyze.
    #[arg(long)]
    input: String,
    /// Reference computation to run.
    #[arg(long, value_enum)]
    what: WhatArg,
    /// Objective kind, for --what objective.
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    /// Target set, for --what objective.
    #[arg(long)]
    target: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo: String = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    match run(cli, &echo) {
        Ok(lines) => {
            for line in lines {
                println!("{line}");
            }
            ExitCode::SUCCESS
        }
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli, echo: &str) -> Result<Vec<String>, Failure> {
    let started = Instant::now();
    let single = |report: Value| vec![report.to_string()];
    Ok(match cli.command {
        Command::Gen(args) => single(cmd_gen(args, echo, started)?),
        Command::Scc(args) => single(cmd_scc(args, echo, started)?),
        Command::Diameter(args) => single(cmd_diameter(args, echo, started)?),
        Command::Objective(args) => single(cmd_objective(args, echo, started)?),
        Command::Protocol(args) => single(cmd_protocol(args, echo, started)?),
        Command::Bench(args) => cmd_bench(args, echo)?,
        Command::Oracle(args) => single(cmd_oracle(args, echo, started)?),
    })
}

/// Assembles the uniform report envelope around a result payload.
fn report(
    echo: &str,
    digest: &str,
    seed: u64,
    result: Value,
    counters: CounterSnapshot,
    started: Instant,
) -> Value {
    json!({
        "command": echo,
        "counters": {
            "one_step": counters.one_step,
            "peak_sets": counters.peak_sets,
            "set_ops": counters.set_ops,
        },
        "input_digest": digest,
        "result": result,
        "seed": seed,
        "wall_time_ms": started.elapsed().as_millis() as u64,
    })
}

/// Digest of the canonical text serialization, so that generating, saving,
/// and reloading a graph all yield the same value.
fn graph_digest(g: &Graph) -> String {
    let mut hasher = Sha256::new();
    hasher.update(fileio::format_graph(g).as_bytes());
    format!("sha256:{:x}", hasher.finalize())
}

fn load_graph(path: &str) -> Result<Graph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_error(format!("{path}: {e}")))?;
    fileio::parse_graph(&text).map_err(lib_error)
}

fn parse_index_list(text: &str) -> Result<Vec<usize>, Failure> {
    let mut out = Vec::new();
    for token in text.split(',').filter(|t| !t.trim().is_empty()) {
        let v = token
            .trim()
            .parse::<usize>()
            .map_err(|_| input_error(format!("bad index '{token}' in set list")))?;
        out.push(v);
    }
    Ok(out)
}

/// Target sets come either from a file or inline; inline lists may use the
/// "{v0,v3}" notation, so braces and `v` prefixes are stripped first.
fn parse_target(given: &str, universe: usize) -> Result<VertexSet, Failure> {
    let text = if Path::new(given).is_file() {
        std::fs::read_to_string(given).map_err(|e| input_error(format!("{given}: {e}")))?
    } else {
        given.chars()
            .map(|c| match c {
                '{' | '}' | 'v' | 'V' => ' ',
                other => other,
            })
            .collect()
    };
    fileio::parse_vertex_set(&text, universe).map_err(lib_error)
}

fn set_json(set: &VertexSet) -> Value {
    Value::from(set.iter().collect::<Vec<usize>>())
}

/// Components as ascending index lists, ordered by smallest member.
fn components_json(components: &[VertexSet]) -> (usize, Value) {
    let mut lists: Vec<Vec<usize>> = components.iter().map(|c| c.iter().collect()).collect();
    lists.sort_by_key(|c| c.first().copied().unwrap_or(usize::MAX));
    (lists.len(), Value::from(lists))
}

fn mode_str(mode: DiameterMode) -> &'static str {
    match mode {
        DiameterMode::Exact => "exact",
        DiameterMode::TwoApprox => "2approx",
        DiameterMode::EpsApprox => "eps",
    }
}

fn cmd_gen(args: GenArgs, echo: &str, started: Instant) -> Result<Value, Failure> {
    let inst = args.instance.build()?;
    let kind = args.instance.reduction_kind(args.reduction)?;
    let (g, partition) = protocol::generate(kind, &inst).map_err(lib_error)?;
    let possible = partition.possible.len();
    let text = fileio::format_graph(&g);
    std::fs::write(&args.out, &text)
        .map_err(|e| input_error(format!("{}: {e}", args.out)))?;
    let sidecar_path = format!("{}.json", args.out);
    let sidecar = json!({
        "disjoint": inst.is_disjoint(),
        "ell": args.instance.ell,
        "k": args.instance.k,
        "possible_edges": possible,
        "reduction": args.reduction,
        "seed": args.instance.seed,
    });
    std::fs::write(&sidecar_path, format!("{sidecar}\n"))
        .map_err(|e| input_error(format!("{sidecar_path}: {e}")))?;
    let result = json!({
        "disjoint": inst.is_disjoint(),
        "m": g.edge_count(),
        "n": g.vertex_count(),
        "out": args.out,
        "possible_edges": possible,
        "sidecar": sidecar_path,
    });
    Ok(report(
        echo,
        &graph_digest(&g),
        args.instance.seed,
        result,
        CounterSnapshot::default(),
        started,
    ))
}

fn cmd_scc(args: SccArgs, echo: &str, started: Instant) -> Result<Value, Failure> {
    let g = load_graph(&args.input)?;
    let ctr = OpCounter::new();
    let scc_report = scc::scc_decomposition(&g, &ctr);
    let (count, components) = components_json(&scc_report.components);
    let result = json!({
        "component_count": count,
        "components": components,
    });
    Ok(report(echo, &graph_digest(&g), 0, result, scc_report.counters, started))
}

fn cmd_diameter(args: DiameterArgs, echo: &str, started: Instant) -> Result<Value, Failure> {
    if !matches!(args.mode, DiamModeArg::Eps) && (args.eps.is_some() || args.x.is_some()) {
        return Err(input_error("--eps and --x apply only to --mode eps"));
    }
    let g = load_graph(&args.input)?;
    let ctr = OpCounter::new();
    let est = match args.mode {
        DiamModeArg::Exact => diameter::diameter_exact(&g, &ctr),
        DiamModeArg::TwoApprox => diameter::diameter_2approx(&g, &ctr).map_err(lib_error)?,
        DiamModeArg::Eps => match (args.eps, args.x) {
            (Some(eps), None) => diameter::diameter_approx(&g, eps, &ctr).map_err(lib_error)?,
            (None, Some(x)) => {
                diameter::diameter_approx_with_x(&g, x, &ctr).map_err(lib_error)?
            }
            (Some(_), Some(_)) => {
                return Err(input_error("--eps and --x are mutually exclusive"))
            }
            (None, None) => return Err(input_error("--mode eps needs --eps or --x")),
        },
    };
    let result = json!({
        "mode": mode_str(est.mode),
        "value": est.value,
        "x_used": est.x_used,
    });
    Ok(report(echo, &graph_digest(&g), 0, result, est.counters, started))
}

fn cmd_objective(args: ObjectiveArgs, echo: &str, started: Instant) -> Result<Value, Failure> {
    let g = load_graph(&args.input)?;
    let target = parse_target(&args.target, g.vertex_count())?;
    let ctr = OpCounter::new();
    let kind = args.kind.to_kind();
    let winning = match (kind, args.method) {
        (ObjectiveKind::Reach, None) => objectives::reach(&g, &target, &ctr),
        (ObjectiveKind::Safe, None | Some(MethodArg::Fixpoint)) => {
            objectives::safe(&g, &target, SafeMethod::Fixpoint, &ctr)
        }
        (ObjectiveKind::Safe, Some(MethodArg::ViaScc)) => {
            objectives::safe(&g, &target, SafeMethod::ViaScc, &ctr)
        }
        (ObjectiveKind::Buchi, None | Some(MethodArg::ViaScc)) => {
            objectives::buchi(&g, &target, BuchiMethod::ViaScc, &ctr)
        }
        (ObjectiveKind::Buchi, Some(MethodArg::PerTarget)) => {
            objectives::buchi(&g, &target, BuchiMethod::PerTarget, &ctr)
        }
        (ObjectiveKind::CoBuchi, None) => objectives::cobuchi(&g, &target, &ctr),
        (_, Some(method)) => {
            return Err(input_error(format!(
                "--method {} does not apply to --kind {}",
                method.name(),
                args.kind.name()
            )))
        }
    }
    .map_err(lib_error)?;
    let result = json!({
        "count": winning.count(),
        "kind": args.kind.name(),
        "method": args.method.map(MethodArg::name),
        "winning": set_json(&winning),
    });
    Ok(report(echo, &graph_digest(&g), 0, result, ctr.snapshot(), started))
}

fn output_json(output: &AlgorithmOutput) -> Value {
    match output {
        AlgorithmOutput::Components(components) => {
            let (count, lists) = components_json(components);
            json!({ "component_count": count, "components": lists })
        }
        AlgorithmOutput::Winning(set) => json!({ "winning": set_json(set) }),
        AlgorithmOutput::Diameter(value) => json!({ "diameter": value }),
    }
}

fn cmd_protocol(args: ProtocolArgs, echo: &str, started: Instant) -> Result<Value, Failure> {
    let inst = args.instance.build()?;
    let kind = args.instance.reduction_kind(args.reduction)?;
    let algorithm = args.algorithm.to_alg();
    let sim = protocol::simulate_detailed(kind, &inst, algorithm).map_err(lib_error)?;
    let (g, _) = protocol::generate(kind, &inst).map_err(lib_error)?;
    let ctr = OpCounter::new();
    protocol::run_algorithm(&g, algorithm, &ctr).map_err(lib_error)?;
    let result = json!({
        "algorithm": algorithm.name(),
        "disjoint": inst.is_disjoint(),
        "k": args.instance.k,
        "max_bits_per_op": sim.transcript.max_bits_per_op(),
        "op_count": sim.transcript.op_count,
        "output": output_json(&sim.output),
        "reduction": kind.name(),
        "total_bits": sim.transcript.total_bits,
    });
    Ok(report(
        echo,
        &graph_digest(&g),
        args.instance.seed,
        result,
        ctr.snapshot(),
        started,
    ))
}

fn cmd_oracle(args: OracleArgs, echo: &str, started: Instant) -> Result<Value, Failure> {
    let g = load_graph(&args.input)?;
    let eg = ExplicitGraph::from_graph(&g);
    let result = match args.what {
        WhatArg::Scc => {
            let partition = oracles::normalized(oracles::tarjan_scc(&eg));
            json!({
                "component_count": partition.len(),
                "components": partition,
            })
        }
        WhatArg::Diameter => json!({ "value": oracles::diameter(&eg) }),
        WhatArg::Objective => {
            let kind = args
                .kind
                .ok_or_else(|| input_error("--what objective needs --kind"))?;
            let given = args
                .target
                .as_deref()
                .ok_or_else(|| input_error("--what objective needs --target"))?;
            let target = parse_target(given, g.vertex_count())?;
            let winning = oracles::explicit_objective(&eg, kind.to_kind(), &target);
            json!({
                "count": winning.count(),
                "kind": kind.name(),
                "winning": set_json(&winning),
            })
        }
    };
    Ok(report(
        echo,
        &graph_digest(&g),
        0,
        result,
        CounterSnapshot::default(),
        started,
    ))
}

/// One benchmark case; cases are listed in a fixed order and may execute
/// on worker threads, but output is printed in listing order.
enum BenchCase {
    Scc { k: usize, ell: usize, seed: u64 },
    Diameter { n: usize, mode: DiamModeArg, seed: u64 },
    Objective { n: usize, kind: KindArg, seed: u64 },
    Protocol { reduction: u8, ell: Option<usize>, algorithm: AlgArg, k: usize, seed: u64 },
}

impl BenchCase {
    fn seed(&self) -> u64 {
        match *self {
            BenchCase::Scc { seed, .. }
            | BenchCase::Diameter { seed, .. }
            | BenchCase::Objective { seed, .. }
            | BenchCase::Protocol { seed, .. } => seed,
        }
    }

    fn descriptor(&self) -> Value {
        match *self {
            BenchCase::Scc { k, ell, .. } => json!({
                "ell": ell, "k": k, "kind": "scc_layered",
            }),
            BenchCase::Diameter { n, mode, .. } => json!({
                "kind": "diameter",
                "mode": match mode {
                    DiamModeArg::Exact => "exact",
                    DiamModeArg::TwoApprox => "2approx",
                    DiamModeArg::Eps => "eps",
                },
                "n": n,
            }),
            BenchCase::Objective { n, kind, .. } => json!({
                "kind": "objective", "n": n, "objective": kind.name(),
            }),
            BenchCase::Protocol { reduction, ell, algorithm, k, .. } => json!({
                "algorithm": algorithm.to_alg().name(),
                "ell": ell,
                "k": k,
                "kind": "protocol",
                "reduction": reduction,
            }),
        }
    }

    fn run(&self) -> Result<(String, Value, CounterSnapshot), Failure> {
        match *self {
            BenchCase::Scc { k, ell, seed } => {
                let inst = DisjointnessInstance::random(k, InstanceMode::Random, seed)
                    .map_err(lib_error)?;
                let (g, _) =
                    reductions::gen_scc_layered(&inst, ell, k / ell).map_err(lib_error)?;
                let ctr = OpCounter::new();
                let scc_report = scc::scc_decomposition(&g, &ctr);
                let result = json!({
                    "component_count": scc_report.components.len(),
                    "disjoint": inst.is_disjoint(),
                    "m": g.edge_count(),
                    "n": g.vertex_count(),
                });
                Ok((graph_digest(&g), result, scc_report.counters))
            }
            BenchCase::Diameter { n, mode, seed } => {
                let g = random::strongly_connected(n, n / 4, seed);
                let ctr = OpCounter::new();
                let est = match mode {
                    DiamModeArg::Exact => diameter::diameter_exact(&g, &ctr),
                    DiamModeArg::TwoApprox => {
                        diameter::diameter_2approx(&g, &ctr).map_err(lib_error)?
                    }
                    DiamModeArg::Eps => {
                        diameter::diameter_approx(&g, 0.5, &ctr).map_err(lib_error)?
                    }
                };
                let result = json!({
                    "mode": mode_str(est.mode),
                    "value": est.value,
                    "x_used": est.x_used,
                });
                Ok((graph_digest(&g), result, est.counters))
            }
            BenchCase::Objective { n, kind, seed } => {
                let g = random::digraph(n, 2.0 / n as f64, seed);
                let target = random::subset(n, 0.3, seed ^ 0x9e37_79b9_7f4a_7c15);
                let ctr = OpCounter::new();
                let query = objectives::ObjectiveQuery {
                    kind: kind.to_kind(),
                    target,
                };
                let winning = objectives::solve(&g, &query, &ctr).map_err(lib_error)?;
                let result = json!({
                    "count": winning.count(),
                    "objective": kind.name(),
                });
                Ok((graph_digest(&g), result, ctr.snapshot()))
            }
            BenchCase::Protocol { reduction, ell, algorithm, k, seed } => {
                let inst = DisjointnessInstance::random(k, InstanceMode::Random, seed)
                    .map_err(lib_error)?;
                let kind = match reduction {
                    1 => {
                        let ell = ell.expect("bench reduction 1 cases carry ell");
                        ReductionKind::SccLayered { ell, kbar: k / ell }
                    }
                    2 => ReductionKind::SccTrivial,
                    3 => ReductionKind::BuchiLoops,
                    _ => ReductionKind::DiameterGadget,
                };
                let sim = protocol::simulate_detailed(kind, &inst, algorithm.to_alg())
                    .map_err(lib_error)?;
                let (g, _) = protocol::generate(kind, &inst).map_err(lib_error)?;
                let result = json!({
                    "disjoint": inst.is_disjoint(),
                    "max_bits_per_op": sim.transcript.max_bits_per_op(),
                    "op_count": sim.transcript.op_count,
                    "total_bits": sim.transcript.total_bits,
                });
                let counters = CounterSnapshot {
                    one_step: sim.transcript.op_count as u64,
                    set_ops: 0,
                    peak_sets: 0,
                };
                Ok((graph_digest(&g), result, counters))
            }
        }
    }
}

fn bench_cases(suite: SuiteArg, seeds: u64) -> Vec<BenchCase> {
    let mut cases = Vec::new();
    match suite {
        SuiteArg::Scc => {
            for &k in &[16usize, 64, 256] {
                let sqrt = (k as f64).sqrt().round() as usize;
                for &ell in &[1usize, sqrt, k / 2] {
                    for seed in 0..seeds {
                        cases.push(BenchCase::Scc { k, ell, seed });
                    }
                }
            }
        }
        SuiteArg::Diameter => {
            for &n in &[16usize, 32, 64] {
                for &mode in &[DiamModeArg::Exact, DiamModeArg::TwoApprox, DiamModeArg::Eps] {
                    for seed in 0..seeds {
                        cases.push(BenchCase::Diameter { n, mode, seed });
                    }
                }
            }
        }
        SuiteArg::Objectives => {
            for &n in &[16usize, 32, 64] {
                for &kind in &[KindArg::Reach, KindArg::Safe, KindArg::Buchi, KindArg::Cobuchi] {
                    for seed in 0..seeds {
                        cases.push(BenchCase::Objective { n, kind, seed });
                    }
                }
            }
        }
        SuiteArg::Protocol => {
            let algs = [AlgArg::Scc, AlgArg::Reach, AlgArg::Safe, AlgArg::Buchi, AlgArg::Cobuchi];
            for &(reduction, ell) in &[(1u8, Some(4usize)), (2, None), (3, None)] {
                for &algorithm in &algs {
                    for seed in 0..seeds {
                        cases.push(BenchCase::Protocol {
                            reduction,
                            ell,
                            algorithm,
                            k: 16,
                            seed,
                        });
                    }
                }
            }
            for seed in 0..seeds {
                cases.push(BenchCase::Protocol {
                    reduction: 4,
                    ell: None,
                    algorithm: AlgArg::DiameterExact,
                    k: 16,
                    seed,
                });
            }
        }
    }
    cases
}

fn effective_threads(requested: usize) -> usize {
    let cap = std::env::var("SYMGRAPH_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&v| v >= 1);
    cap.map_or(requested, |c| requested.min(c)).max(1)
}

fn cmd_bench(args: BenchArgs, echo: &str) -> Result<Vec<String>, Failure> {
    let cases = bench_cases(args.suite, args.seeds);
    let threads = effective_threads(args.threads);
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<String, Failure>>>> =
        Mutex::new(vec![None; cases.len()]);
    let suite = args.suite.name();
    std::thread::scope(|scope| {
        for _ in 0..threads.min(cases.len().max(1)) {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                let Some(case) = cases.get(idx) else { break };
                let started = Instant::now();
                let outcome = case.run().map(|(digest, result, counters)| {
                    let mut line =
                        report(echo, &digest, case.seed(), result, counters, started);
                    let object = line.as_object_mut().expect("report is an object");
                    object.insert("case".into(), case.descriptor());
                    object.insert("suite".into(), Value::from(suite));
                    line.to_string()
                });
                slots.lock().expect("bench worker poisoned the slots")[idx] = Some(outcome);
            });
        }
    });
    let collected = slots.into_inner().expect("bench worker poisoned the slots");
    let mut lines = Vec::with_capacity(collected.len());
    for slot in collected {
        lines.push(slot.expect("every case index was claimed by a worker")?);
    }
    Ok(lines)
}
