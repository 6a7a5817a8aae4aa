//! The `atomwork` command line: builds structures, runs checks and games,
//! and prints one report per check as text or JSON.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use atomwork_core::bao::{
    check_atom_structure_axioms, check_crpa2_schema, diagonal_quotient_lift, eval_term, parse_term,
    verify_complete_representation, AtomSet, AtomStructureJson, ComplexAlgebra, CrpaVariant, FinCofSet,
    FiniteAtomStructure, SetAlgebraRepresentation, Signature,
};
use atomwork_core::games::{
    ef_decide, fresh_atom_strategy_verify, product_model, square_game, verify_ef_certificate,
    verify_square_certificate, Component, ComponentSize, Player,
};
use atomwork_core::graph_atoms::{
    ca_atoms_from_matrices, check_ra_atom_structure, enumerate_basic_matrices, ramsey_kernel_check,
    saturate_labelled_model, Graph, GraphSpec, LabelledGraph, RaAtomStructure,
};
use atomwork_core::witnesses::{
    additivity_failure_certificate, builder_verify, concrete_partition, in_y, neat_embedding_map_check,
    replay_trace, run_builder, singleton_recovery_check, FiniteSupportSeq, PaElement, PartitionAlgebra,
};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "atomwork", about = "Atom structures, witnesses and games for algebras of relations")]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Search budget for exhaustive procedures.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The relation-algebra atom structure of a graph.
    #[command(subcommand)]
    Alpha(AlphaCommand),
    /// Basic matrices of a graph's atom structure.
    Matrices(MatricesArgs),
    /// Explicit witness constructions.
    #[command(subcommand)]
    Witness(WitnessCommand),
    /// The step-by-step saturated structure.
    #[command(subcommand)]
    Builder(BuilderCommand),
    /// Atom games.
    #[command(subcommand)]
    Game(GameCommand),
    /// Checks on finite atom structures and complex algebras.
    #[command(subcommand)]
    Check(CheckCommand),
}

#[derive(Debug, Args)]
struct GraphArgs {
    /// interval, clique-union, complete, edgeless, single-vertex, or a path to a JSON graph file.
    #[arg(long, default_value = "interval")]
    graph: String,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long = "N")]
    big_n: Option<usize>,
    #[arg(long)]
    blocks: Option<usize>,
    /// Number of colours.
    #[arg(long, default_value_t = 3)]
    n: usize,
}

#[derive(Debug, Subcommand)]
enum AlphaCommand {
    /// Exhaustive consistency-table checks.
    Check(GraphArgs),
    /// The truncated Ramsey kernel on an interval graph.
    Ramsey {
        #[arg(long)]
        m: usize,
        #[arg(long = "N")]
        big_n: usize,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        max_subset: usize,
    },
    /// Saturates the empty labelled graph under one-point extensions.
    Saturate {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 6)]
        size_bound: usize,
        #[arg(long, default_value_t = 10_000)]
        tasks: usize,
    },
}

#[derive(Debug, Args)]
struct MatricesArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Matrix dimension.
    #[arg(long, default_value_t = 3)]
    dim: usize,
    /// Also list every matrix.
    #[arg(long)]
    list: bool,
}

#[derive(Debug, Subcommand)]
enum WitnessCommand {
    /// The failure of complete additivity of `s_0^1`.
    Additivity,
    /// Union, complement and transposition laws on sampled index sets.
    Closure {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// The case rule for `s_0^1` against a concrete finite partition.
    Partition {
        #[arg(long, default_value_t = 3)]
        base: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 3)]
        blocks: usize,
    },
    /// Singleton recovery on sampled finite-support sequences.
    Recovery {
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// The neat embedding on sampled sets.
    Neat {
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 3)]
        alpha: usize,
        #[arg(long, default_value_t = 2)]
        pad: usize,
        #[arg(long, default_value_t = 3)]
        field: usize,
    },
}

#[derive(Debug, Subcommand)]
enum BuilderCommand {
    Run {
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        verify: bool,
        /// Write the JSON-lines trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    Replay {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
}

#[derive(Debug, Subcommand)]
enum GameCommand {
    /// The fresh-atom strategy on two products differing in one swap component.
    Fresh {
        /// Swap-component size on the first side: a number or `inf`.
        #[arg(long)]
        a_size: String,
        #[arg(long)]
        b_size: String,
        #[arg(long, default_value_t = 3)]
        rounds: usize,
    },
    /// The clique-witness game on a graph's atom structure.
    Square {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 5)]
        clique_bound: usize,
        #[arg(long, default_value_t = 2)]
        rounds: usize,
    },
    /// A game described by a JSON file.
    Spec { path: PathBuf },
}

#[derive(Debug, Subcommand)]
enum CheckCommand {
    /// Atom-structure axioms for a JSON atom structure.
    Axioms { path: PathBuf },
    /// The two-dimensional complete-representability schema on a full set algebra.
    Crpa {
        #[arg(long, default_value_t = 2)]
        u: usize,
        #[arg(long, value_enum, default_value = "corrected")]
        variant: VariantArg,
    },
    /// Lifts the identity representation of the diagonal-free reduct.
    Lift {
        #[arg(long, default_value_t = 2)]
        u: usize,
        #[arg(long, default_value_t = 3)]
        dim: usize,
    },
    /// Evaluates a term in a full set algebra; variables are unbound.
    Eval {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        u: usize,
        #[arg(long)]
        expr: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Literal,
    Corrected,
}

/// One check result. Field order is the output order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub check: String,
    pub status: Status,
    pub details: Value,
    pub witness: Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Report {
    fn new(check: &str, passed: bool, details: Value, witness: Value) -> Self {
        Report { check: check.to_string(), status: if passed { Status::Pass } else { Status::Fail }, details, witness }
    }

    fn error(check: &str, message: impl ToString) -> Self {
        Report::new(check, false, Value::Null, json!({ "error": message.to_string() }))
    }
}

/// Input problems: exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

type CmdResult = Result<Vec<Report>, UsageError>;

/// Renders reports: a JSON array, or one line per check.
pub fn emit_report(reports: &[Report], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(reports).expect("reports serialize") + "\n",
        Format::Text => reports.iter().map(text_line).collect(),
    }
}

fn text_line(r: &Report) -> String {
    let status = match r.status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
    };
    let mut line = format!("{status} {}", r.check);
    for (key, field) in [("", &r.details), ("witness ", &r.witness)] {
        match field {
            Value::Null => {}
            Value::Object(map) => {
                for (k, v) in map {
                    line.push_str(&format!(" {key}{k}={}", compact(v)));
                }
            }
            other => line.push_str(&format!(" {key}{}", compact(other))),
        }
    }
    line + "\n"
}

fn list_or_null<T: Serialize>(items: Vec<T>) -> Value {
    if items.is_empty() {
        Value::Null
    } else {
        json!(items)
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Parses `argv` (program name first), runs the command and writes its
/// reports to `out`; diagnostics go to `err`. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let mut warnings = Vec::new();
    match dispatch(&cli, &mut warnings) {
        Ok(reports) => {
            for w in warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            let _ = out.write_all(emit_report(&reports, cli.format).as_bytes());
            if reports.iter().all(|r| r.status == Status::Pass) {
                0
            } else {
                1
            }
        }
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn dispatch(cli: &Cli, warnings: &mut Vec<String>) -> CmdResult {
    match &cli.command {
        Command::Alpha(cmd) => alpha(cmd, warnings),
        Command::Matrices(args) => matrices(args, cli.budget, warnings),
        Command::Witness(cmd) => witness(cmd, cli.seed),
        Command::Builder(cmd) => builder(cmd),
        Command::Game(cmd) => game(cmd, cli.budget, warnings),
        Command::Check(cmd) => check(cmd),
    }
}

/// A graph from a generator name plus flags, or from a JSON file.
pub fn load_graph(
    kind: &str,
    m: Option<usize>,
    big_n: Option<usize>,
    blocks: Option<usize>,
    warnings: &mut Vec<String>,
) -> Result<Graph, UsageError> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| UsageError(format!("--graph {kind} needs --{flag}")));
    let spec = match kind {
        "interval" => GraphSpec::Interval { m: need(m, "m")?, n: need(big_n, "N")? },
        "clique-union" => GraphSpec::CliqueUnion { n: need(big_n, "N")?, blocks: need(blocks, "blocks")? },
        "complete" => return Ok(Graph::complete(need(m, "m")?)),
        "edgeless" => return Ok(Graph::edgeless(need(m, "m")?)),
        "single-vertex" => return Ok(Graph::edgeless(1)),
        path => return load_graph_file(Path::new(path), warnings),
    };
    let (graph, w) = Graph::from_spec(spec).map_err(|e| UsageError(e.to_string()))?;
    warnings.extend(w);
    Ok(graph)
}

pub fn load_graph_file(path: &Path, warnings: &mut Vec<String>) -> Result<Graph, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read graph file {}: {e}", path.display())))?;
    parse_graph(&text, warnings).map_err(|UsageError(m)| UsageError(format!("{}: {m}", path.display())))
}

/// Parses the JSON graph schema; errors carry line and column.
pub fn parse_graph(text: &str, warnings: &mut Vec<String>) -> Result<Graph, UsageError> {
    let spec: GraphSpec = serde_json::from_str(text)
        .map_err(|e| UsageError(format!("line {} column {}: {e}", e.line(), e.column())))?;
    let (graph, w) = Graph::from_spec(spec).map_err(|e| UsageError(e.to_string()))?;
    warnings.extend(w);
    Ok(graph)
}

fn graph_of(args: &GraphArgs, warnings: &mut Vec<String>) -> Result<Graph, UsageError> {
    load_graph(&args.graph, args.m, args.big_n, args.blocks, warnings)
}

fn alpha_of(args: &GraphArgs, warnings: &mut Vec<String>) -> Result<RaAtomStructure, UsageError> {
    RaAtomStructure::build_alpha(graph_of(args, warnings)?, args.n).map_err(|e| UsageError(e.to_string()))
}

fn alpha(cmd: &AlphaCommand, warnings: &mut Vec<String>) -> CmdResult {
    match cmd {
        AlphaCommand::Check(args) => {
            let alpha = alpha_of(args, warnings)?;
            let violations = check_ra_atom_structure(&alpha);
            let k = alpha.atom_count();
            Ok(vec![Report::new(
                "alpha-check",
                violations.is_empty(),
                json!({ "atoms": k, "triples": k * k * k, "colours": args.n }),
                if violations.is_empty() { Value::Null } else { json!(violations) },
            )])
        }
        AlphaCommand::Ramsey { m, big_n, n, max_subset } => match ramsey_kernel_check(*m, *big_n, *n, *max_subset) {
            Ok(r) => Ok(vec![Report::new(
                "ramsey-kernel",
                r.passed(),
                json!({
                    "m": r.m, "N": r.n_clique, "colours": r.colours,
                    "partition_size": r.partition.len(),
                    "covering": r.covering_holds, "monochromatic": r.all_monochromatic,
                    "subsets_checked": r.subsets_checked,
                }),
                json!(r.violation),
            )]),
            Err(e) => Ok(vec![Report::error("ramsey-kernel", e)]),
        },
        AlphaCommand::Saturate { graph, size_bound, tasks } => {
            let g = graph_of(graph, warnings)?;
            match saturate_labelled_model(&LabelledGraph::new(0), &g, graph.n, *size_bound, *tasks) {
                Ok(s) => Ok(vec![Report::new(
                    "gg-saturation",
                    true,
                    json!({
                        "nodes": s.model.node_count(),
                        "realized": s.realized.len(),
                        "unrealized": s.unrealized.len(),
                    }),
                    Value::Null,
                )]),
                Err(e) => Ok(vec![Report::error("gg-saturation", e)]),
            }
        }
    }
}

fn matrices(args: &MatricesArgs, budget: Option<u64>, warnings: &mut Vec<String>) -> CmdResult {
    let alpha = alpha_of(&args.graph, warnings)?;
    let list = match enumerate_basic_matrices(&alpha, args.dim, budget) {
        Ok(list) => list,
        Err(e) => return Ok(vec![Report::error("basic-matrices", e)]),
    };
    let mut details = json!({ "atoms": alpha.atom_count(), "dimension": args.dim, "matrices": list.len() });
    if args.list {
        details["list"] = json!(list.iter().map(|m| m.label(&alpha)).collect::<Vec<_>>());
    }
    let mut reports = vec![Report::new("basic-matrices", true, details, Value::Null)];
    match ca_atoms_from_matrices(&alpha, &list, args.dim) {
        Ok(s) => {
            let sig = s.full_signature().map_err(|e| UsageError(e.to_string()))?;
            let violations = check_atom_structure_axioms(&s, &sig);
            reports.push(Report::new(
                "matrix-atom-structure",
                violations.is_empty(),
                json!({ "atoms": s.atom_count() }),
                if violations.is_empty() { Value::Null } else { json!(violations) },
            ));
        }
        Err(e) => reports.push(Report::error("matrix-atom-structure", e)),
    }
    Ok(reports)
}

fn random_index_set(rng: &mut ChaCha8Rng) -> PaElement {
    let support: Vec<u64> = (0..rng.gen_range(0..6)).map(|_| rng.gen_range(0..24)).collect();
    if rng.gen_bool(0.5) {
        FinCofSet::finite(support)
    } else {
        FinCofSet::cofinite(support)
    }
}

fn random_sequence(rng: &mut ChaCha8Rng) -> FiniteSupportSeq {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    let mut entries = Vec::new();
    for i in 0..8 {
        if rng.gen_bool(0.6) {
            let p = BigInt::from(rng.gen_range(-50i64..=50));
            let q = BigInt::from(rng.gen_range(1i64..=12));
            entries.push((i, BigRational::new(p, q)));
        }
    }
    FiniteSupportSeq::from_entries(entries)
}

fn witness(cmd: &WitnessCommand, seed: u64) -> CmdResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match cmd {
        WitnessCommand::Additivity => {
            let cert = additivity_failure_certificate();
            let alg = PartitionAlgebra::new(2).map_err(|e| UsageError(e.to_string()))?;
            let passed = cert.accepted_as_witness
                && cert.sup == alg.one()
                && cert.image_sup == alg.zero()
                && cert.s01_of_sup == alg.one();
            Ok(vec![Report::new("additivity-failure", passed, json!(cert), Value::Null)])
        }
        WitnessCommand::Closure { samples } => {
            let alg = PartitionAlgebra::new(3).map_err(|e| UsageError(e.to_string()))?;
            let mut failure = Value::Null;
            for _ in 0..*samples {
                let (x, y) = (random_index_set(&mut rng), random_index_set(&mut rng));
                let u = alg.union(&x, &y);
                let c = alg.complement(&x);
                let pointwise = (0..32u64).all(|k| {
                    u.contains(&k) == (x.contains(&k) || y.contains(&k)) && c.contains(&k) != x.contains(&k)
                });
                let ok = pointwise
                    && u.is_cofinite() == (x.is_cofinite() || y.is_cofinite())
                    && alg.union(&x, &c) == alg.one()
                    && alg.complement(&c) == x
                    && (0..3).all(|i| (i + 1..3).all(|j| alg.transposition(&x, i, j).ok().as_ref() == Some(&x)));
                if !ok {
                    failure = json!({ "x": x, "y": y });
                    break;
                }
            }
            Ok(vec![Report::new(
                "partition-closure",
                failure.is_null(),
                json!({ "samples": samples, "seed": seed }),
                failure,
            )])
        }
        WitnessCommand::Partition { base, dim, blocks } => {
            let p = concrete_partition(*base, *dim, *blocks).map_err(|e| UsageError(e.to_string()))?;
            let alg = PartitionAlgebra::new(*dim).map_err(|e| UsageError(e.to_string()))?;
            let window = (*blocks - 1) as u64;
            let mut failure = Value::Null;
            for mask in 0..(1u64 << window) {
                let support: Vec<u64> = (0..window).filter(|b| mask >> b & 1 == 1).collect();
                for x in [FinCofSet::finite(support.clone()), FinCofSet::cofinite(support)] {
                    if p.s01_pointwise(&p.denote(&x)) != p.denote(&alg.s01(&x)) {
                        failure = json!({ "x": x });
                    }
                }
            }
            Ok(vec![Report::new(
                "s01-case-rule",
                failure.is_null(),
                json!({ "base": base, "dimension": dim, "blocks": p.blocks.len(), "symmetric_under": p.symmetric_under }),
                failure,
            )])
        }
        WitnessCommand::Recovery { samples } => {
            let mut failure = Value::Null;
            for _ in 0..*samples {
                let s = random_sequence(&mut rng);
                let r = singleton_recovery_check(&s);
                if !r.holds() || !in_y(&r.w1) || !in_y(&r.w2) {
                    failure = json!(r);
                    break;
                }
            }
            Ok(vec![Report::new(
                "singleton-recovery",
                failure.is_null(),
                json!({ "samples": samples, "seed": seed }),
                failure,
            )])
        }
        WitnessCommand::Neat { samples, alpha, pad, field } => {
            let space = atomwork_core::bao::all_tuples(*alpha, *field);
            let sets: Vec<_> = (0..*samples)
                .map(|_| space.iter().filter(|_| rng.gen_bool(0.3)).cloned().collect())
                .collect();
            let r = neat_embedding_map_check(&sets, *alpha, *pad, *field);
            Ok(vec![Report::new(
                "neat-embedding",
                r.passed(),
                json!({ "alpha": alpha, "pad": pad, "field": field, "sets_checked": r.sets_checked, "seed": seed }),
                json!(r.failure),
            )])
        }
    }
}

fn builder(cmd: &BuilderCommand) -> CmdResult {
    match cmd {
        BuilderCommand::Run { steps, n, verify, trace } => {
            let state = run_builder(*n, *steps).map_err(|e| UsageError(e.to_string()))?;
            let jsonl = state.trace_jsonl();
            if let Some(path) = trace {
                std::fs::write(path, &jsonl)
                    .map_err(|e| UsageError(format!("cannot write trace {}: {e}", path.display())))?;
            }
            let mut reports = vec![Report::new(
                "builder-run",
                true,
                json!({ "steps": steps, "n": n, "elements": state.element_count(), "tuples": state.tuple_count() }),
                Value::Null,
            )];
            if *verify {
                let report = builder_verify(&state, state.trace());
                for c in &report.checks {
                    reports.push(Report::new(
                        &format!("builder-{}", c.condition),
                        c.passed,
                        json!({ "instances": c.instances }),
                        json!(c.witness),
                    ));
                }
                let replayed = replay_trace(*n, &jsonl);
                let identical = replayed.as_ref().is_ok_and(|s| s.trace_jsonl() == jsonl);
                reports.push(Report::new(
                    "builder-replay",
                    identical,
                    json!({ "bytes": jsonl.len() }),
                    replayed.err().map_or(Value::Null, |e| json!(e.to_string())),
                ));
            }
            Ok(reports)
        }
        BuilderCommand::Replay { trace, n } => {
            let text = std::fs::read_to_string(trace)
                .map_err(|e| UsageError(format!("cannot read trace {}: {e}", trace.display())))?;
            match replay_trace(*n, &text) {
                Ok(state) => {
                    let report = builder_verify(&state, state.trace());
                    Ok(vec![Report::new(
                        "builder-replay",
                        report.passed(),
                        json!({ "steps": state.element_count(), "tuples": state.tuple_count() }),
                        list_or_null(report.checks.iter().filter(|c| !c.passed).collect()),
                    )])
                }
                Err(e) => Ok(vec![Report::error("builder-replay", e)]),
            }
        }
    }
}

fn parse_size(s: &str) -> Result<ComponentSize, UsageError> {
    match s {
        "inf" | "unbounded" => Ok(ComponentSize::Unbounded),
        other => other
            .parse()
            .map(ComponentSize::Finite)
            .map_err(|_| UsageError(format!("size {other:?} is neither a number nor `inf`"))),
    }
}

fn fresh_report(a: &[Component], b: &[Component], rounds: usize) -> Report {
    match fresh_atom_strategy_verify(a, b, rounds) {
        Ok(r) => Report::new("fresh-atom-strategy", r.passed, json!(r), Value::Null),
        Err(e) => Report::error("fresh-atom-strategy", e),
    }
}

fn square_report<T: atomwork_core::games::AtomTable>(
    t: &T,
    clique_bound: usize,
    rounds: usize,
    budget: Option<u64>,
) -> Report {
    match square_game(t, clique_bound, rounds, budget) {
        Ok(out) => {
            let replay = match out.winner {
                Player::Forall => verify_square_certificate(t, &out).err(),
                Player::Exists => None,
            };
            Report::new(
                "square-game",
                replay.is_none(),
                json!({
                    "winner": out.winner, "clique_bound": clique_bound, "rounds": rounds,
                    "positions": out.positions,
                    "opening": out.opening.map(|a| t.label(a)),
                    "strategy_steps": out.forall_strategy.len(),
                }),
                json!(replay),
            )
        }
        Err(e) => Report::error("square-game", e),
    }
}

fn game(cmd: &GameCommand, budget: Option<u64>, warnings: &mut Vec<String>) -> CmdResult {
    match cmd {
        GameCommand::Fresh { a_size, b_size, rounds } => {
            let shared = Component::finite("u", 2);
            let a = vec![shared.clone(), Component { name: "t".into(), size: parse_size(a_size)?, swap: true }];
            let b = vec![shared, Component { name: "t".into(), size: parse_size(b_size)?, swap: true }];
            Ok(vec![fresh_report(&a, &b, *rounds)])
        }
        GameCommand::Square { graph, clique_bound, rounds } => {
            let alpha = alpha_of(graph, warnings)?;
            Ok(vec![square_report(&alpha, *clique_bound, *rounds, budget)])
        }
        GameCommand::Spec { path } => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| UsageError(format!("cannot read game spec {}: {e}", path.display())))?;
            let spec: GameSpec = serde_json::from_str(&text).map_err(|e| {
                UsageError(format!("{}: line {} column {}: {e}", path.display(), e.line(), e.column()))
            })?;
            match spec {
                GameSpec::Ef { a, b, rounds } => {
                    let sa = product_model(&a).map_err(|e| UsageError(e.to_string()))?.reify(rounds);
                    let sb = product_model(&b).map_err(|e| UsageError(e.to_string()))?.reify(rounds);
                    match ef_decide(&sa, &sb, rounds, budget) {
                        Ok(out) => {
                            let replay = verify_ef_certificate(&sa, &sb, rounds, &out.certificate).err();
                            Ok(vec![Report::new(
                                "ef-game",
                                replay.is_none(),
                                json!({ "winner": out.winner, "rounds": rounds, "positions": out.positions }),
                                json!(replay),
                            )])
                        }
                        Err(e) => Ok(vec![Report::error("ef-game", e)]),
                    }
                }
                GameSpec::Fresh { a, b, rounds } => Ok(vec![fresh_report(&a, &b, rounds)]),
                GameSpec::Square { graph, colours, clique_bound, rounds } => {
                    let (g, w) = Graph::from_spec(graph).map_err(|e| UsageError(e.to_string()))?;
                    warnings.extend(w);
                    let alpha = RaAtomStructure::build_alpha(g, colours).map_err(|e| UsageError(e.to_string()))?;
                    Ok(vec![square_report(&alpha, clique_bound, rounds, budget)])
                }
            }
        }
    }
}

/// The JSON form of a game description.
#[derive(Debug, serde::Deserialize)]
#[serde(tag = "game", rename_all = "snake_case", deny_unknown_fields)]
enum GameSpec {
    Ef { a: Vec<Component>, b: Vec<Component>, rounds: usize },
    Fresh { a: Vec<Component>, b: Vec<Component>, rounds: usize },
    Square { graph: GraphSpec, colours: usize, clique_bound: usize, rounds: usize },
}

fn full_algebra(dim: usize, u: usize) -> Result<ComplexAlgebra, UsageError> {
    let s = FiniteAtomStructure::full_set_algebra(dim, u).map_err(|e| UsageError(e.to_string()))?;
    let sig = Signature::polyadic_equality(dim).map_err(|e| UsageError(e.to_string()))?;
    ComplexAlgebra::new(s, sig).map_err(|e| UsageError(e.to_string()))
}

fn check(cmd: &CheckCommand) -> CmdResult {
    match cmd {
        CheckCommand::Axioms { path } => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
            let json: AtomStructureJson = serde_json::from_str(&text).map_err(|e| {
                UsageError(format!("{}: line {} column {}: {e}", path.display(), e.line(), e.column()))
            })?;
            let s = FiniteAtomStructure::from_json(&json).map_err(|e| UsageError(e.to_string()))?;
            let sig = s.full_signature().map_err(|e| UsageError(e.to_string()))?;
            let violations = check_atom_structure_axioms(&s, &sig);
            let labelled: Vec<Value> = violations
                .iter()
                .map(|v| {
                    json!({
                        "violation": v,
                        "atoms": v.witness.iter().map(|&a| s.label(a)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(vec![Report::new(
                "atom-structure-axioms",
                violations.is_empty(),
                json!({ "atoms": s.atom_count(), "dimension": s.dimension() }),
                if labelled.is_empty() { Value::Null } else { json!(labelled) },
            )])
        }
        CheckCommand::Crpa { u, variant } => {
            let alg = full_algebra(2, *u)?;
            let v = match variant {
                VariantArg::Literal => CrpaVariant::Literal,
                VariantArg::Corrected => CrpaVariant::Corrected,
            };
            match check_crpa2_schema(&alg, v) {
                Ok(r) => Ok(vec![Report::new(
                    "crpa2-schema",
                    r.holds(),
                    json!({ "variant": r.variant, "base": u }),
                    list_or_null(r.pairs.iter().filter(|p| !p.holds).collect()),
                )]),
                Err(e) => Ok(vec![Report::error("crpa2-schema", e)]),
            }
        }
        CheckCommand::Lift { u, dim } => {
            let alg = full_algebra(*dim, *u)?;
            let rep = SetAlgebraRepresentation::identity_of_full(*dim, *u);
            match diagonal_quotient_lift(&rep, &alg) {
                Ok(lifted) => {
                    let r = verify_complete_representation(&lifted, &alg);
                    Ok(vec![Report::new(
                        "diagonal-lift",
                        r.passed,
                        json!({ "base": lifted.base, "dimension": dim, "unit": lifted.unit.len() }),
                        if r.passed { Value::Null } else { json!(r) },
                    )])
                }
                Err(e) => Ok(vec![Report::error("diagonal-lift", e)]),
            }
        }
        CheckCommand::Eval { dim, u, expr } => {
            let alg = full_algebra(*dim, *u)?;
            let term = parse_term(expr).map_err(|e| UsageError(e.to_string()))?;
            match eval_term(&alg, &term, &BTreeMap::<String, AtomSet>::new()) {
                Ok(x) => Ok(vec![Report::new(
                    "eval",
                    true,
                    json!({ "expr": expr, "atoms": x.iter().map(|a| alg.structure().label(a).to_string()).collect::<Vec<_>>() }),
                    Value::Null,
                )]),
                Err(e) => Err(UsageError(e.to_string())),
            }
        }
    }
}
