//! Command line front end.
//!
//! Every invocation prints exactly one JSON report envelope (see
//! [`crate::report`]). Exit codes: 0 when the answer is a pass, 1 when a
//! checked property failed (the report then carries a witness plus a replay
//! command line), 2 on usage or input parse errors, 3 when a budget or
//! round limit stopped the answer short. Payloads depend only on the
//! arguments and the seed, never on timing or `--jobs`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use crate::free::{free_algebra, free_algebra_saturating, FreeAlgebra, FreeError};
use crate::metalang::{
    self, eval, parse_program, truncate_sets, typecheck, typecheck_all, Program, TypeError,
};
use crate::model::FinAlgebra;
use crate::monad::catalog::{law_suite, parse_monad};
use crate::monad::{
    check_monad_laws, is_commutative, law_instance, pair_exchange, theorify, LawOptions,
    LawWitness,
};
use crate::report::{resolve_out, Report, Status};
use crate::subsume::{self, LassoSeq};
use crate::tensor::search::{enumerate_tensor_algebras, SearchConfig, TheoryFamily};
use crate::tensor::{
    check_commutation_tables, check_em_algebra, check_tensor_law, commutation_cross_check,
    em_from_semilattice_tables, em_from_sigma22_tables, saturate_free_tensor, tensor_law_instance,
    verify_state_tensor, EmAlgebra, TensorAlgebra, TensorWitness,
};
use crate::theory::{self, builtin_theory, dsl, Theory};
use crate::value::{parse_value, FiniteSet, FnTable, Value};

#[derive(Parser)]
#[command(name = "forge", version, about = "Workbench for finitary equational theories and finite-set monads")]
pub struct Cli {
    /// Also write the report to this file.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Pretty-print the report.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Accepted for interface stability; evaluation is single threaded and
    /// reports never depend on this value.
    #[arg(long, global = true, default_value_t = 1, value_name = "N")]
    pub jobs: usize,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Inspect builtin theories, their sums and tensors, or parse a file.
    Theory {
        #[command(subcommand)]
        cmd: TheoryCmd,
    },
    /// Build the free algebra of a theory over atomic generators.
    Free(FreeArgs),
    /// Kleisli triple laws, commutativity, and extracted theories.
    Monad {
        #[command(subcommand)]
        cmd: MonadCmd,
    },
    /// Typecheck, evaluate, and compare monadic metalanguage terms.
    Metalang {
        #[command(subcommand)]
        cmd: MetalangCmd,
    },
    /// Tensor algebras: law checks, enumeration, saturation.
    Tensor {
        #[command(subcommand)]
        cmd: TensorCmd,
    },
    /// Lasso subsumption decisions and the union splitting property.
    Subsume(SubsumeArgs),
    /// Run a bundled check suite.
    Suite(SuiteArgs),
}

#[derive(Subcommand)]
pub enum TheoryCmd {
    /// Print one theory's operations and equations.
    Show {
        /// Builtin name, e.g. semilattice, sigma22, monoid, state:2.
        #[arg(long)]
        theory: String,
    },
    /// Disjoint union of two theories, operations qualified by side.
    Sum {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// The sum plus one commutation equation per operation pair.
    Tensor {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Print the added commutation equations before the report.
        #[arg(long)]
        show: bool,
    },
    /// Parse a theory file and check well-formedness.
    Parse {
        #[arg(long, value_name = "FILE")]
        file: PathBuf,
    },
}

#[derive(Args)]
pub struct FreeArgs {
    /// Theory name.
    #[arg(long)]
    theory: String,
    /// Number of atomic generators.
    #[arg(long, default_value_t = 1)]
    gens: usize,
    /// Enumerate exactly the terms of this depth bound instead of
    /// saturating.
    #[arg(long)]
    depth: Option<usize>,
    /// Saturation rounds when no depth is given.
    #[arg(long, default_value_t = 16)]
    rounds: usize,
    /// Term budget for the underlying enumeration.
    #[arg(long, default_value_t = crate::DEFAULT_TERM_BUDGET)]
    budget: usize,
}

#[derive(Subcommand)]
pub enum MonadCmd {
    /// Check the Kleisli triple laws over all carriers up to a size.
    Laws {
        /// Monad spec, e.g. powerset:full, state:S=2, wellorder, list:3.
        #[arg(long)]
        monad: String,
        #[arg(long, default_value_t = 2)]
        max_size: usize,
        /// Skip extension associativity.
        #[arg(long)]
        unit_laws_only: bool,
        #[arg(long, default_value_t = crate::DEFAULT_SEED)]
        seed: u64,
        /// Re-evaluate one failing instance from a witness JSON string.
        #[arg(long, value_name = "JSON")]
        replay: Option<String>,
    },
    /// Compare the two sequencing orders of one computation pair.
    Commute {
        #[arg(long)]
        monad: String,
        /// Size of the first carrier A = {a0, a1, ..}.
        #[arg(long, default_value_t = 2)]
        a_size: usize,
        /// Element of T(A), written as a value literal.
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 2)]
        b_size: usize,
        /// Element of T(B).
        #[arg(long)]
        q: String,
    },
    /// Search all computation pairs up to a carrier size for an exchange
    /// violation.
    Commutative {
        #[arg(long)]
        monad: String,
        #[arg(long, default_value_t = 2)]
        max_size: usize,
    },
    /// Extract the truncated theory and re-check its equations in the
    /// monad.
    Theorify {
        #[arg(long)]
        monad: String,
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
        #[arg(long, default_value_t = 2)]
        witness_size: usize,
    },
}

#[derive(Subcommand)]
pub enum MetalangCmd {
    /// Parse a program file and typecheck every term.
    Check {
        #[arg(long, value_name = "FILE")]
        file: PathBuf,
    },
    /// Decide whether two terms denote the same function.
    Equiv {
        #[arg(long)]
        monad: String,
        #[arg(long, value_name = "FILE")]
        left: PathBuf,
        /// Second program; defaults to the left file.
        #[arg(long, value_name = "FILE")]
        right: Option<PathBuf>,
        /// Term name in the left program; defaults to its first term.
        #[arg(long)]
        left_term: Option<String>,
        /// Term name in the right program; defaults to the second term of a
        /// shared file, else the sole term.
        #[arg(long)]
        right_term: Option<String>,
        /// Also sweep every base-set size up to this bound.
        #[arg(long)]
        sizes: Option<usize>,
        /// Re-evaluate one environment from a witness JSON string.
        #[arg(long, value_name = "JSON")]
        replay: Option<String>,
    },
    /// Evaluate one term under an environment.
    Eval {
        #[arg(long)]
        monad: String,
        #[arg(long, value_name = "FILE")]
        file: PathBuf,
        /// Term name; defaults to the sole term.
        #[arg(long)]
        term: Option<String>,
        /// JSON object mapping variables to value literals.
        #[arg(long, default_value = "{}")]
        env: String,
    },
}

#[derive(Subcommand)]
pub enum TensorCmd {
    /// Check a two-structure carrier: syntactic commutation of its tables,
    /// and when structure bridges exist, both algebra laws plus the
    /// exchange law.
    LawCheck(LawCheckArgs),
    /// Count algebras of the tensor of two theories by carrier size.
    Enum(EnumArgs),
    /// Saturate the free tensor-with-semilattice algebra of a theory.
    Saturate(SaturateArgs),
    /// Compare the free semilattice/state tensor algebra against its
    /// closed form.
    VerifyState(VerifyStateArgs),
}

#[derive(Args)]
pub struct LawCheckArgs {
    /// JSON file with "carrier" and "tables" (see theory parse docs).
    #[arg(long, value_name = "FILE")]
    algebra: PathBuf,
    /// Theory interpreted by the first structure.
    #[arg(long, default_value = "semilattice")]
    left: String,
    #[arg(long, default_value = "sigma22")]
    right: String,
    /// Test set bound for the alpha side of the exchange law.
    #[arg(long, default_value_t = 2)]
    y_bound: usize,
    /// Test set bound for the beta side.
    #[arg(long, default_value_t = 2)]
    z_bound: usize,
    /// Instance cap; exceeding it reports partial coverage.
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    /// Re-evaluate one exchange instance from a witness JSON string.
    #[arg(long, value_name = "JSON")]
    replay: Option<String>,
}

#[derive(Args)]
pub struct EnumArgs {
    #[arg(long)]
    left: String,
    #[arg(long)]
    right: String,
    #[arg(long, default_value_t = 1)]
    gens: usize,
    /// Largest carrier size counted.
    #[arg(long, default_value_t = 3)]
    max_size: usize,
    /// Count raw reachable models instead of isomorphism classes.
    #[arg(long)]
    no_symmetry: bool,
    /// Search node budget across all sizes.
    #[arg(long, default_value_t = 50_000_000)]
    budget: u64,
}

#[derive(Args)]
pub struct SaturateArgs {
    /// Theory tensored with the semilattice theory.
    #[arg(long)]
    theory: String,
    #[arg(long, default_value_t = 1)]
    gens: usize,
    #[arg(long, default_value_t = 16)]
    rounds: usize,
    #[arg(long, default_value_t = crate::DEFAULT_TERM_BUDGET)]
    budget: usize,
}

#[derive(Args)]
pub struct VerifyStateArgs {
    /// State space size.
    #[arg(long = "S")]
    s: usize,
    /// Generator count.
    #[arg(long = "X")]
    x: usize,
    #[arg(long, default_value_t = 24)]
    rounds: usize,
    #[arg(long, default_value_t = 500_000)]
    budget: usize,
}

#[derive(Args)]
pub struct SubsumeArgs {
    #[command(subcommand)]
    cmd: Option<SubsumeCmd>,
    /// Set lasso, e.g. "pre:[{v0}];cyc:[{v0,v1},{}]"; shorthand for decide.
    #[arg(long)]
    a: Option<String>,
    /// Value lasso, e.g. "pre:[v0];cyc:[v1]".
    #[arg(long)]
    x: Option<String>,
}

#[derive(Subcommand)]
pub enum SubsumeCmd {
    /// Decide whether the chain ever lands inside the set sequence.
    Decide {
        #[arg(long)]
        a: String,
        #[arg(long)]
        x: String,
    },
    /// Sample random lasso pairs and check the union splitting property.
    Ramsey {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 4)]
        universe: usize,
        #[arg(long, default_value_t = crate::DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Args)]
pub struct SuiteArgs {
    /// Which bundle to run.
    #[arg(value_enum)]
    name: SuiteName,
    #[arg(long, default_value_t = crate::DEFAULT_SEED)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteName {
    Laws,
    Tensor,
    Subsume,
    All,
}

/// Parse the process arguments, run the command, emit one report. The
/// return value is the process exit code.
pub fn main() -> i32 {
    let started = Instant::now();
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    finish(&cli, argv, started)
}

fn finish(cli: &Cli, argv: Vec<String>, started: Instant) -> i32 {
    match run(&cli.cmd) {
        Ok(out) => {
            let mut report = Report::new(argv, out.status, out.payload, started);
            report.witness = out.witness;
            report.replay = out.replay;
            let path = resolve_out(cli.out.clone(), &slug(&cli.cmd));
            if let Err(e) = report.emit(path.as_deref(), cli.pretty) {
                eprintln!("forge: cannot write report: {e}");
                return 2;
            }
            out.status.exit_code()
        }
        Err(msg) => {
            eprintln!("forge: {msg}");
            2
        }
    }
}

struct Outcome {
    status: Status,
    payload: Json,
    witness: Option<Json>,
    replay: Option<Vec<String>>,
}

impl Outcome {
    fn new(status: Status, payload: Json) -> Outcome {
        Outcome { status, payload, witness: None, replay: None }
    }

    fn pass(payload: Json) -> Outcome {
        Outcome::new(Status::Pass, payload)
    }

    fn with_witness(mut self, w: Json) -> Outcome {
        self.witness = Some(w);
        self
    }

    fn with_replay(mut self, argv: Vec<String>) -> Outcome {
        self.replay = Some(argv);
        self
    }
}

/// `Err` means a usage problem: the message goes to stderr and the exit
/// code is 2, with no report.
type UsageResult = Result<Outcome, String>;

fn run(cmd: &Cmd) -> UsageResult {
    match cmd {
        Cmd::Theory { cmd } => run_theory(cmd),
        Cmd::Free(a) => run_free(a),
        Cmd::Monad { cmd } => run_monad(cmd),
        Cmd::Metalang { cmd } => run_metalang(cmd),
        Cmd::Tensor { cmd } => run_tensor(cmd),
        Cmd::Subsume(a) => run_subsume(a),
        Cmd::Suite(a) => run_suite(a),
    }
}

fn slug(cmd: &Cmd) -> String {
    match cmd {
        Cmd::Theory { cmd } => match cmd {
            TheoryCmd::Show { .. } => "theory-show",
            TheoryCmd::Sum { .. } => "theory-sum",
            TheoryCmd::Tensor { .. } => "theory-tensor",
            TheoryCmd::Parse { .. } => "theory-parse",
        }
        .into(),
        Cmd::Free(_) => "free".into(),
        Cmd::Monad { cmd } => match cmd {
            MonadCmd::Laws { .. } => "monad-laws",
            MonadCmd::Commute { .. } => "monad-commute",
            MonadCmd::Commutative { .. } => "monad-commutative",
            MonadCmd::Theorify { .. } => "monad-theorify",
        }
        .into(),
        Cmd::Metalang { cmd } => match cmd {
            MetalangCmd::Check { .. } => "metalang-check",
            MetalangCmd::Equiv { .. } => "metalang-equiv",
            MetalangCmd::Eval { .. } => "metalang-eval",
        }
        .into(),
        Cmd::Tensor { cmd } => match cmd {
            TensorCmd::LawCheck(_) => "tensor-law-check",
            TensorCmd::Enum(_) => "tensor-enum",
            TensorCmd::Saturate(_) => "tensor-saturate",
            TensorCmd::VerifyState(_) => "tensor-verify-state",
        }
        .into(),
        Cmd::Subsume(a) => match a.cmd {
            Some(SubsumeCmd::Ramsey { .. }) => "subsume-ramsey".into(),
            _ => "subsume-decide".into(),
        },
        Cmd::Suite(a) => format!("suite-{}", suite_label(a.name)),
    }
}

fn suite_label(name: SuiteName) -> &'static str {
    match name {
        SuiteName::Laws => "laws",
        SuiteName::Tensor => "tensor",
        SuiteName::Subsume => "subsume",
        SuiteName::All => "all",
    }
}

// ---------------------------------------------------------------------------
// Shared helpers.

fn to_json<T: serde::Serialize>(v: &T) -> Json {
    serde_json::to_value(v).expect("report data serializes")
}

/// Move `key` out of an object payload, dropping nulls; the summary stays
/// in the payload while the witness moves to the envelope.
fn split_witness(mut payload: Json, key: &str) -> (Json, Option<Json>) {
    let w = payload.as_object_mut().and_then(|m| m.remove(key)).filter(|v| !v.is_null());
    (payload, w)
}

fn insert(payload: &mut Json, key: &str, value: Json) {
    payload.as_object_mut().expect("object payload").insert(key.into(), value);
}

fn read_file(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn status_of(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn worse(a: Status, b: Status) -> Status {
    fn sev(s: Status) -> u8 {
        match s {
            Status::Pass => 0,
            Status::Inconclusive | Status::Partial => 1,
            Status::Fail => 2,
        }
    }
    if sev(b) > sev(a) {
        b
    } else {
        a
    }
}

fn status_label(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Inconclusive => "inconclusive",
        Status::Partial => "partial",
    }
}

/// Theory names accept the display aliases alongside the short specs.
fn canonical_spec(spec: &str) -> String {
    let (head, param) = match spec.split_once(':') {
        Some((h, p)) => (h, Some(p)),
        None => (spec, None),
    };
    let alias = match head.to_ascii_lowercase().as_str() {
        "sigma22free" => "sigma22",
        "emptytheory" => "empty",
        "spuriousanalog" => "spurious",
        "statetheory" => "state",
        "wellorderlowered" => "wellorder",
        other => return compose(other, param),
    };
    compose(alias, param)
}

fn compose(head: &str, param: Option<&str>) -> String {
    match param {
        Some(p) => format!("{head}:{p}"),
        None => head.to_string(),
    }
}

fn resolve_theory(spec: &str) -> Result<Theory, String> {
    builtin_theory(&canonical_spec(spec)).ok_or_else(|| format!("unknown theory '{spec}'"))
}

fn resolve_monad(spec: &str) -> Result<crate::monad::FiniteMonad, String> {
    parse_monad(spec).map_err(|e| format!("monad '{spec}': {e}"))
}

fn type_fail(e: TypeError) -> Outcome {
    Outcome::new(Status::Fail, json!({ "ok": false, "rule": e.rule }))
        .with_witness(json!({ "rule": e.rule, "message": e.msg }))
}

// ---------------------------------------------------------------------------
// theory

fn theory_payload(t: &Theory) -> Json {
    json!({
        "name": t.name,
        "ops": t.ops.iter().map(|o| json!({"name": o.name, "arity": o.arity})).collect::<Vec<_>>(),
        "equations": t.equations.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
    })
}

fn run_theory(cmd: &TheoryCmd) -> UsageResult {
    match cmd {
        TheoryCmd::Show { theory } => Ok(Outcome::pass(theory_payload(&resolve_theory(theory)?))),
        TheoryCmd::Sum { left, right } => {
            let l = resolve_theory(left)?;
            let r = resolve_theory(right)?;
            Ok(Outcome::pass(theory_payload(&theory::theory_sum(&l, &r))))
        }
        TheoryCmd::Tensor { left, right, show } => {
            let l = resolve_theory(left)?;
            let r = resolve_theory(right)?;
            let full = theory::theory_tensor(&l, &r);
            // theory_tensor appends the commutation equations after both
            // theories' own.
            let added: Vec<String> = full.equations[l.equations.len() + r.equations.len()..]
                .iter()
                .map(|e| e.to_string())
                .collect();
            if *show {
                for eq in &added {
                    println!("{eq}");
                }
            }
            let mut payload = theory_payload(&full);
            insert(&mut payload, "addedCommutationEquations", json!(added));
            Ok(Outcome::pass(payload))
        }
        TheoryCmd::Parse { file } => {
            let src = read_file(file)?;
            let t = dsl::parse_theory(&src).map_err(|e| format!("{}: {e}", file.display()))?;
            match t.validate() {
                Ok(()) => Ok(Outcome::pass(theory_payload(&t))),
                Err(e) => Ok(Outcome::new(Status::Fail, theory_payload(&t))
                    .with_witness(json!({ "error": e.to_string() }))),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// free

fn run_free(a: &FreeArgs) -> UsageResult {
    let th = resolve_theory(&a.theory)?;
    let gens = FiniteSet::atoms("g", a.gens);
    match a.depth {
        Some(depth) => match free_algebra(&th, &gens, depth, a.budget) {
            Ok(fa) => {
                let mut payload = free_payload(&th, a.gens, &fa);
                insert(&mut payload, "depth", json!(depth));
                Ok(Outcome::pass(payload))
            }
            Err(e) => free_err(e),
        },
        None => match free_algebra_saturating(&th, &gens, a.rounds, a.budget) {
            Ok(sat) => {
                let status = if sat.stabilized { Status::Pass } else { Status::Inconclusive };
                let mut payload = free_payload(&th, a.gens, &sat.algebra);
                insert(&mut payload, "rounds", json!(sat.rounds));
                insert(&mut payload, "stabilized", json!(sat.stabilized));
                insert(&mut payload, "classTrace", json!(sat.class_trace));
                Ok(Outcome::new(status, payload))
            }
            Err(e) => free_err(e),
        },
    }
}

fn free_payload(th: &Theory, gens: usize, fa: &FreeAlgebra) -> Json {
    let reprs: Vec<String> = fa.classes.iter().take(64).map(|c| c.repr.to_string()).collect();
    json!({
        "theory": th.name,
        "generators": gens,
        "classes": fa.classes.len(),
        "termCount": fa.term_count,
        "closed": fa.closed,
        "representatives": reprs,
        "representativesTruncated": fa.classes.len() > 64,
    })
}

fn free_err(e: FreeError) -> UsageResult {
    match e {
        FreeError::Budget { needed, budget } => Ok(Outcome::new(
            Status::Partial,
            json!({
                "error": "term budget exhausted",
                "needed": needed.to_string(),
                "budget": budget,
            }),
        )),
        FreeError::Theory(t) => Err(t.to_string()),
    }
}

// ---------------------------------------------------------------------------
// monad

fn run_monad(cmd: &MonadCmd) -> UsageResult {
    match cmd {
        MonadCmd::Laws { monad, max_size, unit_laws_only, seed, replay } => {
            run_monad_laws(monad, *max_size, *unit_laws_only, *seed, replay.as_deref())
        }
        MonadCmd::Commute { monad, a_size, p, b_size, q } => {
            run_monad_commute(monad, *a_size, p, *b_size, q)
        }
        MonadCmd::Commutative { monad, max_size } => {
            let m = resolve_monad(monad)?;
            let rep = is_commutative(&m, *max_size);
            let (payload, witness) = split_witness(to_json(&rep), "witness");
            let mut out = Outcome::new(status_of(rep.commutative), payload);
            if let Some(w) = &rep.witness {
                out = out.with_witness(witness.expect("witness present")).with_replay(vec![
                    "forge".into(),
                    "monad".into(),
                    "commute".into(),
                    "--monad".into(),
                    monad.clone(),
                    "--a-size".into(),
                    w.a.len().to_string(),
                    "--p".into(),
                    w.p.literal(),
                    "--b-size".into(),
                    w.b.len().to_string(),
                    "--q".into(),
                    w.q.literal(),
                ]);
            }
            Ok(out)
        }
        MonadCmd::Theorify { monad, max_arity, witness_size } => {
            let m = resolve_monad(monad)?;
            let (th, rep) = theorify(&m, *max_arity, *witness_size);
            let ok = rep.violations.is_empty();
            let mut payload = to_json(&rep);
            insert(&mut payload, "theory", json!(th.name));
            let mut out = Outcome::new(status_of(ok), payload);
            if let Some(v) = rep.violations.first() {
                out = out.with_witness(to_json(v));
            }
            Ok(out)
        }
    }
}

fn laws_replay_argv(spec: &str, w: &LawWitness) -> Vec<String> {
    vec![
        "forge".into(),
        "monad".into(),
        "laws".into(),
        "--monad".into(),
        spec.into(),
        "--replay".into(),
        serde_json::to_string(w).expect("witness serializes"),
    ]
}

fn run_monad_laws(
    spec: &str,
    max_size: usize,
    unit_laws_only: bool,
    seed: u64,
    replay: Option<&str>,
) -> UsageResult {
    let m = resolve_monad(spec)?;
    if let Some(text) = replay {
        let w: LawWitness =
            serde_json::from_str(text).map_err(|e| format!("replay witness: {e}"))?;
        let x = set_of_literals(&w.x)?;
        let y = set_of_literals(&w.y)?;
        let z = set_of_literals(&w.z)?;
        let f = table_of(w.f.as_ref())?;
        let g = table_of(w.g.as_ref())?;
        let (left, right) = law_instance(&m, &w.law, &x, &y, &z, f.as_ref(), g.as_ref(), &w.m)
            .map_err(|e| format!("replay witness: {e}"))?;
        let equal = left == right;
        return Ok(Outcome::new(
            status_of(equal),
            json!({
                "monad": m.name,
                "law": w.law,
                "equal": equal,
                "left": left.literal(),
                "right": right.literal(),
                "matchesRecorded": left == w.left && right == w.right,
            }),
        ));
    }
    let opts = LawOptions { max_size, unit_laws_only, seed, ..LawOptions::default() };
    let rep = check_monad_laws(&m, &opts);
    let (payload, witness) = split_witness(to_json(&rep), "witness");
    let mut out = Outcome::new(status_of(rep.passed()), payload);
    if let Some(w) = &rep.witness {
        out = out
            .with_witness(witness.expect("witness present"))
            .with_replay(laws_replay_argv(spec, w));
    }
    Ok(out)
}

fn set_of_literals(lits: &[String]) -> Result<FiniteSet, String> {
    lits.iter().map(|s| parse_value(s).map_err(|e| format!("value '{s}': {e}"))).collect()
}

fn table_of(v: Option<&Value>) -> Result<Option<FnTable>, String> {
    match v {
        None => Ok(None),
        Some(v) => match FnTable::from_value(v) {
            Some(t) => Ok(Some(t)),
            None => Err("witness table is not a function value".into()),
        },
    }
}

fn run_monad_commute(spec: &str, a_size: usize, p: &str, b_size: usize, q: &str) -> UsageResult {
    let m = resolve_monad(spec)?;
    let a = FiniteSet::atoms("a", a_size);
    let b = FiniteSet::atoms("b", b_size);
    let p = parse_value(p).map_err(|e| format!("--p: {e}"))?;
    let q = parse_value(q).map_err(|e| format!("--q: {e}"))?;
    if !m.carrier(&a).set.contains(&p) {
        return Err(format!("--p is not a stored element of T(A) at |A| = {a_size}"));
    }
    if !m.carrier(&b).set.contains(&q) {
        return Err(format!("--q is not a stored element of T(B) at |B| = {b_size}"));
    }
    let (left, right) = pair_exchange(&m, &a, &p, &b, &q);
    let equal = left == right;
    let mut out = Outcome::new(
        status_of(equal),
        json!({
            "monad": m.name,
            "aSize": a_size,
            "bSize": b_size,
            "p": p.literal(),
            "q": q.literal(),
            "left": left.literal(),
            "right": right.literal(),
            "commutes": equal,
        }),
    );
    if !equal {
        out = out.with_witness(json!({
            "p": p.literal(),
            "q": q.literal(),
            "left": left.literal(),
            "right": right.literal(),
        }));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// metalang

fn run_metalang(cmd: &MetalangCmd) -> UsageResult {
    match cmd {
        MetalangCmd::Check { file } => run_metalang_check(file),
        MetalangCmd::Equiv { monad, left, right, left_term, right_term, sizes, replay } => {
            run_metalang_equiv(
                monad,
                left,
                right.as_deref(),
                left_term.as_deref(),
                right_term.as_deref(),
                *sizes,
                replay.as_deref(),
            )
        }
        MetalangCmd::Eval { monad, file, term, env } => {
            run_metalang_eval(monad, file, term.as_deref(), env)
        }
    }
}

fn load_program(file: &Path) -> Result<Program, String> {
    let src = read_file(file)?;
    parse_program(&src).map_err(|e| format!("{}: {e}", file.display()))
}

fn run_metalang_check(file: &Path) -> UsageResult {
    let prog = load_program(file)?;
    match typecheck_all(&prog) {
        Ok(typed) => {
            let terms: Vec<Json> = typed
                .iter()
                .map(|(n, t)| json!({"name": n, "type": t.ty().to_string()}))
                .collect();
            let sets: BTreeMap<&String, usize> =
                prog.sets.iter().map(|(n, s)| (n, s.len())).collect();
            let vars: Vec<Json> = prog
                .vars
                .iter()
                .map(|(n, t)| json!({"name": n, "type": t.to_string()}))
                .collect();
            Ok(Outcome::pass(json!({
                "file": file.display().to_string(),
                "sets": sets,
                "vars": vars,
                "terms": terms,
            })))
        }
        Err(e) => Ok(type_fail(e)),
    }
}

fn pick_term<'p>(
    prog: &'p Program,
    flag: Option<&str>,
    fallback: Option<usize>,
    side: &str,
) -> Result<(String, &'p crate::metalang::MTerm), String> {
    if let Some(name) = flag {
        let t = prog.term(name).ok_or_else(|| format!("{side} program has no term '{name}'"))?;
        return Ok((name.to_string(), t));
    }
    if prog.terms.len() == 1 {
        let (n, t) = &prog.terms[0];
        return Ok((n.clone(), t));
    }
    if let Some(i) = fallback {
        if let Some((n, t)) = prog.terms.get(i) {
            return Ok((n.clone(), t));
        }
    }
    Err(format!("{side} term is ambiguous; name it with a term flag"))
}

#[derive(serde::Deserialize)]
struct EquivReplay {
    #[serde(default)]
    sizes: BTreeMap<String, usize>,
    env: BTreeMap<String, Value>,
    left: Value,
    right: Value,
}

fn equiv_replay_argv(
    spec: &str,
    left: &Path,
    right: Option<&Path>,
    lname: &str,
    rname: &str,
    witness: &Json,
) -> Vec<String> {
    let mut v = vec![
        "forge".into(),
        "metalang".into(),
        "equiv".into(),
        "--monad".into(),
        spec.into(),
        "--left".into(),
        left.display().to_string(),
    ];
    if let Some(r) = right {
        v.push("--right".into());
        v.push(r.display().to_string());
    }
    v.extend([
        "--left-term".into(),
        lname.into(),
        "--right-term".into(),
        rname.into(),
        "--replay".into(),
        witness.to_string(),
    ]);
    v
}

fn run_metalang_equiv(
    spec: &str,
    left: &Path,
    right: Option<&Path>,
    left_term: Option<&str>,
    right_term: Option<&str>,
    sizes: Option<usize>,
    replay: Option<&str>,
) -> UsageResult {
    let m = resolve_monad(spec)?;
    let lprog = load_program(left)?;
    let (rprog, same_file) = match right {
        Some(p) => (load_program(p)?, false),
        None => (lprog.clone(), true),
    };
    if !lprog.same_signature(&rprog) {
        return Err("the two programs declare different signatures".into());
    }
    let (lname, lterm) = pick_term(&lprog, left_term, if same_file { Some(0) } else { None }, "left")?;
    let (rname, rterm) =
        pick_term(&rprog, right_term, if same_file { Some(1) } else { None }, "right")?;
    // Signatures agree, so the left program types and evaluates both terms.
    let ltt = match typecheck(&lprog, lterm) {
        Ok(t) => t,
        Err(e) => return Ok(type_fail(e)),
    };
    let rtt = match typecheck(&lprog, rterm) {
        Ok(t) => t,
        Err(e) => return Ok(type_fail(e)),
    };

    if let Some(text) = replay {
        let w: EquivReplay =
            serde_json::from_str(text).map_err(|e| format!("replay witness: {e}"))?;
        let prog =
            if w.sizes.is_empty() { lprog.clone() } else { truncate_sets(&lprog, &w.sizes) };
        let (ltt, rtt) = match (typecheck(&prog, lterm), typecheck(&prog, rterm)) {
            (Ok(l), Ok(r)) => (l, r),
            (Err(e), _) | (_, Err(e)) => return Ok(type_fail(e)),
        };
        let lv = match eval(&m, &prog, &ltt, &w.env) {
            Ok(v) => v,
            Err(e) => return Ok(type_fail(e)),
        };
        let rv = match eval(&m, &prog, &rtt, &w.env) {
            Ok(v) => v,
            Err(e) => return Ok(type_fail(e)),
        };
        let equal = lv == rv;
        return Ok(Outcome::new(
            status_of(equal),
            json!({
                "leftTerm": lname,
                "rightTerm": rname,
                "left": lv.literal(),
                "right": rv.literal(),
                "equal": equal,
                "matchesRecorded": lv == w.left && rv == w.right,
            }),
        ));
    }

    match sizes {
        None => {
            let rep = match metalang::equiv(&m, &lprog, &ltt, &rtt) {
                Ok(r) => r,
                Err(e) => return Ok(type_fail(e)),
            };
            let mut payload = to_json(&rep);
            insert(&mut payload, "leftTerm", json!(lname));
            insert(&mut payload, "rightTerm", json!(rname));
            let (payload, witness) = split_witness(payload, "witness");
            let mut out = Outcome::new(status_of(rep.equal), payload);
            if let Some(w) = witness {
                out = out
                    .with_replay(equiv_replay_argv(spec, left, right, &lname, &rname, &w))
                    .with_witness(w);
            }
            Ok(out)
        }
        Some(bound) => {
            let rep = match metalang::equiv_over_sizes(&m, &lprog, &ltt, &rtt, bound) {
                Ok(r) => r,
                Err(e) => return Ok(type_fail(e)),
            };
            let mut payload = to_json(&rep);
            insert(&mut payload, "leftTerm", json!(lname));
            insert(&mut payload, "rightTerm", json!(rname));
            let (payload, _) = split_witness(payload, "witness");
            let mut out = Outcome::new(status_of(rep.equal), payload);
            if let Some((ws, w)) = &rep.witness {
                let replay_json = json!({
                    "sizes": ws,
                    "env": w.env,
                    "left": w.left,
                    "right": w.right,
                });
                out = out
                    .with_replay(equiv_replay_argv(spec, left, right, &lname, &rname, &replay_json))
                    .with_witness(replay_json);
            }
            Ok(out)
        }
    }
}

fn run_metalang_eval(spec: &str, file: &Path, term: Option<&str>, env_text: &str) -> UsageResult {
    let m = resolve_monad(spec)?;
    let prog = load_program(file)?;
    let (name, mterm) = pick_term(&prog, term, None, "the")?;
    let raw: BTreeMap<String, String> =
        serde_json::from_str(env_text).map_err(|e| format!("--env: {e}"))?;
    let mut env = BTreeMap::new();
    for (k, v) in raw {
        let value = parse_value(&v).map_err(|e| format!("--env {k}: {e}"))?;
        env.insert(k, value);
    }
    let tt = match typecheck(&prog, mterm) {
        Ok(t) => t,
        Err(e) => return Ok(type_fail(e)),
    };
    match eval(&m, &prog, &tt, &env) {
        Ok(v) => Ok(Outcome::pass(json!({
            "term": name,
            "type": tt.ty().to_string(),
            "value": v.literal(),
        }))),
        Err(e) => Ok(type_fail(e)),
    }
}

// ---------------------------------------------------------------------------
// tensor

fn run_tensor(cmd: &TensorCmd) -> UsageResult {
    match cmd {
        TensorCmd::LawCheck(a) => run_tensor_law_check(a),
        TensorCmd::Enum(a) => run_tensor_enum(a),
        TensorCmd::Saturate(a) => run_tensor_saturate(a),
        TensorCmd::VerifyState(a) => run_tensor_verify_state(a),
    }
}

/// Structure bridge for a theory the workbench knows how to interpret as a
/// monad algebra over the same tables.
fn bridge(spec: &str, alg: &FinAlgebra) -> Result<Option<EmAlgebra>, String> {
    let head = canonical_spec(spec);
    let head = head.split_once(':').map_or(head.as_str(), |(h, _)| h);
    match head {
        "semilattice" => em_from_semilattice_tables(alg).map(Some),
        "sigma22" => em_from_sigma22_tables(alg, 1).map(Some),
        "empty" => Ok(Some(EmAlgebra::identity(&alg.carrier))),
        _ => Ok(None),
    }
}

fn run_tensor_law_check(a: &LawCheckArgs) -> UsageResult {
    let lt = resolve_theory(&a.left)?;
    let rt = resolve_theory(&a.right)?;
    let src = read_file(&a.algebra)?;
    let jv: Json = serde_json::from_str(&src).map_err(|e| format!("{}: {e}", a.algebra.display()))?;
    let alg = FinAlgebra::from_json(&jv).map_err(|e| format!("{}: {e}", a.algebra.display()))?;

    let comm = check_commutation_tables(&lt, &rt, &alg).map_err(|e| e.to_string())?;
    let lbridge = bridge(&a.left, &alg)?;
    let rbridge = bridge(&a.right, &alg)?;
    let bridged = lbridge.is_some() && rbridge.is_some();

    let mut payload = json!({
        "algebraFile": a.algebra.display().to_string(),
        "carrier": alg.carrier.len(),
        "left": lt.name,
        "right": rt.name,
        "bridged": bridged,
        "commutation": to_json(&comm),
    });

    // Blame order: the tables first, then each algebra's own laws, then the
    // exchange law. The first failure becomes the envelope witness; sub
    // reports keep theirs so nothing is lost.
    let mut status = if comm.ok { Status::Pass } else { Status::Fail };
    let mut witness = comm
        .witness
        .as_ref()
        .map(|w| json!({"kind": "commutation", "witness": to_json(w)}));
    let mut replay = None;

    if let (Some(sl), Some(tr)) = (lbridge, rbridge) {
        let talg = TensorAlgebra::new(sl, tr)?;
        if let Some(text) = &a.replay {
            let w: TensorWitness =
                serde_json::from_str(text).map_err(|e| format!("replay witness: {e}"))?;
            return Ok(replay_tensor_instance(&talg, &w));
        }
        let el = check_em_algebra(&talg.s_struct, a.y_bound);
        let er = check_em_algebra(&talg.t_struct, a.z_bound);
        insert(&mut payload, "emLeft", to_json(&el));
        insert(&mut payload, "emRight", to_json(&er));
        for (side, rep) in [("emLeft", &el), ("emRight", &er)] {
            if let (Some(w), true) = (&rep.witness, witness.is_none()) {
                status = Status::Fail;
                witness = Some(json!({"kind": side, "witness": to_json(w)}));
            }
        }
        let tl = check_tensor_law(&talg, a.y_bound, a.z_bound, a.budget);
        insert(&mut payload, "tensorLaw", to_json(&tl));
        if let Some(w) = &tl.witness {
            status = Status::Fail;
            if witness.is_none() {
                witness = Some(json!({"kind": "tensorLaw", "witness": to_json(w)}));
            }
            replay = Some(vec![
                "forge".into(),
                "tensor".into(),
                "law-check".into(),
                "--algebra".into(),
                a.algebra.display().to_string(),
                "--left".into(),
                a.left.clone(),
                "--right".into(),
                a.right.clone(),
                "--replay".into(),
                serde_json::to_string(w).expect("witness serializes"),
            ]);
        } else if tl.partial && status == Status::Pass {
            status = Status::Partial;
        }
    } else if a.replay.is_some() {
        return Err("replay needs structure bridges for both theories".into());
    } else {
        insert(
            &mut payload,
            "note",
            json!("no structure bridges for these theories; syntactic commutation only"),
        );
    }

    let mut out = Outcome::new(status, payload);
    if let Some(w) = witness {
        out = out.with_witness(w);
    }
    if let Some(r) = replay {
        out = out.with_replay(r);
    }
    Ok(out)
}

fn replay_tensor_instance(alg: &TensorAlgebra, w: &TensorWitness) -> Outcome {
    match tensor_law_instance(alg, w.y_size, w.z_size, &w.f, &w.p, &w.q) {
        Some((left, right)) => {
            let equal = left == right;
            Outcome::new(
                status_of(equal),
                json!({
                    "ySize": w.y_size,
                    "zSize": w.z_size,
                    "left": left.literal(),
                    "right": right.literal(),
                    "equal": equal,
                    "matchesRecorded": left == w.left && right == w.right,
                }),
            )
        }
        None => Outcome::new(
            Status::Inconclusive,
            json!({ "note": "instance left the stored carrier fragment" }),
        ),
    }
}

fn run_tensor_enum(a: &EnumArgs) -> UsageResult {
    let l = TheoryFamily::by_name(&a.left)?;
    let r = TheoryFamily::by_name(&a.right)?;
    let cfg = SearchConfig {
        generators: a.gens,
        max_carrier: a.max_size,
        symmetry_breaking: !a.no_symmetry,
        budget: a.budget,
        ..SearchConfig::default()
    };
    let rep = enumerate_tensor_algebras(&l, &r, &cfg)?;
    let status = if rep.partial { Status::Partial } else { Status::Pass };
    Ok(Outcome::new(status, to_json(&rep)))
}

fn run_tensor_saturate(a: &SaturateArgs) -> UsageResult {
    let th = resolve_theory(&a.theory)?;
    match saturate_free_tensor(&th, a.gens, a.rounds, a.budget) {
        Ok((_, rep)) => {
            let status = if rep.stabilized { Status::Pass } else { Status::Inconclusive };
            Ok(Outcome::new(status, to_json(&rep)))
        }
        Err(e) => free_err(e),
    }
}

fn run_tensor_verify_state(a: &VerifyStateArgs) -> UsageResult {
    match verify_state_tensor(a.s, a.x, a.rounds, a.budget) {
        Ok(rep) => {
            let status = match rep.outcome.as_str() {
                "pass" => Status::Pass,
                "fail" => Status::Fail,
                _ => Status::Inconclusive,
            };
            let mut out = Outcome::new(status, to_json(&rep));
            if status == Status::Fail {
                out = out.with_witness(json!({
                    "expected": rep.expected as u64,
                    "found": rep.found,
                }));
            }
            Ok(out)
        }
        Err(e) => free_err(e),
    }
}

// ---------------------------------------------------------------------------
// subsume

fn run_subsume(a: &SubsumeArgs) -> UsageResult {
    match (&a.cmd, &a.a, &a.x) {
        (Some(SubsumeCmd::Decide { a, x }), _, _) => subsume_decide(a, x),
        (Some(SubsumeCmd::Ramsey { samples, universe, seed }), _, _) => {
            subsume_ramsey(*samples, *universe, *seed)
        }
        (None, Some(a_), Some(x_)) => subsume_decide(a_, x_),
        (None, _, _) => Err("give a subcommand, or both --a and --x".into()),
    }
}

fn distinct_chain_values(x: &LassoSeq) -> usize {
    x.preamble.iter().chain(x.cycle.iter()).collect::<BTreeSet<_>>().len()
}

fn subsume_decide(a_text: &str, x_text: &str) -> UsageResult {
    let a = subsume::parse_lasso_sets(a_text).map_err(|e| format!("--a: {e}"))?;
    let x = subsume::parse_lasso(x_text).map_err(|e| format!("--x: {e}"))?;
    let witness = subsume::subsumption_witness(&a, &x);
    let subsumes = witness.is_some();
    // The chain oracle is capped at 16 distinct values by its bitmask.
    let chain = (distinct_chain_values(&x) <= 16).then(|| subsume::bounded_chain_subsumes(&a, &x));
    let agree = chain.map_or(true, |c| c == subsumes);
    let payload = json!({
        "a": a.to_string(),
        "x": x.to_string(),
        "subsumes": subsumes,
        "witness": witness.as_ref().map(|(i, v)| json!({"position": i, "value": v.literal()})),
        "chainMethod": chain,
        "methodsAgree": agree,
    });
    Ok(Outcome::new(status_of(agree), payload))
}

fn ramsey_replay(f: &Json) -> Option<Vec<String>> {
    let union = f.get("union")?.as_str()?;
    let x = f.get("x")?.as_str()?;
    Some(vec![
        "forge".into(),
        "subsume".into(),
        "--a".into(),
        union.into(),
        "--x".into(),
        x.into(),
    ])
}

fn subsume_ramsey(samples: usize, universe: usize, seed: u64) -> UsageResult {
    let rep = subsume::ramsey_run(samples, universe, seed);
    let first = rep.failures.first().cloned();
    let mut payload = to_json(&rep);
    insert(&mut payload, "failures", json!(rep.failures.len()));
    let mut out = Outcome::new(status_of(rep.ok), payload);
    if let Some(f) = first {
        if let Some(argv) = ramsey_replay(&f) {
            out = out.with_replay(argv);
        }
        out = out.with_witness(f);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// suite

struct SuitePart {
    name: &'static str,
    status: Status,
    summary: Json,
    witness: Option<Json>,
    replay: Option<Vec<String>>,
}

fn run_suite(a: &SuiteArgs) -> UsageResult {
    let parts = match a.name {
        SuiteName::Laws => vec![suite_laws(a.seed)],
        SuiteName::Tensor => vec![suite_tensor(a.seed)],
        SuiteName::Subsume => vec![suite_subsume(a.seed)],
        SuiteName::All => vec![suite_laws(a.seed), suite_tensor(a.seed), suite_subsume(a.seed)],
    };
    let mut status = Status::Pass;
    for p in &parts {
        status = worse(status, p.status);
    }
    let witness = parts.iter().find_map(|p| p.witness.clone());
    let replay = parts.iter().find_map(|p| p.replay.clone());
    let suites: Vec<Json> = parts
        .iter()
        .map(|p| json!({"name": p.name, "status": status_label(p.status), "summary": p.summary}))
        .collect();
    let mut out = Outcome::new(status, json!({ "suites": suites }));
    if let Some(w) = witness {
        out = out.with_witness(w);
    }
    if let Some(r) = replay {
        out = out.with_replay(r);
    }
    Ok(out)
}

fn suite_laws(seed: u64) -> SuitePart {
    let mut rows = Vec::new();
    let mut witness = None;
    let mut replay = None;
    let mut ok = true;
    for (spec, mut opts) in law_suite() {
        opts.seed = seed;
        let m = parse_monad(&spec).expect("suite specs are valid");
        let rep = check_monad_laws(&m, &opts);
        let passed = rep.passed();
        if let (Some(w), true) = (&rep.witness, witness.is_none()) {
            witness = Some(to_json(w));
            replay = Some(laws_replay_argv(&spec, w));
        }
        ok &= passed;
        rows.push(json!({
            "monad": spec,
            "maxSize": opts.max_size,
            "unitLawsOnly": opts.unit_laws_only,
            "checked": rep.checked,
            "passed": passed,
        }));
    }
    SuitePart {
        name: "laws",
        status: status_of(ok),
        summary: json!({ "monads": rows }),
        witness,
        replay,
    }
}

fn suite_tensor(seed: u64) -> SuitePart {
    let mut rows = Vec::new();
    let mut ok = true;

    for (s, x) in [(1usize, 1usize), (1, 2), (2, 1)] {
        let row = match verify_state_tensor(s, x, 24, 500_000) {
            Ok(r) => {
                let good = r.outcome == "pass";
                ok &= good;
                json!({
                    "check": format!("verify-state S={s} X={x}"),
                    "ok": good,
                    "expected": r.expected as u64,
                    "found": r.found,
                })
            }
            Err(e) => {
                ok = false;
                json!({"check": format!("verify-state S={s} X={x}"), "ok": false, "error": e.to_string()})
            }
        };
        rows.push(row);
    }

    let cc = commutation_cross_check(200, 3, seed);
    ok &= cc.ok;
    rows.push(json!({
        "check": "commutation cross-check",
        "ok": cc.ok,
        "samples": cc.samples,
        "disagreements": cc.disagreements,
    }));

    let fam = |n: &str| TheoryFamily::by_name(n).expect("builtin family");
    match enumerate_tensor_algebras(
        &fam("semilattice"),
        &fam("unary"),
        &SearchConfig { generators: 1, max_carrier: 3, ..SearchConfig::default() },
    ) {
        Ok(rep) => {
            let good = rep.total == 6 && !rep.partial;
            ok &= good;
            rows.push(json!({"check": "enum semilattice/unary", "ok": good, "total": rep.total as u64}));
        }
        Err(e) => {
            ok = false;
            rows.push(json!({"check": "enum semilattice/unary", "ok": false, "error": e}));
        }
    }
    match enumerate_tensor_algebras(
        &TheoryFamily::wellorder_lowered(),
        &fam("sigma22"),
        &SearchConfig { generators: 2, max_carrier: 2, ..SearchConfig::default() },
    ) {
        Ok(rep) => {
            let good = rep.total == 128 && !rep.partial;
            ok &= good;
            rows.push(json!({"check": "enum wellorder/sigma22", "ok": good, "total": rep.total as u64}));
        }
        Err(e) => {
            ok = false;
            rows.push(json!({"check": "enum wellorder/sigma22", "ok": false, "error": e}));
        }
    }

    match saturate_free_tensor(&theory::state_theory(1), 2, 16, crate::DEFAULT_TERM_BUDGET) {
        Ok((_, rep)) => {
            let good = rep.stabilized && rep.classes == 4;
            ok &= good;
            rows.push(json!({"check": "saturate state:1", "ok": good, "classes": rep.classes}));
        }
        Err(e) => {
            ok = false;
            rows.push(json!({"check": "saturate state:1", "ok": false, "error": e.to_string()}));
        }
    }

    SuitePart {
        name: "tensor",
        status: status_of(ok),
        summary: json!({ "checks": rows }),
        witness: None,
        replay: None,
    }
}

fn suite_subsume(seed: u64) -> SuitePart {
    let mut rows = Vec::new();
    let mut ok = true;

    let pairs = subsume::catalog();
    let instances = pairs.len();
    let disagreements = pairs
        .into_iter()
        .filter(|(a, x)| subsume::subsumes(a, x) != subsume::bounded_chain_subsumes(a, x))
        .count();
    let cat_ok = disagreements == 0;
    ok &= cat_ok;
    rows.push(json!({
        "check": "catalog method agreement",
        "ok": cat_ok,
        "instances": instances,
        "disagreements": disagreements,
    }));

    let rr = subsume::ramsey_run(1000, 4, seed);
    ok &= rr.ok;
    rows.push(json!({
        "check": "union split",
        "ok": rr.ok,
        "samples": rr.samples,
        "holds": rr.holds,
    }));
    let witness = rr.failures.first().cloned();
    let replay = witness.as_ref().and_then(ramsey_replay);

    SuitePart {
        name: "subsume",
        status: status_of(ok),
        summary: json!({ "checks": rows }),
        witness,
        replay,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theory_aliases_resolve() {
        assert_eq!(resolve_theory("Semilattice").unwrap().name, "Semilattice");
        assert_eq!(resolve_theory("Sigma22Free").unwrap().name, resolve_theory("sigma22").unwrap().name);
        assert_eq!(
            resolve_theory("WellOrderLowered:3").unwrap().name,
            resolve_theory("wellorder:3").unwrap().name
        );
        assert_eq!(resolve_theory("StateTheory:2").unwrap().name, resolve_theory("state:2").unwrap().name);
        assert!(resolve_theory("nosuch").is_err());
    }

    #[test]
    fn status_aggregation_prefers_failure() {
        assert_eq!(worse(Status::Pass, Status::Partial), Status::Partial);
        assert_eq!(worse(Status::Partial, Status::Fail), Status::Fail);
        assert_eq!(worse(Status::Fail, Status::Inconclusive), Status::Fail);
        assert_eq!(worse(Status::Pass, Status::Pass), Status::Pass);
    }

    #[test]
    fn decide_agrees_with_itself() {
        let out = subsume_decide("pre:[];cyc:[{v0}]", "pre:[];cyc:[v0]").unwrap();
        assert_eq!(out.status, Status::Pass);
        assert_eq!(out.payload["subsumes"], true);
        assert_eq!(out.payload["methodsAgree"], true);
        assert_eq!(out.payload["witness"]["position"], 0);
    }

    #[test]
    fn commute_validates_membership() {
        let err = run_monad_commute("powerset:full", 1, "{a0,a9}", 1, "{a0}");
        assert!(err.is_err());
    }

    #[test]
    fn tensor_show_counts_added_equations() {
        let out = run_theory(&TheoryCmd::Tensor {
            left: "Semilattice".into(),
            right: "Sigma22Free".into(),
            show: false,
        })
        .unwrap();
        let added = out.payload["addedCommutationEquations"].as_array().unwrap();
        assert_eq!(added.len(), 4);
    }

    #[test]
    fn law_replay_round_trips() {
        // A synthetic eta* = id instance on the full powerset monad: the
        // replay path must accept a witness built from serialized parts.
        let w = LawWitness {
            law: "eta* = id".into(),
            x: vec!["a0".into(), "a1".into()],
            y: vec![],
            z: vec![],
            f: None,
            g: None,
            m: parse_value("{a0,a1}").unwrap(),
            left: parse_value("{a0,a1}").unwrap(),
            right: parse_value("{a0,a1}").unwrap(),
        };
        let text = serde_json::to_string(&w).unwrap();
        let out = run_monad_laws("powerset:full", 2, false, 7, Some(&text)).unwrap();
        assert_eq!(out.status, Status::Pass);
        assert_eq!(out.payload["matchesRecorded"], true);
    }
}
