//! Command-line front end: check, evaluate, compare, prove, and stress the
//! calculus from query files or inline source.
//!
//! Every query-taking command accepts either a path to a `.lre` file or the
//! query text itself. Exit codes are uniform across commands: 0 for a
//! definite yes (or a successfully produced result), 1 for a definite no,
//! 2 for parse or usage errors, and 3 when the verdict is unknown under the
//! given bounds.

use clap::{Args, Parser, Subcommand};
use lre_core::denote::Bounds;
use lre_core::eval::{eval, EvalOutcome};
use lre_core::gen::{GenConfig, Generator};
use lre_core::infer::run_demo;
use lre_core::lr::open_related;
use lre_core::parred::{
    check_backward_simulation, check_cotermination, check_forward_simulation, congruent,
    sample_parred,
};
use lre_core::parse::{parse_query, Query};
use lre_core::proofs::{proof_index, prove_refl, prove_sym, prove_trans};
use lre_core::syntax::{Env, Expr, Type};
use lre_core::tri::TriBool;
use lre_core::typing::{check, subtype_witness, synth, wf, CheckOutcome, TypeError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use std::io::IsTerminal;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "lre",
    version,
    about = "Checker, evaluator, and prover for a refinement calculus with typed equality"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Type-check a query: synthesize for a bare expression, check an
    /// ascription, decide a subtype query.
    Check(QueryArgs),
    /// Evaluate an expression to a value.
    Eval(QueryArgs),
    /// Decide a subtype query, reporting a separating witness on failure.
    Subtype(QueryArgs),
    /// Build an equality proof (refl, sym, or trans query) and recheck it.
    Prove(QueryArgs),
    /// Decide whether two expressions are equivalent at a type.
    Lr(QueryArgs),
    /// Contrast domain-pinned function equality with the unconstrained
    /// extensionality shortcut.
    Demo(CommonArgs),
    /// Generate random terms and stress the reduction metatheory.
    Meta(MetaArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Evaluation step budget for semantic checks.
    #[arg(long, default_value_t = 100_000)]
    fuel: usize,
    /// Function-argument enumeration depth for semantic checks.
    #[arg(long, default_value_t = 2)]
    depth: usize,
    /// Emit a JSON object instead of text.
    #[arg(long)]
    json: bool,
}

impl CommonArgs {
    fn bounds(&self) -> Bounds {
        Bounds::new(self.fuel, self.depth)
    }
}

#[derive(Args)]
struct QueryArgs {
    /// Path to a query file, or the query text itself.
    input: String,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct MetaArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Seed for term generation and reduct sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of terms to generate.
    #[arg(long, default_value_t = 1000)]
    count: usize,
}

const EXIT_YES: u8 = 0;
const EXIT_NO: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Check(args) => cmd_check(&args),
        Cmd::Eval(args) => cmd_eval(&args),
        Cmd::Subtype(args) => cmd_subtype(&args),
        Cmd::Prove(args) => cmd_prove(&args),
        Cmd::Lr(args) => cmd_lr(&args),
        Cmd::Demo(args) => cmd_demo(&args),
        Cmd::Meta(args) => cmd_meta(&args),
    };
    ExitCode::from(code)
}

fn use_color() -> bool {
    std::io::stdout().is_terminal() && std::env::var("LRE_COLOR").as_deref() != Ok("0")
}

fn verdict_word(v: TriBool) -> &'static str {
    match v {
        TriBool::Yes => "yes",
        TriBool::No => "no",
        TriBool::Unknown => "unknown",
    }
}

fn painted(v: TriBool) -> String {
    let word = verdict_word(v);
    if !use_color() {
        return word.to_string();
    }
    let code = match v {
        TriBool::Yes => "32",
        TriBool::No => "31",
        TriBool::Unknown => "33",
    };
    format!("\x1b[{code}m{word}\x1b[0m")
}

fn exit_for(v: TriBool) -> u8 {
    match v {
        TriBool::Yes => EXIT_YES,
        TriBool::No => EXIT_NO,
        TriBool::Unknown => EXIT_UNKNOWN,
    }
}

/// Reads the query: from the file when the argument names one, otherwise
/// treating the argument as source text.
fn load_query(input: &str) -> Result<Query, String> {
    let text = if std::path::Path::new(input).is_file() {
        std::fs::read_to_string(input).map_err(|e| format!("cannot read {input}: {e}"))?
    } else {
        input.to_string()
    };
    parse_query(&text).map_err(|e| e.to_string())
}

fn parse_failure(msg: &str, json: bool) -> u8 {
    if json {
        println!("{}", json!({ "error": msg }));
    } else {
        eprintln!("error: {msg}");
    }
    EXIT_PARSE
}

fn wf_gate(ty: &Type, b: &Bounds, json: bool, out: &mut Map<String, Value>) -> Option<u8> {
    match wf(&Env::empty(), ty, b) {
        TriBool::Yes => None,
        TriBool::No => {
            if json {
                out.insert("error".into(), json!(format!("ill-formed type {ty}")));
                println!("{}", Value::Object(std::mem::take(out)));
            } else {
                eprintln!("error: ill-formed type {ty}");
            }
            Some(EXIT_NO)
        }
        TriBool::Unknown => {
            if json {
                out.insert("verdict".into(), json!("unknown"));
                out.insert(
                    "reason".into(),
                    json!(format!("well-formedness of {ty} exceeded bounds")),
                );
                println!("{}", Value::Object(std::mem::take(out)));
            } else {
                println!("verdict: {}", painted(TriBool::Unknown));
                println!("reason: well-formedness of {ty} exceeded bounds");
            }
            Some(EXIT_UNKNOWN)
        }
    }
}

fn describe_error(err: &TypeError) -> String {
    err.to_string()
}

fn cmd_check(args: &QueryArgs) -> u8 {
    let b = args.common.bounds();
    let json = args.common.json;
    let query = match load_query(&args.input) {
        Ok(q) => q,
        Err(msg) => return parse_failure(&msg, json),
    };
    let mut out = Map::new();
    out.insert("command".into(), json!("check"));
    match query {
        Query::Expr(e) => match synth(&Env::empty(), &e, &b) {
            Ok(t) => {
                if json {
                    out.insert("verdict".into(), json!("yes"));
                    out.insert("type".into(), json!(t.to_string()));
                    println!("{}", Value::Object(out));
                } else {
                    println!("type: {t}");
                }
                EXIT_YES
            }
            Err(TypeError::BoundsExceeded) => {
                if json {
                    out.insert("verdict".into(), json!("unknown"));
                    println!("{}", Value::Object(out));
                } else {
                    println!("verdict: {}", painted(TriBool::Unknown));
                    println!("reason: bounds exceeded (fuel {}, depth {})", b.fuel, b.fn_depth);
                }
                EXIT_UNKNOWN
            }
            Err(err) => {
                if json {
                    out.insert("verdict".into(), json!("no"));
                    out.insert("reason".into(), json!(describe_error(&err)));
                    println!("{}", Value::Object(out));
                } else {
                    println!("verdict: {}", painted(TriBool::No));
                    println!("reason: {}", describe_error(&err));
                }
                EXIT_NO
            }
        },
        Query::Ascribe(e, t) => {
            if let Some(code) = wf_gate(&t, &b, json, &mut out) {
                return code;
            }
            let outcome = check(&Env::empty(), &e, &t, &b);
            match outcome {
                CheckOutcome::Yes => {
                    if json {
                        out.insert("verdict".into(), json!("yes"));
                        println!("{}", Value::Object(out));
                    } else {
                        println!("checked: {e} : {t}");
                        println!("verdict: {}", painted(TriBool::Yes));
                    }
                    EXIT_YES
                }
                CheckOutcome::No(err) => {
                    if json {
                        out.insert("verdict".into(), json!("no"));
                        out.insert("reason".into(), json!(describe_error(&err)));
                        println!("{}", Value::Object(out));
                    } else {
                        println!("verdict: {}", painted(TriBool::No));
                        println!("reason: {}", describe_error(&err));
                    }
                    EXIT_NO
                }
                CheckOutcome::Unknown => {
                    if json {
                        out.insert("verdict".into(), json!("unknown"));
                        println!("{}", Value::Object(out));
                    } else {
                        println!("verdict: {}", painted(TriBool::Unknown));
                        println!("reason: bounds exceeded (fuel {}, depth {})", b.fuel, b.fn_depth);
                    }
                    EXIT_UNKNOWN
                }
            }
        }
        Query::Subtype(t1, t2) => subtype_verdict(&t1, &t2, &b, json, out),
        _ => parse_failure(
            "this query form belongs to the prove or lr command",
            json,
        ),
    }
}

fn cmd_eval(args: &QueryArgs) -> u8 {
    let json = args.common.json;
    let query = match load_query(&args.input) {
        Ok(q) => q,
        Err(msg) => return parse_failure(&msg, json),
    };
    let e = match query {
        Query::Expr(e) => e,
        _ => return parse_failure("eval expects a bare expression", json),
    };
    let mut out = Map::new();
    out.insert("command".into(), json!("eval"));
    match eval(&e, args.common.fuel) {
        EvalOutcome::Value(v) => {
            if json {
                out.insert("outcome".into(), json!("value"));
                out.insert("term".into(), json!(v.to_string()));
                println!("{}", Value::Object(out));
            } else {
                println!("value: {v}");
            }
            EXIT_YES
        }
        EvalOutcome::Stuck(s) => {
            if json {
                out.insert("outcome".into(), json!("stuck"));
                out.insert("term".into(), json!(s.to_string()));
                println!("{}", Value::Object(out));
            } else {
                println!("stuck: {s}");
            }
            EXIT_NO
        }
        EvalOutcome::FuelExhausted(e) => {
            if json {
                out.insert("outcome".into(), json!("fuel-exhausted"));
                out.insert("term".into(), json!(e.to_string()));
                println!("{}", Value::Object(out));
            } else {
                println!("fuel-exhausted: {e}");
            }
            EXIT_UNKNOWN
        }
    }
}

fn subtype_verdict(t1: &Type, t2: &Type, b: &Bounds, json: bool, mut out: Map<String, Value>) -> u8 {
    out.insert("command".into(), json!("subtype"));
    for t in [t1, t2] {
        if let Some(code) = wf_gate(t, b, json, &mut out) {
            return code;
        }
    }
    let sv = subtype_witness(&Env::empty(), t1, t2, b);
    if json {
        out.insert("sub".into(), json!(t1.to_string()));
        out.insert("sup".into(), json!(t2.to_string()));
        out.insert("verdict".into(), json!(verdict_word(sv.verdict)));
        if let Some((theta, v)) = &sv.witness {
            let mut closing = Map::new();
            for (name, value) in theta.iter() {
                closing.insert(name.clone(), json!(value.to_string()));
            }
            out.insert(
                "witness".into(),
                json!({ "value": v.to_string(), "closing": closing }),
            );
        }
        println!("{}", Value::Object(out));
    } else {
        println!("subtype: {t1} <= {t2}");
        println!("verdict: {}", painted(sv.verdict));
        if let Some((theta, v)) = &sv.witness {
            println!("witness: value {v} under {theta}");
        }
    }
    exit_for(sv.verdict)
}

fn cmd_subtype(args: &QueryArgs) -> u8 {
    let b = args.common.bounds();
    let json = args.common.json;
    let query = match load_query(&args.input) {
        Ok(q) => q,
        Err(msg) => return parse_failure(&msg, json),
    };
    match query {
        Query::Subtype(t1, t2) => subtype_verdict(&t1, &t2, &b, json, Map::new()),
        _ => parse_failure("subtype expects a (subtype-query t t) form", json),
    }
}

fn report_proof(proof: &Expr, target: &Type, b: &Bounds, json: bool) -> u8 {
    let outcome = check(&Env::empty(), proof, target, b);
    let verdict = outcome.tri();
    if json {
        let mut out = Map::new();
        out.insert("command".into(), json!("prove"));
        out.insert("proof".into(), json!(proof.to_string()));
        out.insert("target".into(), json!(target.to_string()));
        out.insert("recheck".into(), json!(verdict_word(verdict)));
        if let CheckOutcome::No(err) = &outcome {
            out.insert("reason".into(), json!(describe_error(err)));
        }
        println!("{}", Value::Object(out));
    } else {
        println!("proof: {proof}");
        println!("target: {target}");
        println!("recheck: {}", painted(verdict));
        if let CheckOutcome::No(err) = &outcome {
            println!("reason: {}", describe_error(err));
        }
    }
    exit_for(verdict)
}

fn proof_failure(msg: String, json: bool) -> u8 {
    if json {
        println!("{}", json!({ "command": "prove", "error": msg }));
    } else {
        eprintln!("error: {msg}");
    }
    EXIT_NO
}

fn cmd_prove(args: &QueryArgs) -> u8 {
    let b = args.common.bounds();
    let json = args.common.json;
    let query = match load_query(&args.input) {
        Ok(q) => q,
        Err(msg) => return parse_failure(&msg, json),
    };
    match query {
        Query::Refl(e, ty) => {
            let index = match proof_index(&ty) {
                Ok(i) => i,
                Err(err) => return proof_failure(err.to_string(), json),
            };
            let proof = match prove_refl(&e, &ty) {
                Ok(p) => p,
                Err(err) => return proof_failure(err.to_string(), json),
            };
            let target = Type::eqrt(index, e.clone(), e);
            report_proof(&proof, &target, &b, json)
        }
        Query::Sym(proof, ty, l, r) => {
            let index = match proof_index(&ty) {
                Ok(i) => i,
                Err(err) => return proof_failure(err.to_string(), json),
            };
            let flipped = match prove_sym(&proof) {
                Ok(p) => p,
                Err(err) => return proof_failure(err.to_string(), json),
            };
            let target = Type::eqrt(index, r, l);
            report_proof(&flipped, &target, &b, json)
        }
        Query::Trans(p1, p2, ty, e1, _e2, e3) => {
            let index = match proof_index(&ty) {
                Ok(i) => i,
                Err(err) => return proof_failure(err.to_string(), json),
            };
            let chained = match prove_trans(&p1, &p2) {
                Ok(p) => p,
                Err(err) => return proof_failure(err.to_string(), json),
            };
            let target = Type::eqrt(index, e1, e3);
            report_proof(&chained, &target, &b, json)
        }
        _ => parse_failure("prove expects a refl-query, sym-query, or trans-query", json),
    }
}

fn cmd_lr(args: &QueryArgs) -> u8 {
    let b = args.common.bounds();
    let json = args.common.json;
    let query = match load_query(&args.input) {
        Ok(q) => q,
        Err(msg) => return parse_failure(&msg, json),
    };
    let (e1, e2, ty) = match query {
        Query::Lr(e1, e2, ty) => (e1, e2, ty),
        _ => return parse_failure("lr expects an (lr-query e e t) form", json),
    };
    let mut out = Map::new();
    out.insert("command".into(), json!("lr"));
    if let Some(code) = wf_gate(&ty, &b, json, &mut out) {
        return code;
    }
    let verdict = open_related(&Env::empty(), &e1, &e2, &ty, &b);
    if json {
        out.insert("left".into(), json!(e1.to_string()));
        out.insert("right".into(), json!(e2.to_string()));
        out.insert("type".into(), json!(ty.to_string()));
        out.insert("verdict".into(), json!(verdict_word(verdict)));
        println!("{}", Value::Object(out));
    } else {
        println!("related: {e1} ~ {e2} : {ty}");
        println!("verdict: {}", painted(verdict));
    }
    exit_for(verdict)
}

fn cmd_demo(args: &CommonArgs) -> u8 {
    let report = run_demo(&args.bounds());
    if args.json {
        let mut out = Map::new();
        out.insert("command".into(), json!("demo"));
        out.insert(
            "pinned_domain".into(),
            json!(report.pinned_solution.to_string()),
        );
        out.insert(
            "pinned_matches_agreement".into(),
            json!(report.pinned_matches_agreement),
        );
        out.insert(
            "shortcut_domain".into(),
            json!(report.shortcut_solution.to_string()),
        );
        out.insert("shortcut_is_false".into(), json!(report.shortcut_is_false));
        out.insert(
            "shortcut_full_domain".into(),
            json!(verdict_word(report.shortcut_full_domain)),
        );
        out.insert("narrow_check".into(), json!(verdict_word(report.narrow_check)));
        out.insert("wide_check".into(), json!(verdict_word(report.wide_check)));
        out.insert(
            "index_gap".into(),
            json!(verdict_word(report.index_gap.verdict)),
        );
        if let Some((_, v)) = &report.index_gap.witness {
            out.insert("separating_value".into(), json!(v.to_string()));
        }
        out.insert("conclusive".into(), json!(report.conclusive()));
        println!("{}", Value::Object(out));
    } else {
        println!("{report}");
    }
    if report.conclusive() {
        EXIT_YES
    } else {
        EXIT_NO
    }
}

fn cmd_meta(args: &MetaArgs) -> u8 {
    let fuel = args.common.fuel;
    let mut generator = Generator::new(GenConfig {
        seed: args.seed,
        ..GenConfig::default()
    });
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut normalized = 0usize;
    let mut stuck = 0usize;
    let mut exhausted = 0usize;
    let mut sim_yes = 0usize;
    let mut sim_unknown = 0usize;
    let mut congruences = 0usize;
    let mut refutations: Vec<String> = Vec::new();

    for _ in 0..args.count {
        let e = generator.gen_closed_expr();
        match eval(&e, fuel) {
            EvalOutcome::Value(_) => normalized += 1,
            EvalOutcome::Stuck(s) => {
                stuck += 1;
                refutations.push(format!("stuck term: {s}"));
            }
            EvalOutcome::FuelExhausted(_) => exhausted += 1,
        }
        let (r, fired) = sample_parred(&e, &mut rng);
        if fired == 0 {
            if congruent(&e, &r) {
                congruences += 1;
            } else {
                refutations.push(format!("contraction-free sample not congruent: {e} vs {r}"));
            }
        }
        let fwd = check_forward_simulation(&e, &r, fuel);
        let bwd = check_backward_simulation(&e, &r, fuel);
        let cot = check_cotermination(&e, &r, fuel);
        for (name, rep) in [("forward", &fwd), ("backward", &bwd), ("cotermination", &cot)] {
            match rep.verdict {
                TriBool::Yes => sim_yes += 1,
                TriBool::Unknown => sim_unknown += 1,
                TriBool::No => refutations.push(format!(
                    "{name} simulation refuted: {e} => {r} ({:?} vs {:?})",
                    rep.left, rep.right
                )),
            }
        }
    }

    let ok = refutations.is_empty();
    if args.common.json {
        let mut out = Map::new();
        out.insert("command".into(), json!("meta"));
        out.insert("seed".into(), json!(args.seed));
        out.insert("count".into(), json!(args.count));
        out.insert("normalized".into(), json!(normalized));
        out.insert("stuck".into(), json!(stuck));
        out.insert("fuel_exhausted".into(), json!(exhausted));
        out.insert("simulation_yes".into(), json!(sim_yes));
        out.insert("simulation_unknown".into(), json!(sim_unknown));
        out.insert("congruent_samples".into(), json!(congruences));
        out.insert("refutations".into(), json!(refutations));
        println!("{}", Value::Object(out));
    } else {
        println!("seed: {}", args.seed);
        println!("terms: {}", args.count);
        println!("normalized: {normalized}   stuck: {stuck}   fuel-exhausted: {exhausted}");
        println!("simulation verdicts: {sim_yes} yes, {sim_unknown} unknown, {} refuted", refutations.len());
        println!("contraction-free samples found congruent: {congruences}");
        for r in &refutations {
            println!("refuted: {r}");
        }
        println!(
            "verdict: {}",
            if ok {
                painted(TriBool::Yes)
            } else {
                painted(TriBool::No)
            }
        );
    }
    if ok {
        EXIT_YES
    } else {
        EXIT_NO
    }
}
