//! Command-line interface: parse and validate automaton descriptions, test
//! word membership, list bounded languages through any of the three
//! semantics, canonicalize bar strings, and run the law suites.
//!
//! Exit codes: 0 pass/true, 1 fail/false/violation, 2 usage or parse error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nomata::automata::{
    expand, parse_spec_unchecked, validate_spec, AutomatonSpec, ConcreteAutomaton, State,
};
use nomata::barlang::{alpha_eq, canonicalize, BarString, LangApprox};
use nomata::em::lang_semantics;
use nomata::kleisli::{trace_iterate, trace_language};
use nomata::laws::{run_selfcheck, run_selfcheck_with_defect, SelfcheckReport};
use nomata::nominal::Nominal;

#[derive(Parser)]
#[command(name = "nomata", version, about = "Nominal automata over infinite name alphabets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a description and check the model side conditions.
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Does a state accept a word? Prints true or false.
    Member {
        file: PathBuf,
        /// State, e.g. `q0` or `q1(a)`.
        state: String,
        /// Word, e.g. `aa` or `|bb` (empty for ε).
        word: String,
        /// Pool size override (default: sized to the word).
        #[arg(long)]
        pool: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// List the accepted language by exhaustive run enumeration.
    Enum(LangArgs),
    /// List the accepted language as a fixed point of the trace operator.
    Trace(LangArgs),
    /// List the accepted language through powerset determinization.
    Lang(LangArgs),
    /// α-equivalence utilities on bar strings.
    Alpha {
        #[command(subcommand)]
        op: AlphaOp,
    },
    /// Run every law suite on seeded random inputs.
    Selfcheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long, hide = true)]
        inject_defect: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct LangArgs {
    file: PathBuf,
    /// Restrict the listing to one state.
    #[arg(long)]
    state: Option<String>,
    /// Maximum word length.
    #[arg(long, default_value_t = 3)]
    depth: usize,
    /// Pool size override (default: depth + max arity + 1).
    #[arg(long)]
    pool: Option<usize>,
    /// Semantics to compute the listing with; all three agree.
    #[arg(long, value_enum)]
    via: Option<Via>,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum AlphaOp {
    /// Are two bar strings α-equivalent?
    Eq {
        word1: String,
        word2: String,
        #[arg(long)]
        json: bool,
    },
    /// Print the canonical representative of a bar string's class.
    Canon {
        word: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Via {
    Oracle,
    Kl,
    Em,
}

impl Via {
    fn name(self) -> &'static str {
        match self {
            Via::Oracle => "oracle",
            Via::Kl => "kl",
            Via::Em => "em",
        }
    }
}

const PASS: u8 = 0;
const FAIL: u8 = 1;
const USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Validate { file, json } => cmd_validate(&file, json),
        Command::Member { file, state, word, pool, json } => {
            cmd_member(&file, &state, &word, pool, json)
        }
        Command::Enum(args) => cmd_listing("enum", Via::Oracle, args),
        Command::Trace(args) => cmd_listing("trace", Via::Kl, args),
        Command::Lang(args) => cmd_listing("lang", Via::Em, args),
        Command::Alpha { op } => match op {
            AlphaOp::Eq { word1, word2, json } => cmd_alpha_eq(&word1, &word2, json),
            AlphaOp::Canon { word, json } => cmd_alpha_canon(&word, json),
        },
        Command::Selfcheck { seed, cases, inject_defect, json } => {
            cmd_selfcheck(seed, cases, inject_defect, json)
        }
    };
    ExitCode::from(code)
}

fn fail_usage(msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    USAGE
}

fn load_spec(file: &Path) -> Result<AutomatonSpec, u8> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| fail_usage(format!("cannot read {}: {e}", file.display())))?;
    parse_spec_unchecked(&text).map_err(|e| fail_usage(format!("{}: {e}", file.display())))
}

/// Parse (exit 2 on bad text), then validate (exit 1 on violations).
fn load_valid_spec(file: &Path) -> Result<AutomatonSpec, u8> {
    let spec = load_spec(file)?;
    let violations = validate_spec(&spec);
    if violations.is_empty() {
        Ok(spec)
    } else {
        for v in &violations {
            eprintln!("violation: {v}");
        }
        Err(FAIL)
    }
}

fn cmd_validate(file: &Path, json: bool) -> u8 {
    let spec = match load_spec(file) {
        Ok(spec) => spec,
        Err(code) => return code,
    };
    let violations = validate_spec(&spec);
    if json {
        let payload = json!({
            "command": "validate",
            "inputs": { "file": file.display().to_string() },
            "depth": Value::Null,
            "pool": Value::Null,
            "result": {
                "ok": violations.is_empty(),
                "kind": spec.kind.to_string(),
                "name": spec.name,
                "orbits": spec.orbits.len(),
                "rules": spec.rules.len(),
                "violations": violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            },
        });
        println!("{}", serde_json::to_string_pretty(&payload).expect("serializable"));
    } else if violations.is_empty() {
        println!(
            "ok: {} {} ({} orbits, {} rules)",
            spec.kind,
            spec.name,
            spec.orbits.len(),
            spec.rules.len()
        );
    } else {
        for v in &violations {
            println!("violation: {v}");
        }
    }
    if violations.is_empty() {
        PASS
    } else {
        FAIL
    }
}

fn parse_state(text: &str) -> Result<State, u8> {
    State::parse(text).ok_or_else(|| fail_usage(format!("cannot parse state `{text}`")))
}

fn expand_with_pool(
    spec: &AutomatonSpec,
    auto: usize,
    requested: Option<usize>,
) -> Result<(ConcreteAutomaton, usize, bool), u8> {
    let pool = requested.unwrap_or(auto);
    if pool < auto {
        eprintln!(
            "warning: pool {pool} is below the auto bound {auto}; listings may be incomplete"
        );
    }
    let a = expand(spec, pool)
        .map_err(|e| fail_usage(format!("cannot expand over {pool} atoms: {e}")))?;
    Ok((a, pool, requested.is_none()))
}

fn cmd_member(file: &Path, state: &str, word: &str, pool: Option<usize>, json: bool) -> u8 {
    let spec = match load_valid_spec(file) {
        Ok(spec) => spec,
        Err(code) => return code,
    };
    let q = match parse_state(state) {
        Ok(q) => q,
        Err(code) => return code,
    };
    let w = match BarString::parse(word) {
        Ok(w) => w,
        Err(e) => return fail_usage(e),
    };
    // size the pool to the query: canonical word names and state registers
    // must fit, and a run needs binder headroom
    let needed = canonicalize(&w)
        .as_bar_string()
        .support()
        .iter()
        .chain(q.support().iter())
        .map(|n| n.index() as usize + 1)
        .max()
        .unwrap_or(0);
    let auto = spec.auto_pool(w.len()).max(needed);
    let (a, pool_used, _) = match expand_with_pool(&spec, auto, pool) {
        Ok(x) => x,
        Err(code) => return code,
    };
    match a.accepts(&q, &w) {
        Ok(accepted) => {
            if json {
                let payload = json!({
                    "command": "member",
                    "inputs": { "file": file.display().to_string(), "state": state, "word": word },
                    "depth": Value::Null,
                    "pool": pool_used,
                    "result": accepted,
                });
                println!("{}", serde_json::to_string_pretty(&payload).expect("serializable"));
            } else {
                println!("{accepted}");
            }
            if accepted {
                PASS
            } else {
                FAIL
            }
        }
        Err(e) => fail_usage(e),
    }
}

fn language_via(
    a: &ConcreteAutomaton,
    q: &State,
    depth: usize,
    via: Via,
) -> Result<LangApprox, nomata::Error> {
    match via {
        Via::Oracle => a.enum_language(q, depth),
        Via::Kl => {
            let tr = trace_iterate(a, depth + 1)?;
            trace_language(a, &tr, q, depth)
        }
        Via::Em => lang_semantics(a, q, depth),
    }
}

fn cmd_listing(command: &str, default_via: Via, args: LangArgs) -> u8 {
    let spec = match load_valid_spec(&args.file) {
        Ok(spec) => spec,
        Err(code) => return code,
    };
    let via = args.via.unwrap_or(default_via);
    let auto = spec.auto_pool(args.depth);
    let (a, pool_used, pool_auto) = match expand_with_pool(&spec, auto, args.pool) {
        Ok(x) => x,
        Err(code) => return code,
    };

    let states: Vec<State> = match &args.state {
        Some(text) => match parse_state(text) {
            Ok(q) if a.states.contains(&q) => vec![q],
            Ok(q) => return fail_usage(format!("state `{q}` is not in the expansion")),
            Err(code) => return code,
        },
        None => a.states.iter().cloned().collect(),
    };

    let mut listings = Vec::with_capacity(states.len());
    for q in &states {
        match language_via(&a, q, args.depth, via) {
            Ok(lang) => listings.push((q.clone(), lang)),
            Err(e) => return fail_usage(format!("at state {q}: {e}")),
        }
    }

    if args.json {
        let payload = json!({
            "command": command,
            "inputs": {
                "file": args.file.display().to_string(),
                "state": args.state,
                "via": via.name(),
            },
            "depth": args.depth,
            "pool": pool_used,
            "result": listings
                .iter()
                .map(|(q, lang)| {
                    json!({
                        "state": q.to_string(),
                        "eps": lang.eps(),
                        "words": lang.rendered_words(),
                    })
                })
                .collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&payload).expect("serializable"));
    } else {
        println!("automaton: {} ({})", a.name, a.kind);
        println!("pool: {pool_used}{}", if pool_auto { " (auto)" } else { "" });
        println!("depth: {}", args.depth);
        for (q, lang) in &listings {
            println!("state: {q}");
            println!("eps: {}", lang.eps());
            for w in lang.rendered_words() {
                println!("{w}");
            }
        }
    }
    PASS
}

fn cmd_alpha_eq(word1: &str, word2: &str, json: bool) -> u8 {
    let (v, w) = match (BarString::parse(word1), BarString::parse(word2)) {
        (Ok(v), Ok(w)) => (v, w),
        (Err(e), _) | (_, Err(e)) => return fail_usage(e),
    };
    let equal = alpha_eq(&v, &w);
    if json {
        let payload = json!({
            "command": "alpha-eq",
            "inputs": { "word1": word1, "word2": word2 },
            "depth": Value::Null,
            "pool": Value::Null,
            "result": equal,
        });
        println!("{}", serde_json::to_string_pretty(&payload).expect("serializable"));
    } else {
        println!("{equal}");
    }
    if equal {
        PASS
    } else {
        FAIL
    }
}

fn cmd_alpha_canon(word: &str, json: bool) -> u8 {
    let w = match BarString::parse(word) {
        Ok(w) => w,
        Err(e) => return fail_usage(e),
    };
    let canonical = canonicalize(&w);
    if json {
        let payload = json!({
            "command": "alpha-canon",
            "inputs": { "word": word },
            "depth": Value::Null,
            "pool": Value::Null,
            "result": canonical.to_string(),
        });
        println!("{}", serde_json::to_string_pretty(&payload).expect("serializable"));
    } else {
        println!("{canonical}");
    }
    PASS
}

fn selfcheck_json(report: &SelfcheckReport) -> Value {
    json!({
        "command": "selfcheck",
        "inputs": { "seed": report.seed, "cases": report.cases },
        "depth": Value::Null,
        "pool": Value::Null,
        "result": {
            "all_green": report.all_green(),
            "suites": report
                .suites
                .iter()
                .map(|s| {
                    json!({
                        "name": s.name,
                        "cases": s.cases,
                        "failures": s.failures,
                    })
                })
                .collect::<Vec<_>>(),
        },
    })
}

fn cmd_selfcheck(seed: u64, cases: usize, inject_defect: bool, json: bool) -> u8 {
    if cases == 0 {
        eprintln!("warning: 0 cases requested; every suite passes vacuously");
    }
    let report = if inject_defect {
        run_selfcheck_with_defect(seed, cases)
    } else {
        run_selfcheck(seed, cases)
    };
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&selfcheck_json(&report)).expect("serializable")
        );
    } else {
        println!("seed: {seed}");
        println!("cases: {cases}");
        for suite in &report.suites {
            if suite.passed() {
                println!("{}: ok ({} cases)", suite.name, suite.cases);
            } else {
                println!("{}: FAILED ({} cases)", suite.name, suite.cases);
                for failure in &suite.failures {
                    println!("  {failure}");
                }
            }
        }
        println!("{}", if report.all_green() { "all suites passed" } else { "FAILURES" });
    }
    if report.all_green() {
        PASS
    } else {
        FAIL
    }
}
