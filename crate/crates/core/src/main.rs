use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fplus::checker::json::{derivation_json_string, parse_context_json, parse_derivation_json};
use fplus::checker::{search_f0, validate_derivation, SearchResult, SystemId, DEFAULT_BUDGET};
use fplus::corpus::{run_corpus, RunOptions};
use fplus::datalib::{
    church_bool, church_list_nat, church_nat, decode_bool_with_fuel, decode_list_nat_with_fuel,
    decode_nat_with_fuel, enumerate_closed_normal,
};
use fplus::membership::{member, member_open, MemberError, NegContext, Verdict};
use fplus::polarity::classify;
use fplus::reduce::{beta_step_traced, whnf_step, ReduceOutcome, DEFAULT_FUEL};
use fplus::syntax::{parse_term, parse_type, Context, Term, Type};

const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "fplus", version, about = "Membership for ∀⁺ types of System F")]
struct Cli {
    /// Maximum number of β-contractions.
    #[arg(long, global = true, default_value_t = DEFAULT_FUEL)]
    fuel: u64,
    /// Maximum number of proof-search nodes.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Print a single-line JSON object on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized expansions.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// β-normalize leftmost-outermost.
    Normalize {
        term: String,
        #[arg(long)]
        trace: bool,
    },
    /// Reduce to weak-head normal form.
    Whnf {
        term: String,
        #[arg(long)]
        trace: bool,
    },
    /// Print forall+, forall-, both or neither.
    Classify {
        #[arg(value_name = "TYPE")]
        ty: String,
    },
    /// Validate a derivation JSON file.
    Check {
        #[arg(long, value_enum, default_value_t = Sys::F)]
        sys: Sys,
        file: PathBuf,
    },
    /// Search for an F0 typing of a β-normal term.
    Search {
        term: String,
        #[arg(value_name = "TYPE")]
        ty: String,
        #[arg(long)]
        ctx: Option<PathBuf>,
        #[arg(long)]
        emit_witness: Option<PathBuf>,
    },
    /// Decide membership in a ∀⁺ type (exit 0 member, 1 not, 2 unknown).
    Member {
        term: String,
        #[arg(value_name = "TYPE")]
        ty: String,
        /// ∀⁻ declarations for the free variables of an open term.
        #[arg(long)]
        ctx: Option<PathBuf>,
        #[arg(long)]
        emit_witness: Option<PathBuf>,
    },
    /// Church-encode a value.
    Encode { kind: DataArg, value: String },
    /// Decode a Church-encoded value.
    Decode { kind: DataArg, term: String },
    /// List closed β-normal terms by size.
    Enumerate {
        #[arg(long)]
        max_size: usize,
        #[arg(long, value_name = "TYPE")]
        typable_at: Option<String>,
    },
    /// Run a JSONL corpus; exit 0 iff every entry passes.
    Corpus { path: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Sys {
    F,
    F0,
}

#[derive(Clone, Copy, ValueEnum)]
enum DataArg {
    Nat,
    Bool,
    List,
}

#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> UsageError {
        UsageError(e.to_string())
    }
}

struct Out {
    json: bool,
}

impl Out {
    fn emit(&self, text: impl std::fmt::Display, value: Value) {
        if self.json {
            println!("{value}");
        } else {
            println!("{text}");
        }
    }
}

fn term_arg(s: &str) -> Result<Term, UsageError> {
    parse_term(s).map_err(|e| UsageError(format!("term: {e}")))
}

fn type_arg(s: &str) -> Result<Type, UsageError> {
    parse_type(s).map_err(|e| UsageError(format!("type: {e}")))
}

fn read_context(path: &Path) -> Result<Context, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    parse_context_json(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn write_witness(path: &Path, d: &fplus::checker::Derivation) -> Result<(), UsageError> {
    std::fs::write(path, derivation_json_string(d) + "\n")
        .map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn reduce_cmd(
    cli: &Cli,
    out: &Out,
    term: &str,
    trace: bool,
    head_only: bool,
) -> Result<u8, UsageError> {
    let t = term_arg(term)?;
    let mut cur = t;
    let mut steps = 0u64;
    let mut lines = Vec::new();
    let outcome = loop {
        let next = if head_only {
            whnf_step(&cur).map(|n| (n, None))
        } else {
            beta_step_traced(&cur).map(|(n, p)| (n, Some(p)))
        };
        let Some((next, path)) = next else {
            break ReduceOutcome::Done { term: cur, steps };
        };
        if steps >= cli.fuel {
            break ReduceOutcome::FuelExhausted {
                partial: cur,
                steps,
            };
        }
        steps += 1;
        if trace {
            let path = path
                .map(|p| p.to_string())
                .unwrap_or_else(|| head_path(&cur));
            if !out.json {
                println!("{steps}\t{path}\t{next}");
            }
            lines.push(json!({"step": steps, "path": path, "term": next.to_string()}));
        }
        cur = next;
    };
    let (tag, code) = match &outcome {
        ReduceOutcome::Done { .. } => ("done", 0),
        ReduceOutcome::FuelExhausted { .. } => ("fuel_exhausted", 2),
    };
    let shown = outcome.term().to_string();
    let mut value = json!({"outcome": tag, "term": shown, "steps": outcome.steps()});
    if trace {
        value["trace"] = Value::Array(lines);
    }
    let text = match &outcome {
        ReduceOutcome::Done { .. } => shown.clone(),
        ReduceOutcome::FuelExhausted { steps, .. } => {
            format!("fuel exhausted after {steps} steps: {shown}")
        }
    };
    out.emit(text, value);
    Ok(code)
}

fn head_path(t: &Term) -> String {
    // the contracted redex is (λx.u)v₁ inside (λx.u)v₁…vₙ
    let n = t.spine().1.len().saturating_sub(1);
    if n == 0 {
        "ε".to_string()
    } else {
        "L".repeat(n)
    }
}

fn member_exit(v: &Verdict) -> u8 {
    match v {
        Verdict::Member { .. } => 0,
        Verdict::NotMember { .. } => 1,
        Verdict::Unknown { .. } => 2,
    }
}

fn member_cmd(
    cli: &Cli,
    out: &Out,
    term: &str,
    ty: &str,
    ctx: Option<&Path>,
    emit: Option<&Path>,
) -> Result<u8, UsageError> {
    let t = term_arg(term)?;
    let a = type_arg(ty)?;
    let result = match ctx {
        None => member(&t, &a, cli.fuel, cli.budget),
        Some(p) => NegContext::new(read_context(p)?)
            .and_then(|g| member_open(&t, &a, &g, cli.fuel, cli.budget)),
    };
    let verdict = match result {
        Ok(v) => v,
        Err(e) => {
            let tag = match e {
                MemberError::Polarity { .. } | MemberError::ContextPolarity { .. } => {
                    "polarity_error"
                }
                MemberError::FreeVars(_) => "free_var_error",
                MemberError::MissingDeclaration(_) => "missing_declaration",
                MemberError::IllFormed => "error",
            };
            if out.json {
                println!("{}", json!({"verdict": tag, "error": e.to_string()}));
            }
            eprintln!("fplus: {e}");
            return Ok(EXIT_USAGE);
        }
    };
    let mut value = json!({"verdict": verdict.kind().as_str()});
    match &verdict {
        Verdict::Member {
            normal_form,
            witness,
        } => {
            value["normal_form"] = json!(normal_form.to_string());
            if let Some(p) = emit {
                write_witness(p, witness)?;
            }
        }
        Verdict::NotMember { normal_form, .. } => {
            value["normal_form"] = json!(normal_form.to_string());
        }
        Verdict::Unknown { fuel_spent, cause } => {
            value["fuel_spent"] = json!(fuel_spent);
            value["cause"] = json!(match cause {
                fplus::membership::UnknownCause::Fuel => "fuel",
                fplus::membership::UnknownCause::Budget => "budget",
            });
        }
    }
    let text = match verdict.normal_form() {
        Some(n) => format!("{} ({n})", verdict.kind()),
        None => verdict.kind().to_string(),
    };
    out.emit(text, value);
    Ok(member_exit(&verdict))
}

fn parse_list(s: &str) -> Result<Vec<u64>, UsageError> {
    let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|x| x.trim().parse::<u64>().map_err(UsageError::from))
        .collect()
}

fn run(cli: &Cli) -> Result<u8, UsageError> {
    let out = Out { json: cli.json };
    match &cli.command {
        Command::Normalize { term, trace } => reduce_cmd(cli, &out, term, *trace, false),
        Command::Whnf { term, trace } => reduce_cmd(cli, &out, term, *trace, true),
        Command::Classify { ty } => {
            let p = classify(&type_arg(ty)?);
            out.emit(p, json!({"polarity": p.as_str()}));
            Ok(0)
        }
        Command::Check { sys, file } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| UsageError(format!("{}: {e}", file.display())))?;
            let d = parse_derivation_json(&text)?;
            let sys = match sys {
                Sys::F => SystemId::F,
                Sys::F0 => SystemId::F0,
            };
            match validate_derivation(&d, sys) {
                Ok(()) => {
                    out.emit(
                        format!("ok: ⊢ {} : {}", d.subject, d.ty),
                        json!({"valid": true, "term": d.subject.to_string(), "type": d.ty.to_string()}),
                    );
                    Ok(0)
                }
                Err(inv) => {
                    let path: Vec<usize> = inv.path.clone();
                    out.emit(
                        format!("invalid at {:?}: {}", path, inv.reason),
                        json!({"valid": false, "path": path, "reason": inv.reason.code()}),
                    );
                    Ok(1)
                }
            }
        }
        Command::Search {
            term,
            ty,
            ctx,
            emit_witness,
        } => {
            let t = term_arg(term)?;
            let a = type_arg(ty)?;
            let ctx = match ctx {
                Some(p) => read_context(p)?,
                None => Context::new(),
            };
            match search_f0(&ctx, &t, &a, cli.budget)? {
                SearchResult::Typable(d) => {
                    if let Some(p) = emit_witness {
                        write_witness(p, &d)?;
                    }
                    out.emit(
                        "typable",
                        json!({"result": "typable", "nodes": d.node_count()}),
                    );
                    Ok(0)
                }
                SearchResult::NotTypable => {
                    out.emit("not typable", json!({"result": "not_typable"}));
                    Ok(1)
                }
                SearchResult::Aborted { budget } => {
                    out.emit(
                        format!("aborted after {budget} nodes"),
                        json!({"result": "aborted", "budget": budget}),
                    );
                    Ok(2)
                }
            }
        }
        Command::Member {
            term,
            ty,
            ctx,
            emit_witness,
        } => member_cmd(cli, &out, term, ty, ctx.as_deref(), emit_witness.as_deref()),
        Command::Encode { kind, value } => {
            let t = match kind {
                DataArg::Nat => church_nat(value.trim().parse::<u64>()?),
                DataArg::Bool => church_bool(value.trim().parse::<bool>()?),
                DataArg::List => church_list_nat(&parse_list(value)?),
            };
            out.emit(&t, json!({"term": t.to_string()}));
            Ok(0)
        }
        Command::Decode { kind, term } => {
            let t = term_arg(term)?;
            let decoded = match kind {
                DataArg::Nat => decode_nat_with_fuel(&t, cli.fuel).map(|n| json!(n)),
                DataArg::Bool => decode_bool_with_fuel(&t, cli.fuel).map(|b| json!(b)),
                DataArg::List => decode_list_nat_with_fuel(&t, cli.fuel).map(|l| json!(l)),
            };
            match decoded {
                Ok(v) => {
                    out.emit(&v, json!({"value": v}));
                    Ok(0)
                }
                Err(e) => {
                    out.emit(&e, json!({"error": e.to_string()}));
                    Ok(1)
                }
            }
        }
        Command::Enumerate {
            max_size,
            typable_at,
        } => {
            if *max_size < 1 {
                return Err(UsageError("--max-size must be at least 1".into()));
            }
            let filter = typable_at.as_deref().map(type_arg).transpose()?;
            let mut terms = Vec::new();
            for t in enumerate_closed_normal(*max_size) {
                if let Some(a) = &filter {
                    match search_f0(&Context::new(), &t, a, cli.budget)? {
                        SearchResult::Typable(_) => {}
                        SearchResult::NotTypable => continue,
                        SearchResult::Aborted { .. } => {
                            eprintln!("fplus: search aborted on {t}");
                            continue;
                        }
                    }
                }
                terms.push(t.to_string());
            }
            if cli.json {
                println!("{}", json!({"count": terms.len(), "terms": terms}));
            } else {
                for t in &terms {
                    println!("{t}");
                }
            }
            Ok(0)
        }
        Command::Corpus { path } => {
            let opts = RunOptions {
                fuel: cli.fuel,
                budget: cli.budget,
                seed: cli.seed,
            };
            let report = run_corpus(path, &opts)
                .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
            if cli.json {
                println!("{}", report.to_json());
            } else {
                for e in &report.entries {
                    println!(
                        "{} {} [{}] expected {} got {}{}",
                        if e.pass { "PASS" } else { "FAIL" },
                        e.id,
                        e.kind,
                        e.expected,
                        e.actual,
                        e.detail
                            .as_ref()
                            .map(|d| format!(": {d}"))
                            .unwrap_or_default()
                    );
                }
                println!("{}/{} passed", report.summary.passed, report.summary.total);
            }
            Ok(if report.all_passed() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    // deep terms recurse deeply during reduction and printing
    let worker = std::thread::Builder::new()
        .stack_size(256 * 1024 * 1024)
        .spawn(move || match run(&cli) {
            Ok(code) => code,
            Err(UsageError(msg)) => {
                eprintln!("fplus: {msg}");
                EXIT_USAGE
            }
        })
        .expect("spawn worker thread");
    ExitCode::from(worker.join().unwrap_or(101))
}
