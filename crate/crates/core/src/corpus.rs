//! Line-delimited JSON corpora of queries with expected outcomes.
//!
//! Each non-blank line is one entry:
//!
//! ```json
//! {"id": "ent-2", "kind": "member", "term": "\\f.\\x.(f)(f)x", "type": "∀X.(X→X)→X→X", "expected": "member"}
//! ```
//!
//! Entries are evaluated in parallel; the report is ordered by line.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::checker::json::{context_from_json, parse_derivation_json, DeclJson};
use crate::checker::{search_f0, validate_derivation, SearchResult, SystemId, DEFAULT_BUDGET};
use crate::membership::{member, member_open, stability_probe, MemberError, NegContext};
use crate::polarity::classify;
use crate::reduce::{normalize, ReduceOutcome, DEFAULT_FUEL};
use crate::syntax::{parse_term, parse_type, Context, Term, Type};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKind {
    Normalize,
    Classify,
    Search,
    Member,
    Validate,
    Stability,
}

impl EntryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EntryKind::Normalize => "normalize",
            EntryKind::Classify => "classify",
            EntryKind::Search => "search",
            EntryKind::Member => "member",
            EntryKind::Validate => "validate",
            EntryKind::Stability => "stability",
        }
    }

    /// Outcome tags an entry of this kind may expect.
    pub fn vocabulary(self) -> &'static [&'static str] {
        match self {
            EntryKind::Normalize => &["done", "fuel_exhausted"],
            EntryKind::Classify => &["forall+", "forall-", "both", "neither"],
            EntryKind::Search => &["typable", "not_typable", "aborted"],
            EntryKind::Member => &[
                "member",
                "not_member",
                "unknown",
                "polarity_error",
                "free_var_error",
                "missing_declaration",
            ],
            EntryKind::Validate => &["ok", "invalid"],
            EntryKind::Stability => &["stable", "unstable"],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub id: String,
    pub kind: EntryKind,
    #[serde(default)]
    pub term: Option<String>,
    #[serde(default, rename = "type")]
    pub ty: Option<String>,
    #[serde(default)]
    pub context: Option<Vec<DeclJson>>,
    /// Derivation JSON file, relative to the corpus file.
    #[serde(default)]
    pub derivation: Option<String>,
    /// `f` or `f0`, for `validate`.
    #[serde(default)]
    pub sys: Option<String>,
    pub expected: String,
    /// Expected normal form, for `normalize`.
    #[serde(default)]
    pub normal_form: Option<String>,
    #[serde(default)]
    pub fuel: Option<u64>,
    #[serde(default)]
    pub budget: Option<u64>,
    #[serde(default)]
    pub expansions: Option<usize>,
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub fuel: u64,
    pub budget: u64,
    pub seed: u64,
}

impl Default for RunOptions {
    fn default() -> RunOptions {
        RunOptions {
            fuel: DEFAULT_FUEL,
            budget: DEFAULT_BUDGET,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryReport {
    pub index: usize,
    pub id: String,
    pub kind: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub entries: Vec<EntryReport>,
    pub summary: Summary,
}

impl CorpusReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

struct Outcome {
    actual: String,
    detail: Option<String>,
}

impl Outcome {
    fn tag(actual: &str) -> Outcome {
        Outcome {
            actual: actual.to_string(),
            detail: None,
        }
    }

    fn with(actual: &str, detail: impl Into<String>) -> Outcome {
        Outcome {
            actual: actual.to_string(),
            detail: Some(detail.into()),
        }
    }
}

fn need<'a>(field: &'a Option<String>, name: &str) -> Result<&'a str, String> {
    field
        .as_deref()
        .ok_or_else(|| format!("missing field `{name}`"))
}

fn term_of(e: &CorpusEntry) -> Result<Term, String> {
    parse_term(need(&e.term, "term")?).map_err(|err| format!("term: {err}"))
}

fn type_of(e: &CorpusEntry) -> Result<Type, String> {
    parse_type(need(&e.ty, "type")?).map_err(|err| format!("type: {err}"))
}

fn context_of(e: &CorpusEntry) -> Result<Option<Context>, String> {
    match &e.context {
        None => Ok(None),
        Some(decls) => context_from_json(decls)
            .map(Some)
            .map_err(|err| format!("context: {err}")),
    }
}

fn member_error_tag(err: &MemberError) -> &'static str {
    match err {
        MemberError::Polarity { .. } | MemberError::ContextPolarity { .. } => "polarity_error",
        MemberError::FreeVars(_) => "free_var_error",
        MemberError::MissingDeclaration(_) => "missing_declaration",
        MemberError::IllFormed => "error",
    }
}

fn evaluate(e: &CorpusEntry, base: &Path, opts: &RunOptions) -> Result<Outcome, String> {
    if !e.kind.vocabulary().contains(&e.expected.as_str()) {
        return Err(format!(
            "expected tag `{}` is not one of {:?}",
            e.expected,
            e.kind.vocabulary()
        ));
    }
    let fuel = e.fuel.unwrap_or(opts.fuel);
    let budget = e.budget.unwrap_or(opts.budget);
    match e.kind {
        EntryKind::Normalize => {
            let t = term_of(e)?;
            match normalize(&t, fuel) {
                ReduceOutcome::Done { term, steps } => {
                    let shown = term.to_string();
                    if let Some(want) = &e.normal_form {
                        let want = parse_term(want).map_err(|err| format!("normal_form: {err}"))?;
                        if want != term {
                            return Ok(Outcome::with(
                                "done_mismatch",
                                format!("normal form {shown} after {steps} steps"),
                            ));
                        }
                    }
                    Ok(Outcome::with("done", format!("{shown} in {steps} steps")))
                }
                ReduceOutcome::FuelExhausted { steps, .. } => {
                    Ok(Outcome::with("fuel_exhausted", format!("{steps} steps")))
                }
            }
        }
        EntryKind::Classify => Ok(Outcome::tag(classify(&type_of(e)?).as_str())),
        EntryKind::Search => {
            let t = term_of(e)?;
            let ty = type_of(e)?;
            let ctx = context_of(e)?.unwrap_or_default();
            match search_f0(&ctx, &t, &ty, budget).map_err(|err| err.to_string())? {
                SearchResult::Typable(d) => Ok(Outcome::with(
                    "typable",
                    format!("witness with {} nodes", d.node_count()),
                )),
                SearchResult::NotTypable => Ok(Outcome::tag("not_typable")),
                SearchResult::Aborted { budget } => {
                    Ok(Outcome::with("aborted", format!("budget {budget}")))
                }
            }
        }
        EntryKind::Member => {
            let t = term_of(e)?;
            let ty = type_of(e)?;
            let verdict = match context_of(e)? {
                None => member(&t, &ty, fuel, budget),
                Some(ctx) => {
                    NegContext::new(ctx).and_then(|g| member_open(&t, &ty, &g, fuel, budget))
                }
            };
            match verdict {
                Ok(v) => {
                    let detail = v.normal_form().map(|n| format!("normal form {n}"));
                    Ok(Outcome {
                        actual: v.kind().as_str().to_string(),
                        detail,
                    })
                }
                Err(err) => Ok(Outcome::with(member_error_tag(&err), err.to_string())),
            }
        }
        EntryKind::Validate => {
            let file = need(&e.derivation, "derivation")?;
            let path = base.join(file);
            let text = std::fs::read_to_string(&path)
                .map_err(|err| format!("{}: {err}", path.display()))?;
            let d = parse_derivation_json(&text).map_err(|err| err.to_string())?;
            let sys = match e.sys.as_deref().unwrap_or("f") {
                "f" => SystemId::F,
                "f0" => SystemId::F0,
                other => return Err(format!("unknown system `{other}`")),
            };
            match validate_derivation(&d, sys) {
                Ok(()) => Ok(Outcome::with("ok", format!("⊢ {} : {}", d.subject, d.ty))),
                Err(inv) => Ok(Outcome::with(
                    "invalid",
                    format!("{} at {:?}", inv.reason, inv.path),
                )),
            }
        }
        EntryKind::Stability => {
            let t = term_of(e)?;
            let ty = type_of(e)?;
            let n = e.expansions.unwrap_or(10);
            let report = stability_probe(&t, &ty, n, opts.seed, fuel, budget)
                .map_err(|err| err.to_string())?;
            let flips = report.violations().len();
            let tag = if flips == 0 { "stable" } else { "unstable" };
            Ok(Outcome::with(
                tag,
                format!(
                    "baseline {}, {} probes, {} flips",
                    report.baseline,
                    report.probes.len(),
                    flips
                ),
            ))
        }
    }
}

/// Runs the corpus in `text`; derivation files resolve against `base`.
pub fn run_corpus_str(text: &str, base: &Path, opts: &RunOptions) -> CorpusReport {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    let parsed: Vec<Result<CorpusEntry, String>> = lines
        .iter()
        .map(|(_, l)| serde_json::from_str::<CorpusEntry>(l).map_err(|e| e.to_string()))
        .collect();
    let mut seen = HashSet::new();
    let duplicate: Vec<bool> = parsed
        .iter()
        .map(|p| match p {
            Ok(e) => !seen.insert(e.id.clone()),
            Err(_) => false,
        })
        .collect();
    let entries: Vec<EntryReport> = parsed
        .par_iter()
        .enumerate()
        .map(|(index, p)| {
            let line = lines[index].0 + 1;
            let entry = match p {
                Ok(e) => e,
                Err(err) => {
                    return EntryReport {
                        index,
                        id: format!("line {line}"),
                        kind: "invalid".into(),
                        expected: String::new(),
                        actual: "error".into(),
                        pass: false,
                        detail: Some(err.clone()),
                    }
                }
            };
            if duplicate[index] {
                return EntryReport {
                    index,
                    id: entry.id.clone(),
                    kind: entry.kind.as_str().into(),
                    expected: entry.expected.clone(),
                    actual: "error".into(),
                    pass: false,
                    detail: Some(format!("duplicate id on line {line}")),
                };
            }
            let (actual, detail) = match evaluate(entry, base, opts) {
                Ok(o) => (o.actual, o.detail),
                Err(err) => ("error".to_string(), Some(err)),
            };
            EntryReport {
                index,
                id: entry.id.clone(),
                kind: entry.kind.as_str().into(),
                expected: entry.expected.clone(),
                pass: actual == entry.expected,
                actual,
                detail,
            }
        })
        .collect();
    let passed = entries.iter().filter(|e| e.pass).count();
    CorpusReport {
        summary: Summary {
            total: entries.len(),
            passed,
            failed: entries.len() - passed,
        },
        entries,
    }
}

pub fn run_corpus(path: &Path, opts: &RunOptions) -> std::io::Result<CorpusReport> {
    let text = std::fs::read_to_string(path)?;
    let base: PathBuf = path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    Ok(run_corpus_str(&text, &base, opts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str) -> CorpusReport {
        run_corpus_str(text, Path::new("."), &RunOptions::default())
    }

    #[test]
    fn empty_corpus_passes() {
        let r = run("");
        assert!(r.all_passed());
        assert_eq!(
            r.summary,
            Summary {
                total: 0,
                passed: 0,
                failed: 0
            }
        );
    }

    #[test]
    fn non_member_entry() {
        let r = run(
            r#"{"id":"k","kind":"member","term":"\\x.\\y.x","type":"∀X.(X→X)→(X→X)","expected":"not_member"}"#,
        );
        assert!(r.all_passed(), "{r:?}");
        assert_eq!(r.summary.passed, 1);
    }

    #[test]
    fn bad_lines_do_not_abort_the_run() {
        let text = [
            r#"{"id":"a","kind":"classify","type":"X","expected":"both"}"#,
            "not json",
            r#"{"id":"a","kind":"classify","type":"X","expected":"both"}"#,
            r#"{"id":"c","kind":"classify","type":"∀.X","expected":"both"}"#,
            r#"{"id":"d","kind":"classify","type":"X","expected":"maybe"}"#,
        ]
        .join("\n");
        let r = run(&text);
        let pass: Vec<bool> = r.entries.iter().map(|e| e.pass).collect();
        assert_eq!(pass, vec![true, false, false, false, false]);
        assert_eq!(r.entries[1].id, "line 2");
        assert_eq!(r.summary.failed, 4);
    }

    #[test]
    fn open_member_entry_uses_context() {
        let r = run(
            r#"{"id":"o","kind":"member","term":"(f)(f)x","type":"X","context":[{"var":"f","type":"X→X"},{"var":"x","type":"X"}],"expected":"member"}"#,
        );
        assert!(r.all_passed(), "{r:?}");
    }

    #[test]
    fn order_follows_input() {
        let text: String = (0..40)
            .map(|i| {
                format!(
                    r#"{{"id":"n{i}","kind":"normalize","term":"(\\x.x) y{i}","expected":"done","normal_form":"y{i}"}}"#
                )
            })
            .collect::<Vec<_>>()
            .join("\n");
        let r = run(&text);
        assert!(r.all_passed());
        assert!(r
            .entries
            .iter()
            .enumerate()
            .all(|(i, e)| e.index == i && e.id == format!("n{i}")));
    }
}
