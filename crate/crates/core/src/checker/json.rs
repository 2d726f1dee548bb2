//! JSON form of derivations and contexts. Terms and types are written in the
//! concrete syntax.

use serde::{Deserialize, Serialize};

use super::derivation::{Derivation, Rule};
use crate::syntax::{parse_term, parse_type, Context, Name, ParseError};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct DeclJson {
    pub var: String,
    #[serde(rename = "type")]
    pub ty: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct DerivationJson {
    pub rule: String,
    pub term: String,
    #[serde(rename = "type")]
    pub ty: String,
    #[serde(default)]
    pub context: Vec<DeclJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instantiation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generalized: Option<String>,
    #[serde(default)]
    pub premises: Vec<DerivationJson>,
}

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("at node {path:?}, field `{field}`: {source}")]
    Syntax {
        path: Vec<usize>,
        field: &'static str,
        source: ParseError,
    },
    #[error("at node {path:?}: unknown rule `{rule}`")]
    UnknownRule { path: Vec<usize>, rule: String },
    #[error("at node {path:?}: variable `{var}` declared twice")]
    Duplicate { path: Vec<usize>, var: String },
}

pub fn context_to_json(ctx: &Context) -> Vec<DeclJson> {
    ctx.iter()
        .map(|(x, t)| DeclJson {
            var: x.to_string(),
            ty: t.to_string(),
        })
        .collect()
}

pub fn context_from_json(decls: &[DeclJson]) -> Result<Context, JsonError> {
    context_at(decls, &[])
}

fn context_at(decls: &[DeclJson], path: &[usize]) -> Result<Context, JsonError> {
    let mut ctx = Context::new();
    for d in decls {
        let ty = parse_type(&d.ty).map_err(|source| JsonError::Syntax {
            path: path.to_vec(),
            field: "context",
            source,
        })?;
        ctx = ctx
            .extend(Name::from(d.var.as_str()), ty)
            .map_err(|_| JsonError::Duplicate {
                path: path.to_vec(),
                var: d.var.clone(),
            })?;
    }
    Ok(ctx)
}

pub fn parse_context_json(text: &str) -> Result<Context, JsonError> {
    let decls: Vec<DeclJson> = serde_json::from_str(text)?;
    context_from_json(&decls)
}

pub fn derivation_to_json(d: &Derivation) -> DerivationJson {
    DerivationJson {
        rule: d.rule.as_str().to_string(),
        term: d.subject.to_string(),
        ty: d.ty.to_string(),
        context: context_to_json(&d.context),
        instantiation: d.instantiation.as_ref().map(|t| t.to_string()),
        generalized: d.generalized.as_ref().map(|x| x.to_string()),
        premises: d.premises.iter().map(derivation_to_json).collect(),
    }
}

pub fn derivation_from_json(j: &DerivationJson) -> Result<Derivation, JsonError> {
    let mut path = Vec::new();
    from_json_at(j, &mut path)
}

fn from_json_at(j: &DerivationJson, path: &mut Vec<usize>) -> Result<Derivation, JsonError> {
    let syntax = |field, source| JsonError::Syntax {
        path: path.clone(),
        field,
        source,
    };
    let rule = Rule::from_tag(&j.rule).ok_or_else(|| JsonError::UnknownRule {
        path: path.clone(),
        rule: j.rule.clone(),
    })?;
    let subject = parse_term(&j.term).map_err(|e| syntax("term", e))?;
    let ty = parse_type(&j.ty).map_err(|e| syntax("type", e))?;
    let instantiation = match &j.instantiation {
        Some(s) => Some(parse_type(s).map_err(|e| syntax("instantiation", e))?),
        None => None,
    };
    let context = context_at(&j.context, path)?;
    let mut premises = Vec::with_capacity(j.premises.len());
    for (i, p) in j.premises.iter().enumerate() {
        path.push(i);
        premises.push(from_json_at(p, path)?);
        path.pop();
    }
    Ok(Derivation {
        rule,
        context,
        subject,
        ty,
        premises,
        instantiation,
        generalized: j.generalized.as_deref().map(Name::from),
    })
}

pub fn parse_derivation_json(text: &str) -> Result<Derivation, JsonError> {
    let j: DerivationJson = serde_json::from_str(text)?;
    derivation_from_json(&j)
}

pub fn derivation_json_string(d: &Derivation) -> String {
    serde_json::to_string_pretty(&derivation_to_json(d)).expect("derivation serializes")
}
