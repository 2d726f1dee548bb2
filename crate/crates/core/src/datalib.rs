//! Church encodings of the closed ∀⁺ data types `Bool`, `Ent` and `LEnt`,
//! their decoders, and an enumerator of closed β-normal terms.

use std::collections::HashMap;
use std::sync::Arc;

use crate::reduce::{normalize, DEFAULT_FUEL};
use crate::syntax::{parse_type, Hint, Name, Term, Type};

pub const BOOL: &str = "∀X.X→X→X";
pub const ENT: &str = "∀X.(X→X)→X→X";
pub const LENT: &str = "∀X.((∀Y.(Y→Y)→Y→Y)→X→X)→X→X";

pub fn bool_type() -> Type {
    parse_type(BOOL).expect("Bool parses")
}

pub fn nat_type() -> Type {
    parse_type(ENT).expect("Ent parses")
}

pub fn list_nat_type() -> Type {
    parse_type(LENT).expect("LEnt parses")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DataValue {
    Bool(bool),
    Nat(u64),
    ListNat(Vec<u64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataKind {
    Bool,
    Nat,
    ListNat,
}

/// A data type given by a closed ∀⁺ type and its Church encoding.
#[derive(Debug, Clone)]
pub struct DataTypeDef {
    pub name: &'static str,
    pub kind: DataKind,
    pub ty: Type,
}

impl DataTypeDef {
    pub fn encode(&self, v: &DataValue) -> Option<Term> {
        match (self.kind, v) {
            (DataKind::Bool, DataValue::Bool(b)) => Some(church_bool(*b)),
            (DataKind::Nat, DataValue::Nat(n)) => Some(church_nat(*n)),
            (DataKind::ListNat, DataValue::ListNat(ns)) => Some(church_list_nat(ns)),
            _ => None,
        }
    }

    pub fn decode(&self, t: &Term, fuel: u64) -> Result<DataValue, DecodeError> {
        Ok(match self.kind {
            DataKind::Bool => DataValue::Bool(decode_bool_with_fuel(t, fuel)?),
            DataKind::Nat => DataValue::Nat(decode_nat_with_fuel(t, fuel)?),
            DataKind::ListNat => DataValue::ListNat(decode_list_nat_with_fuel(t, fuel)?),
        })
    }
}

pub fn data_types() -> Vec<DataTypeDef> {
    vec![
        DataTypeDef {
            name: "Bool",
            kind: DataKind::Bool,
            ty: bool_type(),
        },
        DataTypeDef {
            name: "Ent",
            kind: DataKind::Nat,
            ty: nat_type(),
        },
        DataTypeDef {
            name: "LEnt",
            kind: DataKind::ListNat,
            ty: list_nat_type(),
        },
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error("normalization ran out of fuel")]
    Diverged,
    #[error("not a Church numeral")]
    NotANumeral,
    #[error("not a Church boolean")]
    NotABoolean,
    #[error("not a Church list of numerals")]
    NotAList,
}

fn bound(k: usize) -> Term {
    Term::Bound(k)
}

fn binder(name: &str, body: Term) -> Term {
    Term::Lam(Hint(Name::new(name)), Arc::new(body))
}

/// `λf.λx.(f)ⁿx`
pub fn church_nat(n: u64) -> Term {
    let mut body = bound(0);
    for _ in 0..n {
        body = Term::app(bound(1), body);
    }
    binder("f", binder("x", body))
}

/// `λx.λy.x` for true, `λx.λy.y` for false.
pub fn church_bool(b: bool) -> Term {
    binder("x", binder("y", bound(if b { 1 } else { 0 })))
}

/// `λc.λe.(c)⌜n₁⌝((c)⌜n₂⌝(…((c)⌜nₖ⌝)e…))`
pub fn church_list_nat(ns: &[u64]) -> Term {
    let mut body = bound(0);
    for n in ns.iter().rev() {
        body = Term::apps(bound(1), [church_nat(*n), body]);
    }
    binder("c", binder("e", body))
}

fn normal_form(t: &Term, fuel: u64) -> Result<Term, DecodeError> {
    normalize(t, fuel).done().ok_or(DecodeError::Diverged)
}

fn numeral_value(t: &Term) -> Option<u64> {
    let Term::Lam(_, outer) = t else { return None };
    let Term::Lam(_, inner) = &**outer else {
        return None;
    };
    let mut n = 0;
    let mut cur: &Term = inner;
    loop {
        match cur {
            Term::Bound(0) => return Some(n),
            Term::App(f, a) if **f == Term::Bound(1) => {
                n += 1;
                cur = a;
            }
            _ => return None,
        }
    }
}

pub fn decode_nat(t: &Term) -> Result<u64, DecodeError> {
    decode_nat_with_fuel(t, DEFAULT_FUEL)
}

pub fn decode_nat_with_fuel(t: &Term, fuel: u64) -> Result<u64, DecodeError> {
    numeral_value(&normal_form(t, fuel)?).ok_or(DecodeError::NotANumeral)
}

pub fn decode_bool(t: &Term) -> Result<bool, DecodeError> {
    decode_bool_with_fuel(t, DEFAULT_FUEL)
}

pub fn decode_bool_with_fuel(t: &Term, fuel: u64) -> Result<bool, DecodeError> {
    let nf = normal_form(t, fuel)?;
    if nf == church_bool(true) {
        Ok(true)
    } else if nf == church_bool(false) {
        Ok(false)
    } else {
        Err(DecodeError::NotABoolean)
    }
}

pub fn decode_list_nat(t: &Term) -> Result<Vec<u64>, DecodeError> {
    decode_list_nat_with_fuel(t, DEFAULT_FUEL)
}

pub fn decode_list_nat_with_fuel(t: &Term, fuel: u64) -> Result<Vec<u64>, DecodeError> {
    let nf = normal_form(t, fuel)?;
    let Term::Lam(_, outer) = &nf else {
        return Err(DecodeError::NotAList);
    };
    let Term::Lam(_, inner) = &**outer else {
        return Err(DecodeError::NotAList);
    };
    let mut out = Vec::new();
    let mut cur: &Term = inner;
    loop {
        match cur {
            Term::Bound(0) => return Ok(out),
            Term::App(f, rest) => {
                let Term::App(c, head) = &**f else {
                    return Err(DecodeError::NotAList);
                };
                if **c != Term::Bound(1) {
                    return Err(DecodeError::NotAList);
                }
                // the numeral sits under two binders; it must be closed
                if !head.is_locally_closed() {
                    return Err(DecodeError::NotAList);
                }
                out.push(numeral_value(head).ok_or(DecodeError::NotAList)?);
                cur = rest;
            }
            _ => return Err(DecodeError::NotAList),
        }
    }
}

const HINTS: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

/// Generates β-normal terms by size, with memoized buckets keyed by
/// `(size, free indices, neutral only)`.
#[derive(Default)]
struct NormalTermTable {
    memo: HashMap<(usize, usize, bool), Arc<Vec<Term>>>,
}

impl NormalTermTable {
    fn normal(&mut self, size: usize, depth: usize) -> Arc<Vec<Term>> {
        self.get(size, depth, false)
    }

    fn neutral(&mut self, size: usize, depth: usize) -> Arc<Vec<Term>> {
        self.get(size, depth, true)
    }

    fn get(&mut self, size: usize, depth: usize, neutral_only: bool) -> Arc<Vec<Term>> {
        if let Some(hit) = self.memo.get(&(size, depth, neutral_only)) {
            return hit.clone();
        }
        let mut out = Vec::new();
        if size == 1 {
            out.extend((0..depth).map(Term::Bound));
        } else if size >= 3 {
            for fun_size in 1..=size - 2 {
                let funs = self.neutral(fun_size, depth);
                let args = self.normal(size - 1 - fun_size, depth);
                for f in funs.iter() {
                    for a in args.iter() {
                        out.push(Term::app(f.clone(), a.clone()));
                    }
                }
            }
        }
        if !neutral_only && size >= 2 {
            let hint = HINTS[depth % HINTS.len()];
            for body in self.normal(size - 1, depth + 1).iter() {
                out.push(binder(hint, body.clone()));
            }
        }
        let out = Arc::new(out);
        self.memo.insert((size, depth, neutral_only), out.clone());
        out
    }
}

/// Closed β-normal terms of size at most `max_size`, by increasing size and
/// in structural order within a size. Restart by constructing a new one.
pub struct ClosedNormalTerms {
    max_size: usize,
    next_size: usize,
    bucket: std::vec::IntoIter<Term>,
    table: NormalTermTable,
}

impl Iterator for ClosedNormalTerms {
    type Item = Term;

    fn next(&mut self) -> Option<Term> {
        loop {
            if let Some(t) = self.bucket.next() {
                return Some(t);
            }
            if self.next_size > self.max_size {
                return None;
            }
            let mut terms = (*self.table.normal(self.next_size, 0)).clone();
            terms.sort();
            self.bucket = terms.into_iter();
            self.next_size += 1;
        }
    }
}

pub fn enumerate_closed_normal(max_size: usize) -> ClosedNormalTerms {
    ClosedNormalTerms {
        max_size,
        next_size: 1,
        bucket: Vec::new().into_iter(),
        table: NormalTermTable::default(),
    }
}
