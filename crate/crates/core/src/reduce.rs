//! Weak-head reduction, leftmost-outermost normalization and bounded
//! β-equivalence. Step counts are β-contractions only.

use std::fmt;
use std::sync::Arc;

use crate::syntax::Term;

pub const DEFAULT_FUEL: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReduceOutcome {
    Done { term: Term, steps: u64 },
    FuelExhausted { partial: Term, steps: u64 },
}

impl ReduceOutcome {
    pub fn steps(&self) -> u64 {
        match self {
            ReduceOutcome::Done { steps, .. } | ReduceOutcome::FuelExhausted { steps, .. } => {
                *steps
            }
        }
    }

    pub fn term(&self) -> &Term {
        match self {
            ReduceOutcome::Done { term, .. } => term,
            ReduceOutcome::FuelExhausted { partial, .. } => partial,
        }
    }

    pub fn done(self) -> Option<Term> {
        match self {
            ReduceOutcome::Done { term, .. } => Some(term),
            ReduceOutcome::FuelExhausted { .. } => None,
        }
    }
}

/// One step of a path from the root to a redex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    /// function side of an application
    L,
    /// argument side of an application
    R,
    /// body of an abstraction
    B,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RedexPath(pub Vec<Dir>);

impl fmt::Display for RedexPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for d in &self.0 {
            f.write_str(match d {
                Dir::L => "L",
                Dir::R => "R",
                Dir::B => "B",
            })?;
        }
        Ok(())
    }
}

fn contract(fun: &Term, arg: &Term) -> Option<Term> {
    match fun {
        Term::Lam(_, body) => Some(body.instantiate(arg)),
        _ => None,
    }
}

/// Contracts the weak-head redex of `(λx.u)v v₁…vₘ`; `None` on `(x)v₁…vₘ`
/// and on `λx.v`.
pub fn whnf_step(t: &Term) -> Option<Term> {
    match t {
        Term::App(f, a) => match contract(f, a) {
            Some(r) => Some(r),
            None => whnf_step(f).map(|f2| Term::App(Arc::new(f2), a.clone())),
        },
        _ => None,
    }
}

pub fn whnf(t: &Term, fuel: u64) -> ReduceOutcome {
    let mut cur = t.clone();
    let mut steps = 0;
    loop {
        match whnf_step(&cur) {
            None => return ReduceOutcome::Done { term: cur, steps },
            Some(_) if steps >= fuel => {
                return ReduceOutcome::FuelExhausted {
                    partial: cur,
                    steps,
                }
            }
            Some(next) => {
                cur = next;
                steps += 1;
            }
        }
    }
}

/// Single leftmost-outermost β-step.
pub fn beta_step(t: &Term) -> Option<Term> {
    beta_step_traced(t).map(|(t, _)| t)
}

/// Leftmost-outermost β-step together with the position of the redex.
pub fn beta_step_traced(t: &Term) -> Option<(Term, RedexPath)> {
    let mut path = Vec::new();
    let r = step_at(t, &mut path)?;
    Some((r, RedexPath(path)))
}

fn step_at(t: &Term, path: &mut Vec<Dir>) -> Option<Term> {
    match t {
        Term::Free(_) | Term::Bound(_) => None,
        Term::Lam(h, b) => {
            path.push(Dir::B);
            match step_at(b, path) {
                Some(b2) => Some(Term::Lam(h.clone(), Arc::new(b2))),
                None => {
                    path.pop();
                    None
                }
            }
        }
        Term::App(f, a) => {
            if let Some(r) = contract(f, a) {
                return Some(r);
            }
            path.push(Dir::L);
            if let Some(f2) = step_at(f, path) {
                return Some(Term::App(Arc::new(f2), a.clone()));
            }
            path.pop();
            path.push(Dir::R);
            if let Some(a2) = step_at(a, path) {
                return Some(Term::App(f.clone(), Arc::new(a2)));
            }
            path.pop();
            None
        }
    }
}

pub fn is_normal(t: &Term) -> bool {
    match t {
        Term::Free(_) | Term::Bound(_) => true,
        Term::Lam(_, b) => is_normal(b),
        Term::App(f, a) => !f.is_lam() && is_normal(f) && is_normal(a),
    }
}

/// Every term reachable in exactly one β-step, contracting any redex.
pub fn reducts(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    match t {
        Term::Free(_) | Term::Bound(_) => {}
        Term::Lam(h, b) => {
            for b2 in reducts(b) {
                out.push(Term::Lam(h.clone(), Arc::new(b2)));
            }
        }
        Term::App(f, a) => {
            if let Some(r) = contract(f, a) {
                out.push(r);
            }
            for f2 in reducts(f) {
                out.push(Term::App(Arc::new(f2), a.clone()));
            }
            for a2 in reducts(a) {
                out.push(Term::App(f.clone(), Arc::new(a2)));
            }
        }
    }
    out
}

/// Leftmost-outermost normalization. Contracts exactly the redexes that
/// repeated `beta_step` would, in the same order, so step counts agree.
pub fn normalize(t: &Term, fuel: u64) -> ReduceOutcome {
    let mut steps = 0;
    match normal_form(t, fuel, &mut steps) {
        Ok(term) => ReduceOutcome::Done { term, steps },
        Err(partial) => ReduceOutcome::FuelExhausted { partial, steps },
    }
}

fn normal_form(t: &Term, fuel: u64, steps: &mut u64) -> Result<Term, Term> {
    let mut cur = t.clone();
    while let Some(next) = whnf_step(&cur) {
        if *steps >= fuel {
            return Err(cur);
        }
        *steps += 1;
        cur = next;
    }
    match &cur {
        Term::Lam(h, b) => match normal_form(b, fuel, steps) {
            Ok(b2) => Ok(Term::Lam(h.clone(), Arc::new(b2))),
            Err(p) => Err(Term::Lam(h.clone(), Arc::new(p))),
        },
        _ => {
            let (head, args) = cur.spine();
            let mut done = Vec::with_capacity(args.len());
            for (i, a) in args.iter().enumerate() {
                match normal_form(a, fuel, steps) {
                    Ok(a2) => done.push(a2),
                    Err(p) => {
                        done.push(p);
                        done.extend(args[i + 1..].iter().map(|a| (*a).clone()));
                        return Err(Term::apps(head.clone(), done));
                    }
                }
            }
            Ok(Term::apps(head.clone(), done))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaEq {
    Yes,
    No,
    Unknown,
}

/// β-equivalence decided through normal forms; `Unknown` when either side
/// exhausts its fuel.
pub fn beta_eq(t: &Term, u: &Term, fuel: u64) -> BetaEq {
    match (normalize(t, fuel).done(), normalize(u, fuel).done()) {
        (Some(a), Some(b)) if a == b => BetaEq::Yes,
        (Some(_), Some(_)) => BetaEq::No,
        _ => BetaEq::Unknown,
    }
}
