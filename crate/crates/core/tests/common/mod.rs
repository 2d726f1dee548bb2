//! Brute-force F0 derivability, independent of the syntax-directed search.
//!
//! Every rule is tried at every node in any order, up to a depth bound.
//! The types it guesses (→-elimination domains and ∀-elimination premises)
//! range over the subformulas of the root judgement with their free
//! variables renamed into the local pool.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use fplus::syntax::{Context, Name, Term, Type};

pub const ORACLE_DEPTH: u32 = 10;

#[derive(Default, Clone, Copy)]
struct Known {
    proved_at: Option<u32>,
    refuted_upto: u32,
}

pub struct Oracle {
    shapes: Vec<Type>,
    memo: HashMap<(Context, Term, Type), Known>,
    universes: HashMap<Vec<Name>, Arc<Vec<Type>>>,
}

fn placeholder(i: usize) -> Name {
    Name::new(&format!("#{i}"))
}

fn subformulas(ty: &Type, binders: usize, out: &mut BTreeSet<Type>) {
    out.insert(ty.clone());
    match ty {
        Type::Arrow(a, b) => {
            subformulas(a, binders, out);
            subformulas(b, binders, out);
        }
        Type::Forall(_, body) => subformulas(&body.open(&placeholder(binders)), binders + 1, out),
        Type::Var(_) | Type::Bound(_) => {}
    }
}

fn rename_all(ty: &Type, pool: &[Name], out: &mut BTreeSet<Type>) {
    let fv: Vec<Name> = ty.free_vars().into_iter().collect();
    let mut base = ty.clone();
    let temps: Vec<Name> = (0..fv.len())
        .map(|i| Name::new(&format!("#r{i}")))
        .collect();
    for (x, tmp) in fv.iter().zip(&temps) {
        base = base.subst(x, &Type::var(tmp.clone()));
    }
    let mut choice = vec![0usize; fv.len()];
    loop {
        let mut t = base.clone();
        for (tmp, &c) in temps.iter().zip(&choice) {
            t = t.subst(tmp, &Type::var(pool[c].clone()));
        }
        out.insert(t);
        let mut i = 0;
        loop {
            if i == choice.len() {
                return;
            }
            choice[i] += 1;
            if choice[i] < pool.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn local_pool(ctx: &Context, ty: &Type) -> Vec<Name> {
    let mut pool: Vec<Name> = ctx.type_vars_ordered();
    for x in ty.free_vars_ordered() {
        if !pool.contains(&x) {
            pool.push(x);
        }
    }
    let mut taken: BTreeSet<Name> = pool.iter().cloned().collect();
    for _ in 0..2 {
        let f = Name::new("P").fresh_in(&taken);
        taken.insert(f.clone());
        pool.push(f);
    }
    pool
}

impl Oracle {
    pub fn new(ctx: &Context, goal: &Type) -> Oracle {
        let mut shapes = BTreeSet::new();
        subformulas(goal, 0, &mut shapes);
        for (_, ty) in ctx.iter() {
            subformulas(ty, 0, &mut shapes);
        }
        Oracle {
            shapes: shapes.into_iter().collect(),
            memo: HashMap::new(),
            universes: HashMap::new(),
        }
    }

    fn universe(&mut self, pool: Vec<Name>) -> Arc<Vec<Type>> {
        if let Some(u) = self.universes.get(&pool) {
            return u.clone();
        }
        let mut all = BTreeSet::new();
        for s in &self.shapes {
            rename_all(s, &pool, &mut all);
        }
        let u = Arc::new(all.into_iter().collect::<Vec<_>>());
        self.universes.insert(pool, u.clone());
        u
    }

    pub fn derivable(&mut self, ctx: &Context, t: &Term, ty: &Type, depth: u32) -> bool {
        if depth == 0 {
            return false;
        }
        let key = (ctx.clone(), t.clone(), ty.clone());
        let known = self.memo.get(&key).copied().unwrap_or_default();
        if known.proved_at.is_some_and(|d| d <= depth) {
            return true;
        }
        if depth <= known.refuted_upto {
            return false;
        }
        let found = self.try_rules(ctx, t, ty, depth);
        let entry = self.memo.entry(key).or_default();
        if found {
            entry.proved_at = Some(entry.proved_at.map_or(depth, |d| d.min(depth)));
        } else {
            entry.refuted_upto = entry.refuted_upto.max(depth);
        }
        found
    }

    fn try_rules(&mut self, ctx: &Context, t: &Term, ty: &Type, depth: u32) -> bool {
        let d = depth - 1;
        // ax
        if let Term::Free(x) = t {
            if ctx.lookup(x) == Some(ty) {
                return true;
            }
        }
        // arr_i
        if let (Term::Lam(h, body), Type::Arrow(a, b)) = (t, ty) {
            let avoid: BTreeSet<Name> = ctx.domain().union(&t.free_vars()).cloned().collect();
            let x = h.0.fresh_in(&avoid);
            let inner = ctx.extend(x.clone(), (**a).clone()).expect("fresh binder");
            if self.derivable(&inner, &body.open(&x), b, d) {
                return true;
            }
        }
        // all_i
        if let Type::Forall(h, body) = ty {
            let mut avoid = ctx.type_vars();
            avoid.extend(ty.free_vars());
            let x = h.0.fresh_in(&avoid);
            if self.derivable(ctx, t, &body.open(&x), d) {
                return true;
            }
        }
        let pool = local_pool(ctx, ty);
        let universe = self.universe(pool.clone());
        // arr_e
        if let Term::App(u, v) = t {
            for dom in universe.iter() {
                let fun_ty = Type::arrow(dom.clone(), ty.clone());
                if self.derivable(ctx, u, &fun_ty, d) && self.derivable(ctx, v, dom, d) {
                    return true;
                }
            }
        }
        // all_e
        for premise in universe.iter() {
            let Type::Forall(_, body) = premise else {
                continue;
            };
            let fits = pool
                .iter()
                .any(|y| body.instantiate(&Type::var(y.clone())) == *ty);
            if fits && self.derivable(ctx, t, premise, d) {
                return true;
            }
        }
        false
    }
}

/// F0 derivability of `ctx ⊢ t : ty` with derivations of depth at most `depth`.
pub fn f0_derivable(ctx: &Context, t: &Term, ty: &Type, depth: u32) -> bool {
    Oracle::new(ctx, ty).derivable(ctx, t, ty, depth)
}
