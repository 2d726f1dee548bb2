use std::collections::BTreeSet;
use std::sync::Arc;

use super::name::{Hint, Name};

/// A System F type. Quantified variables are de Bruijn indices, free type
/// variables are named; derived `Eq` is α-equivalence.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Type {
    Var(Name),
    Bound(usize),
    Arrow(Arc<Type>, Arc<Type>),
    Forall(Hint, Arc<Type>),
}

impl Type {
    pub fn var(name: impl Into<Name>) -> Type {
        Type::Var(name.into())
    }

    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::Arrow(Arc::new(dom), Arc::new(cod))
    }

    /// `∀X.body`, binding the free occurrences of `X` in `body`.
    pub fn forall(x: impl Into<Name>, body: Type) -> Type {
        let x = x.into();
        let body = body.abstract_free(&x);
        Type::Forall(Hint(x), Arc::new(body))
    }

    pub fn size(&self) -> usize {
        match self {
            Type::Var(_) | Type::Bound(_) => 1,
            Type::Arrow(a, b) => 1 + a.size() + b.size(),
            Type::Forall(_, b) => 1 + b.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        self.free_vars_ordered().into_iter().collect()
    }

    /// Free type variables in order of first occurrence, left to right.
    pub fn free_vars_ordered(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut Vec<Name>) {
        match self {
            Type::Var(x) => {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
            Type::Bound(_) => {}
            Type::Arrow(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            Type::Forall(_, b) => b.collect_free(out),
        }
    }

    pub fn has_free(&self, x: &Name) -> bool {
        match self {
            Type::Var(y) => y == x,
            Type::Bound(_) => false,
            Type::Arrow(a, b) => a.has_free(x) || b.has_free(x),
            Type::Forall(_, b) => b.has_free(x),
        }
    }

    pub fn is_locally_closed(&self) -> bool {
        fn go(t: &Type, depth: usize) -> bool {
            match t {
                Type::Var(_) => true,
                Type::Bound(k) => *k < depth,
                Type::Arrow(a, b) => go(a, depth) && go(b, depth),
                Type::Forall(_, b) => go(b, depth + 1),
            }
        }
        go(self, 0)
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Type::Var(_) | Type::Bound(_) => true,
            Type::Arrow(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            Type::Forall(..) => false,
        }
    }

    pub(crate) fn shift(&self, delta: isize, cutoff: usize) -> Type {
        if delta == 0 {
            return self.clone();
        }
        match self {
            Type::Var(_) => self.clone(),
            Type::Bound(k) if *k >= cutoff => Type::Bound((*k as isize + delta) as usize),
            Type::Bound(_) => self.clone(),
            Type::Arrow(a, b) => Type::Arrow(
                Arc::new(a.shift(delta, cutoff)),
                Arc::new(b.shift(delta, cutoff)),
            ),
            Type::Forall(h, b) => Type::Forall(h.clone(), Arc::new(b.shift(delta, cutoff + 1))),
        }
    }

    /// Quantifier body with index 0 replaced by `ty`.
    pub fn instantiate(&self, ty: &Type) -> Type {
        fn go(t: &Type, ty: &Type, depth: usize) -> Type {
            match t {
                Type::Var(_) => t.clone(),
                Type::Bound(k) if *k == depth => ty.shift(depth as isize, 0),
                Type::Bound(k) if *k > depth => Type::Bound(k - 1),
                Type::Bound(_) => t.clone(),
                Type::Arrow(a, b) => {
                    Type::Arrow(Arc::new(go(a, ty, depth)), Arc::new(go(b, ty, depth)))
                }
                Type::Forall(h, b) => Type::Forall(h.clone(), Arc::new(go(b, ty, depth + 1))),
            }
        }
        go(self, ty, 0)
    }

    pub fn open(&self, x: &Name) -> Type {
        self.instantiate(&Type::Var(x.clone()))
    }

    pub fn abstract_free(&self, x: &Name) -> Type {
        fn go(t: &Type, x: &Name, depth: usize) -> Type {
            match t {
                Type::Var(y) if y == x => Type::Bound(depth),
                Type::Var(_) => t.clone(),
                Type::Bound(k) if *k >= depth => Type::Bound(k + 1),
                Type::Bound(_) => t.clone(),
                Type::Arrow(a, b) => {
                    Type::Arrow(Arc::new(go(a, x, depth)), Arc::new(go(b, x, depth)))
                }
                Type::Forall(h, b) => Type::Forall(h.clone(), Arc::new(go(b, x, depth + 1))),
            }
        }
        go(self, x, 0)
    }

    /// Capture-avoiding `self[c/x]`.
    pub fn subst(&self, x: &Name, c: &Type) -> Type {
        fn go(t: &Type, x: &Name, c: &Type, depth: usize) -> Type {
            match t {
                Type::Var(y) if y == x => c.shift(depth as isize, 0),
                Type::Var(_) | Type::Bound(_) => t.clone(),
                Type::Arrow(a, b) => {
                    Type::Arrow(Arc::new(go(a, x, c, depth)), Arc::new(go(b, x, c, depth)))
                }
                Type::Forall(h, b) => Type::Forall(h.clone(), Arc::new(go(b, x, c, depth + 1))),
            }
        }
        go(self, x, c, 0)
    }

    pub fn as_arrow(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Arrow(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_forall(&self) -> Option<(&Name, &Type)> {
        match self {
            Type::Forall(h, b) => Some((&h.0, b)),
            _ => None,
        }
    }
}
