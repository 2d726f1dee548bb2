use std::collections::BTreeSet;
use std::sync::Arc;

use super::name::{Hint, Name};

/// An untyped λ-term in locally nameless form.
///
/// Bound variables are de Bruijn indices and free variables keep their
/// names, so α-equivalent terms are structurally identical and the derived
/// `Eq` is α-equivalence.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Term {
    Free(Name),
    Bound(usize),
    Lam(Hint, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
}

impl Term {
    pub fn var(name: impl Into<Name>) -> Term {
        Term::Free(name.into())
    }

    /// `λx.body`, binding the free occurrences of `x` in `body`.
    pub fn lam(x: impl Into<Name>, body: Term) -> Term {
        let x = x.into();
        let body = body.abstract_free(&x);
        Term::Lam(Hint(x), Arc::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Arc::new(fun), Arc::new(arg))
    }

    /// `(head)a₁…aₙ`, left-nested.
    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    /// Constructor count: variables count 1, binders and applications add 1.
    pub fn size(&self) -> usize {
        match self {
            Term::Free(_) | Term::Bound(_) => 1,
            Term::Lam(_, b) => 1 + b.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<Name>) {
        match self {
            Term::Free(x) => {
                out.insert(x.clone());
            }
            Term::Bound(_) => {}
            Term::Lam(_, b) => b.collect_free(out),
            Term::App(f, a) => {
                f.collect_free(out);
                a.collect_free(out);
            }
        }
    }

    pub fn has_free(&self, x: &Name) -> bool {
        match self {
            Term::Free(y) => y == x,
            Term::Bound(_) => false,
            Term::Lam(_, b) => b.has_free(x),
            Term::App(f, a) => f.has_free(x) || a.has_free(x),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.is_locally_closed() && self.free_vars().is_empty()
    }

    /// No de Bruijn index escapes its binders.
    pub fn is_locally_closed(&self) -> bool {
        fn go(t: &Term, depth: usize) -> bool {
            match t {
                Term::Free(_) => true,
                Term::Bound(k) => *k < depth,
                Term::Lam(_, b) => go(b, depth + 1),
                Term::App(f, a) => go(f, depth) && go(a, depth),
            }
        }
        go(self, 0)
    }

    /// Adds `delta` to every index at or above `cutoff`.
    pub(crate) fn shift(&self, delta: isize, cutoff: usize) -> Term {
        if delta == 0 {
            return self.clone();
        }
        match self {
            Term::Free(_) => self.clone(),
            Term::Bound(k) if *k >= cutoff => Term::Bound((*k as isize + delta) as usize),
            Term::Bound(_) => self.clone(),
            Term::Lam(h, b) => Term::Lam(h.clone(), Arc::new(b.shift(delta, cutoff + 1))),
            Term::App(f, a) => Term::App(
                Arc::new(f.shift(delta, cutoff)),
                Arc::new(a.shift(delta, cutoff)),
            ),
        }
    }

    /// Body of a binder with index 0 replaced by `arg`: the contractum of
    /// `(λ.self) arg`. Works on open bodies too (indices are adjusted).
    pub fn instantiate(&self, arg: &Term) -> Term {
        fn go(t: &Term, arg: &Term, depth: usize) -> Term {
            match t {
                Term::Free(_) => t.clone(),
                Term::Bound(k) if *k == depth => arg.shift(depth as isize, 0),
                Term::Bound(k) if *k > depth => Term::Bound(k - 1),
                Term::Bound(_) => t.clone(),
                Term::Lam(h, b) => Term::Lam(h.clone(), Arc::new(go(b, arg, depth + 1))),
                Term::App(f, a) => {
                    Term::App(Arc::new(go(f, arg, depth)), Arc::new(go(a, arg, depth)))
                }
            }
        }
        go(self, arg, 0)
    }

    /// Opens a binder body with the free variable `x`.
    pub fn open(&self, x: &Name) -> Term {
        self.instantiate(&Term::Free(x.clone()))
    }

    /// Inverse of `open`: turns free `x` into the index of a new outer binder.
    pub fn abstract_free(&self, x: &Name) -> Term {
        fn go(t: &Term, x: &Name, depth: usize) -> Term {
            match t {
                Term::Free(y) if y == x => Term::Bound(depth),
                Term::Free(_) => t.clone(),
                Term::Bound(k) if *k >= depth => Term::Bound(k + 1),
                Term::Bound(_) => t.clone(),
                Term::Lam(h, b) => Term::Lam(h.clone(), Arc::new(go(b, x, depth + 1))),
                Term::App(f, a) => Term::App(Arc::new(go(f, x, depth)), Arc::new(go(a, x, depth))),
            }
        }
        go(self, x, 0)
    }

    /// Capture-avoiding `self[u/x]`.
    pub fn subst(&self, x: &Name, u: &Term) -> Term {
        self.subst_many(&[(x.clone(), u.clone())])
    }

    /// Simultaneous capture-avoiding `self[u₁/x₁,…,uₙ/xₙ]`.
    pub fn subst_many(&self, pairs: &[(Name, Term)]) -> Term {
        fn go(t: &Term, pairs: &[(Name, Term)], depth: usize) -> Term {
            match t {
                Term::Free(y) => match pairs.iter().find(|(x, _)| x == y) {
                    Some((_, u)) => u.shift(depth as isize, 0),
                    None => t.clone(),
                },
                Term::Bound(_) => t.clone(),
                Term::Lam(h, b) => Term::Lam(h.clone(), Arc::new(go(b, pairs, depth + 1))),
                Term::App(f, a) => {
                    Term::App(Arc::new(go(f, pairs, depth)), Arc::new(go(a, pairs, depth)))
                }
            }
        }
        go(self, pairs, 0)
    }

    /// Splits `(h)a₁…aₙ` into its head and arguments.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut head = self;
        while let Term::App(f, a) = head {
            args.push(&**a);
            head = f;
        }
        args.reverse();
        (head, args)
    }

    pub fn is_lam(&self) -> bool {
        matches!(self, Term::Lam(..))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Term {
        Term::var(s)
    }

    #[test]
    fn identity_is_alpha_invariant() {
        assert_eq!(Term::lam("x", v("x")), Term::lam("y", v("y")));
        assert_ne!(
            Term::lam("x", Term::lam("y", v("x"))),
            Term::lam("x", Term::lam("y", v("y")))
        );
    }

    #[test]
    fn free_vars_examples() {
        assert!(Term::lam("x", v("x")).free_vars().is_empty());
        let t = Term::lam("x", Term::app(v("x"), v("y")));
        assert_eq!(t.free_vars(), [Name::new("y")].into_iter().collect());
        let t = Term::app(v("x"), Term::lam("x", v("x")));
        assert_eq!(t.free_vars(), [Name::new("x")].into_iter().collect());
    }

    #[test]
    fn substitution_avoids_capture() {
        // (λy.x)[x := y] must not capture y
        let t = Term::lam("y", v("x"));
        let r = t.subst(&Name::new("x"), &v("y"));
        assert_eq!(r, Term::lam("z", v("y")));
        assert_ne!(r, Term::lam("y", v("y")));
    }

    #[test]
    fn substitution_examples() {
        let id = Term::lam("y", v("y"));
        assert_eq!(v("x").subst(&Name::new("x"), &id), id);
        let xx = Term::app(v("x"), v("x"));
        let idz = Term::lam("z", v("z"));
        assert_eq!(
            xx.subst(&Name::new("x"), &idz),
            Term::app(idz.clone(), idz.clone())
        );
    }

    #[test]
    fn simultaneous_substitution_does_not_chain() {
        let t = Term::app(v("x"), v("y"));
        let r = t.subst_many(&[(Name::new("x"), v("y")), (Name::new("y"), v("x"))]);
        assert_eq!(r, Term::app(v("y"), v("x")));
    }

    #[test]
    fn instantiate_under_binders_shifts_argument() {
        // body of λx.λy.(x)y applied under an outer binder
        let body = Term::Lam(
            Hint(Name::new("y")),
            Arc::new(Term::app(Term::Bound(1), Term::Bound(0))),
        );
        // argument refers to an enclosing binder (index 3)
        let r = body.instantiate(&Term::Bound(3));
        assert_eq!(
            r,
            Term::Lam(
                Hint(Name::new("y")),
                Arc::new(Term::app(Term::Bound(4), Term::Bound(0)))
            )
        );
    }

    #[test]
    fn size_counts_constructors() {
        assert_eq!(Term::lam("x", v("x")).size(), 2);
        assert_eq!(Term::app(v("f"), v("x")).size(), 3);
    }
}
