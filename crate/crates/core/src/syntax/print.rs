//! Printing in the application style `(t)u₁…uₙ`.
//!
//! A parenthesised group swallows every atom after it, so only the last
//! argument of a spine may be compound; earlier compound arguments force the
//! prefix into its own group: `((t)λy.y)v`.

use std::collections::BTreeSet;
use std::fmt::{self, Write};

use super::name::Name;
use super::term::Term;
use super::types::Type;

struct Scope {
    env: Vec<Name>,
    taken: BTreeSet<Name>,
}

impl Scope {
    fn new(free: BTreeSet<Name>) -> Scope {
        Scope {
            env: Vec::new(),
            taken: free,
        }
    }

    fn bind(&mut self, hint: &Name) -> Name {
        let name = hint.freshen(|n| self.taken.contains(n) || self.env.contains(n));
        self.env.push(name.clone());
        name
    }

    fn unbind(&mut self) {
        self.env.pop();
    }

    fn lookup(&self, k: usize) -> Option<&Name> {
        self.env.len().checked_sub(k + 1).map(|i| &self.env[i])
    }
}

fn is_atomic(t: &Term) -> bool {
    matches!(t, Term::Free(_) | Term::Bound(_))
}

fn write_term(t: &Term, scope: &mut Scope, out: &mut impl Write) -> fmt::Result {
    match t {
        Term::Free(x) => write!(out, "{x}"),
        Term::Bound(k) => match scope.lookup(*k) {
            Some(x) => write!(out, "{x}"),
            None => write!(out, "#{k}"),
        },
        Term::Lam(h, body) => {
            let x = scope.bind(&h.0);
            write!(out, "λ{x}.")?;
            write_term(body, scope, out)?;
            scope.unbind();
            Ok(())
        }
        Term::App(..) => {
            let (head, args) = t.spine();
            write_spine(head, &args, scope, out)
        }
    }
}

fn write_spine(
    head: &Term,
    args: &[&Term],
    scope: &mut Scope,
    out: &mut impl Write,
) -> fmt::Result {
    let Some((_, init)) = args.split_last() else {
        return write_term(head, scope, out);
    };
    let split = init.iter().rposition(|a| !is_atomic(a));
    let rest = match split {
        Some(j) => {
            out.write_char('(')?;
            write_spine(head, &args[..=j], scope, out)?;
            out.write_char(')')?;
            &args[j + 1..]
        }
        None => {
            out.write_char('(')?;
            write_term(head, scope, out)?;
            out.write_char(')')?;
            args
        }
    };
    for (i, a) in rest.iter().enumerate() {
        if i > 0 {
            out.write_char(' ')?;
        }
        write_term(a, scope, out)?;
    }
    Ok(())
}

fn write_type(t: &Type, scope: &mut Scope, out: &mut impl Write) -> fmt::Result {
    match t {
        Type::Var(x) => write!(out, "{x}"),
        Type::Bound(k) => match scope.lookup(*k) {
            Some(x) => write!(out, "{x}"),
            None => write!(out, "#{k}"),
        },
        Type::Forall(h, body) => {
            let x = scope.bind(&h.0);
            write!(out, "∀{x}.")?;
            write_type(body, scope, out)?;
            scope.unbind();
            Ok(())
        }
        Type::Arrow(dom, cod) => {
            if matches!(**dom, Type::Arrow(..) | Type::Forall(..)) {
                out.write_char('(')?;
                write_type(dom, scope, out)?;
                out.write_char(')')?;
            } else {
                write_type(dom, scope, out)?;
            }
            out.write_char('→')?;
            write_type(cod, scope, out)
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut scope = Scope::new(self.free_vars());
        write_term(self, &mut scope, f)
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut scope = Scope::new(self.free_vars());
        write_type(self, &mut scope, f)
    }
}

#[cfg(test)]
mod tests {
    use crate::syntax::{parse_term, parse_type};

    fn round(s: &str) -> String {
        parse_term(s).unwrap().to_string()
    }

    #[test]
    fn parenthesised_head_applications() {
        assert_eq!(round(r"\f.\x.f (f (f x))"), "λf.λx.(f)(f)(f)x");
        assert_eq!(round("t u v"), "(t)u v");
        assert_eq!(round(r"(\x.x) y"), "(λx.x)y");
        assert_eq!(round(r"(t)(\y.y) v"), "(t)(λy.y)v");
    }

    #[test]
    fn compound_non_final_argument_is_grouped() {
        let t = parse_term(r"((t)\y.y) v").unwrap();
        assert_eq!(t.to_string(), "((t)λy.y)v");
        assert_eq!(parse_term(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn capture_forces_primes() {
        let t = parse_term(r"\y.x").unwrap();
        let r = t.subst(&"x".into(), &parse_term("y").unwrap());
        assert_eq!(r.to_string(), "λy′.y");
    }

    #[test]
    fn types_print_right_nested() {
        let t = parse_type("∀X.(X→X)→(X→X)").unwrap();
        assert_eq!(t.to_string(), "∀X.(X→X)→X→X");
        let a3 = parse_type("∀X.(X→∀Y.X)→(X→X)").unwrap();
        assert_eq!(a3.to_string(), "∀X.(X→∀Y.X)→X→X");
    }

    #[test]
    fn type_capture_forces_primes() {
        let t = parse_type("∀Y.X→Y").unwrap();
        let r = t.subst(&"X".into(), &parse_type("Y").unwrap());
        assert_eq!(r.to_string(), "∀Y′.Y→Y′");
    }
}
