use std::fmt;

use super::derivation::{Derivation, Rule, SystemId};
use crate::syntax::{Term, Type};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InvalidReason {
    WrongArity,
    IllFormed,
    NotDeclared,
    SubjectMismatch,
    TypeMismatch,
    ContextMismatch,
    BinderNotFresh,
    NotAnArrow,
    NotQuantified,
    MissingInstantiation,
    MissingGeneralized,
    UnexpectedAnnotation,
    VariableInContext,
    NonVariableInstantiation,
}

impl InvalidReason {
    pub fn code(self) -> &'static str {
        match self {
            InvalidReason::WrongArity => "wrong_arity",
            InvalidReason::IllFormed => "ill_formed",
            InvalidReason::NotDeclared => "not_declared",
            InvalidReason::SubjectMismatch => "subject_mismatch",
            InvalidReason::TypeMismatch => "type_mismatch",
            InvalidReason::ContextMismatch => "context_mismatch",
            InvalidReason::BinderNotFresh => "binder_not_fresh",
            InvalidReason::NotAnArrow => "not_an_arrow",
            InvalidReason::NotQuantified => "not_quantified",
            InvalidReason::MissingInstantiation => "missing_instantiation",
            InvalidReason::MissingGeneralized => "missing_generalized",
            InvalidReason::UnexpectedAnnotation => "unexpected_annotation",
            InvalidReason::VariableInContext => "variable_in_context",
            InvalidReason::NonVariableInstantiation => "non_variable_instantiation",
        }
    }
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// First offending node, as premise indices from the root.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid derivation at node {path:?}: {reason}")]
pub struct Invalid {
    pub path: Vec<usize>,
    pub reason: InvalidReason,
}

/// Checks every node of `d` against its rule, premises before conclusions
/// are compared, depth-first from the root.
pub fn validate_derivation(d: &Derivation, sys: SystemId) -> Result<(), Invalid> {
    let mut path = Vec::new();
    check(d, sys, &mut path)
}

fn check(d: &Derivation, sys: SystemId, path: &mut Vec<usize>) -> Result<(), Invalid> {
    let fail = |reason| {
        Err(Invalid {
            path: path.clone(),
            reason,
        })
    };
    if d.premises.len() != d.rule.arity() {
        return fail(InvalidReason::WrongArity);
    }
    if !d.subject.is_locally_closed()
        || !d.ty.is_locally_closed()
        || d.context.iter().any(|(_, t)| !t.is_locally_closed())
    {
        return fail(InvalidReason::IllFormed);
    }
    let annotations_ok = match d.rule {
        Rule::AllE => d.generalized.is_none(),
        Rule::AllI => d.instantiation.is_none(),
        _ => d.generalized.is_none() && d.instantiation.is_none(),
    };
    if !annotations_ok {
        return fail(InvalidReason::UnexpectedAnnotation);
    }
    if let Err(reason) = check_node(d, sys) {
        return fail(reason);
    }
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        check(p, sys, path)?;
        path.pop();
    }
    Ok(())
}

fn same_judgment_frame(d: &Derivation, p: &Derivation) -> Result<(), InvalidReason> {
    if !p.context.same_bindings(&d.context) {
        return Err(InvalidReason::ContextMismatch);
    }
    if p.subject != d.subject {
        return Err(InvalidReason::SubjectMismatch);
    }
    Ok(())
}

fn check_node(d: &Derivation, sys: SystemId) -> Result<(), InvalidReason> {
    match d.rule {
        Rule::Ax => {
            let Term::Free(x) = &d.subject else {
                return Err(InvalidReason::SubjectMismatch);
            };
            match d.context.lookup(x) {
                None => Err(InvalidReason::NotDeclared),
                Some(t) if *t == d.ty => Ok(()),
                Some(_) => Err(InvalidReason::TypeMismatch),
            }
        }
        Rule::ArrI => {
            let p = &d.premises[0];
            let Term::Lam(_, body) = &d.subject else {
                return Err(InvalidReason::SubjectMismatch);
            };
            let Some((dom, cod)) = d.ty.as_arrow() else {
                return Err(InvalidReason::NotAnArrow);
            };
            if p.context.len() != d.context.len() + 1 || !d.context.is_subset_of(&p.context) {
                return Err(InvalidReason::ContextMismatch);
            }
            let Some((x, declared)) = p.context.iter().find(|(x, _)| !d.context.contains(x)) else {
                return Err(InvalidReason::ContextMismatch);
            };
            if d.subject.has_free(x) {
                return Err(InvalidReason::BinderNotFresh);
            }
            if declared != dom {
                return Err(InvalidReason::TypeMismatch);
            }
            if p.subject != body.open(x) {
                return Err(InvalidReason::SubjectMismatch);
            }
            if p.ty != *cod {
                return Err(InvalidReason::TypeMismatch);
            }
            Ok(())
        }
        Rule::ArrE => {
            let (fun, arg) = (&d.premises[0], &d.premises[1]);
            let Term::App(u, v) = &d.subject else {
                return Err(InvalidReason::SubjectMismatch);
            };
            for p in [fun, arg] {
                if !p.context.same_bindings(&d.context) {
                    return Err(InvalidReason::ContextMismatch);
                }
            }
            if fun.subject != **u || arg.subject != **v {
                return Err(InvalidReason::SubjectMismatch);
            }
            let Some((dom, cod)) = fun.ty.as_arrow() else {
                return Err(InvalidReason::NotAnArrow);
            };
            if *cod != d.ty || *dom != arg.ty {
                return Err(InvalidReason::TypeMismatch);
            }
            Ok(())
        }
        Rule::AllI => {
            let p = &d.premises[0];
            let Some(x) = &d.generalized else {
                return Err(InvalidReason::MissingGeneralized);
            };
            same_judgment_frame(d, p)?;
            if d.context.mentions_type_var(x) {
                return Err(InvalidReason::VariableInContext);
            }
            if d.ty != Type::forall(x.clone(), p.ty.clone()) {
                return Err(InvalidReason::TypeMismatch);
            }
            Ok(())
        }
        Rule::AllE => {
            let p = &d.premises[0];
            let Some(inst) = &d.instantiation else {
                return Err(InvalidReason::MissingInstantiation);
            };
            if !inst.is_locally_closed() {
                return Err(InvalidReason::IllFormed);
            }
            if sys == SystemId::F0 && !matches!(inst, Type::Var(_)) {
                return Err(InvalidReason::NonVariableInstantiation);
            }
            same_judgment_frame(d, p)?;
            let Some((_, body)) = p.ty.as_forall() else {
                return Err(InvalidReason::NotQuantified);
            };
            if d.ty != body.instantiate(inst) {
                return Err(InvalidReason::TypeMismatch);
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_term, parse_type, Context, Name};

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    fn bool_true() -> Derivation {
        // x:X, y:X ⊢ x : X
        let ctx0 = Context::new();
        let ctx1 = ctx0.extend("x".into(), ty("X")).unwrap();
        let ctx2 = ctx1.extend("y".into(), ty("X")).unwrap();
        let ax = Derivation::ax(ctx2, "x".into(), ty("X"));
        let inner = Derivation::arr_i(ctx1, &"y".into(), ty("X"), ax);
        let outer = Derivation::arr_i(ctx0, &"x".into(), ty("X"), inner);
        Derivation::all_i("X".into(), outer)
    }

    #[test]
    fn bool_true_validates_in_both_systems() {
        let d = bool_true();
        assert_eq!(d.subject, parse_term(r"\x.\y.x").unwrap());
        assert_eq!(d.ty, ty("∀X.X→X→X"));
        assert_eq!(validate_derivation(&d, SystemId::F), Ok(()));
        assert_eq!(validate_derivation(&d, SystemId::F0), Ok(()));
    }

    fn i_prime_at_a3() -> Derivation {
        // x : X→∀Y.X, y : X ⊢ (x)y : ∀Y.X, then AllE to X
        let a = ty("X→∀Y.X");
        let ctx0 = Context::new();
        let ctx1 = ctx0.extend("x".into(), a.clone()).unwrap();
        let ctx2 = ctx1.extend("y".into(), ty("X")).unwrap();
        let fx = Derivation::ax(ctx2.clone(), "x".into(), a.clone());
        let y = Derivation::ax(ctx2, "y".into(), ty("X"));
        let app = Derivation::arr_e(fx, y);
        let elim = Derivation::all_e(app, ty("X"));
        let inner = Derivation::arr_i(ctx1, &"y".into(), ty("X"), elim);
        let outer = Derivation::arr_i(ctx0, &"x".into(), a, inner);
        Derivation::all_i("X".into(), outer)
    }

    #[test]
    fn i_prime_validates_at_a3() {
        let d = i_prime_at_a3();
        assert_eq!(d.ty, ty("∀X.(X→∀Y.X)→(X→X)"));
        assert_eq!(d.subject, parse_term(r"\x.\y.(x)y").unwrap());
        assert_eq!(validate_derivation(&d, SystemId::F), Ok(()));
    }

    #[test]
    fn non_variable_instantiation_rejected_in_f0() {
        // ⊢ λz.z : ∀X.X→X, then AllE with X→X
        let ctx0 = Context::new();
        let ctx1 = ctx0.extend("z".into(), ty("X")).unwrap();
        let id = Derivation::arr_i(
            ctx0,
            &"z".into(),
            ty("X"),
            Derivation::ax(ctx1, "z".into(), ty("X")),
        );
        let poly = Derivation::all_i("X".into(), id);
        let d = Derivation::all_e(poly, ty("X→X"));
        assert_eq!(d.ty, ty("(X→X)→X→X"));
        assert_eq!(validate_derivation(&d, SystemId::F), Ok(()));
        assert_eq!(
            validate_derivation(&d, SystemId::F0),
            Err(Invalid {
                path: vec![],
                reason: InvalidReason::NonVariableInstantiation
            })
        );
    }

    #[test]
    fn generalizing_a_context_variable_is_rejected() {
        let ctx = Context::new().extend("y".into(), ty("X")).unwrap();
        let ax = Derivation::ax(ctx, "y".into(), ty("X"));
        let d = Derivation::all_i(Name::new("X"), ax);
        assert_eq!(
            validate_derivation(&d, SystemId::F).unwrap_err().reason,
            InvalidReason::VariableInContext
        );
    }

    #[test]
    fn error_path_points_at_nested_node() {
        let mut d = bool_true();
        // corrupt the axiom two binders down
        let leaf = d.at_mut(&[0, 0, 0]).unwrap();
        leaf.ty = ty("Y");
        let err = validate_derivation(&d, SystemId::F).unwrap_err();
        // the ArrI above notices the codomain mismatch before descending
        assert_eq!(err.path, vec![0, 0]);
        assert_eq!(err.reason, InvalidReason::TypeMismatch);
    }

    #[test]
    fn undeclared_axiom() {
        let d = Derivation::ax(Context::new(), "x".into(), ty("X"));
        assert_eq!(
            validate_derivation(&d, SystemId::F).unwrap_err().reason,
            InvalidReason::NotDeclared
        );
    }

    #[test]
    fn wrong_arity() {
        let mut d = bool_true();
        d.premises.clear();
        assert_eq!(
            validate_derivation(&d, SystemId::F).unwrap_err().reason,
            InvalidReason::WrongArity
        );
    }
}
