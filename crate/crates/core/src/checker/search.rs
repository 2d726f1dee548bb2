//! Proof search for F0 typings of β-normal terms.
//!
//! The search is syntax-directed. Quantified goals are peeled first by
//! `AllI` on a fresh variable. Abstractions are then checked against arrows
//! by `ArrI`. A neutral term `(x)v₁…vₘ` starts from the declared type of `x`.
//! Leading quantifiers are eliminated with variables from the instantiation
//! pool wherever an arrow or the final goal is needed, and each argument is
//! checked against the resulting domain.
//!
//! The pool at a neutral node holds the type variables free in the context,
//! then those free in the goal, then one variable fresh for both. Any
//! instantiation outside that set can be renamed to the fresh one without
//! changing the node's judgment.

use std::collections::{BTreeSet, HashMap};

use super::derivation::Derivation;
use crate::reduce::is_normal;
use crate::syntax::{Context, Name, Term, Type};

pub const DEFAULT_BUDGET: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchResult {
    Typable(Derivation),
    NotTypable,
    /// The explored search tree outgrew `budget` nodes.
    Aborted {
        budget: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("search subject is not β-normal")]
    NotNormal,
    #[error("dangling de Bruijn index in search input")]
    IllFormed,
}

/// One step of a chain of `∀` rules between two types of the same subject.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubsumeStep {
    AllE(Name),
    AllI(Name),
}

#[derive(Debug)]
struct Abort;

struct Search {
    budget: u64,
    spent: u64,
    memo: HashMap<(Context, Term, Type), Option<Derivation>>,
}

impl Search {
    fn tick(&mut self) -> Result<(), Abort> {
        self.spent += 1;
        if self.spent > self.budget {
            Err(Abort)
        } else {
            Ok(())
        }
    }

    fn check(&mut self, ctx: &Context, t: &Term, goal: &Type) -> Result<Option<Derivation>, Abort> {
        let key = (ctx.clone(), t.clone(), goal.clone());
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let result = self.check_uncached(ctx, t, goal)?;
        self.memo.insert(key, result.clone());
        Ok(result)
    }

    fn check_uncached(
        &mut self,
        ctx: &Context,
        t: &Term,
        goal: &Type,
    ) -> Result<Option<Derivation>, Abort> {
        self.tick()?;
        if let Type::Forall(hint, body) = goal {
            let mut avoid = ctx.type_vars();
            avoid.extend(goal.free_vars());
            let z = hint.0.fresh_in(&avoid);
            let premise = self.check(ctx, t, &body.open(&z))?;
            return Ok(premise.map(|p| Derivation::all_i(z, p)));
        }
        match t {
            Term::Lam(hint, body) => {
                let Type::Arrow(dom, cod) = goal else {
                    return Ok(None);
                };
                let mut avoid = ctx.domain();
                avoid.extend(t.free_vars());
                let x = hint.0.fresh_in(&avoid);
                let inner = ctx
                    .extend(x.clone(), (**dom).clone())
                    .expect("binder chosen fresh for the context");
                let premise = self.check(&inner, &body.open(&x), cod)?;
                Ok(premise.map(|p| Derivation::arr_i(ctx.clone(), &x, (**dom).clone(), p)))
            }
            _ => {
                let (head, args) = t.spine();
                let Term::Free(x) = head else {
                    return Ok(None);
                };
                let Some(declared) = ctx.lookup(x) else {
                    return Ok(None);
                };
                let pool = instantiation_pool(ctx, goal);
                let start = Derivation::ax(ctx.clone(), x.clone(), declared.clone());
                self.spine(ctx, start, &args, goal, &pool)
            }
        }
    }

    /// `d` types the head applied to the arguments consumed so far.
    fn spine(
        &mut self,
        ctx: &Context,
        d: Derivation,
        args: &[&Term],
        goal: &Type,
        pool: &[Name],
    ) -> Result<Option<Derivation>, Abort> {
        self.tick()?;
        let Some((arg, rest)) = args.split_first() else {
            let mut ticks = 0u64;
            let steps = strip_to(&d.ty, goal, pool, &mut ticks);
            self.spent += ticks;
            if self.spent > self.budget {
                return Err(Abort);
            }
            return Ok(steps.map(|s| apply_steps(d, &s)));
        };
        match &d.ty {
            Type::Forall(..) => {
                for y in pool {
                    let inst = Derivation::all_e(d.clone(), Type::Var(y.clone()));
                    if let Some(found) = self.spine(ctx, inst, args, goal, pool)? {
                        return Ok(Some(found));
                    }
                }
                Ok(None)
            }
            Type::Arrow(dom, _) => {
                let dom = (**dom).clone();
                match self.check(ctx, arg, &dom)? {
                    Some(a) => self.spine(ctx, Derivation::arr_e(d, a), rest, goal, pool),
                    None => Ok(None),
                }
            }
            _ => Ok(None),
        }
    }
}

/// Context variables, then goal variables, then one fresh variable.
pub fn instantiation_pool(ctx: &Context, goal: &Type) -> Vec<Name> {
    let mut pool = ctx.type_vars_ordered();
    for x in goal.free_vars_ordered() {
        if !pool.contains(&x) {
            pool.push(x);
        }
    }
    let taken: BTreeSet<Name> = pool.iter().cloned().collect();
    pool.push(Name::new("Z").fresh_in(&taken));
    pool
}

/// Instantiations of the leading quantifiers of `have`, drawn from
/// `candidates` in order, that make it equal to the unquantified `want`.
fn strip_to(have: &Type, want: &Type, candidates: &[Name], ticks: &mut u64) -> Option<Vec<Name>> {
    *ticks += 1;
    if have == want {
        return Some(Vec::new());
    }
    let Type::Forall(_, body) = have else {
        return None;
    };
    for c in candidates {
        let next = body.instantiate(&Type::Var(c.clone()));
        if let Some(mut rest) = strip_to(&next, want, candidates, ticks) {
            rest.insert(0, c.clone());
            return Some(rest);
        }
    }
    None
}

fn apply_steps(d: Derivation, steps: &[Name]) -> Derivation {
    steps
        .iter()
        .fold(d, |d, y| Derivation::all_e(d, Type::Var(y.clone())))
}

/// A chain of `AllE` (variable instantiations) followed by `AllI`
/// (generalizations) turning a judgment at `have` into one at `want`.
///
/// `varpool` must contain the type variables of the surrounding context:
/// generalized variables are chosen outside it. Instantiations range over
/// `varpool`, the generalized variables and one fresh variable.
pub fn subsume_f0(have: &Type, want: &Type, varpool: &[Name]) -> Option<Vec<SubsumeStep>> {
    let mut avoid: BTreeSet<Name> = varpool.iter().cloned().collect();
    avoid.extend(have.free_vars());
    avoid.extend(want.free_vars());
    let mut generalized = Vec::new();
    let mut target = want.clone();
    while let Type::Forall(hint, body) = &target {
        let z = hint.0.fresh_in(&avoid);
        avoid.insert(z.clone());
        target = body.open(&z);
        generalized.push(z);
    }
    let mut candidates: Vec<Name> = varpool.to_vec();
    for z in &generalized {
        if !candidates.contains(z) {
            candidates.push(z.clone());
        }
    }
    candidates.push(Name::new("Z").fresh_in(&avoid));
    let mut ticks = 0;
    let inst = strip_to(have, &target, &candidates, &mut ticks)?;
    let mut steps: Vec<SubsumeStep> = inst.into_iter().map(SubsumeStep::AllE).collect();
    steps.extend(generalized.into_iter().rev().map(SubsumeStep::AllI));
    Some(steps)
}

/// Applies `subsume_f0` steps to a derivation.
pub fn apply_subsumption(d: Derivation, steps: &[SubsumeStep]) -> Derivation {
    steps.iter().fold(d, |d, s| match s {
        SubsumeStep::AllE(y) => Derivation::all_e(d, Type::Var(y.clone())),
        SubsumeStep::AllI(z) => Derivation::all_i(z.clone(), d),
    })
}

/// Decides `ctx ⊢F0 t : ty` for β-normal `t`, exploring at most `budget`
/// search nodes.
pub fn search_f0(
    ctx: &Context,
    t: &Term,
    ty: &Type,
    budget: u64,
) -> Result<SearchResult, SearchError> {
    if !t.is_locally_closed()
        || !ty.is_locally_closed()
        || ctx.iter().any(|(_, a)| !a.is_locally_closed())
    {
        return Err(SearchError::IllFormed);
    }
    if !is_normal(t) {
        return Err(SearchError::NotNormal);
    }
    let mut search = Search {
        budget,
        spent: 0,
        memo: HashMap::new(),
    };
    Ok(match search.check(ctx, t, ty) {
        Ok(Some(d)) => SearchResult::Typable(d),
        Ok(None) => SearchResult::NotTypable,
        Err(Abort) => SearchResult::Aborted { budget },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::{validate_derivation, SystemId};
    use crate::syntax::{parse_term, parse_type};

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    fn names(xs: &[&str]) -> Vec<Name> {
        xs.iter().map(|x| Name::new(x)).collect()
    }

    const ENT: &str = "∀X.(X→X)→(X→X)";
    const BOOL: &str = "∀X.X→X→X";
    const A3: &str = "∀X.(X→∀Y.X)→(X→X)";

    fn run(ctx: &Context, term: &str, goal: &str) -> SearchResult {
        search_f0(ctx, &t(term), &ty(goal), DEFAULT_BUDGET).unwrap()
    }

    #[test]
    fn church_two_is_an_integer() {
        let r = run(&Context::new(), r"\f.\x.(f)(f)x", ENT);
        let SearchResult::Typable(d) = r else {
            panic!("expected typable, got {r:?}")
        };
        assert_eq!(validate_derivation(&d, SystemId::F0), Ok(()));
        assert_eq!(d.subject, t(r"\f.\x.(f)(f)x"));
        assert_eq!(d.ty, ty(ENT));
    }

    #[test]
    fn identity_is_not_boolean() {
        assert_eq!(
            run(&Context::new(), r"\x.x", BOOL),
            SearchResult::NotTypable
        );
    }

    #[test]
    fn identity_fails_at_a3() {
        assert_eq!(run(&Context::new(), r"\x.x", A3), SearchResult::NotTypable);
    }

    #[test]
    fn i_prime_types_at_a3_in_f0() {
        let r = run(&Context::new(), r"\x.\y.(x)y", A3);
        let SearchResult::Typable(d) = r else {
            panic!()
        };
        assert_eq!(validate_derivation(&d, SystemId::F0), Ok(()));
    }

    #[test]
    fn vacuous_generalization() {
        let ctx = Context::new().extend("y".into(), ty("X")).unwrap();
        let r = run(&ctx, "y", "∀Z.X");
        let SearchResult::Typable(d) = r else {
            panic!()
        };
        assert_eq!(d.rule, crate::checker::Rule::AllI);
        assert_eq!(validate_derivation(&d, SystemId::F0), Ok(()));
    }

    #[test]
    fn polymorphic_head_instantiated_from_pool() {
        let ctx = Context::new()
            .extend("i".into(), ty("∀X.X→X"))
            .unwrap()
            .extend("y".into(), ty("Y"))
            .unwrap();
        let SearchResult::Typable(d) = run(&ctx, "(i)y", "Y") else {
            panic!()
        };
        assert_eq!(validate_derivation(&d, SystemId::F0), Ok(()));
        // needs (Y→Y)→(Y→Y): not a variable instance
        assert_eq!(run(&ctx, "(i)i", "Y→Y"), SearchResult::NotTypable);
    }

    #[test]
    fn rejects_non_normal_subject() {
        assert_eq!(
            search_f0(&Context::new(), &t(r"(\x.x)\y.y"), &ty(BOOL), 10),
            Err(SearchError::NotNormal)
        );
    }

    #[test]
    fn tiny_budget_aborts() {
        assert_eq!(
            run_budget(r"\f.\x.(f)(f)x", ENT, 3),
            SearchResult::Aborted { budget: 3 }
        );
    }

    fn run_budget(term: &str, goal: &str, budget: u64) -> SearchResult {
        search_f0(&Context::new(), &t(term), &ty(goal), budget).unwrap()
    }

    #[test]
    fn subsume_examples() {
        assert_eq!(
            subsume_f0(&ty("∀X.X→X"), &ty("Y→Y"), &names(&["Y"])),
            Some(vec![SubsumeStep::AllE("Y".into())])
        );
        assert_eq!(
            subsume_f0(&ty("X"), &ty("∀Z.X"), &names(&["X"])),
            Some(vec![SubsumeStep::AllI("Z".into())])
        );
        assert_eq!(
            subsume_f0(&ty("∀X.X→X"), &ty("(Y→Y)→(Y→Y)"), &names(&["Y"])),
            None
        );
    }

    #[test]
    fn subsume_through_generalized_variable() {
        let steps = subsume_f0(&ty("∀X.X→X"), &ty("∀W.W→W"), &[]).unwrap();
        assert_eq!(
            steps,
            vec![SubsumeStep::AllE("W".into()), SubsumeStep::AllI("W".into())]
        );
        let ctx = Context::new();
        let base = Derivation::all_i(
            "X".into(),
            Derivation::arr_i(
                ctx.clone(),
                &"z".into(),
                ty("X"),
                Derivation::ax(
                    ctx.extend("z".into(), ty("X")).unwrap(),
                    "z".into(),
                    ty("X"),
                ),
            ),
        );
        let d = apply_subsumption(base, &steps);
        assert_eq!(d.ty, ty("∀W.W→W"));
        assert_eq!(validate_derivation(&d, SystemId::F0), Ok(()));
    }

    #[test]
    fn pool_order_is_context_goal_fresh() {
        let ctx = Context::new().extend("a".into(), ty("B→A")).unwrap();
        assert_eq!(
            instantiation_pool(&ctx, &ty("C→A")),
            names(&["B", "A", "C", "Z"])
        );
        let ctx = Context::new().extend("a".into(), ty("Z")).unwrap();
        assert_eq!(instantiation_pool(&ctx, &ty("Z")), names(&["Z", "Z′"]));
    }
}
