//! Membership in the interpretation of a ∀⁺ type.
//!
//! For a ∀⁺ type `A`, `t ∈ |A|` holds exactly when `t` β-reduces to a term
//! typable at `A` in F0. The decision normalizes `t` leftmost-outermost and
//! searches for an F0 typing of the normal form. Running out of fuel or
//! budget gives `Unknown`, never `NotMember`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::checker::{search_f0, Derivation, SearchResult};
use crate::polarity::{classify, Polarity};
use crate::reduce::{normalize, ReduceOutcome};
use crate::syntax::{Context, Name, Term, Type};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotMemberReason {
    /// A normal form exists and the F0 search is exhausted without a typing.
    SearchFailed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnknownCause {
    Fuel,
    Budget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Member {
        normal_form: Term,
        witness: Derivation,
    },
    NotMember {
        normal_form: Term,
        reason: NotMemberReason,
    },
    Unknown {
        fuel_spent: u64,
        cause: UnknownCause,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    Member,
    NotMember,
    Unknown,
}

impl VerdictKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::Member => "member",
            VerdictKind::NotMember => "not_member",
            VerdictKind::Unknown => "unknown",
        }
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Verdict {
    pub fn kind(&self) -> VerdictKind {
        match self {
            Verdict::Member { .. } => VerdictKind::Member,
            Verdict::NotMember { .. } => VerdictKind::NotMember,
            Verdict::Unknown { .. } => VerdictKind::Unknown,
        }
    }

    pub fn normal_form(&self) -> Option<&Term> {
        match self {
            Verdict::Member { normal_form, .. } | Verdict::NotMember { normal_form, .. } => {
                Some(normal_form)
            }
            Verdict::Unknown { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&Derivation> {
        match self {
            Verdict::Member { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MemberError {
    #[error("type {ty} is {polarity}, not a ∀⁺ type")]
    Polarity { ty: Type, polarity: Polarity },
    #[error("declaration {var} : {ty} is {polarity}, not a ∀⁻ type")]
    ContextPolarity {
        var: Name,
        ty: Type,
        polarity: Polarity,
    },
    #[error("term has free variables {0:?}; use an open-term query with a context")]
    FreeVars(Vec<Name>),
    #[error("free variable {0} has no declaration")]
    MissingDeclaration(Name),
    #[error("malformed input: dangling de Bruijn index")]
    IllFormed,
}

/// A finite context whose declared types are all ∀⁻. Repeated ∀⁻ types are
/// given as separate declarations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegContext(Context);

impl NegContext {
    pub fn new(ctx: Context) -> Result<NegContext, MemberError> {
        for (x, ty) in ctx.iter() {
            let polarity = classify(ty);
            if !polarity.is_negative() {
                return Err(MemberError::ContextPolarity {
                    var: x.clone(),
                    ty: ty.clone(),
                    polarity,
                });
            }
        }
        Ok(NegContext(ctx))
    }

    pub fn empty() -> NegContext {
        NegContext(Context::new())
    }

    pub fn context(&self) -> &Context {
        &self.0
    }
}

fn require_positive(ty: &Type) -> Result<(), MemberError> {
    if !ty.is_locally_closed() {
        return Err(MemberError::IllFormed);
    }
    let polarity = classify(ty);
    if polarity.is_positive() {
        Ok(())
    } else {
        Err(MemberError::Polarity {
            ty: ty.clone(),
            polarity,
        })
    }
}

fn decide(ctx: &Context, t: &Term, ty: &Type, fuel: u64, budget: u64) -> Verdict {
    let (normal_form, steps) = match normalize(t, fuel) {
        ReduceOutcome::Done { term, steps } => (term, steps),
        ReduceOutcome::FuelExhausted { steps, .. } => {
            return Verdict::Unknown {
                fuel_spent: steps,
                cause: UnknownCause::Fuel,
            }
        }
    };
    match search_f0(ctx, &normal_form, ty, budget) {
        Ok(SearchResult::Typable(witness)) => Verdict::Member {
            normal_form,
            witness,
        },
        Ok(SearchResult::NotTypable) => Verdict::NotMember {
            normal_form,
            reason: NotMemberReason::SearchFailed,
        },
        Ok(SearchResult::Aborted { .. }) => Verdict::Unknown {
            fuel_spent: steps,
            cause: UnknownCause::Budget,
        },
        Err(e) => unreachable!("normal forms of well-formed terms are searchable: {e}"),
    }
}

/// Decides `t ∈ |A|` for a closed term and a ∀⁺ type.
pub fn member(t: &Term, ty: &Type, fuel: u64, budget: u64) -> Result<Verdict, MemberError> {
    require_positive(ty)?;
    if !t.is_locally_closed() {
        return Err(MemberError::IllFormed);
    }
    let free = t.free_vars();
    if !free.is_empty() {
        return Err(MemberError::FreeVars(free.into_iter().collect()));
    }
    Ok(decide(&Context::new(), t, ty, fuel, budget))
}

/// Decides whether some reduct of `t` is F0-typable at the ∀⁺ type `ty`
/// under the ∀⁻ declarations `gamma`.
pub fn member_open(
    t: &Term,
    ty: &Type,
    gamma: &NegContext,
    fuel: u64,
    budget: u64,
) -> Result<Verdict, MemberError> {
    require_positive(ty)?;
    if !t.is_locally_closed() {
        return Err(MemberError::IllFormed);
    }
    if let Some(x) = t.free_vars().into_iter().find(|x| !gamma.0.contains(x)) {
        return Err(MemberError::MissingDeclaration(x));
    }
    Ok(decide(&gamma.0, t, ty, fuel, budget))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Probe {
    pub term: Term,
    pub verdict: VerdictKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub baseline: VerdictKind,
    pub probes: Vec<Probe>,
}

impl StabilityReport {
    /// Probes whose verdict contradicts the baseline; `Unknown` on either
    /// side is not a contradiction.
    pub fn violations(&self) -> Vec<&Probe> {
        if self.baseline == VerdictKind::Unknown {
            return Vec::new();
        }
        self.probes
            .iter()
            .filter(|p| p.verdict != VerdictKind::Unknown && p.verdict != self.baseline)
            .collect()
    }

    pub fn is_stable(&self) -> bool {
        self.violations().is_empty()
    }
}

/// Runs `member` on `expansions` distinct β-expansions of `t` (single or
/// repeated) and compares each verdict against the one for `t`. Expansion
/// choices come from a ChaCha stream seeded with `seed`.
pub fn stability_probe(
    t: &Term,
    ty: &Type,
    expansions: usize,
    seed: u64,
    fuel: u64,
    budget: u64,
) -> Result<StabilityReport, MemberError> {
    let baseline = member(t, ty, fuel, budget)?.kind();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<Term> = HashSet::new();
    seen.insert(t.clone());
    let mut probes: Vec<Probe> = Vec::with_capacity(expansions);
    let max_attempts = expansions.saturating_mul(64).max(64);
    let mut attempts = 0;
    while probes.len() < expansions && attempts < max_attempts {
        attempts += 1;
        // later attempts may expand earlier expansions again
        let base = match rng.gen_range(0..=probes.len()) {
            0 => t,
            i => &probes[i - 1].term,
        };
        let candidate = random_expansion(base, &mut rng);
        if !seen.insert(candidate.clone()) {
            continue;
        }
        let verdict = member(&candidate, ty, fuel, budget)?.kind();
        probes.push(Probe {
            term: candidate,
            verdict,
        });
    }
    Ok(StabilityReport { baseline, probes })
}

fn closed_arguments() -> Vec<Term> {
    let id = Term::lam("a", Term::var("a"));
    let k = Term::lam("a", Term::lam("b", Term::var("a")));
    let delta = Term::lam("a", Term::app(Term::var("a"), Term::var("a")));
    let omega = Term::app(delta.clone(), delta);
    vec![id, k, omega]
}

/// One β-expansion of `t` at a uniformly chosen position. The subterm `u`
/// there becomes either `(λz.u)v` with `z` not free in `u`, or
/// `(λz.u[z/y])y` for a variable `y` in scope.
pub fn random_expansion(t: &Term, rng: &mut impl Rng) -> Term {
    let positions = t.size();
    let target = rng.gen_range(0..positions);
    let mut counter = 0;
    let mut taken = t.free_vars();
    let mut scope = Vec::new();
    expand_at(t, target, &mut counter, &mut scope, &mut taken, rng)
}

fn expand_at(
    t: &Term,
    target: usize,
    counter: &mut usize,
    scope: &mut Vec<Name>,
    taken: &mut BTreeSet<Name>,
    rng: &mut impl Rng,
) -> Term {
    let here = *counter;
    *counter += 1;
    if here == target {
        return wrap(t, scope, taken, rng);
    }
    match t {
        Term::Free(_) | Term::Bound(_) => t.clone(),
        Term::Lam(h, body) => {
            let x = h.0.fresh_in(taken);
            taken.insert(x.clone());
            scope.push(x.clone());
            let inner = expand_at(&body.open(&x), target, counter, scope, taken, rng);
            scope.pop();
            Term::lam(x, inner)
        }
        Term::App(f, a) => {
            let f2 = expand_at(f, target, counter, scope, taken, rng);
            let a2 = expand_at(a, target, counter, scope, taken, rng);
            Term::app(f2, a2)
        }
    }
}

fn wrap(u: &Term, scope: &[Name], taken: &mut BTreeSet<Name>, rng: &mut impl Rng) -> Term {
    let z = Name::new("z").fresh_in(taken);
    taken.insert(z.clone());
    let occurring: Vec<&Name> = scope.iter().filter(|y| u.has_free(y)).collect();
    if !occurring.is_empty() && rng.gen_bool(0.5) {
        let y = (*occurring.choose(rng).expect("non-empty")).clone();
        let abstracted = u.subst(&y, &Term::Free(z.clone()));
        return Term::app(Term::lam(z, abstracted), Term::Free(y));
    }
    let mut args = closed_arguments();
    args.extend(scope.iter().map(|y| Term::Free(y.clone())));
    let v = args.choose(rng).expect("non-empty").clone();
    Term::app(Term::lam(z, u.clone()), v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::{validate_derivation, SystemId, DEFAULT_BUDGET};
    use crate::datalib::{church_nat, nat_type};
    use crate::reduce::{beta_eq, is_normal, BetaEq, DEFAULT_FUEL};
    use crate::syntax::{parse_term, parse_type};

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    fn m(term: &str, goal: &str) -> Result<Verdict, MemberError> {
        member(&t(term), &ty(goal), DEFAULT_FUEL, DEFAULT_BUDGET)
    }

    const ENT: &str = "∀X.(X→X)→(X→X)";

    #[test]
    fn zero_through_a_redex() {
        let v = m(r"(\z.z) \f.\x.x", ENT).unwrap();
        let Verdict::Member {
            normal_form,
            witness,
        } = v
        else {
            panic!("expected member, got {v:?}")
        };
        assert_eq!(normal_form, church_nat(0));
        assert!(is_normal(&normal_form));
        assert_eq!(validate_derivation(&witness, SystemId::F0), Ok(()));
        assert_eq!(witness.subject, normal_form);
    }

    #[test]
    fn first_projection_is_not_an_integer() {
        let v = m(r"\x.\y.x", ENT).unwrap();
        assert_eq!(v.kind(), VerdictKind::NotMember);
        assert_eq!(v.normal_form(), Some(&t(r"\x.\y.x")));
    }

    #[test]
    fn identity_is_an_integer_at_type_level() {
        // x : X→X gives λx.x : (X→X)→(X→X), the η-contracted numeral 1
        assert_eq!(m(r"\x.x", ENT).unwrap().kind(), VerdictKind::Member);
    }

    #[test]
    fn a3_is_outside_the_positive_class() {
        assert!(matches!(
            m(r"\x.x", "∀X.(X→∀Y.X)→(X→X)"),
            Err(MemberError::Polarity {
                polarity: Polarity::Neither,
                ..
            })
        ));
    }

    #[test]
    fn omega_is_unknown() {
        let v = m(r"(\x.(x)x)\x.(x)x", ENT).unwrap();
        assert_eq!(
            v,
            Verdict::Unknown {
                fuel_spent: DEFAULT_FUEL,
                cause: UnknownCause::Fuel
            }
        );
    }

    #[test]
    fn open_terms_are_rejected() {
        assert_eq!(
            m("y", "X"),
            Err(MemberError::FreeVars(vec![Name::new("y")]))
        );
    }

    #[test]
    fn numerals_are_members() {
        for n in 0..=50 {
            let v = member(&church_nat(n), &nat_type(), DEFAULT_FUEL, DEFAULT_BUDGET).unwrap();
            assert_eq!(v.kind(), VerdictKind::Member, "n = {n}");
        }
    }

    fn gamma(entries: &[(&str, &str)]) -> NegContext {
        NegContext::new(
            Context::from_entries(entries.iter().map(|(x, a)| (Name::new(x), ty(a)))).unwrap(),
        )
        .unwrap()
    }

    fn mo(term: &str, goal: &str, g: &NegContext) -> Result<Verdict, MemberError> {
        member_open(&t(term), &ty(goal), g, DEFAULT_FUEL, DEFAULT_BUDGET)
    }

    #[test]
    fn open_membership_examples() {
        assert_eq!(
            mo("y", "X", &gamma(&[("y", "X")])).unwrap().kind(),
            VerdictKind::Member
        );
        let g = gamma(&[("f", "X→X"), ("x", "X")]);
        assert_eq!(mo("(f)(f)x", "X", &g).unwrap().kind(), VerdictKind::Member);
        assert_eq!(
            mo("x", "Y", &gamma(&[("x", "X")])).unwrap().kind(),
            VerdictKind::NotMember
        );
    }

    #[test]
    fn open_membership_errors() {
        assert!(matches!(
            NegContext::new(Context::from_entries([("y".into(), ty(ENT))]).unwrap()),
            Err(MemberError::ContextPolarity { .. })
        ));
        assert_eq!(
            mo("(f)x", "X", &gamma(&[("f", "X→X")])),
            Err(MemberError::MissingDeclaration("x".into()))
        );
    }

    #[test]
    fn empty_gamma_agrees_with_closed_member() {
        for term in [r"\x.x", r"\f.\x.(f)x", r"(\z.z)\f.\x.x", r"\x.\y.x"] {
            assert_eq!(
                mo(term, ENT, &NegContext::empty()).unwrap(),
                m(term, ENT).unwrap()
            );
        }
    }

    #[test]
    fn stability_examples() {
        let r = stability_probe(
            &church_nat(2),
            &nat_type(),
            10,
            0,
            DEFAULT_FUEL,
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert_eq!(r.baseline, VerdictKind::Member);
        assert_eq!(r.probes.len(), 10);
        assert!(r.probes.iter().all(|p| p.verdict == VerdictKind::Member));

        let r = stability_probe(
            &t(r"\x.\y.x"),
            &nat_type(),
            10,
            0,
            DEFAULT_FUEL,
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert_eq!(r.baseline, VerdictKind::NotMember);
        assert_eq!(r.probes.len(), 10);
        assert!(r.probes.iter().all(|p| p.verdict != VerdictKind::Member));

        let r = stability_probe(
            &church_nat(2),
            &nat_type(),
            0,
            0,
            DEFAULT_FUEL,
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert!(r.probes.is_empty());
    }

    #[test]
    fn tiny_terms_still_get_distinct_expansions() {
        let r = stability_probe(
            &t(r"\x.x"),
            &nat_type(),
            25,
            3,
            DEFAULT_FUEL,
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert_eq!(r.probes.len(), 25);
        assert!(r.is_stable());
    }

    #[test]
    fn expansions_are_closed_and_beta_equal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let base = church_nat(3);
        for _ in 0..100 {
            let e = random_expansion(&base, &mut rng);
            assert!(e.is_closed());
            assert_ne!(e, base);
            assert_eq!(beta_eq(&e, &base, DEFAULT_FUEL), BetaEq::Yes);
        }
    }
}
