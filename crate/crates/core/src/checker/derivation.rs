use std::fmt;

use crate::syntax::{Context, Name, Term, Type};

/// Typing rules of Curry-style System F.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `Γ ⊢ xᵢ : Aᵢ`
    Ax,
    /// from `Γ, x:B ⊢ t : C` infer `Γ ⊢ λx.t : B→C`
    ArrI,
    /// from `Γ ⊢ u : B→C` and `Γ ⊢ v : B` infer `Γ ⊢ (u)v : C`
    ArrE,
    /// from `Γ ⊢ t : A`, `X` not in `Γ`, infer `Γ ⊢ t : ∀X.A`
    AllI,
    /// from `Γ ⊢ t : ∀X.A` infer `Γ ⊢ t : A[C/X]`
    AllE,
}

impl Rule {
    pub fn arity(self) -> usize {
        match self {
            Rule::Ax => 0,
            Rule::ArrI | Rule::AllI | Rule::AllE => 1,
            Rule::ArrE => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Rule::Ax => "ax",
            Rule::ArrI => "arr_i",
            Rule::ArrE => "arr_e",
            Rule::AllI => "all_i",
            Rule::AllE => "all_e",
        }
    }

    pub fn from_tag(s: &str) -> Option<Rule> {
        Some(match s {
            "ax" => Rule::Ax,
            "arr_i" => Rule::ArrI,
            "arr_e" => Rule::ArrE,
            "all_i" => Rule::AllI,
            "all_e" => Rule::AllE,
            _ => return None,
        })
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Full System F, or F0 where `∀`-elimination instantiates with a type
/// variable only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemId {
    F,
    F0,
}

/// An explicit typing derivation; each node records its judgment
/// `context ⊢ subject : ty`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub rule: Rule,
    pub context: Context,
    pub subject: Term,
    pub ty: Type,
    pub premises: Vec<Derivation>,
    /// `AllE` only
    pub instantiation: Option<Type>,
    /// `AllI` only
    pub generalized: Option<Name>,
}

impl Derivation {
    pub fn ax(context: Context, x: Name, ty: Type) -> Derivation {
        Derivation {
            rule: Rule::Ax,
            context,
            subject: Term::Free(x),
            ty,
            premises: vec![],
            instantiation: None,
            generalized: None,
        }
    }

    /// Closes the premise `Γ, x:B ⊢ body : C` into `Γ ⊢ λx.body : B→C`.
    /// `x` must be the last declaration of the premise context.
    pub fn arr_i(context: Context, x: &Name, dom: Type, premise: Derivation) -> Derivation {
        Derivation {
            rule: Rule::ArrI,
            context,
            subject: Term::lam(x.clone(), premise.subject.clone()),
            ty: Type::arrow(dom, premise.ty.clone()),
            premises: vec![premise],
            instantiation: None,
            generalized: None,
        }
    }

    /// `fun` must have an arrow type.
    pub fn arr_e(fun: Derivation, arg: Derivation) -> Derivation {
        let cod = match &fun.ty {
            Type::Arrow(_, c) => (**c).clone(),
            other => panic!("arr_e on non-arrow type {other}"),
        };
        Derivation {
            rule: Rule::ArrE,
            context: fun.context.clone(),
            subject: Term::app(fun.subject.clone(), arg.subject.clone()),
            ty: cod,
            premises: vec![fun, arg],
            instantiation: None,
            generalized: None,
        }
    }

    pub fn all_i(x: Name, premise: Derivation) -> Derivation {
        Derivation {
            rule: Rule::AllI,
            context: premise.context.clone(),
            subject: premise.subject.clone(),
            ty: Type::forall(x.clone(), premise.ty.clone()),
            premises: vec![],
            instantiation: None,
            generalized: Some(x),
        }
        .with_premise(premise)
    }

    /// `premise` must have a quantified type.
    pub fn all_e(premise: Derivation, inst: Type) -> Derivation {
        let ty = match &premise.ty {
            Type::Forall(_, body) => body.instantiate(&inst),
            other => panic!("all_e on unquantified type {other}"),
        };
        Derivation {
            rule: Rule::AllE,
            context: premise.context.clone(),
            subject: premise.subject.clone(),
            ty,
            premises: vec![premise],
            instantiation: Some(inst),
            generalized: None,
        }
    }

    fn with_premise(mut self, p: Derivation) -> Derivation {
        self.premises.push(p);
        self
    }

    pub fn node_count(&self) -> usize {
        1 + self
            .premises
            .iter()
            .map(Derivation::node_count)
            .sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self
            .premises
            .iter()
            .map(Derivation::depth)
            .max()
            .unwrap_or(0)
    }

    /// Node reached by following premise indices from the root.
    pub fn at(&self, path: &[usize]) -> Option<&Derivation> {
        let mut d = self;
        for &i in path {
            d = d.premises.get(i)?;
        }
        Some(d)
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut Derivation> {
        let mut d = self;
        for &i in path {
            d = d.premises.get_mut(i)?;
        }
        Some(d)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(d: &Derivation, indent: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            writeln!(
                f,
                "{:indent$}[{}] {} ⊢ {} : {}",
                "",
                d.rule,
                d.context,
                d.subject,
                d.ty,
                indent = indent
            )?;
            for p in &d.premises {
                go(p, indent + 2, f)?;
            }
            Ok(())
        }
        go(self, 0, f)
    }
}
