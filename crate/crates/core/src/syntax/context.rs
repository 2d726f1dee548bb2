use std::collections::BTreeSet;
use std::fmt;

use super::name::Name;
use super::types::Type;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("variable `{0}` is declared twice")]
pub struct DuplicateDeclaration(pub Name);

/// A typing context `x₁ : A₁, …, xₙ : Aₙ` with pairwise distinct variables.
#[derive(Clone, Default, PartialEq, Eq, Hash, Debug)]
pub struct Context {
    entries: Vec<(Name, Type)>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn from_entries(
        entries: impl IntoIterator<Item = (Name, Type)>,
    ) -> Result<Context, DuplicateDeclaration> {
        let mut ctx = Context::new();
        for (x, ty) in entries {
            ctx = ctx.extend(x, ty)?;
        }
        Ok(ctx)
    }

    /// `Γ, x : ty`.
    pub fn extend(&self, x: Name, ty: Type) -> Result<Context, DuplicateDeclaration> {
        if self.contains(&x) {
            return Err(DuplicateDeclaration(x));
        }
        let mut entries = self.entries.clone();
        entries.push((x, ty));
        Ok(Context { entries })
    }

    pub fn lookup(&self, x: &Name) -> Option<&Type> {
        self.entries.iter().find(|(y, _)| y == x).map(|(_, t)| t)
    }

    pub fn contains(&self, x: &Name) -> bool {
        self.lookup(x).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Type)> {
        self.entries.iter().map(|(x, t)| (x, t))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn domain(&self) -> BTreeSet<Name> {
        self.entries.iter().map(|(x, _)| x.clone()).collect()
    }

    /// Free type variables of all declared types, in declaration order.
    pub fn type_vars_ordered(&self) -> Vec<Name> {
        let mut out: Vec<Name> = Vec::new();
        for (_, ty) in &self.entries {
            for x in ty.free_vars_ordered() {
                if !out.contains(&x) {
                    out.push(x);
                }
            }
        }
        out
    }

    pub fn type_vars(&self) -> BTreeSet<Name> {
        self.type_vars_ordered().into_iter().collect()
    }

    pub fn mentions_type_var(&self, x: &Name) -> bool {
        self.entries.iter().any(|(_, t)| t.has_free(x))
    }

    /// Same declarations, ignoring order.
    pub fn same_bindings(&self, other: &Context) -> bool {
        self.len() == other.len() && self.entries.iter().all(|(x, t)| other.lookup(x) == Some(t))
    }

    /// `self ⊆ other` as sets of declarations.
    pub fn is_subset_of(&self, other: &Context) -> bool {
        self.entries.iter().all(|(x, t)| other.lookup(x) == Some(t))
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, t)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} : {t}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_variables_are_rejected() {
        let ctx = Context::new().extend("x".into(), Type::var("X")).unwrap();
        assert_eq!(
            ctx.extend("x".into(), Type::var("Y")),
            Err(DuplicateDeclaration("x".into()))
        );
    }

    #[test]
    fn binding_comparison_ignores_order() {
        let a = Context::from_entries([("x".into(), Type::var("X")), ("y".into(), Type::var("Y"))])
            .unwrap();
        let b = Context::from_entries([("y".into(), Type::var("Y")), ("x".into(), Type::var("X"))])
            .unwrap();
        assert!(a.same_bindings(&b));
        assert_ne!(a, b);
    }
}
