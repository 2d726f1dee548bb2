use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// An identifier for a term or type variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Name {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The name with one more prime appended.
    pub fn primed(&self) -> Name {
        Name(Arc::from(format!("{}′", self.0)))
    }

    /// First of `self`, `self′`, `self′′`, ... rejected by `taken`.
    pub fn freshen(&self, taken: impl Fn(&Name) -> bool) -> Name {
        let mut candidate = self.clone();
        while taken(&candidate) {
            candidate = candidate.primed();
        }
        candidate
    }

    pub fn fresh_in(&self, avoid: &BTreeSet<Name>) -> Name {
        self.freshen(|n| avoid.contains(n))
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Name {
        Name::new(s)
    }
}

impl From<String> for Name {
    fn from(s: String) -> Name {
        Name(Arc::from(s))
    }
}

/// Binder name kept only as a printing hint. Every comparison treats two
/// hints as equal, which makes derived equality on terms and types
/// α-equivalence.
#[derive(Clone)]
pub struct Hint(pub Name);

impl PartialEq for Hint {
    fn eq(&self, _: &Hint) -> bool {
        true
    }
}

impl Eq for Hint {}

impl PartialOrd for Hint {
    fn partial_cmp(&self, other: &Hint) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Hint {
    fn cmp(&self, _: &Hint) -> Ordering {
        Ordering::Equal
    }
}

impl Hash for Hint {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl fmt::Debug for Hint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn freshen_appends_primes() {
        let avoid: BTreeSet<Name> = ["y", "y′"].iter().map(|s| Name::new(s)).collect();
        assert_eq!(Name::new("y").fresh_in(&avoid).as_str(), "y′′");
        assert_eq!(Name::new("z").fresh_in(&avoid).as_str(), "z");
    }

    #[test]
    fn hints_never_distinguish() {
        assert_eq!(Hint(Name::new("a")), Hint(Name::new("b")));
    }
}
