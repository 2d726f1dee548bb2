//! Positive (∀⁺) and negative (∀⁻) quantifier types.
//!
//! Variables are both; `B→A` is ∀⁺ when `B` is ∀⁻ and `A` is ∀⁺ (dually for
//! ∀⁻); `∀X.A` is ∀⁺ when `A` is ∀⁺ and `X` occurs free in `A`. No
//! quantified type is ∀⁻.

use std::fmt;

use crate::syntax::Type;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
    Both,
    Neither,
}

impl Polarity {
    fn from_bits(pos: bool, neg: bool) -> Polarity {
        match (pos, neg) {
            (true, true) => Polarity::Both,
            (true, false) => Polarity::Positive,
            (false, true) => Polarity::Negative,
            (false, false) => Polarity::Neither,
        }
    }

    pub fn is_positive(self) -> bool {
        matches!(self, Polarity::Positive | Polarity::Both)
    }

    pub fn is_negative(self) -> bool {
        matches!(self, Polarity::Negative | Polarity::Both)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Positive => "forall+",
            Polarity::Negative => "forall-",
            Polarity::Both => "both",
            Polarity::Neither => "neither",
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One bottom-up pass. `used` has one slot per enclosing quantifier and
/// records whether its variable occurred.
pub fn classify(ty: &Type) -> Polarity {
    fn go(t: &Type, used: &mut Vec<bool>) -> (bool, bool) {
        match t {
            Type::Var(_) => (true, true),
            Type::Bound(k) => {
                if let Some(i) = used.len().checked_sub(k + 1) {
                    used[i] = true;
                }
                (true, true)
            }
            Type::Arrow(dom, cod) => {
                let (dp, dn) = go(dom, used);
                let (cp, cn) = go(cod, used);
                (dn && cp, dp && cn)
            }
            Type::Forall(_, body) => {
                used.push(false);
                let (bp, _) = go(body, used);
                let occurs = used.pop().unwrap_or(false);
                (bp && occurs, false)
            }
        }
    }
    let (pos, neg) = go(ty, &mut Vec::new());
    Polarity::from_bits(pos, neg)
}

pub fn is_positive(ty: &Type) -> bool {
    classify(ty).is_positive()
}

pub fn is_negative(ty: &Type) -> bool {
    classify(ty).is_negative()
}
