//! Deciding membership `t ∈ |A|` for positive-quantifier (∀⁺) types of
//! Curry-style System F: β-normalize `t`, then search for an F0 typing of
//! the normal form at `A`.

pub mod checker;
pub mod corpus;
pub mod datalib;
pub mod membership;
pub mod polarity;
pub mod reduce;
pub mod syntax;
