//! λ-terms, System F types and typing contexts.

mod context;
mod name;
mod parse;
mod print;
mod term;
mod types;

pub use context::{Context, DuplicateDeclaration};
pub use name::{Hint, Name};
pub use parse::{parse_term, parse_type, ParseError};
pub use term::Term;
pub use types::Type;

/// α-equivalence. Both representations are nameless, so this is equality.
pub fn alpha_eq<T: PartialEq>(a: &T, b: &T) -> bool {
    a == b
}
