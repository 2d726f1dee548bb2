//! Typing derivations: validation against System F or F0, and complete
//! proof search for F0 typings of β-normal terms.

mod derivation;
pub mod json;
mod search;
mod validate;

pub use derivation::{Derivation, Rule, SystemId};
pub use search::{
    apply_subsumption, instantiation_pool, search_f0, subsume_f0, SearchError, SearchResult,
    SubsumeStep, DEFAULT_BUDGET,
};
pub use validate::{validate_derivation, Invalid, InvalidReason};
