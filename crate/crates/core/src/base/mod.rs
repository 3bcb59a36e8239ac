//! Atomic rules, bases and the derivability relations `S ⊢_B q`.

mod derivation;
mod rule;
mod search;

pub use derivation::{check_derivation, graft, Derivation, GraftError, PremiseDerivation};
pub use rule::{AtomicRule, Base, Discipline, Premise, RuleParseError};
pub use search::{derive, DeriveError, Deriver, Limits, SearchReport};
