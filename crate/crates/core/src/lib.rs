//! Base-extension semantics for intuitionistic multiplicative linear logic
//! and intuitionistic propositional logic.
//!
//! The crate provides formula syntax, atomic bases with their derivability
//! relations, natural-deduction provers and checkers, the flattening
//! construction of bespoke bases, and a bounded evaluator for the support
//! relation.

mod andor;
pub mod base;
pub mod calculus;
pub mod crosscheck;
pub mod flatten;
mod outcome;
pub mod semantics;
pub mod syntax;

pub use outcome::{CheckResult, Outcome, Rejection};
