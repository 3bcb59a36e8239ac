//! Base-extension semantics: the support clauses evaluated over bounded
//! enumerations of base extensions, resources and atoms.
//!
//! Only refutations are definitive. A universal clause that survives the
//! enumeration is reported as not refuted within budget, never as holding.

mod enumerate;
mod eval;

pub use enumerate::{
    candidate_rules, default_alphabet, multisets_upto, rule_weight, CandidatePool,
    EnumeratorBounds, Extension, ExtensionEnumerator,
};
pub use eval::{
    BudgetReport, Clause, EvalOutcome, ReplayError, SearchSpace, SemanticsError, SupportEvaluator,
    SupportJudgement, Witness,
};

use thiserror::Error;

use crate::calculus::{prove_any, ProverBudget};
use crate::flatten::ConjunctionMode;
use crate::outcome::Outcome;
use crate::syntax::Sequent;

/// Default work budget for one evaluation.
pub const DEFAULT_EVAL_WORK: u64 = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("prover budget exhausted on {0}")]
pub struct Indeterminate(pub String);

/// Validity of `s`, decided by the calculus prover (provability and
/// validity coincide for both logics).
pub fn decide_validity(s: &Sequent) -> Result<bool, Indeterminate> {
    match prove_any(s, &ProverBudget::default()) {
        Outcome::Found(_) => Ok(true),
        Outcome::NotFound => Ok(false),
        Outcome::BudgetExhausted => Err(Indeterminate(s.to_string())),
    }
}

/// One-shot evaluation of `j` over `space`.
pub fn eval_support(
    j: &SupportJudgement,
    space: &SearchSpace,
    work: u64,
) -> Result<EvalOutcome, SemanticsError> {
    SupportEvaluator::new(j.logic, j.mode, space.clone())?.eval(j, work)
}

/// Searches for an extension at which the context of `s` is supported and
/// its conclusion is not. Any witness returned has been replayed.
pub fn find_refuting_extension(
    s: &Sequent,
    mode: ConjunctionMode,
    space: &SearchSpace,
    work: u64,
) -> Result<Option<Witness>, SemanticsError> {
    let j = SupportJudgement::validity(s, mode);
    let mut ev = SupportEvaluator::new(s.logic, mode, space.clone())?;
    match ev.eval(&j, work)? {
        EvalOutcome::Refuted(w) => {
            ev.replay(&j, &w).expect("refutations replay");
            Ok(Some(w))
        }
        _ => Ok(None),
    }
}
