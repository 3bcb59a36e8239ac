//! Natural-deduction calculi: IMLL, and IPL with weakening and contraction.

mod brute;
mod check;
mod imll;
mod ipl;
mod proof;

pub use brute::brute_force_prove;
pub use check::{check_proof, check_proof_of};
pub use imll::{prove, ProverBudget};
pub(crate) use ipl::adjust;
pub use ipl::prove_ipl;
pub use proof::{Proof, ProofFormatError, Rule};

use crate::outcome::Outcome;
use crate::syntax::{Logic, Sequent};

/// Dispatches on the sequent's logic.
pub fn prove_any(s: &Sequent, budget: &ProverBudget) -> Outcome<Proof> {
    match s.logic {
        Logic::Imll => prove(s, budget),
        Logic::Ipl => prove_ipl(s, budget),
    }
}
