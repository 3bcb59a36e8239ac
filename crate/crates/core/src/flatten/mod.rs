//! The completeness construction: flattening formulas into atoms, the
//! bespoke bases that encode each calculus at the atomic level, and the
//! extraction of calculus proofs from atomic derivations.

mod bespoke;
mod map;

pub use bespoke::{build_base_m, build_base_n, BespokeBase, ConjunctionMode, Origin};
pub use map::{FlattenError, Flattening};

use std::collections::BTreeSet;

use crate::syntax::{subformulas, Atom, Logic, Sequent};

/// Builds the bespoke base for a sequent: the flattening of its
/// subformulas, and base M (IMLL) or N (IPL) over the image of `♭`.
pub fn bespoke_for(s: &Sequent, mode: ConjunctionMode) -> Result<BespokeBase, FlattenError> {
    let m = Flattening::new(&subformulas(s))?;
    let none = BTreeSet::<Atom>::new();
    Ok(match s.logic {
        Logic::Imll => build_base_m(&m, &none),
        Logic::Ipl => build_base_n(&m, &none, mode),
    })
}
