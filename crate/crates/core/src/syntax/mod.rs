//! Formulas, sequents, multisets and their concrete syntax.

mod formula;
mod multiset;
mod parse;

pub use formula::{
    subformulas, Atom, Connective, Formula, FormulaSet, Logic, Sequent, RESERVED_PREFIX,
};
pub use multiset::{enumerate_splits, split_count, Multiset};
pub use parse::{
    parse_atom_list, parse_formula, parse_formula_with, parse_sequent, parse_sequent_file,
    parse_sequent_with, ParseError,
};

/// Multisets of atoms: the resources `P`, `S`, `U` of derivability and support.
pub type AtomMultiset = Multiset<Atom>;
