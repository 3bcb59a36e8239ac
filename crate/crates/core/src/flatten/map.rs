use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::syntax::{Atom, AtomMultiset, Formula, FormulaSet, Multiset, RESERVED_PREFIX};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlattenError {
    #[error("atom `{0}` uses the reserved prefix and cannot appear in the domain")]
    ReservedAtom(Atom),
    #[error("the domain is not closed under subformulas")]
    NotClosed,
    #[error("formula {0} is outside the flattening domain")]
    OutsideDomain(Formula),
    #[error("rule `{0}` was not generated by the bespoke-base construction")]
    UnknownRule(String),
    #[error("derivation does not check against the bespoke base: {0}")]
    Unchecked(String),
}

/// The injection `(·)♭` from a subformula-closed set into atoms, with its
/// left inverse `(·)♮`. Atoms of the domain map to themselves; every other
/// member gets a fresh reserved atom `#f0, #f1, …` in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flattening {
    domain: FormulaSet,
    forward: BTreeMap<Formula, Atom>,
    inverse: BTreeMap<Atom, Formula>,
}

impl Flattening {
    pub fn new(domain: &FormulaSet) -> Result<Flattening, FlattenError> {
        if !domain.is_closed() {
            return Err(FlattenError::NotClosed);
        }
        if let Some(a) = domain.atoms().into_iter().find(Atom::is_reserved) {
            return Err(FlattenError::ReservedAtom(a));
        }
        let mut forward = BTreeMap::new();
        let mut inverse = BTreeMap::new();
        let mut fresh = 0usize;
        for f in domain.canonical_order() {
            let a = match f.as_atom() {
                Some(a) => a.clone(),
                None => {
                    let a = Atom::new(&format!("{RESERVED_PREFIX}f{fresh}"));
                    fresh += 1;
                    a
                }
            };
            forward.insert(f.clone(), a.clone());
            inverse.insert(a, f.clone());
        }
        Ok(Flattening {
            domain: domain.clone(),
            forward,
            inverse,
        })
    }

    pub fn domain(&self) -> &FormulaSet {
        &self.domain
    }

    pub fn flat(&self, f: &Formula) -> Result<&Atom, FlattenError> {
        self.forward
            .get(f)
            .ok_or_else(|| FlattenError::OutsideDomain(f.clone()))
    }

    /// `♭` of a domain member; panics outside the domain.
    pub(crate) fn fl(&self, f: &Formula) -> Atom {
        self.forward[f].clone()
    }

    /// `♮`: the formula an atom flattens, or the atom itself when it is not
    /// in the image.
    pub fn deflat(&self, a: &Atom) -> Formula {
        self.inverse
            .get(a)
            .cloned()
            .unwrap_or_else(|| Formula::Atom(a.clone()))
    }

    pub fn apply_flat(&self, fs: &Multiset<Formula>) -> Result<AtomMultiset, FlattenError> {
        let mut out = AtomMultiset::new();
        for (f, n) in fs.entries() {
            out.insert_n(self.flat(f)?.clone(), n);
        }
        Ok(out)
    }

    pub fn apply_deflat(&self, atoms: &AtomMultiset) -> Multiset<Formula> {
        atoms.map(|a| self.deflat(a))
    }

    pub fn image(&self) -> BTreeSet<Atom> {
        self.inverse.keys().cloned().collect()
    }

    /// Fresh atoms only (those not already atoms of the domain).
    pub fn fresh_atoms(&self) -> Vec<(&Atom, &Formula)> {
        self.inverse
            .iter()
            .filter(|(a, _)| a.is_reserved())
            .collect()
    }

    /// Pairs `(φ, φ♭)` in canonical order of `φ`.
    pub fn table(&self) -> Vec<(&Formula, &Atom)> {
        let mut v: Vec<_> = self.forward.iter().collect();
        v.sort_by(|a, b| a.0.canonical_cmp(b.0));
        v
    }

    /// Two-column text, one `formula ↦ atom` pair per line.
    pub fn table_text(&self) -> String {
        self.table()
            .iter()
            .map(|(f, a)| format!("{f}\t{a}\n"))
            .collect()
    }
}
