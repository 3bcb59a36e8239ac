use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::multiset::Multiset;

/// Prefix reserved for atoms minted by the flattening map.
pub const RESERVED_PREFIX: char = '#';

/// A propositional atom. Cloning is cheap (shared string).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(Arc<str>);

impl Atom {
    pub fn new(name: &str) -> Self {
        Atom(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn is_reserved(&self) -> bool {
        self.0.starts_with(RESERVED_PREFIX)
    }

    /// Whether `name` matches `[a-z][a-zA-Z0-9_#]*`, optionally also
    /// accepting the reserved `#` lead character.
    pub fn is_valid_name(name: &str, allow_reserved: bool) -> bool {
        let mut chars = name.chars();
        let first_ok = match chars.next() {
            Some(c) if c.is_ascii_lowercase() => true,
            Some(RESERVED_PREFIX) => allow_reserved,
            _ => false,
        };
        first_ok && chars.all(is_atom_tail_char)
    }
}

pub(crate) fn is_atom_tail_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == RESERVED_PREFIX
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Atom {
    fn from(s: &str) -> Self {
        Atom::new(s)
    }
}

impl Serialize for Atom {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Atom {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if !Atom::is_valid_name(&s, true) {
            return Err(serde::de::Error::custom(format!("invalid atom name `{s}`")));
        }
        Ok(Atom::new(&s))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Logic {
    Imll,
    Ipl,
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Logic::Imll => "imll",
            Logic::Ipl => "ipl",
        })
    }
}

impl FromStr for Logic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "imll" => Ok(Logic::Imll),
            "ipl" => Ok(Logic::Ipl),
            other => Err(format!("unknown logic `{other}` (expected imll or ipl)")),
        }
    }
}

/// Formulas of both logics. Atoms are shared; every other variant belongs
/// to exactly one logic, and well-formed formulas never mix them.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Atom),
    Unit,
    Tensor(Arc<Formula>, Arc<Formula>),
    Lolli(Arc<Formula>, Arc<Formula>),
    Falsum,
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Imp(Arc<Formula>, Arc<Formula>),
}

/// Binary connectives, used when code needs to treat them uniformly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connective {
    Tensor,
    Lolli,
    And,
    Or,
    Imp,
}

impl Connective {
    pub fn logic(self) -> Logic {
        match self {
            Connective::Tensor | Connective::Lolli => Logic::Imll,
            _ => Logic::Ipl,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Connective::Tensor => "*",
            Connective::Lolli => "-o",
            Connective::And => "/\\",
            Connective::Or => "\\/",
            Connective::Imp => "->",
        }
    }

    /// Binding strength; higher binds tighter.
    fn precedence(self) -> u8 {
        match self {
            Connective::Tensor | Connective::And => 3,
            Connective::Or => 2,
            Connective::Lolli | Connective::Imp => 1,
        }
    }

    fn right_assoc(self) -> bool {
        matches!(self, Connective::Lolli | Connective::Imp)
    }

    pub fn of_logic(logic: Logic) -> &'static [Connective] {
        match logic {
            Logic::Imll => &[Connective::Tensor, Connective::Lolli],
            Logic::Ipl => &[Connective::And, Connective::Or, Connective::Imp],
        }
    }
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Atom::new(name))
    }

    pub fn binary(c: Connective, l: Formula, r: Formula) -> Formula {
        let (l, r) = (Arc::new(l), Arc::new(r));
        match c {
            Connective::Tensor => Formula::Tensor(l, r),
            Connective::Lolli => Formula::Lolli(l, r),
            Connective::And => Formula::And(l, r),
            Connective::Or => Formula::Or(l, r),
            Connective::Imp => Formula::Imp(l, r),
        }
    }

    pub fn tensor(l: Formula, r: Formula) -> Formula {
        Formula::binary(Connective::Tensor, l, r)
    }

    pub fn lolli(l: Formula, r: Formula) -> Formula {
        Formula::binary(Connective::Lolli, l, r)
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::binary(Connective::And, l, r)
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::binary(Connective::Or, l, r)
    }

    pub fn imp(l: Formula, r: Formula) -> Formula {
        Formula::binary(Connective::Imp, l, r)
    }

    /// The connective and children of a binary formula.
    pub fn as_binary(&self) -> Option<(Connective, &Formula, &Formula)> {
        match self {
            Formula::Tensor(l, r) => Some((Connective::Tensor, l, r)),
            Formula::Lolli(l, r) => Some((Connective::Lolli, l, r)),
            Formula::And(l, r) => Some((Connective::And, l, r)),
            Formula::Or(l, r) => Some((Connective::Or, l, r)),
            Formula::Imp(l, r) => Some((Connective::Imp, l, r)),
            _ => None,
        }
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            Formula::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    /// The logic of the top connective; `None` for atoms.
    pub fn own_logic(&self) -> Option<Logic> {
        match self {
            Formula::Atom(_) => None,
            Formula::Unit => Some(Logic::Imll),
            Formula::Falsum => Some(Logic::Ipl),
            _ => self.as_binary().map(|(c, _, _)| c.logic()),
        }
    }

    /// True when no connective of the other logic occurs anywhere.
    pub fn belongs_to(&self, logic: Logic) -> bool {
        if self.own_logic().is_some_and(|l| l != logic) {
            return false;
        }
        match self.as_binary() {
            Some((_, l, r)) => l.belongs_to(logic) && r.belongs_to(logic),
            None => true,
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Unit | Formula::Falsum => 2,
            _ => {
                let (_, l, r) = self.as_binary().expect("binary");
                l.degree() + r.degree() + 1
            }
        }
    }

    /// Number of syntax-tree nodes.
    pub fn size(&self) -> usize {
        match self.as_binary() {
            Some((_, l, r)) => 1 + l.size() + r.size(),
            None => 1,
        }
    }

    /// Number of connectives, counting the units `I` and `⊥`.
    pub fn connectives(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Unit | Formula::Falsum => 1,
            _ => {
                let (_, l, r) = self.as_binary().expect("binary");
                1 + l.connectives() + r.connectives()
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub(crate) fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            _ => {
                if let Some((_, l, r)) = self.as_binary() {
                    l.collect_atoms(out);
                    r.collect_atoms(out);
                }
            }
        }
    }

    fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if out.insert(self.clone()) {
            if let Some((_, l, r)) = self.as_binary() {
                l.collect_subformulas(out);
                r.collect_subformulas(out);
            }
        }
    }

    /// Canonical total order used for deterministic naming: by size, then
    /// by printed text.
    pub fn canonical_cmp(&self, other: &Formula) -> std::cmp::Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.to_string().cmp(&other.to_string()))
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Unit => f.write_str("I"),
            Formula::Falsum => f.write_str("_|_"),
            _ => {
                let (c, l, r) = self.as_binary().expect("binary");
                write_operand(f, l, c, true)?;
                write!(f, " {} ", c.symbol())?;
                write_operand(f, r, c, false)
            }
        }
    }
}

fn write_operand(
    f: &mut fmt::Formatter<'_>,
    child: &Formula,
    parent: Connective,
    left: bool,
) -> fmt::Result {
    let needs_parens = match child.as_binary() {
        None => false,
        Some((c, _, _)) => {
            let (cp, pp) = (c.precedence(), parent.precedence());
            if cp != pp {
                cp < pp
            } else if left {
                parent.right_assoc()
            } else {
                !parent.right_assoc()
            }
        }
    };
    if needs_parens {
        f.write_str("(")?;
        child.fmt_prec(f)?;
        f.write_str(")")
    } else {
        child.fmt_prec(f)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

/// `Γ ▷ φ`: a multiset context and a conclusion, all in one logic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequent {
    pub context: Multiset<Formula>,
    pub conclusion: Formula,
    pub logic: Logic,
}

impl Sequent {
    pub fn new(
        logic: Logic,
        context: impl IntoIterator<Item = Formula>,
        conclusion: Formula,
    ) -> Sequent {
        Sequent {
            context: context.into_iter().collect(),
            conclusion,
            logic,
        }
    }

    /// Checks that every formula belongs to the sequent's logic.
    pub fn is_well_formed(&self) -> bool {
        self.conclusion.belongs_to(self.logic)
            && self.context.iter().all(|f| f.belongs_to(self.logic))
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.conclusion.collect_atoms(&mut out);
        for f in self.context.entries().map(|(f, _)| f) {
            f.collect_atoms(&mut out);
        }
        out
    }

    /// Total node count of all formulas, counting context multiplicity.
    pub fn size(&self) -> usize {
        self.conclusion.size() + self.context.iter().map(Formula::size).sum::<usize>()
    }

    pub fn connectives(&self) -> usize {
        self.conclusion.connectives() + self.context.iter().map(Formula::connectives).sum::<usize>()
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for g in self.context.iter() {
            if !first {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
            first = false;
        }
        if !first {
            f.write_str(" ")?;
        }
        write!(f, "|- {}", self.conclusion)
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

/// A finite set of formulas closed under immediate subformulas.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct FormulaSet {
    items: BTreeSet<Formula>,
}

impl FormulaSet {
    /// The smallest subformula-closed set containing `formulas`.
    pub fn closure<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> FormulaSet {
        let mut items = BTreeSet::new();
        for f in formulas {
            f.collect_subformulas(&mut items);
        }
        FormulaSet { items }
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.items.contains(f)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Formula> + '_ {
        self.items.iter()
    }

    /// Members sorted by [`Formula::canonical_cmp`].
    pub fn canonical_order(&self) -> Vec<&Formula> {
        let mut v: Vec<&Formula> = self.items.iter().collect();
        v.sort_by(|a, b| a.canonical_cmp(b));
        v
    }

    pub fn is_closed(&self) -> bool {
        self.items.iter().all(|f| match f.as_binary() {
            Some((_, l, r)) => self.items.contains(l) && self.items.contains(r),
            None => true,
        })
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.items
            .iter()
            .filter_map(|f| f.as_atom().cloned())
            .collect()
    }
}

/// Ξ for a sequent: every subformula of its context and conclusion.
pub fn subformulas(s: &Sequent) -> FormulaSet {
    FormulaSet::closure(s.context.entries().map(|(f, _)| f).chain([&s.conclusion]))
}
