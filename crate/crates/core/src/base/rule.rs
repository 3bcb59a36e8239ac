use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{parse_atom_list, Atom, AtomMultiset, ParseError};

/// How resources behave: consumed exactly (IMLL) or shared freely (IPL).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Discipline {
    Multiset,
    Set,
}

impl fmt::Display for Discipline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Discipline::Multiset => "multiset",
            Discipline::Set => "set",
        })
    }
}

/// One premise `Q ▷ q` of an atomic rule.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Premise {
    pub assumptions: AtomMultiset,
    pub conclusion: Atom,
}

impl Premise {
    pub fn new(assumptions: impl IntoIterator<Item = Atom>, conclusion: Atom) -> Premise {
        Premise {
            assumptions: assumptions.into_iter().collect(),
            conclusion,
        }
    }

    /// A premise with no assumptions, `▷ q`.
    pub fn bare(conclusion: Atom) -> Premise {
        Premise {
            assumptions: AtomMultiset::new(),
            conclusion,
        }
    }
}

impl fmt::Display for Premise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.assumptions.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}} > {}", self.conclusion)
    }
}

/// A second-level rule `(Q₁ ▷ q₁, …, Qₙ ▷ qₙ) ⇒ q`. Premise order is kept
/// as given; two rules whose premises differ only in order are the same
/// rule for membership purposes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AtomicRule {
    pub premises: Vec<Premise>,
    pub conclusion: Atom,
}

impl AtomicRule {
    pub fn new(premises: Vec<Premise>, conclusion: Atom) -> AtomicRule {
        AtomicRule {
            premises,
            conclusion,
        }
    }

    pub fn axiom(conclusion: Atom) -> AtomicRule {
        AtomicRule {
            premises: Vec::new(),
            conclusion,
        }
    }

    /// Order-insensitive identity used for deduplication.
    pub fn canonical(&self) -> AtomicRule {
        let mut premises = self.premises.clone();
        premises.sort();
        AtomicRule {
            premises,
            conclusion: self.conclusion.clone(),
        }
    }

    /// The rule as read under the set discipline: assumption multisets
    /// collapse to sets.
    pub fn as_set_rule(&self) -> AtomicRule {
        AtomicRule {
            premises: self
                .premises
                .iter()
                .map(|p| Premise {
                    assumptions: p.assumptions.support(),
                    conclusion: p.conclusion.clone(),
                })
                .collect(),
            conclusion: self.conclusion.clone(),
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        out.insert(self.conclusion.clone());
        for p in &self.premises {
            out.insert(p.conclusion.clone());
            out.extend(p.assumptions.iter().cloned());
        }
        out
    }
}

impl fmt::Display for AtomicRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.premises.is_empty() {
            f.write_str("(")?;
            for (i, p) in self.premises.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(") ")?;
        }
        write!(f, "=> {}", self.conclusion)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleParseError {
    #[error("missing `=>` in rule `{0}`")]
    MissingArrow(String),
    #[error("malformed premise `{0}`; expected `{{a,b}} > c`")]
    BadPremise(String),
    #[error("premise list must be parenthesised: `{0}`")]
    BadPremiseList(String),
    #[error(transparent)]
    Atom(#[from] ParseError),
    #[error("line {line}: {source}")]
    Line {
        line: usize,
        #[source]
        source: Box<RuleParseError>,
    },
}

fn single_atom(text: &str) -> Result<Atom, RuleParseError> {
    let atoms = parse_atom_list(text, true)?;
    match atoms.as_slice() {
        [a] => Ok(a.clone()),
        _ => Err(RuleParseError::BadPremise(text.to_string())),
    }
}

impl FromStr for AtomicRule {
    type Err = RuleParseError;

    /// Parses `({p1,p2} > q, {} > r) => s` or the axiom form `=> q`.
    /// Reserved `#` atoms are admitted since built bases contain them.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let (lhs, rhs) = text
            .split_once("=>")
            .ok_or_else(|| RuleParseError::MissingArrow(text.to_string()))?;
        let conclusion = single_atom(rhs)?;
        let lhs = lhs.trim();
        if lhs.is_empty() {
            return Ok(AtomicRule::axiom(conclusion));
        }
        let inner = lhs
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| RuleParseError::BadPremiseList(lhs.to_string()))?;
        let mut premises = Vec::new();
        let mut rest = inner.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('{')
                .ok_or_else(|| RuleParseError::BadPremise(rest.to_string()))?;
            let close = body
                .find('}')
                .ok_or_else(|| RuleParseError::BadPremise(rest.to_string()))?;
            let assumptions = parse_atom_list(&body[..close], true)?;
            let after = body[close + 1..]
                .trim_start()
                .strip_prefix('>')
                .ok_or_else(|| RuleParseError::BadPremise(rest.to_string()))?;
            let (head, tail) = match after.find(',') {
                Some(i) => (&after[..i], after[i + 1..].trim_start()),
                None => (after, ""),
            };
            if tail.is_empty() && after.trim_end().ends_with(',') {
                return Err(RuleParseError::BadPremise(rest.to_string()));
            }
            premises.push(Premise::new(assumptions, single_atom(head)?));
            rest = tail;
        }
        if premises.is_empty() {
            return Err(RuleParseError::BadPremiseList(lhs.to_string()));
        }
        Ok(AtomicRule::new(premises, conclusion))
    }
}

impl Serialize for AtomicRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AtomicRule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A finite base: a duplicate-free rule collection under one discipline.
#[derive(Clone, Debug)]
pub struct Base {
    discipline: Discipline,
    rules: Vec<AtomicRule>,
    index: HashMap<AtomicRule, usize>,
    by_conclusion: HashMap<Atom, Vec<usize>>,
}

impl PartialEq for Base {
    fn eq(&self, other: &Self) -> bool {
        self.discipline == other.discipline
            && self.rules.len() == other.rules.len()
            && self.is_subset_of(other)
    }
}

impl Eq for Base {}

impl Base {
    pub fn new(discipline: Discipline) -> Base {
        Base {
            discipline,
            rules: Vec::new(),
            index: HashMap::new(),
            by_conclusion: HashMap::new(),
        }
    }

    pub fn from_rules(discipline: Discipline, rules: impl IntoIterator<Item = AtomicRule>) -> Base {
        let mut b = Base::new(discipline);
        for r in rules {
            b.insert(r);
        }
        b
    }

    fn normalise(&self, rule: AtomicRule) -> AtomicRule {
        match self.discipline {
            Discipline::Multiset => rule,
            Discipline::Set => rule.as_set_rule(),
        }
    }

    /// Adds a rule; returns false if an equal rule was already present.
    pub fn insert(&mut self, rule: AtomicRule) -> bool {
        let rule = self.normalise(rule);
        let key = rule.canonical();
        if self.index.contains_key(&key) {
            return false;
        }
        let i = self.rules.len();
        self.index.insert(key, i);
        self.by_conclusion
            .entry(rule.conclusion.clone())
            .or_default()
            .push(i);
        self.rules.push(rule);
        true
    }

    pub fn discipline(&self) -> Discipline {
        self.discipline
    }

    pub fn rules(&self) -> &[AtomicRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rule(&self, i: usize) -> &AtomicRule {
        &self.rules[i]
    }

    /// Position of a rule (up to premise order), if present.
    pub fn position(&self, rule: &AtomicRule) -> Option<usize> {
        self.index
            .get(&self.normalise(rule.clone()).canonical())
            .copied()
    }

    pub fn contains(&self, rule: &AtomicRule) -> bool {
        self.position(rule).is_some()
    }

    /// Indices of the rules concluding `atom`, in insertion order.
    pub fn rules_for(&self, atom: &Atom) -> &[usize] {
        self.by_conclusion.get(atom).map_or(&[], Vec::as_slice)
    }

    pub fn is_subset_of(&self, other: &Base) -> bool {
        self.rules.iter().all(|r| other.contains(r))
    }

    /// `self ∪ extra` (an extension of `self`).
    pub fn extended(&self, extra: impl IntoIterator<Item = AtomicRule>) -> Base {
        let mut b = self.clone();
        for r in extra {
            b.insert(r);
        }
        b
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.rules.iter().flat_map(AtomicRule::atoms).collect()
    }

    /// The canonical forms of the rules, sorted: equal for equal bases.
    pub fn canonical_rules(&self) -> Vec<AtomicRule> {
        let mut v: Vec<AtomicRule> = self.index.keys().cloned().collect();
        v.sort();
        v
    }

    /// Renders the base in the line-oriented rule format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.rules {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses the line-oriented rule format; blank lines and lines starting
    /// with `#` are ignored.
    pub fn parse(text: &str, discipline: Discipline) -> Result<Base, RuleParseError> {
        let mut b = Base::new(discipline);
        for (i, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let rule: AtomicRule = t.parse().map_err(|e| RuleParseError::Line {
                line: i + 1,
                source: Box::new(e),
            })?;
            b.insert(rule);
        }
        Ok(b)
    }
}
