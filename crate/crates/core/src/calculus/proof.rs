use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};
use thiserror::Error;

use crate::syntax::{parse_sequent_with, Logic, ParseError, Sequent};

/// Natural-deduction rules: the IMLL rules, the IPL rules, and the two
/// structural rules that only IPL admits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Ax,
    LolliI,
    LolliE,
    UnitI,
    UnitE,
    TensorI,
    TensorE,
    ImpI,
    ImpE,
    AndI,
    /// Elimination into a hypothetical premise, shaped like `TensorE`.
    AndE,
    AndE1,
    AndE2,
    OrI1,
    OrI2,
    OrE,
    FalsumE,
    Weaken,
    Contract,
}

impl Rule {
    pub const ALL: [Rule; 19] = [
        Rule::Ax,
        Rule::LolliI,
        Rule::LolliE,
        Rule::UnitI,
        Rule::UnitE,
        Rule::TensorI,
        Rule::TensorE,
        Rule::ImpI,
        Rule::ImpE,
        Rule::AndI,
        Rule::AndE,
        Rule::AndE1,
        Rule::AndE2,
        Rule::OrI1,
        Rule::OrI2,
        Rule::OrE,
        Rule::FalsumE,
        Rule::Weaken,
        Rule::Contract,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Ax => "ax",
            Rule::LolliI => "lolli-i",
            Rule::LolliE => "lolli-e",
            Rule::UnitI => "unit-i",
            Rule::UnitE => "unit-e",
            Rule::TensorI => "tensor-i",
            Rule::TensorE => "tensor-e",
            Rule::ImpI => "imp-i",
            Rule::ImpE => "imp-e",
            Rule::AndI => "and-i",
            Rule::AndE => "and-e",
            Rule::AndE1 => "and-e1",
            Rule::AndE2 => "and-e2",
            Rule::OrI1 => "or-i1",
            Rule::OrI2 => "or-i2",
            Rule::OrE => "or-e",
            Rule::FalsumE => "falsum-e",
            Rule::Weaken => "w",
            Rule::Contract => "c",
        }
    }

    /// Whether the rule belongs to the calculus for `logic`.
    pub fn allowed_in(self, logic: Logic) -> bool {
        use Rule::*;
        match self {
            Ax => true,
            LolliI | LolliE | UnitI | UnitE | TensorI | TensorE => logic == Logic::Imll,
            _ => logic == Logic::Ipl,
        }
    }

    pub fn arity(self) -> usize {
        use Rule::*;
        match self {
            Ax | UnitI => 0,
            LolliI | ImpI | AndE1 | AndE2 | OrI1 | OrI2 | FalsumE | Weaken | Contract => 1,
            LolliE | UnitE | TensorI | TensorE | ImpE | AndI | AndE => 2,
            OrE => 3,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

/// A natural-deduction proof tree. Each node records the sequent it
/// concludes; premises of eliminations are ordered major premise first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Proof {
    pub rule: Rule,
    pub conclusion: Sequent,
    pub children: Vec<Proof>,
}

impl Proof {
    pub fn new(rule: Rule, conclusion: Sequent, children: Vec<Proof>) -> Proof {
        Proof {
            rule,
            conclusion,
            children,
        }
    }

    pub fn logic(&self) -> Logic {
        self.conclusion.logic
    }

    pub fn height(&self) -> usize {
        1 + self.children.iter().map(Proof::height).max().unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(Proof::node_count).sum::<usize>()
    }

    pub fn node_at(&self, path: &[usize]) -> Option<&Proof> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children.get(i)?.node_at(rest),
        }
    }

    pub fn node_at_mut(&mut self, path: &[usize]) -> Option<&mut Proof> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children.get_mut(i)?.node_at_mut(rest),
        }
    }

    /// Paths of every node in pre-order.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.collect_paths(&mut cur, &mut out);
        out
    }

    fn collect_paths(&self, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for (i, c) in self.children.iter().enumerate() {
            cur.push(i);
            c.collect_paths(cur, out);
            cur.pop();
        }
    }

    /// Rules in pre-order.
    pub fn rules(&self) -> Vec<Rule> {
        let mut out = vec![self.rule];
        for c in &self.children {
            out.extend(c.rules());
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rule": self.rule.name(),
            "sequent": self.conclusion.to_string(),
            "children": self.children.iter().map(Proof::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value, logic: Logic) -> Result<Proof, ProofFormatError> {
        let obj = v
            .as_object()
            .ok_or(ProofFormatError::Shape("node is not an object"))?;
        let rule = obj
            .get("rule")
            .and_then(Value::as_str)
            .ok_or(ProofFormatError::Shape("missing `rule`"))?
            .parse::<Rule>()
            .map_err(ProofFormatError::Rule)?;
        let text = obj
            .get("sequent")
            .and_then(Value::as_str)
            .ok_or(ProofFormatError::Shape("missing `sequent`"))?;
        let conclusion = parse_sequent_with(text, logic, true)?;
        let children = match obj.get("children") {
            None => Vec::new(),
            Some(c) => c
                .as_array()
                .ok_or(ProofFormatError::Shape("`children` is not an array"))?
                .iter()
                .map(|c| Proof::from_json(c, logic))
                .collect::<Result<_, _>>()?,
        };
        Ok(Proof {
            rule,
            conclusion,
            children,
        })
    }

    fn fmt_tree(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        writeln!(
            f,
            "{:indent$}{}  [{}]",
            "",
            self.conclusion,
            self.rule,
            indent = depth * 2
        )?;
        for c in &self.children {
            c.fmt_tree(f, depth + 1)?;
        }
        Ok(())
    }
}

/// Indented tree, conclusion first, one node per line.
impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_tree(f, 0)
    }
}

impl fmt::Debug for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\n{self}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofFormatError {
    #[error("malformed proof document: {0}")]
    Shape(&'static str),
    #[error("{0}")]
    Rule(String),
    #[error(transparent)]
    Sequent(#[from] ParseError),
}
