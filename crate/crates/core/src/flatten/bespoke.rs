use std::collections::{BTreeSet, HashMap};

use super::map::{FlattenError, Flattening};
use crate::base::{check_derivation, AtomicRule, Base, Derivation, Discipline, Premise};
use crate::calculus::{adjust, Proof, Rule};
use crate::syntax::{Atom, Formula, Logic, Multiset, Sequent};

/// Which rule schema of a bespoke base produced a rule instance. Formula
/// fields are the domain members the instance was built from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    LolliI { a: Formula, b: Formula },
    LolliE { a: Formula, b: Formula },
    TensorI { a: Formula, b: Formula },
    TensorE { a: Formula, b: Formula, p: Atom },
    UnitI,
    UnitE { p: Atom },
    AndI { a: Formula, b: Formula },
    AndE1 { a: Formula, b: Formula },
    AndE2 { a: Formula, b: Formula },
    AndE { a: Formula, b: Formula, p: Atom },
    ImpI { a: Formula, b: Formula },
    ImpE { a: Formula, b: Formula },
    OrI1 { a: Formula, b: Formula },
    OrI2 { a: Formula, b: Formula },
    OrE { a: Formula, b: Formula, p: Atom },
    Efq { p: Atom },
}

impl Origin {
    /// Short label of the schema, e.g. `tensor-e`.
    pub fn label(&self) -> &'static str {
        match self {
            Origin::LolliI { .. } => "lolli-i",
            Origin::LolliE { .. } => "lolli-e",
            Origin::TensorI { .. } => "tensor-i",
            Origin::TensorE { .. } => "tensor-e",
            Origin::UnitI => "unit-i",
            Origin::UnitE { .. } => "unit-e",
            Origin::AndI { .. } => "and-i",
            Origin::AndE1 { .. } => "and-e1",
            Origin::AndE2 { .. } => "and-e2",
            Origin::AndE { .. } => "and-e",
            Origin::ImpI { .. } => "imp-i",
            Origin::ImpE { .. } => "imp-e",
            Origin::OrI1 { .. } => "or-i1",
            Origin::OrI2 { .. } => "or-i2",
            Origin::OrE { .. } => "or-e",
            Origin::Efq { .. } => "efq",
        }
    }
}

/// How the IPL base treats conjunction elimination: two projections, or a
/// single rule discharging both conjuncts into an arbitrary atomic goal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum ConjunctionMode {
    #[default]
    Standard,
    Generalized,
}

/// A bespoke base together with the flattening it encodes and the origin
/// of each rule.
#[derive(Clone, Debug)]
pub struct BespokeBase {
    pub logic: Logic,
    pub map: Flattening,
    pub base: Base,
    origins: HashMap<AtomicRule, Origin>,
}

impl BespokeBase {
    pub fn origin(&self, rule: &AtomicRule) -> Option<&Origin> {
        let key = match self.base.discipline() {
            Discipline::Multiset => rule.canonical(),
            Discipline::Set => rule.as_set_rule().canonical(),
        };
        self.origins.get(&key)
    }

    /// Flattens a sequent whose formulas lie in the domain.
    pub fn flatten_sequent(
        &self,
        s: &Sequent,
    ) -> Result<(crate::syntax::AtomMultiset, Atom), FlattenError> {
        let ctx = self.map.apply_flat(&s.context)?;
        let goal = self.map.flat(&s.conclusion)?.clone();
        Ok((ctx, goal))
    }

    /// Turns a derivation in this base into a calculus proof of
    /// `resources♮ ▷ goal♮`, case by case on the origin of each rule.
    pub fn extract_proof(&self, d: &Derivation) -> Result<Proof, FlattenError> {
        check_derivation(&self.base, d).map_err(|e| FlattenError::Unchecked(e.to_string()))?;
        self.extract(d)
    }

    fn extract(&self, d: &Derivation) -> Result<Proof, FlattenError> {
        let logic = self.logic;
        let m = &self.map;
        let ctx_of = |atoms: &crate::syntax::AtomMultiset| m.apply_deflat(atoms);
        let seq = |ctx: Multiset<Formula>, goal: Formula| Sequent {
            context: ctx,
            conclusion: goal,
            logic,
        };
        let ax = |f: Formula| Proof::new(Rule::Ax, seq(Multiset::singleton(f.clone()), f), vec![]);
        let (rule, resources, goal, premises) = match d {
            Derivation::Ref { resources, atom } => {
                let p = ax(m.deflat(atom));
                return Ok(match logic {
                    Logic::Imll => p,
                    Logic::Ipl => adjust(p, &ctx_of(resources)),
                });
            }
            Derivation::App {
                rule,
                resources,
                goal,
                premises,
            } => (rule, resources, goal, premises),
        };
        let origin = self
            .origin(rule)
            .ok_or_else(|| FlattenError::UnknownRule(rule.to_string()))?;
        let here = ctx_of(resources);
        let target = m.deflat(goal);
        // Premise subderivations located by their (assumptions, conclusion);
        // identical premises are taken in order.
        let used = std::cell::RefCell::new(vec![false; rule.premises.len()]);
        let sub = |assumptions: &[&Formula], concl: &Formula| -> Result<Proof, FlattenError> {
            let want_a: crate::syntax::AtomMultiset = assumptions.iter().map(|f| m.fl(f)).collect();
            let want_a = if logic == Logic::Ipl {
                want_a.support()
            } else {
                want_a
            };
            let want_c = match concl.as_atom() {
                Some(a) if !m.domain().contains(concl) => a.clone(),
                _ => m.fl(concl),
            };
            let (i, _) = rule
                .premises
                .iter()
                .enumerate()
                .find(|(i, p)| {
                    !used.borrow()[*i] && p.assumptions == want_a && p.conclusion == want_c
                })
                .ok_or_else(|| FlattenError::UnknownRule(rule.to_string()))?;
            used.borrow_mut()[i] = true;
            let p = self.extract(&premises[i].derivation)?;
            let mut ctx = ctx_of(&premises[i].share);
            if logic == Logic::Ipl {
                ctx.extend(assumptions.iter().map(|f| (*f).clone()));
                Ok(adjust(p, &ctx))
            } else {
                Ok(p)
            }
        };
        let p_formula = |p: &Atom| m.deflat(p);
        let node = |r: Rule, children: Vec<Proof>| {
            let ctx = match r {
                Rule::LolliI | Rule::ImpI => here.clone(),
                _ => Multiset::union_all(children.iter().map(|c| &c.conclusion.context)),
            };
            Proof::new(r, seq(ctx, target.clone()), children)
        };
        let built = match origin {
            Origin::LolliI { a, b } => node(Rule::LolliI, vec![sub(&[a], b)?]),
            Origin::LolliE { a, b } => node(
                Rule::LolliE,
                vec![
                    sub(&[], &Formula::lolli(a.clone(), b.clone()))?,
                    sub(&[], a)?,
                ],
            ),
            Origin::TensorI { a, b } => node(Rule::TensorI, vec![sub(&[], a)?, sub(&[], b)?]),
            Origin::TensorE { a, b, p } => {
                let t = Formula::tensor(a.clone(), b.clone());
                let minor = sub(&[a, b], &p_formula(p))?;
                let major = sub(&[], &t)?;
                let delta = minor
                    .conclusion
                    .context
                    .difference(&Multiset::from_iter([a.clone(), b.clone()]))
                    .expect("minor premise assumes both components");
                let ctx = major.conclusion.context.union(&delta);
                Proof::new(Rule::TensorE, seq(ctx, target.clone()), vec![major, minor])
            }
            Origin::UnitI => node(Rule::UnitI, vec![]),
            Origin::UnitE { p } => node(
                Rule::UnitE,
                vec![sub(&[], &Formula::Unit)?, sub(&[], &p_formula(p))?],
            ),
            Origin::AndI { a, b } => node(Rule::AndI, vec![sub(&[], a)?, sub(&[], b)?]),
            Origin::AndE1 { a, b } => node(
                Rule::AndE1,
                vec![sub(&[], &Formula::and(a.clone(), b.clone()))?],
            ),
            Origin::AndE2 { a, b } => node(
                Rule::AndE2,
                vec![sub(&[], &Formula::and(a.clone(), b.clone()))?],
            ),
            Origin::AndE { a, b, p } => {
                let major = sub(&[], &Formula::and(a.clone(), b.clone()))?;
                let minor = sub(&[a, b], &p_formula(p))?;
                let delta = minor
                    .conclusion
                    .context
                    .difference(&Multiset::from_iter([a.clone(), b.clone()]))
                    .expect("minor premise assumes both conjuncts");
                let ctx = major.conclusion.context.union(&delta);
                Proof::new(Rule::AndE, seq(ctx, target.clone()), vec![major, minor])
            }
            Origin::ImpI { a, b } => node(Rule::ImpI, vec![sub(&[a], b)?]),
            Origin::ImpE { a, b } => node(
                Rule::ImpE,
                vec![sub(&[], &Formula::imp(a.clone(), b.clone()))?, sub(&[], a)?],
            ),
            Origin::OrI1 { a, .. } => node(Rule::OrI1, vec![sub(&[], a)?]),
            Origin::OrI2 { b, .. } => node(Rule::OrI2, vec![sub(&[], b)?]),
            Origin::OrE { a, b, p } => {
                let major = sub(&[], &Formula::or(a.clone(), b.clone()))?;
                let left = sub(&[a], &p_formula(p))?;
                let right = sub(&[b], &p_formula(p))?;
                let delta = left
                    .conclusion
                    .context
                    .difference(&Multiset::singleton(a.clone()))
                    .expect("left case assumes the left disjunct");
                let ctx = major.conclusion.context.union(&delta);
                Proof::new(
                    Rule::OrE,
                    seq(ctx, target.clone()),
                    vec![major, left, right],
                )
            }
            Origin::Efq { .. } => node(Rule::FalsumE, vec![sub(&[], &Formula::Falsum)?]),
        };
        Ok(match logic {
            Logic::Imll => built,
            Logic::Ipl => adjust(built, &here),
        })
    }
}

struct Builder<'m> {
    map: &'m Flattening,
    base: Base,
    origins: HashMap<AtomicRule, Origin>,
}

impl<'m> Builder<'m> {
    fn add(&mut self, rule: AtomicRule, origin: Origin) {
        let key = match self.base.discipline() {
            Discipline::Multiset => rule.canonical(),
            Discipline::Set => rule.as_set_rule().canonical(),
        };
        if self.base.insert(rule) {
            self.origins.insert(key, origin);
        }
    }

    fn fl(&self, f: &Formula) -> Atom {
        self.map.fl(f)
    }

    fn finish(self, logic: Logic) -> BespokeBase {
        BespokeBase {
            logic,
            map: self.map.clone(),
            base: self.base,
            origins: self.origins,
        }
    }
}

fn bare(a: Atom) -> Premise {
    Premise::bare(a)
}

fn alphabet_with_image(m: &Flattening, alphabet: &BTreeSet<Atom>) -> BTreeSet<Atom> {
    let mut out = alphabet.clone();
    out.extend(m.image());
    out
}

/// The IMLL bespoke base: every rule-schema instance whose compound formula
/// lies in the domain, with the schematic atom of the two elimination
/// schemas ranging over `alphabet ∪ image(♭)`.
pub fn build_base_m(m: &Flattening, alphabet: &BTreeSet<Atom>) -> BespokeBase {
    let alphabet = alphabet_with_image(m, alphabet);
    let mut b = Builder {
        map: m,
        base: Base::new(Discipline::Multiset),
        origins: HashMap::new(),
    };
    for f in m.domain().canonical_order() {
        let here = b.fl(f);
        match f {
            Formula::Lolli(x, y) => {
                let (x, y) = ((**x).clone(), (**y).clone());
                let (fx, fy) = (b.fl(&x), b.fl(&y));
                b.add(
                    AtomicRule::new(vec![Premise::new([fx.clone()], fy.clone())], here.clone()),
                    Origin::LolliI {
                        a: x.clone(),
                        b: y.clone(),
                    },
                );
                b.add(
                    AtomicRule::new(vec![bare(here), bare(fx)], fy),
                    Origin::LolliE { a: x, b: y },
                );
            }
            Formula::Tensor(x, y) => {
                let (x, y) = ((**x).clone(), (**y).clone());
                let (fx, fy) = (b.fl(&x), b.fl(&y));
                b.add(
                    AtomicRule::new(vec![bare(fx.clone()), bare(fy.clone())], here.clone()),
                    Origin::TensorI {
                        a: x.clone(),
                        b: y.clone(),
                    },
                );
                for p in &alphabet {
                    b.add(
                        AtomicRule::new(
                            vec![
                                bare(here.clone()),
                                Premise::new([fx.clone(), fy.clone()], p.clone()),
                            ],
                            p.clone(),
                        ),
                        Origin::TensorE {
                            a: x.clone(),
                            b: y.clone(),
                            p: p.clone(),
                        },
                    );
                }
            }
            Formula::Unit => {
                b.add(AtomicRule::axiom(here.clone()), Origin::UnitI);
                for p in &alphabet {
                    b.add(
                        AtomicRule::new(vec![bare(here.clone()), bare(p.clone())], p.clone()),
                        Origin::UnitE { p: p.clone() },
                    );
                }
            }
            _ => {}
        }
    }
    b.finish(Logic::Imll)
}

/// The IPL bespoke base, set discipline.
pub fn build_base_n(
    m: &Flattening,
    alphabet: &BTreeSet<Atom>,
    mode: ConjunctionMode,
) -> BespokeBase {
    let alphabet = alphabet_with_image(m, alphabet);
    let mut b = Builder {
        map: m,
        base: Base::new(Discipline::Set),
        origins: HashMap::new(),
    };
    for f in m.domain().canonical_order() {
        let here = b.fl(f);
        match f {
            Formula::And(x, y) => {
                let (x, y) = ((**x).clone(), (**y).clone());
                let (fx, fy) = (b.fl(&x), b.fl(&y));
                b.add(
                    AtomicRule::new(vec![bare(fx.clone()), bare(fy.clone())], here.clone()),
                    Origin::AndI {
                        a: x.clone(),
                        b: y.clone(),
                    },
                );
                match mode {
                    ConjunctionMode::Standard => {
                        b.add(
                            AtomicRule::new(vec![bare(here.clone())], fx.clone()),
                            Origin::AndE1 {
                                a: x.clone(),
                                b: y.clone(),
                            },
                        );
                        b.add(
                            AtomicRule::new(vec![bare(here.clone())], fy.clone()),
                            Origin::AndE2 {
                                a: x.clone(),
                                b: y.clone(),
                            },
                        );
                    }
                    ConjunctionMode::Generalized => {
                        for p in &alphabet {
                            b.add(
                                AtomicRule::new(
                                    vec![
                                        bare(here.clone()),
                                        Premise::new([fx.clone(), fy.clone()], p.clone()),
                                    ],
                                    p.clone(),
                                ),
                                Origin::AndE {
                                    a: x.clone(),
                                    b: y.clone(),
                                    p: p.clone(),
                                },
                            );
                        }
                    }
                }
            }
            Formula::Imp(x, y) => {
                let (x, y) = ((**x).clone(), (**y).clone());
                let (fx, fy) = (b.fl(&x), b.fl(&y));
                b.add(
                    AtomicRule::new(vec![Premise::new([fx.clone()], fy.clone())], here.clone()),
                    Origin::ImpI {
                        a: x.clone(),
                        b: y.clone(),
                    },
                );
                b.add(
                    AtomicRule::new(vec![bare(fx), bare(here)], fy),
                    Origin::ImpE { a: x, b: y },
                );
            }
            Formula::Or(x, y) => {
                let (x, y) = ((**x).clone(), (**y).clone());
                let (fx, fy) = (b.fl(&x), b.fl(&y));
                b.add(
                    AtomicRule::new(vec![bare(fx.clone())], here.clone()),
                    Origin::OrI1 {
                        a: x.clone(),
                        b: y.clone(),
                    },
                );
                b.add(
                    AtomicRule::new(vec![bare(fy.clone())], here.clone()),
                    Origin::OrI2 {
                        a: x.clone(),
                        b: y.clone(),
                    },
                );
                for p in &alphabet {
                    b.add(
                        AtomicRule::new(
                            vec![
                                bare(here.clone()),
                                Premise::new([fx.clone()], p.clone()),
                                Premise::new([fy.clone()], p.clone()),
                            ],
                            p.clone(),
                        ),
                        Origin::OrE {
                            a: x.clone(),
                            b: y.clone(),
                            p: p.clone(),
                        },
                    );
                }
            }
            Formula::Falsum => {
                for p in &alphabet {
                    b.add(
                        AtomicRule::new(vec![bare(here.clone())], p.clone()),
                        Origin::Efq { p: p.clone() },
                    );
                }
            }
            _ => {}
        }
    }
    b.finish(Logic::Ipl)
}
