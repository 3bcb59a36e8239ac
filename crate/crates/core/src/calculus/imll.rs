//! IMLL decision procedure.
//!
//! Search runs on the cut-free two-sided sequent calculus (identity, unit,
//! tensor and linear-implication rules on both sides), applying the
//! invertible rules eagerly. Every rule strictly shrinks the sequent, so the
//! search space is finite and `NotFound` is definitive. A found sequent
//! derivation is then rewritten into a natural-deduction proof.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::proof::{Proof, Rule};
use crate::andor::{solve, Solved};
use crate::outcome::Outcome;
use crate::syntax::{enumerate_splits, Atom, Formula, Logic, Multiset, Sequent};

type Ctx = Multiset<Formula>;
type State = (Ctx, Formula);

#[derive(Clone, Debug)]
enum SeqRule {
    Id,
    UnitR,
    UnitL,
    TensorL(Formula),
    TensorR,
    LolliR,
    LolliL(Formula),
}

/// Budget for the provers: states plus alternatives explored.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProverBudget {
    pub work: u64,
}

impl Default for ProverBudget {
    fn default() -> Self {
        ProverBudget { work: 2_000_000 }
    }
}

/// Decides an IMLL sequent, returning a checked-shape natural-deduction
/// proof when one exists.
pub fn prove(s: &Sequent, budget: &ProverBudget) -> Outcome<Proof> {
    assert_eq!(s.logic, Logic::Imll, "prove expects an IMLL sequent");
    let root: State = (s.context.clone(), s.conclusion.clone());
    if !balanced(&root.0, &root.1) {
        return Outcome::NotFound;
    }
    solve(root, expand, budget.work).map(|t| translate(&t))
}

/// Every atom must occur equally often positively and negatively: each
/// identity axiom consumes one occurrence of each polarity.
fn balanced(ctx: &Ctx, goal: &Formula) -> bool {
    let mut tally: BTreeMap<&Atom, i64> = BTreeMap::new();
    fn walk<'a>(f: &'a Formula, sign: i64, tally: &mut BTreeMap<&'a Atom, i64>) {
        match f {
            Formula::Atom(a) => *tally.entry(a).or_insert(0) += sign,
            Formula::Tensor(l, r) => {
                walk(l, sign, tally);
                walk(r, sign, tally);
            }
            Formula::Lolli(l, r) => {
                walk(l, -sign, tally);
                walk(r, sign, tally);
            }
            _ => {}
        }
    }
    walk(goal, 1, &mut tally);
    for f in ctx.iter() {
        walk(f, -1, &mut tally);
    }
    tally.values().all(|&n| n == 0)
}

fn expand(state: &State) -> Vec<(SeqRule, Vec<State>)> {
    let (ctx, goal) = state;
    if let Formula::Lolli(a, b) = goal {
        return vec![(SeqRule::LolliR, vec![(with(ctx, &[a]), (**b).clone())])];
    }
    if let Some(t) = ctx
        .entries()
        .map(|(f, _)| f)
        .find(|f| matches!(f, Formula::Tensor(..)))
    {
        let Formula::Tensor(a, b) = t else {
            unreachable!()
        };
        let mut rest = ctx.clone();
        rest.remove_one(t);
        return vec![(
            SeqRule::TensorL(t.clone()),
            vec![(with(&rest, &[a, b]), goal.clone())],
        )];
    }
    if ctx.contains(&Formula::Unit) {
        let mut rest = ctx.clone();
        rest.remove_one(&Formula::Unit);
        return vec![(SeqRule::UnitL, vec![(rest, goal.clone())])];
    }
    let mut alts = Vec::new();
    if ctx.len() == 1 && ctx.contains(goal) {
        alts.push((SeqRule::Id, vec![]));
    }
    if ctx.is_empty() && *goal == Formula::Unit {
        alts.push((SeqRule::UnitR, vec![]));
    }
    if let Formula::Tensor(a, b) = goal {
        for split in enumerate_splits(ctx, 2) {
            let (l, r) = (split[0].clone(), split[1].clone());
            if balanced(&l, a) && balanced(&r, b) {
                alts.push((
                    SeqRule::TensorR,
                    vec![(l, (**a).clone()), (r, (**b).clone())],
                ));
            }
        }
    }
    for (imp, _) in ctx.entries() {
        let Formula::Lolli(a, b) = imp else { continue };
        let mut rest = ctx.clone();
        rest.remove_one(imp);
        for split in enumerate_splits(&rest, 2) {
            let left = (split[0].clone(), (**a).clone());
            let right = (with(&split[1], &[b]), goal.clone());
            if balanced(&left.0, &left.1) && balanced(&right.0, &right.1) {
                alts.push((SeqRule::LolliL(imp.clone()), vec![left, right]));
            }
        }
    }
    alts
}

fn with(ctx: &Ctx, extra: &[&Arc<Formula>]) -> Ctx {
    let mut out = ctx.clone();
    for f in extra {
        out.insert((***f).clone());
    }
    out
}

fn seq(ctx: Ctx, goal: Formula) -> Sequent {
    Sequent {
        context: ctx,
        conclusion: goal,
        logic: Logic::Imll,
    }
}

fn ax(f: &Formula) -> Proof {
    Proof::new(Rule::Ax, seq(Ctx::singleton(f.clone()), f.clone()), vec![])
}

/// Rewrites a sequent derivation into natural deduction. Left rules become
/// eliminations whose major premise is an axiom on the principal formula.
fn translate(t: &Solved<State, SeqRule>) -> Proof {
    let (ctx, goal) = &t.state;
    let here = || seq(ctx.clone(), goal.clone());
    match &t.rule {
        SeqRule::Id => ax(goal),
        SeqRule::UnitR => Proof::new(Rule::UnitI, here(), vec![]),
        SeqRule::UnitL => {
            let body = translate(&t.children[0]);
            Proof::new(Rule::UnitE, here(), vec![ax(&Formula::Unit), body])
        }
        SeqRule::TensorL(principal) => {
            let body = translate(&t.children[0]);
            Proof::new(Rule::TensorE, here(), vec![ax(principal), body])
        }
        SeqRule::TensorR => {
            let l = translate(&t.children[0]);
            let r = translate(&t.children[1]);
            Proof::new(Rule::TensorI, here(), vec![l, r])
        }
        SeqRule::LolliR => Proof::new(Rule::LolliI, here(), vec![translate(&t.children[0])]),
        SeqRule::LolliL(principal) => {
            let Formula::Lolli(_, b) = principal else {
                unreachable!()
            };
            let arg = translate(&t.children[0]);
            let cont = translate(&t.children[1]);
            // principal ⨾ Γ ▷ b
            let applied = Proof::new(
                Rule::LolliE,
                seq(
                    with(&arg.conclusion.context, &[&Arc::new(principal.clone())]),
                    (**b).clone(),
                ),
                vec![ax(principal), arg],
            );
            // Δ ▷ b ⊸ goal
            let delta = cont
                .conclusion
                .context
                .difference(&Ctx::singleton((**b).clone()))
                .expect("continuation assumes the consequent");
            let abstracted = Proof::new(
                Rule::LolliI,
                seq(delta, Formula::lolli((**b).clone(), goal.clone())),
                vec![cont],
            );
            Proof::new(Rule::LolliE, here(), vec![abstracted, applied])
        }
    }
}
