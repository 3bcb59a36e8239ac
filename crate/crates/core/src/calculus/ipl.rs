//! IPL decision procedure.
//!
//! Search runs on a sequent calculus with set-valued contexts whose left
//! rules keep their principal formula (so contraction is built in). A
//! premise never loses hypotheses, every formula is a subformula of the
//! input, and the least fixed point over the resulting finite graph is
//! computed directly; repeated sequents on a branch are thereby cut off and
//! `NotFound` is definitive. Found derivations are rewritten into natural
//! deduction, with explicit weakening and contraction reconciling set and
//! multiset contexts.

use std::collections::BTreeSet;

use super::imll::ProverBudget;
use super::proof::{Proof, Rule};
use crate::andor::{solve, Solved};
use crate::outcome::Outcome;
use crate::syntax::{Formula, Logic, Multiset, Sequent};

type Ctx = Multiset<Formula>;
type State = (BTreeSet<Formula>, Formula);

#[derive(Clone, Debug)]
enum SeqRule {
    Init,
    FalsumL,
    AndL(Formula),
    ImpR,
    AndR,
    OrL(Formula),
    OrR1,
    OrR2,
    ImpL(Formula),
}

pub fn prove_ipl(s: &Sequent, budget: &ProverBudget) -> Outcome<Proof> {
    assert_eq!(s.logic, Logic::Ipl, "prove_ipl expects an IPL sequent");
    let ctx: BTreeSet<Formula> = s.context.entries().map(|(f, _)| f.clone()).collect();
    solve((ctx, s.conclusion.clone()), expand, budget.work).map(|t| {
        let p = translate(&t);
        adjust(p, &s.context)
    })
}

fn plus(ctx: &BTreeSet<Formula>, extra: &[&Formula]) -> BTreeSet<Formula> {
    let mut out = ctx.clone();
    out.extend(extra.iter().map(|f| (*f).clone()));
    out
}

fn expand(state: &State) -> Vec<(SeqRule, Vec<State>)> {
    let (ctx, goal) = state;
    if ctx.contains(goal) {
        return vec![(SeqRule::Init, vec![])];
    }
    if ctx.contains(&Formula::Falsum) {
        return vec![(SeqRule::FalsumL, vec![])];
    }
    for f in ctx {
        if let Formula::And(a, b) = f {
            if !ctx.contains(a) || !ctx.contains(b) {
                return vec![(
                    SeqRule::AndL(f.clone()),
                    vec![(plus(ctx, &[a, b]), goal.clone())],
                )];
            }
        }
    }
    if let Formula::Imp(a, b) = goal {
        return vec![(SeqRule::ImpR, vec![(plus(ctx, &[a]), (**b).clone())])];
    }
    if let Formula::And(a, b) = goal {
        return vec![(
            SeqRule::AndR,
            vec![(ctx.clone(), (**a).clone()), (ctx.clone(), (**b).clone())],
        )];
    }
    for f in ctx {
        if let Formula::Or(a, b) = f {
            if !ctx.contains(a) && !ctx.contains(b) {
                return vec![(
                    SeqRule::OrL(f.clone()),
                    vec![
                        (plus(ctx, &[a]), goal.clone()),
                        (plus(ctx, &[b]), goal.clone()),
                    ],
                )];
            }
        }
    }
    let mut alts = Vec::new();
    if let Formula::Or(a, b) = goal {
        alts.push((SeqRule::OrR1, vec![(ctx.clone(), (**a).clone())]));
        alts.push((SeqRule::OrR2, vec![(ctx.clone(), (**b).clone())]));
    }
    for f in ctx {
        if let Formula::Imp(a, b) = f {
            if !ctx.contains(b) {
                alts.push((
                    SeqRule::ImpL(f.clone()),
                    vec![
                        (ctx.clone(), (**a).clone()),
                        (plus(ctx, &[b]), goal.clone()),
                    ],
                ));
            }
        }
    }
    alts
}

fn seq(ctx: Ctx, goal: Formula) -> Sequent {
    Sequent {
        context: ctx,
        conclusion: goal,
        logic: Logic::Ipl,
    }
}

fn ax(f: &Formula) -> Proof {
    Proof::new(Rule::Ax, seq(Ctx::singleton(f.clone()), f.clone()), vec![])
}

fn as_ctx(set: &BTreeSet<Formula>) -> Ctx {
    set.iter().cloned().collect()
}

/// Reshapes `p`'s context into `target` with contractions then one
/// weakening. Every formula of `p`'s context must occur in `target`.
pub(crate) fn adjust(mut p: Proof, target: &Ctx) -> Proof {
    let goal = p.conclusion.conclusion.clone();
    loop {
        let ctx = &p.conclusion.context;
        let mut delta = Ctx::new();
        for (f, n) in ctx.entries() {
            let keep = target.count(f).max(1);
            if n > keep {
                delta.insert_n(f.clone(), (n - keep).min(n / 2));
            }
        }
        if delta.is_empty() {
            break;
        }
        let reduced = ctx
            .difference(&delta)
            .expect("delta is drawn from the context");
        p = Proof::new(Rule::Contract, seq(reduced, goal.clone()), vec![p]);
    }
    let missing = target
        .difference(&p.conclusion.context)
        .expect("target covers the contracted context");
    if !missing.is_empty() {
        p = Proof::new(Rule::Weaken, seq(target.clone(), goal), vec![p]);
    }
    p
}

fn translate(t: &Solved<State, SeqRule>) -> Proof {
    let (set, goal) = &t.state;
    let gamma = as_ctx(set);
    let child = |i: usize| translate(&t.children[i]);
    let with = |extra: &[&Formula]| {
        let mut c = gamma.clone();
        for f in extra {
            c.insert((*f).clone());
        }
        c
    };
    let built = match &t.rule {
        SeqRule::Init => ax(goal),
        SeqRule::FalsumL => Proof::new(
            Rule::FalsumE,
            seq(Ctx::singleton(Formula::Falsum), goal.clone()),
            vec![ax(&Formula::Falsum)],
        ),
        SeqRule::AndL(principal) => {
            let Formula::And(a, b) = principal else {
                unreachable!()
            };
            let body = adjust(child(0), &with(&[a, b]));
            Proof::new(
                Rule::AndE,
                seq(with(&[principal]), goal.clone()),
                vec![ax(principal), body],
            )
        }
        SeqRule::ImpR => {
            let Formula::Imp(a, _) = goal else {
                unreachable!()
            };
            let body = adjust(child(0), &with(&[a]));
            Proof::new(Rule::ImpI, seq(gamma.clone(), goal.clone()), vec![body])
        }
        SeqRule::AndR => {
            let (l, r) = (child(0), child(1));
            let ctx = l.conclusion.context.union(&r.conclusion.context);
            Proof::new(Rule::AndI, seq(ctx, goal.clone()), vec![l, r])
        }
        SeqRule::OrL(principal) => {
            let Formula::Or(a, b) = principal else {
                unreachable!()
            };
            let l = adjust(child(0), &with(&[a]));
            let r = adjust(child(1), &with(&[b]));
            Proof::new(
                Rule::OrE,
                seq(with(&[principal]), goal.clone()),
                vec![ax(principal), l, r],
            )
        }
        SeqRule::OrR1 | SeqRule::OrR2 => {
            let c = child(0);
            let rule = if matches!(t.rule, SeqRule::OrR1) {
                Rule::OrI1
            } else {
                Rule::OrI2
            };
            Proof::new(
                rule,
                seq(c.conclusion.context.clone(), goal.clone()),
                vec![c],
            )
        }
        SeqRule::ImpL(principal) => {
            let Formula::Imp(_, b) = principal else {
                unreachable!()
            };
            let arg = child(0);
            let mut applied_ctx = arg.conclusion.context.clone();
            applied_ctx.insert(principal.clone());
            let applied = Proof::new(
                Rule::ImpE,
                seq(applied_ctx, (**b).clone()),
                vec![ax(principal), arg],
            );
            let cont = adjust(child(1), &with(&[b]));
            let abstracted = Proof::new(
                Rule::ImpI,
                seq(gamma.clone(), Formula::imp((**b).clone(), goal.clone())),
                vec![cont],
            );
            let ctx = abstracted
                .conclusion
                .context
                .union(&applied.conclusion.context);
            Proof::new(
                Rule::ImpE,
                seq(ctx, goal.clone()),
                vec![abstracted, applied],
            )
        }
    };
    adjust(built, &gamma)
}
