use super::proof::{Proof, Rule};
use crate::outcome::{CheckResult, Rejection};
use crate::syntax::{Formula, Multiset, Sequent};

type Ctx = Multiset<Formula>;

/// Verifies that every node of `p` is a correct instance of its rule, with
/// exact multiset bookkeeping of contexts.
pub fn check_proof(p: &Proof) -> CheckResult {
    let mut path = Vec::new();
    check_node(p, p.logic(), &mut path)
}

/// As [`check_proof`], additionally requiring the root to conclude `s`.
pub fn check_proof_of(p: &Proof, s: &Sequent) -> CheckResult {
    if &p.conclusion != s {
        return Err(Rejection::at(
            &[],
            format!("proof concludes {} instead of {}", p.conclusion, s),
        ));
    }
    check_proof(p)
}

fn check_node(p: &Proof, logic: crate::syntax::Logic, path: &mut Vec<usize>) -> CheckResult {
    let fail = |path: &[usize], why: String| Err(Rejection::at(path, why));
    if p.conclusion.logic != logic || !p.conclusion.is_well_formed() {
        return fail(
            path,
            format!(
                "sequent {} is not a well-formed {logic} sequent",
                p.conclusion
            ),
        );
    }
    if !p.rule.allowed_in(logic) {
        return fail(path, format!("rule {} is not a rule of {logic}", p.rule));
    }
    if p.children.len() != p.rule.arity() {
        return fail(
            path,
            format!(
                "rule {} needs {} premises, found {}",
                p.rule,
                p.rule.arity(),
                p.children.len()
            ),
        );
    }
    if let Err(why) = check_instance(p) {
        return fail(path, why);
    }
    for (i, c) in p.children.iter().enumerate() {
        path.push(i);
        check_node(c, logic, path)?;
        path.pop();
    }
    Ok(())
}

fn expect(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

fn with(ctx: &Ctx, extra: &[&Formula]) -> Ctx {
    let mut out = ctx.clone();
    for f in extra {
        out.insert((*f).clone());
    }
    out
}

/// Checks the local rule figure: the node's conclusion against its
/// premises' conclusions.
fn check_instance(p: &Proof) -> Result<(), String> {
    let ctx = &p.conclusion.context;
    let goal = &p.conclusion.conclusion;
    let prem: Vec<&Sequent> = p.children.iter().map(|c| &c.conclusion).collect();
    let ctx_is = |expected: Ctx| {
        expect(&expected == ctx, || {
            format!("context should be {:?}, found {:?}", expected, ctx)
        })
    };
    match p.rule {
        Rule::Ax => expect(ctx.len() == 1 && ctx.contains(goal), || {
            format!("ax must conclude φ ▷ φ, found {}", p.conclusion)
        }),
        Rule::UnitI => expect(ctx.is_empty() && *goal == Formula::Unit, || {
            "unit-i concludes ▷ I".into()
        }),
        Rule::LolliI | Rule::ImpI => {
            let (a, b) = match (p.rule, goal) {
                (Rule::LolliI, Formula::Lolli(a, b)) | (Rule::ImpI, Formula::Imp(a, b)) => (a, b),
                _ => {
                    return Err(format!(
                        "{} must conclude an implication, found {goal}",
                        p.rule
                    ))
                }
            };
            expect(prem[0].conclusion == **b, || {
                format!("premise should conclude {b}")
            })?;
            expect(prem[0].context == with(ctx, &[a]), || {
                format!("premise context should be the conclusion context plus {a}")
            })
        }
        Rule::LolliE | Rule::ImpE => {
            let (a, b) = match (p.rule, &prem[0].conclusion) {
                (Rule::LolliE, Formula::Lolli(a, b)) | (Rule::ImpE, Formula::Imp(a, b)) => (a, b),
                (_, other) => {
                    return Err(format!(
                        "major premise must conclude an implication, found {other}"
                    ))
                }
            };
            expect(&**b == goal, || format!("conclusion should be {b}"))?;
            expect(prem[1].conclusion == **a, || {
                format!("minor premise should conclude {a}")
            })?;
            ctx_is(prem[0].context.union(&prem[1].context))
        }
        Rule::UnitE => {
            expect(prem[0].conclusion == Formula::Unit, || {
                "major premise must conclude I".into()
            })?;
            expect(&prem[1].conclusion == goal, || {
                format!("minor premise should conclude {goal}")
            })?;
            ctx_is(prem[0].context.union(&prem[1].context))
        }
        Rule::TensorI | Rule::AndI => {
            let (a, b) = match (p.rule, goal) {
                (Rule::TensorI, Formula::Tensor(a, b)) | (Rule::AndI, Formula::And(a, b)) => (a, b),
                _ => {
                    return Err(format!(
                        "{} must conclude a conjunction, found {goal}",
                        p.rule
                    ))
                }
            };
            expect(
                prem[0].conclusion == **a && prem[1].conclusion == **b,
                || format!("premises should conclude {a} and {b}"),
            )?;
            ctx_is(prem[0].context.union(&prem[1].context))
        }
        Rule::TensorE | Rule::AndE => {
            let (a, b) = match (p.rule, &prem[0].conclusion) {
                (Rule::TensorE, Formula::Tensor(a, b)) | (Rule::AndE, Formula::And(a, b)) => (a, b),
                (_, other) => {
                    return Err(format!(
                        "major premise must conclude a conjunction, found {other}"
                    ))
                }
            };
            expect(&prem[1].conclusion == goal, || {
                format!("minor premise should conclude {goal}")
            })?;
            let delta = prem[1]
                .context
                .difference(&Ctx::from_iter([(**a).clone(), (**b).clone()]))
                .ok_or_else(|| format!("minor premise must assume {a} and {b}"))?;
            ctx_is(prem[0].context.union(&delta))
        }
        Rule::AndE1 | Rule::AndE2 => {
            let (a, b) = match &prem[0].conclusion {
                Formula::And(a, b) => (a, b),
                other => {
                    return Err(format!(
                        "premise must conclude a conjunction, found {other}"
                    ))
                }
            };
            let want = if p.rule == Rule::AndE1 { a } else { b };
            expect(&**want == goal, || format!("conclusion should be {want}"))?;
            ctx_is(prem[0].context.clone())
        }
        Rule::OrI1 | Rule::OrI2 => {
            let (a, b) = match goal {
                Formula::Or(a, b) => (a, b),
                _ => {
                    return Err(format!(
                        "{} must conclude a disjunction, found {goal}",
                        p.rule
                    ))
                }
            };
            let want = if p.rule == Rule::OrI1 { a } else { b };
            expect(prem[0].conclusion == **want, || {
                format!("premise should conclude {want}")
            })?;
            ctx_is(prem[0].context.clone())
        }
        Rule::OrE => {
            let (a, b) = match &prem[0].conclusion {
                Formula::Or(a, b) => (a, b),
                other => {
                    return Err(format!(
                        "major premise must conclude a disjunction, found {other}"
                    ))
                }
            };
            expect(
                &prem[1].conclusion == goal && &prem[2].conclusion == goal,
                || format!("case premises should conclude {goal}"),
            )?;
            let d1 = prem[1]
                .context
                .difference(&Ctx::singleton((**a).clone()))
                .ok_or_else(|| format!("left case must assume {a}"))?;
            let d2 = prem[2]
                .context
                .difference(&Ctx::singleton((**b).clone()))
                .ok_or_else(|| format!("right case must assume {b}"))?;
            expect(d1 == d2, || {
                "case premises must share their side context".into()
            })?;
            ctx_is(prem[0].context.union(&d1))
        }
        Rule::FalsumE => {
            expect(prem[0].conclusion == Formula::Falsum, || {
                "premise must conclude ⊥".into()
            })?;
            ctx_is(prem[0].context.clone())
        }
        Rule::Weaken => {
            expect(&prem[0].conclusion == goal, || {
                format!("premise should conclude {goal}")
            })?;
            expect(prem[0].context.is_submultiset_of(ctx), || {
                "weakening may only add hypotheses".into()
            })
        }
        Rule::Contract => {
            expect(&prem[0].conclusion == goal, || {
                format!("premise should conclude {goal}")
            })?;
            let delta = prem[0]
                .context
                .difference(ctx)
                .ok_or_else(|| "contraction may only remove hypotheses".to_string())?;
            expect(delta.is_submultiset_of(ctx), || {
                "contraction may only remove duplicated hypotheses".into()
            })
        }
    }
}
