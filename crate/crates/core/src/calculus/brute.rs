use std::collections::HashMap;

use crate::syntax::{enumerate_splits, subformulas, Formula, Logic, Multiset, Sequent};

type Ctx = Multiset<Formula>;

/// Whether some IMLL natural-deduction proof of `s` of height at most
/// `depth` exists, by exhaustive backward enumeration of every rule
/// instance. Elimination rules need a formula not visible in their
/// conclusion; candidates are drawn from the subformulas of `s`. Intended
/// as a slow, independent test oracle.
pub fn brute_force_prove(s: &Sequent, depth: usize) -> bool {
    assert_eq!(
        s.logic,
        Logic::Imll,
        "brute_force_prove expects an IMLL sequent"
    );
    let closure = subformulas(s);
    let lollis: Vec<(Formula, Formula)> = closure
        .iter()
        .filter_map(|f| match f {
            Formula::Lolli(a, b) => Some(((**a).clone(), (**b).clone())),
            _ => None,
        })
        .collect();
    let tensors: Vec<(Formula, Formula, Formula)> = closure
        .iter()
        .filter_map(|f| match f {
            Formula::Tensor(a, b) => Some((f.clone(), (**a).clone(), (**b).clone())),
            _ => None,
        })
        .collect();
    let mut oracle = Oracle {
        lollis,
        tensors,
        has_unit: closure.contains(&Formula::Unit),
        memo: HashMap::new(),
    };
    oracle.provable(&s.context, &s.conclusion, depth)
}

struct Oracle {
    lollis: Vec<(Formula, Formula)>,
    tensors: Vec<(Formula, Formula, Formula)>,
    has_unit: bool,
    memo: HashMap<(Ctx, Formula, usize), bool>,
}

impl Oracle {
    fn provable(&mut self, ctx: &Ctx, goal: &Formula, depth: usize) -> bool {
        if depth == 0 {
            return false;
        }
        let key = (ctx.clone(), goal.clone(), depth);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let v = self.search(ctx, goal, depth);
        self.memo.insert(key, v);
        v
    }

    fn search(&mut self, ctx: &Ctx, goal: &Formula, depth: usize) -> bool {
        let d = depth - 1;
        // ax, unit-i
        if ctx.len() == 1 && ctx.contains(goal) {
            return true;
        }
        if ctx.is_empty() && *goal == Formula::Unit {
            return true;
        }
        if d == 0 {
            return false;
        }
        // lolli-i
        if let Formula::Lolli(a, b) = goal {
            let mut c = ctx.clone();
            c.insert((**a).clone());
            if self.provable(&c, b, d) {
                return true;
            }
        }
        let splits = enumerate_splits(ctx, 2);
        // tensor-i
        if let Formula::Tensor(a, b) = goal {
            for sp in &splits {
                if self.provable(&sp[0], a, d) && self.provable(&sp[1], b, d) {
                    return true;
                }
            }
        }
        // lolli-e, with every antecedent whose implication is a subformula
        let antecedents: Vec<Formula> = self
            .lollis
            .iter()
            .filter(|(_, b)| b == goal)
            .map(|(a, _)| a.clone())
            .collect();
        for a in antecedents {
            let imp = Formula::lolli(a.clone(), goal.clone());
            for sp in &splits {
                if self.provable(&sp[0], &imp, d) && self.provable(&sp[1], &a, d) {
                    return true;
                }
            }
        }
        // unit-e
        if self.has_unit {
            for sp in &splits {
                if self.provable(&sp[0], &Formula::Unit, d) && self.provable(&sp[1], goal, d) {
                    return true;
                }
            }
        }
        // tensor-e
        for (t, a, b) in self.tensors.clone() {
            for sp in &splits {
                if !self.provable(&sp[0], &t, d) {
                    continue;
                }
                let mut c = sp[1].clone();
                c.insert(a.clone());
                c.insert(b.clone());
                if self.provable(&c, goal, d) {
                    return true;
                }
            }
        }
        false
    }
}
