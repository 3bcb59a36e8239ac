//! Least-fixed-point solving of AND/OR graphs given by an expansion
//! function: a state holds once every subgoal of one of its alternatives
//! holds. Used by the sequent provers, whose search spaces are finite.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;
use std::sync::Arc;

use crate::outcome::Outcome;

/// A solved state with the alternative that established it.
#[derive(Debug)]
pub(crate) struct Solved<S, R> {
    pub state: S,
    pub rule: R,
    pub children: Vec<Arc<Solved<S, R>>>,
}

struct Alt<R> {
    owner: usize,
    rule: R,
    subgoals: Vec<usize>,
    pending: usize,
}

/// Explores breadth-first from `root`, stopping as soon as the root is
/// established. `expand` lists the alternatives of a state; an alternative
/// with no subgoals is an axiom. `work` bounds states plus alternatives.
pub(crate) fn solve<S, R>(
    root: S,
    mut expand: impl FnMut(&S) -> Vec<(R, Vec<S>)>,
    work: u64,
) -> Outcome<Arc<Solved<S, R>>>
where
    S: Clone + Eq + Hash,
    R: Clone,
{
    let mut states: Vec<S> = vec![root.clone()];
    let mut index: HashMap<S, usize> = HashMap::from([(root, 0)]);
    let mut just: Vec<Option<usize>> = vec![None];
    let mut waiters: Vec<Vec<usize>> = vec![Vec::new()];
    let mut alts: Vec<Alt<R>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    let mut spent = 1u64;

    while let Some(s) = queue.pop_front() {
        if just[0].is_some() {
            break;
        }
        if just[s].is_some() {
            continue;
        }
        if spent > work {
            return Outcome::BudgetExhausted;
        }
        let state = states[s].clone();
        for (rule, subs) in expand(&state) {
            spent += 1;
            let mut ids = Vec::with_capacity(subs.len());
            for sub in subs {
                let id = match index.get(&sub) {
                    Some(&id) => id,
                    None => {
                        let id = states.len();
                        index.insert(sub.clone(), id);
                        states.push(sub);
                        just.push(None);
                        waiters.push(Vec::new());
                        queue.push_back(id);
                        spent += 1;
                        id
                    }
                };
                ids.push(id);
            }
            let a = alts.len();
            let pending = ids.iter().filter(|&&g| just[g].is_none()).count();
            for &g in &ids {
                if just[g].is_none() {
                    waiters[g].push(a);
                }
            }
            alts.push(Alt {
                owner: s,
                rule,
                subgoals: ids,
                pending,
            });
            if pending == 0 {
                let mut stack = vec![(s, a)];
                while let Some((st, alt)) = stack.pop() {
                    if just[st].is_some() {
                        continue;
                    }
                    just[st] = Some(alt);
                    for w in std::mem::take(&mut waiters[st]) {
                        let alt = &mut alts[w];
                        alt.pending -= 1;
                        if alt.pending == 0 && just[alt.owner].is_none() {
                            stack.push((alt.owner, w));
                        }
                    }
                }
                break;
            }
        }
    }

    if just[0].is_none() {
        return Outcome::NotFound;
    }
    let mut memo: HashMap<usize, Arc<Solved<S, R>>> = HashMap::new();
    Outcome::Found(rebuild(0, &states, &just, &alts, &mut memo))
}

fn rebuild<S: Clone, R: Clone>(
    s: usize,
    states: &[S],
    just: &[Option<usize>],
    alts: &[Alt<R>],
    memo: &mut HashMap<usize, Arc<Solved<S, R>>>,
) -> Arc<Solved<S, R>> {
    if let Some(d) = memo.get(&s) {
        return d.clone();
    }
    let alt = &alts[just[s].expect("justified")];
    let children = alt
        .subgoals
        .iter()
        .map(|&g| rebuild(g, states, just, alts, memo))
        .collect();
    let out = Arc::new(Solved {
        state: states[s].clone(),
        rule: alt.rule.clone(),
        children,
    });
    memo.insert(s, out.clone());
    out
}
