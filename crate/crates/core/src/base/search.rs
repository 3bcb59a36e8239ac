//! Derivability search.
//!
//! A query `S ⊢_B q` is answered by exploring the graph of statements
//! reachable backwards from it (each rule instance and resource split is an
//! alternative whose subgoals are further statements) while propagating the
//! least fixed point forwards: a statement becomes derivable once `Ref`
//! applies or every subgoal of one of its alternatives is derivable. The
//! first justification recorded for a statement is always built from
//! statements justified earlier, so derivations are reconstructed without
//! cycles.
//!
//! Under the set discipline the reachable graph is finite and the answer is
//! exact. Under the multiset discipline premise assumptions can make
//! resources grow without bound; statements whose resources exceed a cap are
//! left unexpanded and the report flags the answer as non-exhaustive.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use super::derivation::{Derivation, PremiseDerivation};
use super::rule::{Base, Discipline};
use crate::outcome::Outcome;
use crate::syntax::{enumerate_splits, Atom, AtomMultiset};

/// Search limits. `work` bounds explored statements plus alternatives;
/// `max_resources` caps the resource size of expanded statements (multiset
/// discipline only; `None` picks the default described on [`Deriver`]).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub work: u64,
    pub max_resources: Option<usize>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            work: 1_000_000,
            max_resources: None,
        }
    }
}

impl Limits {
    pub fn with_work(work: u64) -> Limits {
        Limits {
            work,
            ..Limits::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeriveError {
    #[error("set-discipline query with repeated resources {0:?}")]
    DisciplineMismatch(AtomMultiset),
}

/// Diagnostics for the last query.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchReport {
    /// Statements in the search graph after the query.
    pub states: usize,
    /// Whether some statement reachable from the query was left unexpanded
    /// because of the resource cap. `NotFound` is exact only when false.
    pub truncated: bool,
}

type StateId = usize;

#[derive(Clone, Copy, Debug)]
enum Justification {
    Ref,
    Alt(usize),
}

struct State {
    resources: AtomMultiset,
    goal: Atom,
    alts: Vec<usize>,
    expanded: bool,
    truncated: bool,
    just: Option<Justification>,
}

struct Alternative {
    owner: StateId,
    rule: usize,
    shares: Vec<AtomMultiset>,
    subgoals: Vec<StateId>,
    pending: usize,
}

/// A derivability engine bound to one base. Explored statements and their
/// status persist across queries, so repeated queries against the same base
/// are cheap.
///
/// The default resource cap for a multiset query is the query's resource
/// size plus the total size of the distinct premise-assumption multisets in
/// the base, i.e. room for every kind of hypothesis to be introduced once.
pub struct Deriver<'b> {
    base: &'b Base,
    limits: Limits,
    cap: usize,
    states: Vec<State>,
    index: HashMap<(AtomMultiset, Atom), StateId>,
    alts: Vec<Alternative>,
    waiters: Vec<Vec<usize>>,
    reach: HashMap<Atom, BTreeSet<Atom>>,
    empty_derivable: BTreeSet<Atom>,
    weights: Vec<HashMap<Atom, i64>>,
    assumption_slack: usize,
    work: u64,
    last: SearchReport,
}

impl<'b> Deriver<'b> {
    pub fn new(base: &'b Base, limits: Limits) -> Deriver<'b> {
        let distinct: BTreeSet<&AtomMultiset> = base
            .rules()
            .iter()
            .flat_map(|r| r.premises.iter().map(|p| &p.assumptions))
            .collect();
        let assumption_slack = distinct.iter().map(|q| q.len()).sum();
        Deriver {
            base,
            limits,
            cap: 0,
            states: Vec::new(),
            index: HashMap::new(),
            alts: Vec::new(),
            waiters: Vec::new(),
            reach: reach_table(base),
            empty_derivable: empty_derivable(base),
            weights: match base.discipline() {
                Discipline::Multiset => balanced_weights(base),
                Discipline::Set => Vec::new(),
            },
            assumption_slack,
            work: 0,
            last: SearchReport::default(),
        }
    }

    pub fn base(&self) -> &'b Base {
        self.base
    }

    pub fn last_report(&self) -> SearchReport {
        self.last
    }

    /// Decides `resources ⊢_B goal`.
    pub fn derive(
        &mut self,
        resources: &AtomMultiset,
        goal: &Atom,
    ) -> Result<Outcome<Derivation>, DeriveError> {
        let set = self.base.discipline() == Discipline::Set;
        if set && !resources.is_set() {
            return Err(DeriveError::DisciplineMismatch(resources.clone()));
        }
        let cap = self
            .limits
            .max_resources
            .unwrap_or(resources.len() + self.assumption_slack);
        self.cap = self.cap.max(cap);
        let root = self.intern(resources.clone(), goal.clone());
        let exhausted = self.explore(root);
        let truncated = self.closure_truncated(root);
        self.last = SearchReport {
            states: self.states.len(),
            truncated,
        };
        if self.states[root].just.is_some() {
            let mut memo = HashMap::new();
            return Ok(Outcome::Found((*self.rebuild(root, &mut memo)).clone()));
        }
        Ok(if exhausted {
            Outcome::BudgetExhausted
        } else {
            Outcome::NotFound
        })
    }

    /// Convenience wrapper returning only the verdict.
    pub fn derivable(&mut self, resources: &AtomMultiset, goal: &Atom) -> Option<bool> {
        self.derive(resources, goal).ok().and_then(|o| o.verdict())
    }

    fn intern(&mut self, resources: AtomMultiset, goal: Atom) -> StateId {
        if let Some(&id) = self.index.get(&(resources.clone(), goal.clone())) {
            return id;
        }
        let id = self.states.len();
        self.index.insert((resources.clone(), goal.clone()), id);
        self.states.push(State {
            resources,
            goal,
            alts: Vec::new(),
            expanded: false,
            truncated: false,
            just: None,
        });
        self.waiters.push(Vec::new());
        self.work += 1;
        id
    }

    /// Breadth-first expansion from `root` until it is derivable or its
    /// reachable graph is exhausted. Returns true if the work budget ran out.
    fn explore(&mut self, root: StateId) -> bool {
        let mut queue = VecDeque::from([root]);
        let mut seen = vec![false; self.states.len()];
        seen[root] = true;
        while let Some(s) = queue.pop_front() {
            if self.states[root].just.is_some() {
                return false;
            }
            if self.work > self.limits.work {
                return true;
            }
            if !self.states[s].expanded && self.states[s].just.is_none() {
                self.expand(s);
            }
            let subgoals: Vec<StateId> = self.states[s]
                .alts
                .iter()
                .flat_map(|&a| self.alts[a].subgoals.iter().copied())
                .collect();
            for g in subgoals {
                if seen.len() <= g {
                    seen.resize(self.states.len(), false);
                }
                if !seen[g] && self.states[g].just.is_none() {
                    seen[g] = true;
                    queue.push_back(g);
                }
            }
        }
        false
    }

    fn expand(&mut self, s: StateId) {
        self.states[s].expanded = true;
        let set = self.base.discipline() == Discipline::Set;
        let (resources, goal) = (
            self.states[s].resources.clone(),
            self.states[s].goal.clone(),
        );
        let ref_applies = if set {
            resources.contains(&goal)
        } else {
            resources.len() == 1 && resources.contains(&goal)
        };
        if ref_applies {
            self.mark(s, Justification::Ref);
            return;
        }
        if !set && !self.plausible(&resources, &goal) {
            return;
        }
        if !set && resources.len() > self.cap {
            self.states[s].truncated = true;
            return;
        }
        for &ri in self.base.rules_for(&goal) {
            let rule = self.base.rule(ri);
            let n = rule.premises.len();
            let splits = if set || n == 0 {
                vec![vec![resources.clone(); n]]
            } else {
                enumerate_splits(&resources, n)
            };
            if n == 0 && !set && !resources.is_empty() {
                continue;
            }
            'split: for shares in splits {
                let mut keys = Vec::with_capacity(n);
                for (share, prem) in shares.iter().zip(&rule.premises) {
                    let mut r = share.union(&prem.assumptions);
                    if set {
                        r = r.support();
                    } else if !self.plausible(&r, &prem.conclusion) {
                        continue 'split;
                    }
                    keys.push((r, prem.conclusion.clone()));
                }
                let subgoals: Vec<StateId> =
                    keys.into_iter().map(|(r, g)| self.intern(r, g)).collect();
                let id = self.alts.len();
                self.work += 1;
                let pending = subgoals
                    .iter()
                    .filter(|&&g| self.states[g].just.is_none())
                    .count();
                for &g in &subgoals {
                    if self.states[g].just.is_none() {
                        self.waiters[g].push(id);
                    }
                }
                self.alts.push(Alternative {
                    owner: s,
                    rule: ri,
                    shares,
                    subgoals,
                    pending,
                });
                self.states[s].alts.push(id);
                if pending == 0 {
                    self.mark(s, Justification::Alt(id));
                    return;
                }
            }
        }
    }

    /// Necessary conditions for `resources ⊢ goal` under the multiset
    /// discipline: every resource atom must be consumable by some `Ref` leaf
    /// reachable from `goal`, an empty resource multiset needs a goal
    /// that can possibly be derived from nothing, and every balanced
    /// weighting must give resources and goal the same weight.
    fn plausible(&self, resources: &AtomMultiset, goal: &Atom) -> bool {
        if resources.is_empty() {
            return self.empty_derivable.contains(goal) && self.balanced(resources, goal);
        }
        if resources.len() == 1 && resources.contains(goal) {
            return true;
        }
        if !self.balanced(resources, goal) {
            return false;
        }
        match self.reach.get(goal) {
            Some(r) => resources.entries().all(|(a, _)| r.contains(a)),
            None => false,
        }
    }

    fn balanced(&self, resources: &AtomMultiset, goal: &Atom) -> bool {
        let at = |w: &HashMap<Atom, i64>, a: &Atom| w.get(a).copied().unwrap_or(0);
        self.weights.iter().all(|w| {
            let total: i64 = resources.entries().map(|(a, n)| at(w, a) * n as i64).sum();
            total == at(w, goal)
        })
    }

    fn mark(&mut self, s: StateId, j: Justification) {
        let mut stack = vec![(s, j)];
        while let Some((s, j)) = stack.pop() {
            if self.states[s].just.is_some() {
                continue;
            }
            self.states[s].just = Some(j);
            for a in std::mem::take(&mut self.waiters[s]) {
                let alt = &mut self.alts[a];
                alt.pending -= 1;
                if alt.pending == 0 && self.states[alt.owner].just.is_none() {
                    stack.push((alt.owner, Justification::Alt(a)));
                }
            }
        }
    }

    fn closure_truncated(&self, root: StateId) -> bool {
        if self.states[root].just.is_some() {
            return false;
        }
        let mut seen = vec![false; self.states.len()];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(s) = stack.pop() {
            let st = &self.states[s];
            if st.truncated || !st.expanded {
                return true;
            }
            for &a in &st.alts {
                for &g in &self.alts[a].subgoals {
                    if !seen[g] {
                        seen[g] = true;
                        stack.push(g);
                    }
                }
            }
        }
        false
    }

    fn rebuild(&self, s: StateId, memo: &mut HashMap<StateId, Arc<Derivation>>) -> Arc<Derivation> {
        if let Some(d) = memo.get(&s) {
            return d.clone();
        }
        let st = &self.states[s];
        let d = match st.just.expect("justified state") {
            Justification::Ref => Derivation::Ref {
                resources: st.resources.clone(),
                atom: st.goal.clone(),
            },
            Justification::Alt(a) => {
                let alt = &self.alts[a];
                let premises = alt
                    .shares
                    .iter()
                    .zip(&alt.subgoals)
                    .map(|(share, &g)| PremiseDerivation {
                        share: share.clone(),
                        derivation: self.rebuild(g, memo),
                    })
                    .collect();
                Derivation::App {
                    rule: self.base.rule(alt.rule).clone(),
                    resources: st.resources.clone(),
                    goal: st.goal.clone(),
                    premises,
                }
            }
        };
        let d = Arc::new(d);
        memo.insert(s, d.clone());
        d
    }
}

/// For each atom `x`, the atoms that can occur as a subgoal of `x`
/// (reflexively): the only places a resource atom can be consumed.
fn reach_table(base: &Base) -> HashMap<Atom, BTreeSet<Atom>> {
    let mut edges: HashMap<&Atom, BTreeSet<&Atom>> = HashMap::new();
    for r in base.rules() {
        let e = edges.entry(&r.conclusion).or_default();
        for p in &r.premises {
            e.insert(&p.conclusion);
        }
    }
    let mut atoms: BTreeSet<&Atom> = edges.keys().copied().collect();
    for r in base.rules() {
        for p in &r.premises {
            atoms.insert(&p.conclusion);
        }
    }
    let mut out = HashMap::new();
    for &a in &atoms {
        let mut seen: BTreeSet<Atom> = BTreeSet::new();
        let mut stack = vec![a];
        seen.insert(a.clone());
        while let Some(x) = stack.pop() {
            if let Some(next) = edges.get(x) {
                for &y in next {
                    if seen.insert(y.clone()) {
                        stack.push(y);
                    }
                }
            }
        }
        out.insert(a.clone(), seen);
    }
    out
}

/// A basis of the integer weightings `w` of the base's atoms with
/// `w(q) = Σ (w(pᵢ) - w(Qᵢ))` for every rule `(Q₁▷p₁, …) ⇒ q`. Induction
/// on derivations shows `w(S) = w(q)` whenever `S ⊢ q` under the multiset
/// discipline. Atoms outside the base are unconstrained, so they are left
/// to the reachability test.
fn balanced_weights(base: &Base) -> Vec<HashMap<Atom, i64>> {
    let atoms: Vec<Atom> = base.atoms().into_iter().collect();
    let col: HashMap<&Atom, usize> = atoms.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mut rows: Vec<Vec<i128>> = base
        .rules()
        .iter()
        .map(|r| {
            let mut row = vec![0i128; atoms.len()];
            row[col[&r.conclusion]] += 1;
            for p in &r.premises {
                row[col[&p.conclusion]] -= 1;
                for (a, n) in p.assumptions.entries() {
                    row[col[a]] += n as i128;
                }
            }
            row
        })
        .collect();
    let pivots = row_reduce(&mut rows, atoms.len());
    let pivot_cols: BTreeSet<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in (0..atoms.len()).filter(|c| !pivot_cols.contains(c)) {
        let scale = pivots
            .iter()
            .fold(1i128, |l, &(r, c)| lcm(l, rows[r][c].abs()));
        let mut v = vec![0i128; atoms.len()];
        v[free] = scale;
        for &(r, c) in &pivots {
            v[c] = -rows[r][free] * scale / rows[r][c];
        }
        let g = v.iter().fold(0i128, |g, &x| gcd(g, x.abs()));
        basis.push(
            atoms
                .iter()
                .zip(&v)
                .filter(|(_, &x)| x != 0)
                .map(|(a, &x)| (a.clone(), i64::try_from(x / g).expect("weight fits in i64")))
                .collect(),
        );
    }
    basis
}

/// Integer row reduction to a form where each pivot column is zero outside
/// its pivot row. Returns `(row, column)` of each pivot.
fn row_reduce(rows: &mut [Vec<i128>], width: usize) -> Vec<(usize, usize)> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for c in 0..width {
        let Some(r) = (next..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(next, r);
        for other in 0..rows.len() {
            if other == next || rows[other][c] == 0 {
                continue;
            }
            let (p, f) = (rows[next][c], rows[other][c]);
            for k in 0..width {
                rows[other][k] = rows[other][k] * p - rows[next][k] * f;
            }
            let g = rows[other].iter().fold(0i128, |g, &x| gcd(g, x.abs()));
            if g > 1 {
                rows[other].iter_mut().for_each(|x| *x /= g);
            }
        }
        pivots.push((next, c));
        next += 1;
    }
    pivots
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i128, b: i128) -> i128 {
    a / gcd(a, b) * b
}

/// Over-approximation of the atoms derivable from no resources.
fn empty_derivable(base: &Base) -> BTreeSet<Atom> {
    let mut e: BTreeSet<Atom> = BTreeSet::new();
    loop {
        let mut changed = false;
        for r in base.rules() {
            if e.contains(&r.conclusion) {
                continue;
            }
            let ok = r
                .premises
                .iter()
                .all(|p| !p.assumptions.is_empty() || e.contains(&p.conclusion));
            if ok {
                e.insert(r.conclusion.clone());
                changed = true;
            }
        }
        if !changed {
            return e;
        }
    }
}

/// One-shot derivability query.
pub fn derive(
    base: &Base,
    resources: &AtomMultiset,
    goal: &Atom,
    limits: &Limits,
) -> Result<Outcome<Derivation>, DeriveError> {
    Deriver::new(base, *limits).derive(resources, goal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{check_derivation, AtomicRule};

    fn at(s: &str) -> Atom {
        Atom::new(s)
    }

    fn ms(items: &[&str]) -> AtomMultiset {
        items.iter().map(|s| at(s)).collect()
    }

    fn base(d: Discipline, rules: &[&str]) -> Base {
        Base::from_rules(d, rules.iter().map(|r| r.parse::<AtomicRule>().unwrap()))
    }

    fn run(b: &Base, s: &[&str], g: &str) -> Outcome<Derivation> {
        let out = derive(b, &ms(s), &at(g), &Limits::default()).unwrap();
        if let Outcome::Found(d) = &out {
            assert!(check_derivation(b, d).is_ok(), "{d:?}");
            assert_eq!(d.resources(), &ms(s));
            assert_eq!(d.goal(), &at(g));
        }
        out
    }

    #[test]
    fn basic_cases() {
        let empty = Base::new(Discipline::Multiset);
        assert!(matches!(
            run(&empty, &["q"], "q"),
            Outcome::Found(Derivation::Ref { .. })
        ));
        assert_eq!(run(&empty, &["p", "p"], "p"), Outcome::NotFound);
        let ax = base(Discipline::Multiset, &["=> p"]);
        assert!(matches!(
            run(&ax, &[], "p"),
            Outcome::Found(Derivation::App { .. })
        ));
        assert_eq!(run(&ax, &["p"], "p").verdict(), Some(true));
        assert_eq!(run(&ax, &["q"], "p"), Outcome::NotFound);
    }

    #[test]
    fn set_discipline_allows_weakening() {
        let b = Base::new(Discipline::Set);
        assert!(run(&b, &["p", "q"], "q").is_found());
        let err = derive(&b, &ms(&["p", "p"]), &at("p"), &Limits::default());
        assert!(matches!(err, Err(DeriveError::DisciplineMismatch(_))));
    }

    #[test]
    fn hypothetical_premises() {
        let b = base(
            Discipline::Multiset,
            &["({a} > b) => c", "({} > a, {} > a) => b"],
        );
        assert_eq!(run(&b, &["a"], "c").verdict(), Some(true));
        assert_eq!(run(&b, &[], "c").verdict(), Some(false));
        let s = base(
            Discipline::Set,
            &["({a} > b) => c", "({} > a, {} > a) => b"],
        );
        assert_eq!(run(&s, &[], "c").verdict(), Some(true));
    }

    #[test]
    fn cycles_terminate() {
        let b = base(Discipline::Multiset, &["({} > p) => q", "({} > q) => p"]);
        assert_eq!(run(&b, &["r"], "p"), Outcome::NotFound);
        assert_eq!(run(&b, &["q"], "p").verdict(), Some(true));
        let grow = base(Discipline::Multiset, &["({p} > q) => q"]);
        let mut d = Deriver::new(&grow, Limits::default());
        assert_eq!(d.derive(&ms(&["r"]), &at("q")).unwrap(), Outcome::NotFound);
    }

    #[test]
    fn persistent_deriver_agrees_with_fresh_queries() {
        let b = base(
            Discipline::Multiset,
            &[
                "({} > a, {} > b) => c",
                "({} > c) => d",
                "=> a",
                "({x} > b) => b",
            ],
        );
        let mut d = Deriver::new(&b, Limits::default());
        for (s, g) in [
            (&["b"][..], "c"),
            (&[][..], "c"),
            (&["b"][..], "d"),
            (&["a", "b"][..], "c"),
        ] {
            let shared = d.derive(&ms(s), &at(g)).unwrap().verdict();
            assert_eq!(shared, run(&b, s, g).verdict(), "{s:?} {g}");
        }
    }

    #[test]
    fn balanced_weights_are_invariant_under_rules() {
        let b = base(
            Discipline::Multiset,
            &[
                "({} > a, {} > b) => t",
                "({} > t, {a, b} > x) => x",
                "({a} > b) => l",
                "({} > l, {} > a) => b",
            ],
        );
        let ws = balanced_weights(&b);
        assert!(!ws.is_empty());
        let at = |w: &HashMap<Atom, i64>, s: &str| w.get(&at(s)).copied().unwrap_or(0);
        for w in &ws {
            assert_eq!(at(w, "t"), at(w, "a") + at(w, "b"));
            assert_eq!(at(w, "l"), at(w, "b") - at(w, "a"));
        }
        assert_eq!(run(&b, &["a", "a"], "t"), Outcome::NotFound);
        assert_eq!(b.rules().len(), 4);
        assert_eq!(run(&b, &["a", "b"], "t").verdict(), Some(true));
    }

    #[test]
    fn work_budget_reports_exhaustion() {
        let b = base(
            Discipline::Multiset,
            &["({} > p, {} > p) => p", "({} > q) => p"],
        );
        let out = derive(&b, &ms(&["q"; 12]), &at("p"), &Limits::with_work(5)).unwrap();
        assert_eq!(out, Outcome::BudgetExhausted);
    }
}
