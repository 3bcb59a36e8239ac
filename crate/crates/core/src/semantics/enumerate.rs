use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::base::{AtomicRule, Base, Discipline, Premise};
use crate::syntax::{Atom, AtomMultiset, Sequent};

/// Bounds on the finite stand-ins for the universal quantifiers of the
/// support clauses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumeratorBounds {
    /// Rules added to the seed base per extension.
    pub max_rules: usize,
    pub max_premises: usize,
    /// Size of each premise's assumption multiset.
    pub max_assumptions: usize,
    /// Size of the resource multisets `U` ranged over by IMLL clauses.
    pub max_resources: usize,
}

impl Default for EnumeratorBounds {
    fn default() -> Self {
        EnumeratorBounds {
            max_rules: 2,
            max_premises: 2,
            max_assumptions: 2,
            max_resources: 3,
        }
    }
}

/// The atoms of `s` plus one atom not occurring in it (`r`, or `r0`, `r1`,
/// … if taken).
pub fn default_alphabet(s: &Sequent) -> Vec<Atom> {
    let mut atoms: Vec<Atom> = s.atoms().into_iter().collect();
    let fresh = std::iter::once("r".to_string())
        .chain((0..).map(|i| format!("r{i}")))
        .map(|n| Atom::new(&n))
        .find(|a| !atoms.contains(a))
        .expect("unbounded supply of names");
    atoms.push(fresh);
    atoms
}

/// Every multiset over `alphabet` of size at most `n`, by size and then
/// lexicographically.
pub fn multisets_upto(alphabet: &[Atom], n: usize) -> Vec<AtomMultiset> {
    let mut out = vec![AtomMultiset::new()];
    let mut layer: Vec<(usize, AtomMultiset)> = vec![(0, AtomMultiset::new())];
    for _ in 0..n {
        let mut next = Vec::new();
        for (start, m) in &layer {
            for (i, a) in alphabet.iter().enumerate().skip(*start) {
                let mut m2 = m.clone();
                m2.insert(a.clone());
                next.push((i, m2));
            }
        }
        out.extend(next.iter().map(|(_, m)| m.clone()));
        layer = next;
    }
    out
}

/// All rules over `alphabet` within the bounds, axioms first, then by
/// number of premises. Premise lists are taken as multisets, and the
/// identity rule `(▷ p) ⇒ p` is left out since it never changes
/// derivability.
pub fn candidate_rules(
    alphabet: &[Atom],
    bounds: &EnumeratorBounds,
    discipline: Discipline,
) -> Vec<AtomicRule> {
    let assumptions: Vec<AtomMultiset> = multisets_upto(alphabet, bounds.max_assumptions)
        .into_iter()
        .filter(|m| discipline == Discipline::Multiset || m.is_set())
        .collect();
    let premises: Vec<Premise> = assumptions
        .iter()
        .flat_map(|a| {
            alphabet.iter().map(move |c| Premise {
                assumptions: a.clone(),
                conclusion: c.clone(),
            })
        })
        .collect();
    let mut out = Vec::new();
    for k in 0..=bounds.max_premises {
        let mut idx = vec![0usize; k];
        loop {
            for c in alphabet {
                let ps: Vec<Premise> = idx.iter().map(|&i| premises[i].clone()).collect();
                if k == 1 && ps[0].assumptions.is_empty() && &ps[0].conclusion == c {
                    continue;
                }
                out.push(AtomicRule::new(ps, c.clone()));
            }
            // next nondecreasing index tuple
            let Some(pos) = (0..k).rev().find(|&i| idx[i] + 1 < premises.len()) else {
                break;
            };
            let v = idx[pos] + 1;
            idx[pos..].iter_mut().for_each(|x| *x = v);
        }
    }
    out
}

/// One emitted extension: the rules added to the seed and the resulting
/// base.
#[derive(Clone, Debug)]
pub struct Extension {
    pub added: Vec<AtomicRule>,
    pub base: Base,
}

/// Size of a rule for enumeration order: one for the rule plus one per
/// premise and per assumption.
pub fn rule_weight(r: &AtomicRule) -> usize {
    1 + r
        .premises
        .iter()
        .map(|p| 1 + p.assumptions.len())
        .sum::<usize>()
}

/// Candidate rules with their weights, shared between enumerators.
#[derive(Clone, Debug)]
pub struct CandidatePool {
    rules: Vec<AtomicRule>,
    weights: Vec<usize>,
    /// Candidate indices by weight, ascending.
    buckets: Vec<Vec<usize>>,
    index: HashMap<AtomicRule, usize>,
}

impl CandidatePool {
    pub fn new(rules: Vec<AtomicRule>) -> CandidatePool {
        let weights: Vec<usize> = rules.iter().map(rule_weight).collect();
        let mut buckets = vec![Vec::new(); weights.iter().max().map_or(0, |w| w + 1)];
        for (i, &w) in weights.iter().enumerate() {
            buckets[w].push(i);
        }
        let index = rules
            .iter()
            .enumerate()
            .map(|(i, r)| (r.canonical(), i))
            .collect();
        CandidatePool {
            rules,
            weights,
            buckets,
            index,
        }
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
}

/// Deterministic stream of extensions of a seed base: the seed itself,
/// then every set of at most `max_rules` candidate rules, by total rule
/// weight and then by candidate position. Candidates already in the seed
/// are skipped.
#[derive(Clone, Debug)]
pub struct ExtensionEnumerator {
    seed: Base,
    pool: Arc<CandidatePool>,
    skip: Vec<usize>,
    max_rules: usize,
    max_total: usize,
    emitted: usize,
    total: usize,
    level: std::vec::IntoIter<Vec<usize>>,
    started: bool,
}

impl ExtensionEnumerator {
    pub fn new(seed: &Base, alphabet: &[Atom], bounds: &EnumeratorBounds) -> ExtensionEnumerator {
        let pool = CandidatePool::new(candidate_rules(alphabet, bounds, seed.discipline()));
        Self::with_pool(seed, Arc::new(pool), bounds.max_rules)
    }

    /// Shares a precomputed candidate pool.
    pub fn with_pool(
        seed: &Base,
        pool: Arc<CandidatePool>,
        max_rules: usize,
    ) -> ExtensionEnumerator {
        let mut skip: Vec<usize> = seed
            .rules()
            .iter()
            .filter_map(|r| pool.index.get(&r.canonical()).copied())
            .collect();
        skip.sort_unstable();
        let mut sorted = pool.weights.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let max_total = sorted.iter().take(max_rules).sum();
        ExtensionEnumerator {
            seed: seed.clone(),
            pool,
            skip,
            max_rules,
            max_total,
            emitted: 0,
            total: 0,
            level: Vec::new().into_iter(),
            started: false,
        }
    }

    pub fn seed(&self) -> &Base {
        &self.seed
    }

    /// Number of extensions emitted so far.
    pub fn position(&self) -> usize {
        self.emitted
    }

    /// All index sets of at most `max_rules` candidates with weight sum
    /// `total`, in lexicographic order.
    fn level_sets(&self, total: usize) -> Vec<Vec<usize>> {
        struct Walk<'a> {
            buckets: &'a [Vec<usize>],
            skip: &'a [usize],
            out: Vec<Vec<usize>>,
        }
        impl Walk<'_> {
            // Indices increase along a set, so each set is built once.
            fn rec(&mut self, min_index: usize, left: usize, room: usize, acc: &mut Vec<usize>) {
                if left == 0 {
                    if !acc.is_empty() {
                        self.out.push(acc.clone());
                    }
                    return;
                }
                if room == 0 {
                    return;
                }
                for w in 1..=left.min(self.buckets.len().saturating_sub(1)) {
                    let bucket = &self.buckets[w];
                    let from = bucket.partition_point(|&i| i < min_index);
                    for &i in &bucket[from..] {
                        if self.skip.binary_search(&i).is_ok() {
                            continue;
                        }
                        acc.push(i);
                        self.rec(i + 1, left - w, room - 1, acc);
                        acc.pop();
                    }
                }
            }
        }
        let mut walk = Walk {
            buckets: &self.pool.buckets,
            skip: &self.skip,
            out: Vec::new(),
        };
        walk.rec(0, total, self.max_rules, &mut Vec::new());
        let mut out = walk.out;
        out.sort_unstable();
        out
    }
}

impl Iterator for ExtensionEnumerator {
    type Item = Extension;

    fn next(&mut self) -> Option<Extension> {
        if !self.started {
            self.started = true;
            self.emitted += 1;
            return Some(Extension {
                added: Vec::new(),
                base: self.seed.clone(),
            });
        }
        loop {
            if let Some(set) = self.level.next() {
                let added: Vec<AtomicRule> =
                    set.iter().map(|&i| self.pool.rules[i].clone()).collect();
                self.emitted += 1;
                let base = self.seed.extended(added.iter().cloned());
                return Some(Extension { added, base });
            }
            if self.total >= self.max_total {
                return None;
            }
            self.total += 1;
            self.level = self.level_sets(self.total).into_iter();
        }
    }
}
