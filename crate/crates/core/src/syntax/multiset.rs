//! Finite multisets with a canonical (sorted) representation.

use std::collections::BTreeMap;
use std::fmt;

/// A finite multiset. Absent elements have multiplicity zero and stored
/// multiplicities are always strictly positive, so structural equality is
/// multiset equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multiset<T: Ord> {
    counts: BTreeMap<T, usize>,
    len: usize,
}

impl<T: Ord> Default for Multiset<T> {
    fn default() -> Self {
        Multiset {
            counts: BTreeMap::new(),
            len: 0,
        }
    }
}

impl<T: Ord + Clone> Multiset<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(item: T) -> Self {
        let mut m = Self::new();
        m.insert(item);
        m
    }

    pub fn insert(&mut self, item: T) {
        self.insert_n(item, 1);
    }

    pub fn insert_n(&mut self, item: T, n: usize) {
        if n == 0 {
            return;
        }
        *self.counts.entry(item).or_insert(0) += n;
        self.len += n;
    }

    /// Removes one occurrence; returns false when the element was absent.
    pub fn remove_one(&mut self, item: &T) -> bool {
        match self.counts.get_mut(item) {
            Some(c) if *c > 1 => {
                *c -= 1;
                self.len -= 1;
                true
            }
            Some(_) => {
                self.counts.remove(item);
                self.len -= 1;
                true
            }
            None => false,
        }
    }

    pub fn count(&self, item: &T) -> usize {
        self.counts.get(item).copied().unwrap_or(0)
    }

    pub fn contains(&self, item: &T) -> bool {
        self.counts.contains_key(item)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of distinct elements.
    pub fn distinct_len(&self) -> usize {
        self.counts.len()
    }

    /// Multiset union (the `⨾` of contexts): multiplicities add.
    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, &n) in &other.counts {
            out.insert_n(k.clone(), n);
        }
        out
    }

    pub fn union_all<'a, I>(parts: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
        T: 'a,
    {
        let mut out = Self::new();
        for p in parts {
            for (k, &n) in &p.counts {
                out.insert_n(k.clone(), n);
            }
        }
        out
    }

    pub fn is_submultiset_of(&self, other: &Self) -> bool {
        self.counts.iter().all(|(k, &n)| other.count(k) >= n)
    }

    /// `self − other`, defined only when `other ⊆ self`.
    pub fn difference(&self, other: &Self) -> Option<Self> {
        if !other.is_submultiset_of(self) {
            return None;
        }
        let mut out = self.clone();
        for (k, &n) in &other.counts {
            for _ in 0..n {
                out.remove_one(k);
            }
        }
        Some(out)
    }

    /// The underlying set (every multiplicity clamped to one).
    pub fn support(&self) -> Self {
        Multiset {
            counts: self.counts.keys().map(|k| (k.clone(), 1)).collect(),
            len: self.counts.len(),
        }
    }

    pub fn is_set(&self) -> bool {
        self.len == self.counts.len()
    }

    /// Occurrences in canonical order, repeated by multiplicity.
    pub fn iter(&self) -> impl Iterator<Item = &T> + '_ {
        self.counts
            .iter()
            .flat_map(|(k, &n)| std::iter::repeat_n(k, n))
    }

    /// Distinct elements with their multiplicities.
    pub fn entries(&self) -> impl Iterator<Item = (&T, usize)> + '_ {
        self.counts.iter().map(|(k, &n)| (k, n))
    }

    pub fn to_vec(&self) -> Vec<T> {
        self.iter().cloned().collect()
    }

    pub fn map<U: Ord + Clone>(&self, mut f: impl FnMut(&T) -> U) -> Multiset<U> {
        let mut out = Multiset::new();
        for (k, n) in self.entries() {
            out.insert_n(f(k), n);
        }
        out
    }
}

impl<T: Ord + Clone> FromIterator<T> for Multiset<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut m = Multiset::new();
        for x in iter {
            m.insert(x);
        }
        m
    }
}

impl<T: Ord + Clone> Extend<T> for Multiset<T> {
    fn extend<I: IntoIterator<Item = T>>(&mut self, iter: I) {
        for x in iter {
            self.insert(x);
        }
    }
}

impl<T: Ord + Clone + fmt::Debug> fmt::Debug for Multiset<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

/// Every ordered `k`-tuple of multisets whose union is `m`, each exactly
/// once. Multiplicities of each distinct element are distributed
/// independently, so the count is `∏ C(mult + k − 1, k − 1)`.
///
/// Ordering is deterministic: the first components grow slowest-first, so
/// for `[p, p]` and `k = 2` the sequence is `([], [p,p])`, `([p], [p])`,
/// `([p,p], [])`.
pub fn enumerate_splits<T: Ord + Clone>(m: &Multiset<T>, k: usize) -> Vec<Vec<Multiset<T>>> {
    assert!(k >= 1, "split arity must be positive");
    let entries: Vec<(&T, usize)> = m.entries().collect();
    let mut out = Vec::new();
    let mut current: Vec<Multiset<T>> = vec![Multiset::new(); k];
    splits_rec(&entries, 0, &mut current, &mut out);
    out
}

fn splits_rec<T: Ord + Clone>(
    entries: &[(&T, usize)],
    idx: usize,
    current: &mut Vec<Multiset<T>>,
    out: &mut Vec<Vec<Multiset<T>>>,
) {
    if idx == entries.len() {
        out.push(current.clone());
        return;
    }
    let (item, n) = entries[idx];
    let k = current.len();
    let mut parts = vec![0usize; k];
    for_each_composition(n, &mut parts, 0, &mut |parts| {
        for (slot, &c) in parts.iter().enumerate() {
            current[slot].insert_n(item.clone(), c);
        }
        splits_rec(entries, idx + 1, current, out);
        for (slot, &c) in parts.iter().enumerate() {
            for _ in 0..c {
                current[slot].remove_one(item);
            }
        }
    });
}

/// Calls `f` on every composition of `n` into `parts.len()` non-negative
/// parts, earlier parts ascending.
pub(crate) fn for_each_composition(
    n: usize,
    parts: &mut [usize],
    pos: usize,
    f: &mut dyn FnMut(&[usize]),
) {
    if pos + 1 == parts.len() {
        parts[pos] = n;
        f(parts);
        return;
    }
    for c in 0..=n {
        parts[pos] = c;
        for_each_composition(n - c, parts, pos + 1, f);
    }
    parts[pos] = 0;
}

/// Closed-form split count, `∏ C(mult + k − 1, k − 1)`.
pub fn split_count<T: Ord + Clone>(m: &Multiset<T>, k: usize) -> u128 {
    m.entries()
        .map(|(_, n)| binomial((n + k - 1) as u128, (k - 1) as u128))
        .product()
}

fn binomial(n: u128, r: u128) -> u128 {
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

impl<T: Ord + Clone + serde::Serialize> serde::Serialize for Multiset<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}
