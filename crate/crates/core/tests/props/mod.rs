use std::collections::BTreeSet;

use besiml::base::{
    check_derivation, graft, AtomicRule, Base, Derivation, Deriver, Discipline, Limits,
};
use besiml::crosscheck::{crosscheck_one, CrosscheckConfig};
use besiml::flatten::{bespoke_for, ConjunctionMode, Flattening};
use besiml::semantics::{
    candidate_rules, EnumeratorBounds, EvalOutcome, SearchSpace, SupportEvaluator, SupportJudgement,
};
use besiml::syntax::{
    enumerate_splits, split_count, Atom, AtomMultiset, Formula, FormulaSet, Logic, Multiset,
    Sequent,
};
use besiml::Outcome;
use proptest::prelude::*;
use proptest::sample::select;

fn atom() -> impl Strategy<Value = Atom> {
    select(vec!["p", "q", "r"]).prop_map(Atom::new)
}

fn atoms_upto(n: usize) -> impl Strategy<Value = AtomMultiset> {
    prop::collection::vec(atom(), 0..=n).prop_map(|v| v.into_iter().collect())
}

fn imll_formula(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![4 => atom().prop_map(Formula::Atom), 1 => Just(Formula::Unit)];
    leaf.prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::tensor(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::lolli(a, b)),
        ]
    })
}

fn ipl_formula(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![4 => atom().prop_map(Formula::Atom), 1 => Just(Formula::Falsum)];
    leaf.prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::imp(a, b)),
        ]
    })
}

fn sequent(logic: Logic, depth: u32, ctx: usize) -> BoxedStrategy<Sequent> {
    let f = match logic {
        Logic::Imll => imll_formula(depth).boxed(),
        Logic::Ipl => ipl_formula(depth).boxed(),
    };
    (prop::collection::vec(f.clone(), 0..=ctx), f)
        .prop_map(move |(c, g)| Sequent::new(logic, c, g))
        .boxed()
}

fn small_rules() -> Vec<AtomicRule> {
    let alphabet: Vec<Atom> = ["p", "q", "r"].iter().map(|n| Atom::new(n)).collect();
    let bounds = EnumeratorBounds {
        max_rules: 0,
        max_premises: 2,
        max_assumptions: 1,
        max_resources: 0,
    };
    candidate_rules(&alphabet, &bounds, Discipline::Multiset)
}

fn rules(min: usize, max: usize) -> impl Strategy<Value = Vec<AtomicRule>> {
    prop::collection::vec(select(small_rules()), min..=max)
}

fn multiset_base(min: usize, max: usize) -> impl Strategy<Value = Base> {
    rules(min, max).prop_map(|rs| Base::from_rules(Discipline::Multiset, rs))
}

/// `Some(true)` if derivable, `Some(false)` only for an exhaustive negative.
fn exact(d: &mut Deriver, s: &AtomMultiset, q: &Atom) -> Option<bool> {
    match d.derive(s, q).unwrap() {
        Outcome::Found(_) => Some(true),
        Outcome::NotFound if !d.last_report().truncated => Some(false),
        _ => None,
    }
}

fn all_queries(alphabet: &[Atom], n: usize) -> Vec<(AtomMultiset, Atom)> {
    let mut out = Vec::new();
    for s in besiml::semantics::multisets_upto(alphabet, n) {
        for q in alphabet {
            out.push((s.clone(), q.clone()));
        }
    }
    out
}

fn pq_r() -> Vec<Atom> {
    ["p", "q", "r"].iter().map(|n| Atom::new(n)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    fn multiset_union_laws(a in prop::collection::vec(0u8..4, 0..6), b in prop::collection::vec(0u8..4, 0..6), c in prop::collection::vec(0u8..4, 0..6)) {
        let (a, b, c): (Multiset<u8>, Multiset<u8>, Multiset<u8>) =
            (a.into_iter().collect(), b.into_iter().collect(), c.into_iter().collect());
        prop_assert_eq!(a.union(&b), b.union(&a));
        prop_assert_eq!(a.union(&b).union(&c), a.union(&b.union(&c)));
        prop_assert_eq!(a.union(&Multiset::new()), a.clone());
        prop_assert_eq!(a.union(&b).len(), a.len() + b.len());
        prop_assert_eq!(a.union(&b).difference(&b), Some(a.clone()));
        prop_assert!(a.is_submultiset_of(&a.union(&b)));
        for x in 0u8..4 {
            prop_assert_eq!(a.union(&b).count(&x), a.count(&x) + b.count(&x));
        }
        let s = a.support();
        prop_assert!(s.is_set());
        prop_assert_eq!(s.support(), s.clone());
        prop_assert_eq!(s.distinct_len(), a.distinct_len());
    }

    fn multiset_difference_agrees_with_submultiset(a in prop::collection::vec(0u8..3, 0..5), b in prop::collection::vec(0u8..3, 0..5)) {
        let (a, b): (Multiset<u8>, Multiset<u8>) = (a.into_iter().collect(), b.into_iter().collect());
        prop_assert_eq!(b.difference(&a).is_some(), a.is_submultiset_of(&b));
        if let Some(d) = b.difference(&a) {
            prop_assert_eq!(d.union(&a), b);
        }
    }

    fn splits_partition_the_multiset(m in prop::collection::vec(0u8..3, 0..5), k in 1usize..4) {
        let m: Multiset<u8> = m.into_iter().collect();
        let splits = enumerate_splits(&m, k);
        prop_assert_eq!(splits.len() as u128, split_count(&m, k));
        let distinct: BTreeSet<_> = splits.iter().cloned().collect();
        prop_assert_eq!(distinct.len(), splits.len());
        for parts in &splits {
            prop_assert_eq!(parts.len(), k);
            prop_assert_eq!(&Multiset::union_all(parts.iter()), &m);
        }
    }

    fn degree_dominates_children(f in prop_oneof![imll_formula(4), ipl_formula(4)]) {
        let mut stack = vec![f];
        while let Some(g) = stack.pop() {
            prop_assert!(g.degree() >= 1);
            if let Some((_, l, r)) = g.as_binary() {
                prop_assert!(l.degree() < g.degree() && r.degree() < g.degree());
                prop_assert!(l.degree() + r.degree() < g.degree());
                stack.push(l.clone());
                stack.push(r.clone());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    fn derivability_is_monotone_in_the_base(b in multiset_base(1, 4), extra in rules(1, 3)) {
        let c = b.extended(extra);
        prop_assert!(b.is_subset_of(&c));
        let mut db = Deriver::new(&b, Limits::default());
        let mut dc = Deriver::new(&c, Limits::default());
        for (s, q) in all_queries(&pq_r(), 2) {
            let in_b = exact(&mut db, &s, &q);
            let in_c = exact(&mut dc, &s, &q);
            if in_b == Some(true) {
                prop_assert_eq!(in_c, Some(true), "{:?} |- {} lost in superset", s, q);
            }
            if in_c == Some(false) {
                prop_assert_ne!(in_b, Some(true));
            }
        }
    }

    fn flattening_round_trips(fs in prop::collection::vec(prop_oneof![imll_formula(3), ipl_formula(3)], 1..4)) {
        let xi = FormulaSet::closure(fs.iter());
        let m = Flattening::new(&xi).unwrap();
        let mut images = BTreeSet::new();
        for f in xi.iter() {
            let a = m.flat(f).unwrap().clone();
            prop_assert_eq!(&m.deflat(&a), f);
            if let Formula::Atom(x) = f {
                prop_assert_eq!(&a, x);
            } else {
                prop_assert!(a.is_reserved());
            }
            images.insert(a);
        }
        prop_assert_eq!(images.len(), xi.len());
        prop_assert_eq!(&m.image(), &images);
        let ms: Multiset<Formula> = xi.iter().cloned().chain(fs.iter().cloned()).collect();
        prop_assert_eq!(m.apply_deflat(&m.apply_flat(&ms).unwrap()), ms);
    }

    fn grafted_derivations_check(b in multiset_base(2, 5), extra in rules(0, 3), pick in any::<prop::sample::Index>(), inner_pick in any::<prop::sample::Index>()) {
        let x = b.extended(extra);
        let mut db = Deriver::new(&b, Limits::default());
        // Outer derivation: some derivable query using a rule, if any.
        let found: Vec<(AtomMultiset, Derivation)> = all_queries(&pq_r(), 2)
            .into_iter()
            .filter(|(s, _)| !s.is_empty())
            .filter_map(|(s, q)| match db.derive(&s, &q).unwrap() {
                Outcome::Found(d @ Derivation::App { .. }) => Some((s, d)),
                _ => None,
            })
            .collect();
        prop_assume!(!found.is_empty());
        let (s, outer) = pick.get(&found).clone();
        let grafted_atoms: Vec<Atom> = s.iter().take(1 + pick.index(s.len())).cloned().collect();

        // Inner derivations in the extension; fall back to `[p] ⊢ p`.
        let mut dx = Deriver::new(&x, Limits::default());
        let mut inner = Vec::new();
        let mut t_all = AtomMultiset::new();
        for p in &grafted_atoms {
            let candidates: Vec<(AtomMultiset, Derivation)> = besiml::semantics::multisets_upto(&pq_r(), 2)
                .into_iter()
                .filter_map(|t| match dx.derive(&t, p).unwrap() {
                    Outcome::Found(d) => Some((t, d)),
                    _ => None,
                })
                .collect();
            let (t, d) = if candidates.is_empty() {
                (AtomMultiset::singleton(p.clone()), Derivation::Ref { resources: AtomMultiset::singleton(p.clone()), atom: p.clone() })
            } else {
                inner_pick.get(&candidates).clone()
            };
            t_all = t_all.union(&t);
            inner.push(d);
        }
        let g = graft(&outer, &grafted_atoms, &inner).unwrap();
        prop_assert!(check_derivation(&x, &g).is_ok(), "{:?}", check_derivation(&x, &g));
        let rest = s.difference(&grafted_atoms.iter().cloned().collect()).unwrap();
        prop_assert_eq!(g.resources(), &t_all.union(&rest));
        prop_assert_eq!(g.goal(), outer.goal());
    }

    fn conjunction_modes_agree(s in sequent(Logic::Ipl, 2, 2)) {
        let mut standard = CrosscheckConfig::new(Logic::Ipl, 3, 0, 0);
        standard.mode = ConjunctionMode::Standard;
        let mut generalized = standard.clone();
        generalized.mode = ConjunctionMode::Generalized;
        let a = crosscheck_one(&s, &standard);
        let b = crosscheck_one(&s, &generalized);
        prop_assert!(a.agrees() && b.agrees(), "{}: {:?} {:?}", s, a, b);
        prop_assert_eq!(a.derivable, b.derivable);
    }
}

/// The bounded universal side of the ⊗ and I cases: every sampled
/// `(Y, V, p)` whose hypothesis derives also has `S ⨾ V ⊢_Y p`. Returns
/// `None` if some query was inconclusive.
fn bounded_universal(
    bases: &[Base],
    image: &[Atom],
    s: &AtomMultiset,
    hypothesis_extra: &AtomMultiset,
) -> Option<bool> {
    let mut all = true;
    for y in bases {
        let mut d = Deriver::new(y, Limits::default());
        for v in besiml::semantics::multisets_upto(image, 1) {
            for p in image {
                match exact(&mut d, &v.union(hypothesis_extra), p) {
                    Some(true) => match exact(&mut d, &s.union(&v), p) {
                        Some(true) => {}
                        Some(false) => all = false,
                        None => return None,
                    },
                    Some(false) => {}
                    None => return None,
                }
            }
        }
    }
    Some(all)
}

#[derive(Clone, Copy, Debug)]
enum Kind {
    Lolli,
    Tensor,
    Unit,
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    fn flat_derivability_biconditionals(
        kind in select(vec![Kind::Lolli, Kind::Tensor, Kind::Unit]),
        sigma in imll_formula(1),
        tau in imll_formula(1),
        s_pick in prop::collection::vec(any::<prop::sample::Index>(), 0..3),
        ext_pick in prop::collection::vec(any::<prop::sample::Index>(), 1..3),
    ) {
        let chi = match kind {
            Kind::Lolli => Formula::lolli(sigma.clone(), tau.clone()),
            Kind::Tensor => Formula::tensor(sigma.clone(), tau.clone()),
            Kind::Unit => Formula::Unit,
        };
        let seq = Sequent::new(Logic::Imll, [sigma.clone(), tau.clone()], chi.clone());
        let bb = bespoke_for(&seq, ConjunctionMode::Standard).unwrap();
        let image: Vec<Atom> = bb.map.image().into_iter().collect();
        let s: AtomMultiset = s_pick.iter().map(|i| i.get(&image).clone()).collect();
        let flat = |f: &Formula| bb.map.flat(f).unwrap().clone();
        let mut d = Deriver::new(&bb.base, Limits::default());
        let lhs = exact(&mut d, &s, &flat(&chi));
        match kind {
            Kind::Lolli => {
                let rhs = exact(&mut d, &s.union(&AtomMultiset::singleton(flat(&sigma))), &flat(&tau));
                if let (Some(l), Some(r)) = (lhs, rhs) {
                    prop_assert_eq!(l, r, "S = {:?}", s);
                }
            }
            Kind::Tensor | Kind::Unit => {
                // Y ranges over M and one sampled extension of it over the image.
                let bounds = EnumeratorBounds { max_rules: 0, max_premises: 1, max_assumptions: 1, max_resources: 0 };
                let cands = candidate_rules(&image, &bounds, Discipline::Multiset);
                let ext = bb.base.extended(ext_pick.iter().map(|i| i.get(&cands).clone()));
                let extra: AtomMultiset = match kind {
                    Kind::Tensor => [flat(&sigma), flat(&tau)].into_iter().collect(),
                    _ => AtomMultiset::new(),
                };
                let rhs = bounded_universal(&[bb.base.clone(), ext], &image, &s, &extra);
                if let (Some(l), Some(r)) = (lhs, rhs) {
                    prop_assert_eq!(l, r, "S = {:?}", s);
                }
            }
        }
    }
}

fn eval_space() -> SearchSpace {
    SearchSpace::new(
        pq_r(),
        EnumeratorBounds {
            max_rules: 1,
            ..EnumeratorBounds::default()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    fn atomic_support_coheres_with_derivability(b in multiset_base(1, 3), p in atoms_upto(2), s in atoms_upto(1), q in atom()) {
        let j = SupportJudgement {
            logic: Logic::Imll,
            base: b.clone(),
            resources: s.clone(),
            context: p.iter().cloned().map(Formula::Atom).collect(),
            conclusion: Formula::Atom(q.clone()),
            mode: ConjunctionMode::Standard,
        };
        let mut ev = SupportEvaluator::new(Logic::Imll, ConjunctionMode::Standard, eval_space()).unwrap();
        let out = ev.eval(&j, 300).unwrap();
        let mut d = Deriver::new(&b, Limits::default());
        let derivable = exact(&mut d, &p.union(&s), &q);
        if derivable == Some(true) {
            prop_assert!(!out.is_refuted(), "{:?}", out);
        }
        if let EvalOutcome::Refuted(w) = &out {
            prop_assert_eq!(derivable, Some(false));
            prop_assert!(ev.replay(&j, w).is_ok());
        }
        if p.is_empty() {
            let expected = match derivable {
                Some(true) => Some(EvalOutcome::Holds),
                _ => None,
            };
            if let Some(e) = expected {
                prop_assert_eq!(out, e);
            } else if derivable == Some(false) {
                prop_assert!(out.is_refuted());
            }
        }
    }

    fn refutations_transfer_to_smaller_bases(b in multiset_base(0, 2), extra in rules(1, 2), s in sequent(Logic::Imll, 1, 2)) {
        let c = b.extended(extra);
        let mut j = SupportJudgement::validity(&s, ConjunctionMode::Standard);
        j.base = c;
        let mut ev = SupportEvaluator::new(Logic::Imll, ConjunctionMode::Standard, eval_space()).unwrap();
        if let EvalOutcome::Refuted(w) = ev.eval(&j, 300).unwrap() {
            j.base = b;
            prop_assert!(ev.replay(&j, &w).is_ok(), "{}", s);
        }
    }
}

macro_rules! export {
    ($($name:ident),* $(,)?) => {
        pub mod run {
            $(pub fn $name() {
                super::$name()
            })*
        }

        /// Every property, by name.
        #[allow(dead_code)]
        pub const ALL: &[(&str, fn())] = &[$((stringify!($name), run::$name)),*];
    };
}

export!(
    multiset_union_laws,
    multiset_difference_agrees_with_submultiset,
    splits_partition_the_multiset,
    degree_dominates_children,
    derivability_is_monotone_in_the_base,
    flattening_round_trips,
    grafted_derivations_check,
    conjunction_modes_agree,
    flat_derivability_biconditionals,
    atomic_support_coheres_with_derivability,
    refutations_transfer_to_smaller_bases,
);
