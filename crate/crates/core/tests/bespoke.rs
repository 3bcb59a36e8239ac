use besiml::base::{check_derivation, Deriver, Discipline, Limits};
use besiml::calculus::check_proof_of;
use besiml::crosscheck::{atom_names, enumerate_sequents};
use besiml::flatten::{bespoke_for, ConjunctionMode, Origin};
use besiml::syntax::{parse_formula, parse_sequent, Formula, Logic, Sequent};
use besiml::Outcome;

fn f(text: &str, logic: Logic) -> Formula {
    parse_formula(text, logic).unwrap()
}

fn origin_labels(s: &Sequent, mode: ConjunctionMode) -> Vec<&'static str> {
    let bb = bespoke_for(s, mode).unwrap();
    let mut v: Vec<_> = bb
        .base
        .rules()
        .iter()
        .map(|r| bb.origin(r).unwrap().label())
        .collect();
    v.sort();
    v
}

#[test]
fn tensor_example_base_size() {
    // One lolli (two rules) and two tensors (one intro plus one elimination
    // per atom of the six-atom alphabet each): 2 + 2 * (1 + 6).
    let s = parse_sequent("p1, p2, p1 * p2 -o q, p1 |- q * p1", Logic::Imll).unwrap();
    let bb = bespoke_for(&s, ConjunctionMode::Standard).unwrap();
    assert_eq!(bb.base.discipline(), Discipline::Multiset);
    assert_eq!(bb.base.len(), 16);
}

#[test]
fn tensor_example_derivation_uses_the_expected_instances() {
    let s = parse_sequent("p1, p2, p1 * p2 -o q, p1 |- q * p1", Logic::Imll).unwrap();
    let bb = bespoke_for(&s, ConjunctionMode::Standard).unwrap();
    let (ctx, goal) = bb.flatten_sequent(&s).unwrap();
    let d = Deriver::new(&bb.base, Limits::default())
        .derive(&ctx, &goal)
        .unwrap();
    let Outcome::Found(d) = d else {
        panic!("no derivation")
    };
    check_derivation(&bb.base, &d).unwrap();

    let l = Logic::Imll;
    let want = [
        Origin::TensorI {
            a: f("p1", l),
            b: f("p2", l),
        },
        Origin::LolliE {
            a: f("p1 * p2", l),
            b: f("q", l),
        },
        Origin::TensorI {
            a: f("q", l),
            b: f("p1", l),
        },
    ];
    let used: Vec<Origin> = d
        .rules_postorder()
        .iter()
        .map(|r| bb.origin(r).unwrap().clone())
        .collect();
    let mut it = used.iter();
    for w in &want {
        assert!(it.any(|u| u == w), "missing {w:?} in {used:?}");
    }

    let p = bb.extract_proof(&d).unwrap();
    check_proof_of(&p, &s).unwrap();
}

#[test]
fn conjunction_bases() {
    let s = parse_sequent("p /\\ q |- p", Logic::Ipl).unwrap();
    assert_eq!(
        origin_labels(&s, ConjunctionMode::Standard),
        ["and-e1", "and-e2", "and-i"]
    );
    // Alphabet {p, q, (p∧q)♭} gives three generalized eliminations.
    assert_eq!(
        origin_labels(&s, ConjunctionMode::Generalized),
        ["and-e", "and-e", "and-e", "and-i"]
    );
}

#[test]
fn falsum_base_has_one_rule_per_alphabet_atom() {
    let s = parse_sequent("_|_ |- p", Logic::Ipl).unwrap();
    assert_eq!(origin_labels(&s, ConjunctionMode::Standard), ["efq", "efq"]);
}

#[test]
fn atomic_sequents_give_empty_bases() {
    let s = parse_sequent("p |- p", Logic::Ipl).unwrap();
    assert!(bespoke_for(&s, ConjunctionMode::Standard)
        .unwrap()
        .base
        .is_empty());
    let s = parse_sequent("p |- q", Logic::Imll).unwrap();
    assert!(bespoke_for(&s, ConjunctionMode::Standard)
        .unwrap()
        .base
        .is_empty());
}

#[test]
fn unit_base() {
    let s = parse_sequent("I, p |- p", Logic::Imll).unwrap();
    assert_eq!(
        origin_labels(&s, ConjunctionMode::Standard),
        ["unit-e", "unit-e", "unit-i"]
    );
}

fn extraction_round_trip(logic: Logic, mode: ConjunctionMode) {
    let atoms = atom_names(2);
    let mut found = 0;
    for s in enumerate_sequents(logic, &atoms, 2, 2) {
        let bb = bespoke_for(&s, mode).unwrap();
        let (ctx, goal) = bb.flatten_sequent(&s).unwrap();
        let ctx = if logic == Logic::Ipl {
            ctx.support()
        } else {
            ctx
        };
        if let Outcome::Found(d) = Deriver::new(&bb.base, Limits::default())
            .derive(&ctx, &goal)
            .unwrap()
        {
            let p = bb.extract_proof(&d).unwrap_or_else(|e| panic!("{s}: {e}"));
            let target = if logic == Logic::Ipl {
                Sequent::new(logic, s.context.support().to_vec(), s.conclusion.clone())
            } else {
                s.clone()
            };
            check_proof_of(&p, &target).unwrap_or_else(|e| panic!("{s}: {e}\n{p}"));
            found += 1;
        }
    }
    assert!(found > 50, "only {found} derivable sequents");
}

#[test]
fn extracted_imll_proofs_check() {
    extraction_round_trip(Logic::Imll, ConjunctionMode::Standard);
}

#[test]
fn extracted_ipl_proofs_check() {
    extraction_round_trip(Logic::Ipl, ConjunctionMode::Standard);
    extraction_round_trip(Logic::Ipl, ConjunctionMode::Generalized);
}
