//! Acceptance run. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod props;

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use besiml::base::{check_derivation, Base, Derivation, Deriver, Discipline, Limits};
use besiml::calculus::{
    brute_force_prove, check_proof, check_proof_of, prove, Proof, ProverBudget, Rule,
};
use besiml::crosscheck::{
    atom_names, crosscheck, enumerate_sequents, CrosscheckConfig, CrosscheckReport,
};
use besiml::flatten::{bespoke_for, ConjunctionMode, Origin};
use besiml::semantics::{
    decide_validity, EnumeratorBounds, EvalOutcome, SearchSpace, SupportEvaluator, SupportJudgement,
};
use besiml::syntax::{parse_formula, parse_sequent, Atom, Formula, Logic, Sequent};
use besiml::Outcome;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

type Verdict = Result<String, String>;

fn ensure(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:.1?}, limit {limit:?}")
    })
}

fn imll(text: &str) -> Sequent {
    parse_sequent(text, Logic::Imll).unwrap()
}

// 1. The four-premise tensor example end to end.

fn tensor_example() -> Verdict {
    let start = Instant::now();
    let s = imll("p1, p2, p1 * p2 -o q, p1 |- q * p1");
    let Outcome::Found(p) = prove(&s, &ProverBudget::default()) else {
        return Err("prove found no proof".into());
    };
    check_proof_of(&p, &s).map_err(|e| format!("prover output rejected: {e}"))?;

    let bb = bespoke_for(&s, ConjunctionMode::Standard).map_err(|e| e.to_string())?;
    let (ctx, goal) = bb.flatten_sequent(&s).map_err(|e| e.to_string())?;
    let Outcome::Found(d) = Deriver::new(&bb.base, Limits::default())
        .derive(&ctx, &goal)
        .map_err(|e| e.to_string())?
    else {
        return Err("no derivation in M".into());
    };
    check_derivation(&bb.base, &d).map_err(|e| e.to_string())?;

    let f = |t: &str| parse_formula(t, Logic::Imll).unwrap();
    let want = [
        Origin::TensorI {
            a: f("p1"),
            b: f("p2"),
        },
        Origin::LolliE {
            a: f("p1 * p2"),
            b: f("q"),
        },
        Origin::TensorI {
            a: f("q"),
            b: f("p1"),
        },
    ];
    let used: Vec<Origin> = d
        .rules_postorder()
        .iter()
        .filter_map(|r| bb.origin(r).cloned())
        .collect();
    let mut it = used.iter();
    for w in &want {
        ensure(it.any(|u| u == w), || {
            format!("{w:?} missing from the rule sequence")
        })?;
    }

    let extracted = bb.extract_proof(&d).map_err(|e| e.to_string())?;
    check_proof(&extracted).map_err(|e| format!("extracted proof rejected: {e}"))?;
    check_proof_of(&extracted, &s).map_err(|e| e.to_string())?;
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!(
        "M has {} rules, derivation {} nodes, extracted proof {} nodes",
        bb.base.len(),
        d.node_count(),
        extracted.node_count()
    ))
}

// 2 and 3. Provability against bespoke-base derivability.

fn harness_verdict(r: &CrosscheckReport) -> Result<(), String> {
    ensure(r.disagreements.is_empty(), || {
        format!(
            "{} disagreements, first {}",
            r.disagreements.len(),
            r.disagreements[0].sequent
        )
    })?;
    ensure(r.indeterminate.is_empty(), || {
        format!("{} indeterminate", r.indeterminate.len())
    })?;
    ensure(r.perfect(), || {
        format!("agreement {:.2}%", r.agreement_percent())
    })
}

/// Negative verdicts reached under the default resource cap, redone with a
/// much larger cap.
fn recheck_capped(capped: &[Sequent], mode: ConjunctionMode) -> Result<(), String> {
    for s in capped {
        let bb = bespoke_for(s, mode).map_err(|e| e.to_string())?;
        let (ctx, goal) = bb.flatten_sequent(s).map_err(|e| e.to_string())?;
        let limits = Limits {
            work: 20_000_000,
            max_resources: Some(ctx.len() + 12),
        };
        let out = Deriver::new(&bb.base, limits)
            .derive(&ctx, &goal)
            .map_err(|e| e.to_string())?;
        ensure(matches!(out, Outcome::NotFound), || {
            format!("{s}: capped negative became {}", out.label())
        })?;
    }
    Ok(())
}

fn imll_harness() -> Verdict {
    let cfg = CrosscheckConfig::new(Logic::Imll, 2, 3, 3);
    let r = crosscheck(&cfg);
    harness_verdict(&r)?;
    within(r.elapsed, Duration::from_secs(300))?;
    recheck_capped(&r.capped, ConjunctionMode::Standard)?;
    Ok(format!(
        "{} sequents, {} provable, agreement 100%, 0 indeterminate, {} capped negatives confirmed at a larger cap",
        r.total,
        r.provable,
        r.capped.len()
    ))
}

fn ipl_harness() -> Verdict {
    let start = Instant::now();
    let mut parts = Vec::new();
    for mode in [ConjunctionMode::Standard, ConjunctionMode::Generalized] {
        let mut cfg = CrosscheckConfig::new(Logic::Ipl, 2, 3, 3);
        cfg.mode = mode;
        let r = crosscheck(&cfg);
        harness_verdict(&r).map_err(|e| format!("{mode:?}: {e}"))?;
        parts.push(format!(
            "{mode:?} {} sequents, {} provable",
            r.total, r.provable
        ));
    }
    within(start.elapsed(), Duration::from_secs(600))?;
    Ok(format!("{}, agreement 100%", parts.join("; ")))
}

// 4. Substructurality, against the brute-force oracle.

fn substructurality() -> Verdict {
    let cases = [
        ("p |- p * p", false),
        ("p, q |- p", false),
        ("p, p |- p", false),
        ("p * q |- q * p", true),
        ("I, p |- p", true),
        ("p |- I * p", true),
    ];
    for (text, expected) in cases {
        let s = imll(text);
        let oracle = brute_force_prove(&s, 10);
        ensure(oracle == expected, || {
            format!("oracle says {oracle} for {text}")
        })?;
        let got = prove(&s, &ProverBudget::default()).verdict();
        ensure(got == Some(expected), || {
            format!("prove says {got:?} for {text}")
        })?;
    }
    Ok("3 unprovable, 3 provable, prover and oracle agree".into())
}

// 5. Random sequents against the brute-force oracle.

fn random_formula(rng: &mut StdRng, size: usize) -> Formula {
    if size == 1 {
        return if rng.gen_ratio(1, 5) {
            Formula::Unit
        } else {
            Formula::atom(["p", "q", "r"][rng.gen_range(0..3)])
        };
    }
    // Binary trees have odd size; split the rest into two odd parts.
    let left = 2 * rng.gen_range(0..(size - 1) / 2) + 1;
    let l = random_formula(rng, left);
    let r = random_formula(rng, size - 1 - left);
    if rng.gen_bool(0.5) {
        Formula::tensor(l, r)
    } else {
        Formula::lolli(l, r)
    }
}

fn random_sequent(rng: &mut StdRng, max_size: usize) -> Sequent {
    loop {
        let size = [1, 3, 5][rng.gen_range(0..3)];
        let goal = random_formula(rng, size);
        let ctx: Vec<Formula> = (0..rng.gen_range(0..=3))
            .map(|_| {
                let size = [1, 3][rng.gen_range(0..2)];
                random_formula(rng, size)
            })
            .collect();
        let s = Sequent::new(Logic::Imll, ctx, goal);
        if s.size() <= max_size {
            return s;
        }
    }
}

fn oracle_agreement() -> Verdict {
    let mut rng = StdRng::seed_from_u64(5);
    let mut seen = HashSet::new();
    let mut provable = 0;
    while seen.len() < 200 {
        let s = random_sequent(&mut rng, 6);
        if !seen.insert(s.clone()) {
            continue;
        }
        let got = prove(&s, &ProverBudget::default()).verdict();
        // A normal proof of a sequent of size n has height at most 2n.
        let oracle = brute_force_prove(&s, 2 * s.size() + 2);
        ensure(got == Some(oracle), || {
            format!("{s}: prove {got:?}, oracle {oracle}")
        })?;
        provable += oracle as usize;
    }
    Ok(format!(
        "200 sequents ({provable} provable), 0 disagreements"
    ))
}

// 6. Checker robustness under single-node mutations.

/// Reference check of an IMLL proof, written against plain sorted vectors.
fn reference_proof(p: &Proof) -> bool {
    fn imll_formula(f: &Formula) -> bool {
        match f {
            Formula::Atom(_) | Formula::Unit => true,
            Formula::Tensor(a, b) | Formula::Lolli(a, b) => imll_formula(a) && imll_formula(b),
            _ => false,
        }
    }
    fn sorted(v: impl IntoIterator<Item = Formula>) -> Vec<Formula> {
        let mut v: Vec<Formula> = v.into_iter().collect();
        v.sort();
        v
    }
    fn plus(a: &[Formula], b: &[Formula]) -> Vec<Formula> {
        sorted(a.iter().chain(b).cloned())
    }
    fn minus(a: &[Formula], take: &[&Formula]) -> Option<Vec<Formula>> {
        let mut out = a.to_vec();
        for t in take {
            let i = out.iter().position(|f| f == *t)?;
            out.remove(i);
        }
        Some(out)
    }
    let s = &p.conclusion;
    if s.logic != Logic::Imll || !imll_formula(&s.conclusion) || !s.context.iter().all(imll_formula)
    {
        return false;
    }
    let ctx = sorted(s.context.iter().cloned());
    let goal = &s.conclusion;
    let kids: Vec<(Vec<Formula>, &Formula)> = p
        .children
        .iter()
        .map(|c| {
            (
                sorted(c.conclusion.context.iter().cloned()),
                &c.conclusion.conclusion,
            )
        })
        .collect();
    let local = match (p.rule, kids.as_slice()) {
        (Rule::Ax, []) => ctx == [goal.clone()],
        (Rule::UnitI, []) => ctx.is_empty() && *goal == Formula::Unit,
        (Rule::LolliI, [(c0, g0)]) => match goal {
            Formula::Lolli(a, b) => **g0 == **b && *c0 == plus(&ctx, &[(**a).clone()]),
            _ => false,
        },
        (Rule::LolliE, [(c0, g0), (c1, g1)]) => {
            **g0 == Formula::lolli((*g1).clone(), goal.clone()) && ctx == plus(c0, c1)
        }
        (Rule::UnitE, [(c0, g0), (c1, g1)]) => {
            **g0 == Formula::Unit && *g1 == goal && ctx == plus(c0, c1)
        }
        (Rule::TensorI, [(c0, g0), (c1, g1)]) => {
            *goal == Formula::tensor((*g0).clone(), (*g1).clone()) && ctx == plus(c0, c1)
        }
        (Rule::TensorE, [(c0, g0), (c1, g1)]) => match g0 {
            Formula::Tensor(a, b) => {
                *g1 == goal && minus(c1, &[a, b]).is_some_and(|delta| ctx == plus(c0, &delta))
            }
            _ => false,
        },
        _ => false,
    };
    local && p.children.iter().all(reference_proof)
}

/// Reference check of a derivation in `base`, written against plain
/// sorted vectors.
fn reference_derivation(base: &Base, d: &Derivation) -> bool {
    fn sorted<'a>(v: impl IntoIterator<Item = &'a Atom>) -> Vec<Atom> {
        let mut v: Vec<Atom> = v.into_iter().cloned().collect();
        v.sort();
        v
    }
    let set = base.discipline() == Discipline::Set;
    let res = sorted(d.resources().iter());
    if set && res.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    match d {
        Derivation::Ref { atom, .. } => {
            if set {
                res.contains(atom)
            } else {
                res == [atom.clone()]
            }
        }
        Derivation::App {
            rule,
            goal,
            premises,
            ..
        } => {
            let rules = base.canonical_rules();
            if !rules.contains(&rule.canonical())
                || rule.conclusion != *goal
                || rule.premises.len() != premises.len()
            {
                return false;
            }
            let mut shares = Vec::new();
            for (prem, sub) in rule.premises.iter().zip(premises) {
                let share = sorted(sub.share.iter());
                let mut expected = sorted(share.iter().chain(prem.assumptions.iter()));
                if set {
                    if share != res {
                        return false;
                    }
                    expected.dedup();
                }
                if sub.derivation.goal() != &prem.conclusion
                    || sorted(sub.derivation.resources().iter()) != expected
                {
                    return false;
                }
                shares.extend(share);
                if !reference_derivation(base, &sub.derivation) {
                    return false;
                }
            }
            set || sorted(shares.iter()) == res
        }
    }
}

fn imll_rules() -> Vec<Rule> {
    Rule::ALL
        .into_iter()
        .filter(|r| r.allowed_in(Logic::Imll))
        .collect()
}

fn some_formula(rng: &mut StdRng, root: &Sequent) -> Formula {
    let subs: Vec<Formula> = besiml::syntax::subformulas(root).iter().cloned().collect();
    if rng.gen_bool(0.7) {
        subs.choose(rng).unwrap().clone()
    } else {
        let size = [1, 3][rng.gen_range(0..2)];
        random_formula(rng, size)
    }
}

fn mutate_proof(rng: &mut StdRng, p: &Proof) -> Proof {
    let mut m = p.clone();
    let paths = p.paths();
    let path = paths.choose(rng).unwrap();
    let root = p.conclusion.clone();
    let extra = some_formula(rng, &root);
    let node = m.node_at_mut(path).unwrap();
    match rng.gen_range(0..6) {
        0 => node.rule = *imll_rules().choose(rng).unwrap(),
        1 => node.conclusion.conclusion = extra,
        2 => node.conclusion.context.insert(extra),
        3 => {
            let fs: Vec<Formula> = node.conclusion.context.iter().cloned().collect();
            if let Some(f) = fs.choose(rng) {
                node.conclusion.context.remove_one(f);
            }
        }
        4 => {
            if !node.children.is_empty() {
                let i = rng.gen_range(0..node.children.len());
                if rng.gen_bool(0.5) {
                    node.children.remove(i);
                } else {
                    let c = node.children[i].clone();
                    node.children.push(c);
                }
            }
        }
        _ => node.children.reverse(),
    }
    m
}

fn derivation_paths(d: &Derivation, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(cur.clone());
    if let Derivation::App { premises, .. } = d {
        for (i, p) in premises.iter().enumerate() {
            cur.push(i);
            derivation_paths(&p.derivation, cur, out);
            cur.pop();
        }
    }
}

fn rebuild(d: &Derivation, path: &[usize], f: &mut dyn FnMut(&mut Derivation)) -> Derivation {
    let mut out = d.clone();
    match path.split_first() {
        None => f(&mut out),
        Some((&i, rest)) => {
            if let Derivation::App { premises, .. } = &mut out {
                premises[i].derivation = Arc::new(rebuild(&premises[i].derivation, rest, f));
            }
        }
    }
    out
}

fn mutate_derivation(rng: &mut StdRng, base: &Base, d: &Derivation) -> Derivation {
    let mut paths = Vec::new();
    derivation_paths(d, &mut Vec::new(), &mut paths);
    let path = paths.choose(rng).unwrap().clone();
    let atoms: Vec<Atom> = base.atoms().into_iter().collect();
    let atom = atoms.choose(rng).unwrap().clone();
    let other_rule = base.rules().choose(rng).unwrap().clone();
    let kind = rng.gen_range(0..7);
    let pick: usize = rng.gen();
    rebuild(d, &path, &mut |node| {
        let resources = node.resources().clone();
        match (kind, node) {
            (0, Derivation::Ref { atom: a, .. }) | (0, Derivation::App { goal: a, .. }) => {
                *a = atom.clone()
            }
            (1, Derivation::Ref { resources, .. }) | (1, Derivation::App { resources, .. }) => {
                resources.insert(atom.clone())
            }
            (2, Derivation::Ref { resources, .. }) | (2, Derivation::App { resources, .. }) => {
                let xs: Vec<Atom> = resources.iter().cloned().collect();
                if !xs.is_empty() {
                    resources.remove_one(&xs[pick % xs.len()]);
                }
            }
            (3, Derivation::App { rule, .. }) => *rule = other_rule.clone(),
            (4, Derivation::App { premises, .. }) if !premises.is_empty() => {
                let i = pick % premises.len();
                if pick % 2 == 0 {
                    premises.remove(i);
                } else {
                    let c = premises[i].clone();
                    premises.push(c);
                }
            }
            (5, Derivation::App { premises, .. }) if !premises.is_empty() => {
                let i = pick % premises.len();
                let share = &mut premises[i].share;
                let xs: Vec<Atom> = share.iter().cloned().collect();
                if xs.is_empty() || pick % 3 == 0 {
                    share.insert(atom.clone());
                } else {
                    share.remove_one(&xs[pick % xs.len()]);
                }
            }
            (_, n @ Derivation::App { .. }) => {
                let goal = n.goal().clone();
                *n = Derivation::Ref {
                    resources,
                    atom: goal,
                };
            }
            (_, n @ Derivation::Ref { .. }) => {
                *n = Derivation::App {
                    goal: other_rule.conclusion.clone(),
                    rule: other_rule.clone(),
                    resources,
                    premises: Vec::new(),
                };
            }
        }
    })
}

fn checker_robustness() -> Verdict {
    let mut rng = StdRng::seed_from_u64(6);
    let mut proofs = Vec::new();
    for s in enumerate_sequents(Logic::Imll, &atom_names(2), 3, 3) {
        if let Outcome::Found(p) = prove(&s, &ProverBudget::default()) {
            if p.node_count() > 1 {
                proofs.push(p);
            }
        }
    }
    let mut derivations = Vec::new();
    for (logic, k) in [(Logic::Imll, 3), (Logic::Ipl, 2)] {
        for s in enumerate_sequents(logic, &atom_names(2), k, 2) {
            let Ok(bb) = bespoke_for(&s, ConjunctionMode::Standard) else {
                continue;
            };
            let (ctx, goal) = bb.flatten_sequent(&s).unwrap();
            let ctx = if logic == Logic::Ipl {
                ctx.support()
            } else {
                ctx
            };
            if let Ok(Outcome::Found(d)) =
                Deriver::new(&bb.base, Limits::default()).derive(&ctx, &goal)
            {
                if d.node_count() > 1 {
                    derivations.push((logic, bb.base.clone(), d));
                }
            }
        }
    }
    let ipl: Vec<_> = derivations
        .iter()
        .filter(|(l, _, _)| *l == Logic::Ipl)
        .cloned()
        .collect();
    let multiset: Vec<_> = derivations
        .iter()
        .filter(|(l, _, _)| *l == Logic::Imll)
        .cloned()
        .collect();
    ensure(
        !proofs.is_empty() && !ipl.is_empty() && !multiset.is_empty(),
        || "no source trees".into(),
    )?;

    let (mut mutants, mut identity, mut still_valid) = (0, 0, 0);
    let mut false_accepts = Vec::new();
    let mut false_rejects = Vec::new();
    while mutants < 1000 {
        let (ours, reference, label) = match mutants % 5 {
            0 | 1 => {
                let p = proofs.choose(&mut rng).unwrap();
                let m = mutate_proof(&mut rng, p);
                if &m == p {
                    identity += 1;
                    continue;
                }
                let ours = check_proof_of(&m, &p.conclusion).is_ok();
                let reference = m.conclusion == p.conclusion && reference_proof(&m);
                (ours, reference, format!("proof of {}", p.conclusion))
            }
            k => {
                let pool = if k == 4 { &ipl } else { &multiset };
                let (_, base, d) = pool.choose(&mut rng).unwrap();
                let m = mutate_derivation(&mut rng, base, d);
                if &m == d {
                    identity += 1;
                    continue;
                }
                let same_root = m.resources() == d.resources() && m.goal() == d.goal();
                let ours = same_root && check_derivation(base, &m).is_ok();
                let reference = same_root && reference_derivation(base, &m);
                (
                    ours,
                    reference,
                    format!("derivation of {:?} ⊢ {}", d.resources(), d.goal()),
                )
            }
        };
        mutants += 1;
        match (ours, reference) {
            (true, false) => false_accepts.push(label),
            (false, true) => false_rejects.push(label),
            (true, true) => still_valid += 1,
            (false, false) => {}
        }
    }
    ensure(false_accepts.is_empty(), || {
        format!(
            "{} false accepts, first {}",
            false_accepts.len(),
            false_accepts[0]
        )
    })?;
    ensure(false_rejects.is_empty(), || {
        format!(
            "{} false rejects, first {}",
            false_rejects.len(),
            false_rejects[0]
        )
    })?;
    Ok(format!(
        "1000 mutants (400 proofs, 600 derivations), {} rejected, {still_valid} still valid per the reference check, {identity} identity mutations skipped, 0 false accepts",
        1000 - still_valid
    ))
}

// 7. Property suites.

fn property_suites() -> Verdict {
    let mut failed = Vec::new();
    for (name, run) in props::ALL {
        if catch_unwind(run).is_err() {
            failed.push(*name);
        }
    }
    ensure(failed.is_empty(), || {
        format!("failed: {}", failed.join(", "))
    })?;
    Ok(format!("{} properties green", props::ALL.len()))
}

// 8. Semantics soundness and witness replay.

fn semantics_soundness(logic: Logic, k: usize, work: u64) -> Result<String, String> {
    let mut alphabet = atom_names(2);
    let family = enumerate_sequents(logic, &alphabet, k, 3);
    alphabet.push(Atom::new("r"));
    let space = SearchSpace::new(alphabet, EnumeratorBounds::default());
    let mode = ConjunctionMode::Standard;
    let mut ev = SupportEvaluator::new(logic, mode, space).map_err(|e| e.to_string())?;
    let (mut valid, mut refuted, mut invalid) = (0, 0, 0);
    for s in &family {
        let v = decide_validity(s).map_err(|e| e.to_string())?;
        let j = SupportJudgement::validity(s, mode);
        let out = ev.eval(&j, work).map_err(|e| format!("{s}: {e}"))?;
        if v {
            valid += 1;
        } else {
            invalid += 1;
        }
        if let EvalOutcome::Refuted(w) = &out {
            ensure(!v, || format!("contradiction: {s} is valid but refuted"))?;
            ev.replay(&j, w)
                .map_err(|e| format!("{s}: witness does not replay: {e}"))?;
            refuted += 1;
        }
    }
    Ok(format!(
        "{logic}: {} sequents, {valid} valid none refuted, {refuted} of {invalid} invalid refuted and replayed",
        family.len()
    ))
}

fn semantics() -> Verdict {
    let a = semantics_soundness(Logic::Imll, 3, 1000)?;
    let b = semantics_soundness(Logic::Ipl, 3, 1000)?;
    Ok(format!("{a}; {b}; 0 contradictions"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("tensor example end to end", tensor_example),
        ("IMLL equivalence harness", imll_harness),
        (
            "IPL equivalence harness, both conjunction modes",
            ipl_harness,
        ),
        ("substructurality against brute force", substructurality),
        ("random sequents against brute force", oracle_agreement),
        ("checker robustness under mutation", checker_robustness),
        ("property suites", property_suites),
        ("semantics soundness and witness replay", semantics),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {} PASS {name} [{secs:.1}s]: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {} FAIL {name} [{secs:.1}s]: {why}", i + 1)
            }
        }
    }
    println!("{} of 8 criteria passed", 8 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
