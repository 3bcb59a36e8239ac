//! Enumeration of small sequent families and the harness comparing
//! calculus provability with derivability in the bespoke base.

use std::time::{Duration, Instant};

use crate::base::{Deriver, Limits};
use crate::calculus::{prove_any, ProverBudget};
use crate::flatten::{bespoke_for, ConjunctionMode};
use crate::syntax::{Atom, Connective, Formula, Logic, Sequent};

/// The first `n` atom names: `p, q, r, s, t`, then `a0, a1, …`.
pub fn atom_names(n: usize) -> Vec<Atom> {
    const NAMES: [&str; 5] = ["p", "q", "r", "s", "t"];
    (0..n)
        .map(|i| match NAMES.get(i) {
            Some(s) => Atom::new(s),
            None => Atom::new(&format!("a{}", i - NAMES.len())),
        })
        .collect()
}

/// All formulas over `atoms`, grouped by connective count (units count as
/// connectives), up to `max_connectives`.
pub fn formulas_by_connectives(
    logic: Logic,
    atoms: &[Atom],
    max_connectives: usize,
) -> Vec<Vec<Formula>> {
    let mut by: Vec<Vec<Formula>> = Vec::with_capacity(max_connectives + 1);
    by.push(atoms.iter().cloned().map(Formula::Atom).collect());
    for k in 1..=max_connectives {
        let mut level = Vec::new();
        if k == 1 {
            level.push(match logic {
                Logic::Imll => Formula::Unit,
                Logic::Ipl => Formula::Falsum,
            });
        }
        for &c in Connective::of_logic(logic) {
            for i in 0..k {
                let j = k - 1 - i;
                for l in &by[i] {
                    for r in &by[j] {
                        level.push(Formula::binary(c, l.clone(), r.clone()));
                    }
                }
            }
        }
        by.push(level);
    }
    by
}

/// Every sequent whose formulas have at most `max_connectives` connectives
/// in total and whose context has at most `max_context` members. Contexts
/// are enumerated as multisets, each once.
pub fn enumerate_sequents(
    logic: Logic,
    atoms: &[Atom],
    max_connectives: usize,
    max_context: usize,
) -> Vec<Sequent> {
    let by = formulas_by_connectives(logic, atoms, max_connectives);
    let all: Vec<(usize, &Formula)> = by
        .iter()
        .enumerate()
        .flat_map(|(k, fs)| fs.iter().map(move |f| (k, f)))
        .collect();
    let mut out = Vec::new();
    let mut ctx: Vec<usize> = Vec::new();
    fn rec(
        all: &[(usize, &Formula)],
        start: usize,
        budget: usize,
        room: usize,
        ctx: &mut Vec<usize>,
        logic: Logic,
        out: &mut Vec<Sequent>,
    ) {
        for &(k, goal) in all {
            if k <= budget {
                out.push(Sequent::new(
                    logic,
                    ctx.iter().map(|&i| all[i].1.clone()),
                    goal.clone(),
                ));
            }
        }
        if room == 0 {
            return;
        }
        for i in start..all.len() {
            let k = all[i].0;
            if k > budget {
                continue;
            }
            ctx.push(i);
            rec(all, i, budget - k, room - 1, ctx, logic, out);
            ctx.pop();
        }
    }
    rec(
        &all,
        0,
        max_connectives,
        max_context,
        &mut ctx,
        logic,
        &mut out,
    );
    out
}

#[derive(Clone, Debug)]
pub struct CrosscheckConfig {
    pub logic: Logic,
    pub atoms: usize,
    pub max_connectives: usize,
    pub max_context: usize,
    pub mode: ConjunctionMode,
    pub prover: ProverBudget,
    pub limits: Limits,
}

impl CrosscheckConfig {
    pub fn new(logic: Logic, atoms: usize, max_connectives: usize, max_context: usize) -> Self {
        CrosscheckConfig {
            logic,
            atoms,
            max_connectives,
            max_context,
            mode: ConjunctionMode::Standard,
            prover: ProverBudget::default(),
            limits: Limits::default(),
        }
    }
}

/// Verdicts for one sequent: calculus provability and bespoke-base
/// derivability (`None` when a budget ran out). `capped` marks a negative
/// derivability verdict reached with some statement left unexpanded by the
/// resource cap.
#[derive(Clone, Debug)]
pub struct CrosscheckCase {
    pub sequent: Sequent,
    pub provable: Option<bool>,
    pub derivable: Option<bool>,
    pub capped: bool,
}

impl CrosscheckCase {
    pub fn agrees(&self) -> bool {
        self.provable.is_some() && self.provable == self.derivable
    }
}

#[derive(Clone, Debug, Default)]
pub struct CrosscheckReport {
    pub total: usize,
    pub agreed: usize,
    pub provable: usize,
    pub indeterminate: Vec<Sequent>,
    pub capped: Vec<Sequent>,
    pub disagreements: Vec<CrosscheckCase>,
    pub elapsed: Duration,
}

impl CrosscheckReport {
    pub fn agreement_percent(&self) -> f64 {
        if self.total == 0 {
            100.0
        } else {
            100.0 * self.agreed as f64 / self.total as f64
        }
    }

    pub fn perfect(&self) -> bool {
        self.agreed == self.total
    }
}

/// Compares both verdicts on one sequent.
pub fn crosscheck_one(s: &Sequent, cfg: &CrosscheckConfig) -> CrosscheckCase {
    let provable = prove_any(s, &cfg.prover).verdict();
    let mut capped = false;
    let derivable = bespoke_for(s, cfg.mode).ok().and_then(|bb| {
        let (ctx, goal) = bb.flatten_sequent(s).ok()?;
        let ctx = match cfg.logic {
            Logic::Imll => ctx,
            Logic::Ipl => ctx.support(),
        };
        let mut d = Deriver::new(&bb.base, cfg.limits);
        let verdict = d.derive(&ctx, &goal).ok()?.verdict();
        capped = verdict == Some(false) && d.last_report().truncated;
        verdict
    });
    CrosscheckCase {
        sequent: s.clone(),
        provable,
        derivable,
        capped,
    }
}

/// Runs the harness over the whole family described by `cfg`.
pub fn crosscheck(cfg: &CrosscheckConfig) -> CrosscheckReport {
    let atoms = atom_names(cfg.atoms);
    let family = enumerate_sequents(cfg.logic, &atoms, cfg.max_connectives, cfg.max_context);
    crosscheck_sequents(&family, cfg)
}

/// Runs the harness over the given sequents, using the budgets and mode of
/// `cfg`.
pub fn crosscheck_sequents(family: &[Sequent], cfg: &CrosscheckConfig) -> CrosscheckReport {
    let start = Instant::now();
    let mut report = CrosscheckReport::default();
    for s in family {
        let case = crosscheck_one(s, cfg);
        report.total += 1;
        if case.provable == Some(true) {
            report.provable += 1;
        }
        if case.capped {
            report.capped.push(s.clone());
        }
        if case.provable.is_none() || case.derivable.is_none() {
            report.indeterminate.push(s.clone());
        } else if case.agrees() {
            report.agreed += 1;
        } else {
            report.disagreements.push(case);
        }
    }
    report.elapsed = start.elapsed();
    report
}
