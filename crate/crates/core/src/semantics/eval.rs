use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use super::enumerate::{
    candidate_rules, multisets_upto, CandidatePool, EnumeratorBounds, ExtensionEnumerator,
};
use crate::base::{AtomicRule, Base, Deriver, Discipline, Limits};
use crate::calculus::{prove_any, ProverBudget};
use crate::flatten::ConjunctionMode;
use crate::syntax::{enumerate_splits, Atom, AtomMultiset, Formula, Logic, Multiset, Sequent};

/// `Γ ⊩_B^P φ`. For IPL the resources are always empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportJudgement {
    pub logic: Logic,
    pub base: Base,
    pub resources: AtomMultiset,
    pub context: Multiset<Formula>,
    pub conclusion: Formula,
    pub mode: ConjunctionMode,
}

impl SupportJudgement {
    /// The validity judgement for `s`: empty base, no resources.
    pub fn validity(s: &Sequent, mode: ConjunctionMode) -> SupportJudgement {
        SupportJudgement {
            logic: s.logic,
            base: Base::new(discipline_of(s.logic)),
            resources: AtomMultiset::new(),
            context: s.context.clone(),
            conclusion: s.conclusion.clone(),
            mode,
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = self.base.atoms();
        out.extend(self.resources.support().iter().cloned());
        for (f, _) in self.context.entries() {
            out.extend(f.atoms());
        }
        out.extend(self.conclusion.atoms());
        out
    }
}

pub(crate) fn discipline_of(logic: Logic) -> Discipline {
    match logic {
        Logic::Imll => Discipline::Multiset,
        Logic::Ipl => Discipline::Set,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("the extension alphabet is empty")]
    EmptyAlphabet,
    #[error("an {0} judgement needs a {1}-discipline base")]
    DisciplineMismatch(Logic, Discipline),
    #[error("IPL judgements carry no resources")]
    ResourcesInIpl,
}

/// Which universal clause an instance belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Clause {
    Inf,
    Tensor,
    Unit,
    Or,
    AndStar,
}

/// A refutation, mirroring the clause structure of the refuted judgement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// The atomic clause fails: `resources ⊬ atom` in the current base.
    Underivable { resources: AtomMultiset, atom: Atom },
    /// An instance of a universal clause at extension `extension` (all its
    /// rules), resources `U` and atom `p` where applicable, whose
    /// hypothesis holds and whose conclusion is refuted by `refutation`.
    Instance {
        clause: Clause,
        extension: Vec<AtomicRule>,
        resources: AtomMultiset,
        atom: Option<Atom>,
        refutation: Box<Witness>,
    },
    /// One conjunct fails (IPL, standard conjunction).
    Conjunct {
        index: usize,
        refutation: Box<Witness>,
    },
}

impl Witness {
    /// Largest number of rules in any extension used.
    pub fn extension_size(&self) -> usize {
        match self {
            Witness::Underivable { .. } => 0,
            Witness::Instance {
                extension,
                refutation,
                ..
            } => extension.len().max(refutation.extension_size()),
            Witness::Conjunct { refutation, .. } => refutation.extension_size(),
        }
    }
}

/// Counters for one evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BudgetReport {
    /// Work units spent (derivability queries, prover calls, clause
    /// instances).
    pub work: u64,
    pub extensions: u64,
    pub instances: u64,
    /// Whether the work budget ran out before the enumeration finished.
    pub exhausted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalOutcome {
    Holds,
    Refuted(Witness),
    NotRefutedWithinBudget(BudgetReport),
}

impl EvalOutcome {
    pub fn is_refuted(&self) -> bool {
        matches!(self, EvalOutcome::Refuted(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            EvalOutcome::Holds => "holds",
            EvalOutcome::Refuted(_) => "refuted",
            EvalOutcome::NotRefutedWithinBudget(_) => "not-refuted-within-budget",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("witness does not replay: {0}")]
pub struct ReplayError(pub String);

/// The alphabet and bounds standing in for "any extension, any resources,
/// any atom".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpace {
    pub alphabet: Vec<Atom>,
    pub bounds: EnumeratorBounds,
}

impl SearchSpace {
    pub fn new(alphabet: Vec<Atom>, bounds: EnumeratorBounds) -> SearchSpace {
        SearchSpace { alphabet, bounds }
    }

    pub fn enumerator(&self, seed: &Base) -> ExtensionEnumerator {
        ExtensionEnumerator::new(seed, &self.alphabet, &self.bounds)
    }
}

enum Tri {
    Holds,
    Refuted(Witness),
    Unknown,
}

type BaseKey = Vec<AtomicRule>;

/// A base together with its interned id, the cache key for queries on it.
struct Frame {
    base: Base,
    id: usize,
}

/// Evaluates support judgements of one logic over one search space,
/// caching derivability and provability queries across calls.
///
/// Refutations are literal: the conclusion of a universal clause instance
/// is refuted by recursing through the clauses down to failed atomic
/// derivations, each found by exhaustive search. The hypothesis of an
/// instance must be shown to hold, which literal evaluation cannot do for
/// universal clauses; it is established instead by one of two sufficient
/// conditions. An atomic judgement `P ⊩_X^U q` holds iff `P, U ⊢_X q`.
/// Otherwise `Γ ⊩_X^U φ` holds when `U` splits into parts deriving atoms
/// `A` in `X` and `Γ, A ⊢ φ` is provable in the calculus (for IPL, `A` is
/// every atom derivable in `X`).
pub struct SupportEvaluator {
    logic: Logic,
    mode: ConjunctionMode,
    space: SearchSpace,
    candidates: Arc<CandidatePool>,
    resource_choices: Vec<AtomMultiset>,
    limits: Limits,
    prover: ProverBudget,
    report: BudgetReport,
    limit: u64,
    base_ids: HashMap<BaseKey, usize>,
    derive_cache: HashMap<(usize, AtomMultiset, Atom), Option<bool>>,
    prove_cache: HashMap<Sequent, Option<bool>>,
    cover_cache: HashMap<(usize, AtomMultiset), Arc<Vec<AtomMultiset>>>,
    certify_cache: HashMap<(usize, AtomMultiset, Vec<Formula>, Formula), bool>,
}

impl SupportEvaluator {
    pub fn new(
        logic: Logic,
        mode: ConjunctionMode,
        space: SearchSpace,
    ) -> Result<SupportEvaluator, SemanticsError> {
        if space.alphabet.is_empty() {
            return Err(SemanticsError::EmptyAlphabet);
        }
        let candidates = Arc::new(CandidatePool::new(candidate_rules(
            &space.alphabet,
            &space.bounds,
            discipline_of(logic),
        )));
        let resource_choices = match logic {
            Logic::Imll => multisets_upto(&space.alphabet, space.bounds.max_resources),
            Logic::Ipl => vec![AtomMultiset::new()],
        };
        Ok(SupportEvaluator {
            logic,
            mode,
            space,
            candidates,
            resource_choices,
            limits: Limits::default(),
            prover: ProverBudget::default(),
            report: BudgetReport::default(),
            limit: u64::MAX,
            base_ids: HashMap::new(),
            derive_cache: HashMap::new(),
            prove_cache: HashMap::new(),
            cover_cache: HashMap::new(),
            certify_cache: HashMap::new(),
        })
    }

    pub fn space(&self) -> &SearchSpace {
        &self.space
    }

    fn validate(&self, j: &SupportJudgement) -> Result<(), SemanticsError> {
        let d = discipline_of(j.logic);
        if j.base.discipline() != d || j.logic != self.logic {
            return Err(SemanticsError::DisciplineMismatch(j.logic, d));
        }
        if j.logic == Logic::Ipl && !j.resources.is_empty() {
            return Err(SemanticsError::ResourcesInIpl);
        }
        Ok(())
    }

    /// Evaluates `j` spending at most `work` units.
    pub fn eval(&mut self, j: &SupportJudgement, work: u64) -> Result<EvalOutcome, SemanticsError> {
        self.validate(j)?;
        self.report = BudgetReport::default();
        self.limit = work;
        let ctx = j.context.to_vec();
        let root = self.frame(j.base.clone());
        let out = self.refute(&root, &j.resources, &ctx, &j.conclusion, work);
        self.limit = u64::MAX;
        Ok(match out {
            Tri::Holds => EvalOutcome::Holds,
            Tri::Refuted(w) => EvalOutcome::Refuted(w),
            Tri::Unknown => EvalOutcome::NotRefutedWithinBudget(self.report),
        })
    }

    pub fn last_report(&self) -> BudgetReport {
        self.report
    }

    fn frame(&mut self, base: Base) -> Frame {
        let next = self.base_ids.len();
        let id = *self.base_ids.entry(base.canonical_rules()).or_insert(next);
        Frame { base, id }
    }

    fn charge(&mut self, n: u64) -> bool {
        self.report.work += n;
        if self.report.work > self.limit {
            self.report.exhausted = true;
        }
        !self.report.exhausted
    }

    /// Exact derivability, `None` when the search was capped or ran out.
    fn derive(&mut self, base: &Frame, res: &AtomMultiset, goal: &Atom) -> Option<bool> {
        let res = match self.logic {
            Logic::Imll => res.clone(),
            Logic::Ipl => res.support(),
        };
        let key = (base.id, res, goal.clone());
        if let Some(&v) = self.derive_cache.get(&key) {
            return v;
        }
        self.charge(1);
        let mut d = Deriver::new(&base.base, self.limits);
        let v = match d.derive(&key.1, goal).ok()?.verdict() {
            Some(false) if d.last_report().truncated => None,
            v => v,
        };
        self.derive_cache.insert(key, v);
        v
    }

    fn provable(&mut self, s: Sequent) -> bool {
        if let Some(&v) = self.prove_cache.get(&s) {
            return v == Some(true);
        }
        self.charge(1);
        let v = prove_any(&s, &self.prover).verdict();
        self.prove_cache.insert(s, v);
        v == Some(true)
    }

    /// Multisets of atoms `A` (at most two more than `U`) such that `U`
    /// splits into parts deriving the members of `A` in `base`.
    fn covers(&mut self, base: &Frame, u: &AtomMultiset) -> Arc<Vec<AtomMultiset>> {
        let key = (base.id, u.clone());
        if let Some(v) = self.cover_cache.get(&key) {
            return v.clone();
        }
        let alphabet = self.space.alphabet.clone();
        let free: Vec<Atom> = alphabet
            .iter()
            .filter(|a| self.derive(base, &AtomMultiset::new(), a) == Some(true))
            .cloned()
            .collect();
        let mut exact: BTreeSet<AtomMultiset> = BTreeSet::new();
        self.cover_exact(base, u, &alphabet, &mut AtomMultiset::new(), &mut exact);
        let mut out: BTreeSet<AtomMultiset> = BTreeSet::new();
        for a in exact {
            for extra in multisets_upto(&free, 2) {
                out.insert(a.union(&extra));
            }
        }
        let v = Arc::new(out.into_iter().collect::<Vec<_>>());
        self.cover_cache.insert(key, v.clone());
        v
    }

    fn cover_exact(
        &mut self,
        base: &Frame,
        rest: &AtomMultiset,
        alphabet: &[Atom],
        acc: &mut AtomMultiset,
        out: &mut BTreeSet<AtomMultiset>,
    ) {
        let Some(first) = rest.iter().next().cloned() else {
            out.insert(acc.clone());
            return;
        };
        for split in enumerate_splits(rest, 2) {
            let (part, remainder) = (&split[0], &split[1]);
            if !part.contains(&first) {
                continue;
            }
            for a in alphabet {
                if self.derive(base, part, a) == Some(true) {
                    acc.insert(a.clone());
                    self.cover_exact(base, remainder, alphabet, acc, out);
                    acc.remove_one(a);
                }
            }
        }
    }

    /// Sufficient condition for `ctx ⊩_base^u φ` (see the type docs).
    fn certify(&mut self, base: &Frame, u: &AtomMultiset, ctx: &[Formula], phi: &Formula) -> bool {
        let key = (base.id, u.clone(), ctx.to_vec(), phi.clone());
        if let Some(&v) = self.certify_cache.get(&key) {
            return v;
        }
        let v = self.certify_uncached(base, u, ctx, phi);
        self.certify_cache.insert(key, v);
        v
    }

    fn certify_uncached(
        &mut self,
        base: &Frame,
        u: &AtomMultiset,
        ctx: &[Formula],
        phi: &Formula,
    ) -> bool {
        if let (Some(goal), true) = (phi.as_atom(), ctx.iter().all(Formula::is_atom)) {
            let mut res = u.clone();
            res.extend(ctx.iter().filter_map(|f| f.as_atom().cloned()));
            return self.derive(base, &res, goal) == Some(true);
        }
        if ctx.is_empty() {
            match phi {
                Formula::Unit if u.is_empty() => return true,
                Formula::And(a, b) if self.mode == ConjunctionMode::Standard => {
                    return self.certify(base, u, &[], a) && self.certify(base, u, &[], b);
                }
                _ => {}
            }
        }
        match self.logic {
            Logic::Imll => {
                let covers = self.covers(base, u);
                covers.iter().any(|a| {
                    let context = ctx
                        .iter()
                        .cloned()
                        .chain(a.iter().map(|x| Formula::Atom(x.clone())));
                    self.provable(Sequent::new(Logic::Imll, context, phi.clone()))
                })
            }
            Logic::Ipl => {
                let alphabet = self.space.alphabet.clone();
                let mut context: Vec<Formula> = ctx.to_vec();
                for a in &alphabet {
                    if self.derive(base, u, a) == Some(true) {
                        context.push(Formula::Atom(a.clone()));
                    }
                }
                self.provable(Sequent::new(Logic::Ipl, context, phi.clone()))
            }
        }
    }

    /// Sufficient condition for `⊩_base^u Γ` (clause (⨾) for IMLL).
    fn certify_all(&mut self, base: &Frame, u: &AtomMultiset, gamma: &[Formula]) -> bool {
        match self.logic {
            Logic::Ipl => gamma.iter().all(|g| self.certify(base, u, &[], g)),
            Logic::Imll => enumerate_splits(u, gamma.len()).iter().any(|parts| {
                gamma
                    .iter()
                    .zip(parts)
                    .all(|(g, part)| self.certify(base, part, &[], g))
            }),
        }
    }

    fn refute(
        &mut self,
        base: &Frame,
        res: &AtomMultiset,
        ctx: &[Formula],
        phi: &Formula,
        allowance: u64,
    ) -> Tri {
        if !ctx.is_empty() {
            let ctx = ctx.to_vec();
            let phi = phi.clone();
            return self.universal(
                base,
                Clause::Inf,
                true,
                false,
                allowance,
                |ev, x, u, _, child| {
                    if !ev.certify_all(x, u, &ctx) {
                        return None;
                    }
                    match ev.refute(x, &res.union(u), &[], &phi, child) {
                        Tri::Refuted(w) => Some(w),
                        _ => None,
                    }
                },
            );
        }
        match phi {
            Formula::Atom(a) => self.atomic(base, res, a),
            Formula::Lolli(a, b) | Formula::Imp(a, b) => {
                self.refute(base, res, &[(**a).clone()], b, allowance)
            }
            Formula::Tensor(a, b) => {
                let pair = [(**a).clone(), (**b).clone()];
                self.universal(
                    base,
                    Clause::Tensor,
                    true,
                    true,
                    allowance,
                    |ev, x, u, p, _| {
                        let p = p.expect("atom instance");
                        if !ev.certify(x, u, &pair, &Formula::Atom(p.clone())) {
                            return None;
                        }
                        ev.underivable(x, &res.union(u), p)
                    },
                )
            }
            Formula::Unit => {
                if res.is_empty() {
                    return Tri::Holds;
                }
                self.universal(
                    base,
                    Clause::Unit,
                    true,
                    true,
                    allowance,
                    |ev, x, u, p, _| {
                        let p = p.expect("atom instance");
                        if ev.derive(x, u, p) != Some(true) {
                            return None;
                        }
                        ev.underivable(x, &res.union(u), p)
                    },
                )
            }
            Formula::And(a, b) => match self.mode {
                ConjunctionMode::Standard => {
                    let first = self.refute(base, res, &[], a, allowance / 2);
                    if let Tri::Refuted(w) = first {
                        return Tri::Refuted(Witness::Conjunct {
                            index: 0,
                            refutation: Box::new(w),
                        });
                    }
                    let second = self.refute(base, res, &[], b, allowance / 2);
                    match (first, second) {
                        (_, Tri::Refuted(w)) => Tri::Refuted(Witness::Conjunct {
                            index: 1,
                            refutation: Box::new(w),
                        }),
                        (Tri::Holds, Tri::Holds) => Tri::Holds,
                        _ => Tri::Unknown,
                    }
                }
                ConjunctionMode::Generalized => {
                    let pair = [(**a).clone(), (**b).clone()];
                    self.universal(
                        base,
                        Clause::AndStar,
                        false,
                        true,
                        allowance,
                        |ev, x, _, p, _| {
                            let p = p.expect("atom instance");
                            if !ev.certify(
                                x,
                                &AtomMultiset::new(),
                                &pair,
                                &Formula::Atom(p.clone()),
                            ) {
                                return None;
                            }
                            ev.underivable(x, &AtomMultiset::new(), p)
                        },
                    )
                }
            },
            Formula::Or(a, b) => {
                let (a, b) = ((**a).clone(), (**b).clone());
                self.universal(
                    base,
                    Clause::Or,
                    false,
                    true,
                    allowance,
                    |ev, x, _, p, _| {
                        let p = p.expect("atom instance");
                        let goal = Formula::Atom(p.clone());
                        let none = AtomMultiset::new();
                        if !ev.certify(x, &none, std::slice::from_ref(&a), &goal)
                            || !ev.certify(x, &none, std::slice::from_ref(&b), &goal)
                        {
                            return None;
                        }
                        ev.underivable(x, &none, p)
                    },
                )
            }
            Formula::Falsum => {
                let mut all = true;
                for p in self.space.alphabet.clone() {
                    match self.derive(base, &AtomMultiset::new(), &p) {
                        Some(false) => {
                            return Tri::Refuted(Witness::Underivable {
                                resources: AtomMultiset::new(),
                                atom: p,
                            })
                        }
                        Some(true) => {}
                        None => all = false,
                    }
                }
                if all {
                    Tri::Holds
                } else {
                    Tri::Unknown
                }
            }
        }
    }

    fn atomic(&mut self, base: &Frame, res: &AtomMultiset, a: &Atom) -> Tri {
        match self.derive(base, res, a) {
            Some(true) => Tri::Holds,
            Some(false) => Tri::Refuted(Witness::Underivable {
                resources: res.clone(),
                atom: a.clone(),
            }),
            None => Tri::Unknown,
        }
    }

    fn underivable(&mut self, base: &Frame, res: &AtomMultiset, a: &Atom) -> Option<Witness> {
        match self.atomic(base, res, a) {
            Tri::Refuted(w) => Some(w),
            _ => None,
        }
    }

    /// Runs `instance` over extensions × resources × atoms until one yields
    /// a refutation of the conclusion or the allowance is spent. Each
    /// nested evaluation gets half of what remains.
    fn universal(
        &mut self,
        base: &Frame,
        clause: Clause,
        with_resources: bool,
        with_atom: bool,
        allowance: u64,
        mut instance: impl FnMut(
            &mut Self,
            &Frame,
            &AtomMultiset,
            Option<&Atom>,
            u64,
        ) -> Option<Witness>,
    ) -> Tri {
        let start = self.report.work;
        let resources: Vec<AtomMultiset> = if with_resources {
            self.resource_choices.clone()
        } else {
            vec![AtomMultiset::new()]
        };
        let atoms: Vec<Option<Atom>> = if with_atom {
            self.space.alphabet.iter().cloned().map(Some).collect()
        } else {
            vec![None]
        };
        let extensions = ExtensionEnumerator::with_pool(
            &base.base,
            self.candidates.clone(),
            self.space.bounds.max_rules,
        );
        for ext in extensions {
            self.report.extensions += 1;
            let x = self.frame(ext.base);
            for u in &resources {
                for p in &atoms {
                    let spent = self.report.work - start;
                    if spent >= allowance || !self.charge(1) {
                        return Tri::Unknown;
                    }
                    self.report.instances += 1;
                    let child = ((allowance - spent) / 2).max(1);
                    if let Some(w) = instance(self, &x, u, p.as_ref(), child) {
                        return Tri::Refuted(Witness::Instance {
                            clause,
                            extension: x.base.rules().to_vec(),
                            resources: u.clone(),
                            atom: p.clone(),
                            refutation: Box::new(w),
                        });
                    }
                }
            }
        }
        Tri::Unknown
    }

    /// Re-checks a refutation of `j` step by step.
    pub fn replay(&mut self, j: &SupportJudgement, w: &Witness) -> Result<(), ReplayError> {
        self.validate(j).map_err(|e| ReplayError(e.to_string()))?;
        self.limit = u64::MAX;
        self.report.exhausted = false;
        let ctx = j.context.to_vec();
        let root = self.frame(j.base.clone());
        self.replay_at(&root, &j.resources, &ctx, &j.conclusion, w)
    }

    fn instance_base(
        &mut self,
        base: &Frame,
        extension: &[AtomicRule],
    ) -> Result<Frame, ReplayError> {
        let x = Base::from_rules(base.base.discipline(), extension.iter().cloned());
        if !base.base.is_subset_of(&x) {
            return Err(ReplayError("extension does not contain the base".into()));
        }
        Ok(self.frame(x))
    }

    /// Replays a tensor or generalized-conjunction instance.
    fn replay_pair(
        &mut self,
        base: &Frame,
        res: &AtomMultiset,
        a: &Formula,
        b: &Formula,
        clause: Clause,
        w: &Witness,
    ) -> Result<(), ReplayError> {
        let Witness::Instance {
            clause: c,
            extension,
            resources: u,
            atom: Some(p),
            refutation,
        } = w
        else {
            return Err(ReplayError(format!("expected a {clause:?} instance")));
        };
        if *c != clause {
            return Err(ReplayError(format!("expected a {clause:?} instance")));
        }
        let x = self.instance_base(base, extension)?;
        if clause == Clause::AndStar && !u.is_empty() {
            return Err(ReplayError("IPL instance with resources".into()));
        }
        let goal = Formula::Atom(p.clone());
        if !self.certify(&x, u, &[a.clone(), b.clone()], &goal) {
            return Err(ReplayError(
                "hypothesis not supported at the extension".into(),
            ));
        }
        self.replay_at(&x, &res.union(u), &[], &goal, refutation)
    }

    fn replay_at(
        &mut self,
        base: &Frame,
        res: &AtomMultiset,
        ctx: &[Formula],
        phi: &Formula,
        w: &Witness,
    ) -> Result<(), ReplayError> {
        let fail = |m: &str| Err(ReplayError(m.to_string()));
        let expect_instance = |w: &Witness, want: Clause| match w {
            Witness::Instance {
                clause,
                extension,
                resources,
                atom,
                refutation,
            } if *clause == want => Ok((
                extension.clone(),
                resources.clone(),
                atom.clone(),
                (**refutation).clone(),
            )),
            _ => Err(ReplayError(format!("expected a {want:?} instance"))),
        };
        if !ctx.is_empty() {
            let (ext, u, _, inner) = expect_instance(w, Clause::Inf)?;
            let x = self.instance_base(base, &ext)?;
            if self.logic == Logic::Ipl && !u.is_empty() {
                return fail("IPL instance with resources");
            }
            if !self.certify_all(&x, &u, ctx) {
                return fail("context not supported at the extension");
            }
            return self.replay_at(&x, &res.union(&u), &[], phi, &inner);
        }
        match phi {
            Formula::Atom(a) => match w {
                Witness::Underivable { resources, atom } if atom == a && resources == res => {
                    match self.derive(base, res, a) {
                        Some(false) => Ok(()),
                        _ => fail("atom is not refuted"),
                    }
                }
                _ => fail("expected an underivable atom"),
            },
            Formula::Lolli(a, b) | Formula::Imp(a, b) => {
                self.replay_at(base, res, &[(**a).clone()], b, w)
            }
            Formula::Tensor(a, b) => self.replay_pair(base, res, a, b, Clause::Tensor, w),
            Formula::And(a, b) if self.mode == ConjunctionMode::Generalized => {
                self.replay_pair(base, res, a, b, Clause::AndStar, w)
            }
            Formula::And(a, b) => match w {
                Witness::Conjunct {
                    index: 0,
                    refutation,
                } => self.replay_at(base, res, &[], a, refutation),
                Witness::Conjunct {
                    index: 1,
                    refutation,
                } => self.replay_at(base, res, &[], b, refutation),
                _ => fail("expected a failing conjunct"),
            },
            Formula::Unit => {
                let (ext, u, p, inner) = expect_instance(w, Clause::Unit)?;
                let x = self.instance_base(base, &ext)?;
                let p = p.ok_or_else(|| ReplayError("instance lacks its atom".into()))?;
                if self.derive(&x, &u, &p) != Some(true) {
                    return fail("hypothesis atom not derivable");
                }
                self.replay_at(&x, &res.union(&u), &[], &Formula::Atom(p), &inner)
            }
            Formula::Or(a, b) => {
                let (ext, u, p, inner) = expect_instance(w, Clause::Or)?;
                let x = self.instance_base(base, &ext)?;
                let p = p.ok_or_else(|| ReplayError("instance lacks its atom".into()))?;
                let goal = Formula::Atom(p.clone());
                if !u.is_empty()
                    || !self.certify(&x, &u, &[(**a).clone()], &goal)
                    || !self.certify(&x, &u, &[(**b).clone()], &goal)
                {
                    return fail("hypothesis not supported at the extension");
                }
                self.replay_at(&x, res, &[], &goal, &inner)
            }
            Formula::Falsum => match w {
                Witness::Underivable { resources, atom } if resources.is_empty() => {
                    match self.derive(base, resources, atom) {
                        Some(false) => Ok(()),
                        _ => fail("atom is not refuted"),
                    }
                }
                _ => fail("expected an underivable atom"),
            },
        }
    }
}
