use std::fs;
use std::path::Path;

use besiml::base::{check_derivation, Base, Derivation, Deriver, Discipline, Limits};
use besiml::calculus::{check_proof, check_proof_of, prove_any, Proof, ProverBudget};
use besiml::crosscheck::{atom_names, crosscheck_sequents, enumerate_sequents, CrosscheckConfig};
use besiml::flatten::{bespoke_for, ConjunctionMode};
use besiml::semantics::{
    default_alphabet, EnumeratorBounds, EvalOutcome, SearchSpace, SupportEvaluator,
    SupportJudgement, Witness,
};
use besiml::syntax::{
    parse_atom_list, parse_sequent_file, parse_sequent_with, Atom, AtomMultiset, Formula, Logic,
    Sequent,
};
use besiml::Outcome;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde_json::{json, Value};

use crate::output::Emitter;
use crate::{
    CheckArgs, CliError, CrosscheckArgs, DeriveArgs, FlattenArgs, LogicArg, ModeArg, ProveArgs,
    SupportArgs,
};

pub const AFFIRMATIVE: i32 = 0;
pub const NEGATIVE: i32 = 1;
pub const INDETERMINATE: i32 = 2;

/// Default budgets, overridden by `BESIML_BUDGET` when set.
#[derive(Clone, Copy, Debug)]
pub struct Budgets {
    pub prover: ProverBudget,
    pub limits: Limits,
    pub support_work: u64,
}

impl Budgets {
    pub fn from_env() -> Result<Budgets, CliError> {
        let mut b = Budgets {
            prover: ProverBudget::default(),
            limits: Limits::default(),
            support_work: besiml::semantics::DEFAULT_EVAL_WORK,
        };
        if let Ok(text) = std::env::var("BESIML_BUDGET") {
            let work: u64 = text.trim().parse().map_err(|_| {
                CliError::Usage(format!(
                    "BESIML_BUDGET must be a non-negative integer, got `{text}`"
                ))
            })?;
            b.prover.work = work;
            b.limits.work = work;
            b.support_work = work;
        }
        Ok(b)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn sequent(text: &str, logic: Logic) -> Result<Sequent, CliError> {
    parse_sequent_with(text, logic, true)
        .map_err(|e| CliError::Usage(format!("cannot parse `{text}`: {e}")))
}

fn discipline(logic: Logic) -> Discipline {
    match logic {
        Logic::Imll => Discipline::Multiset,
        Logic::Ipl => Discipline::Set,
    }
}

fn load_base(path: &Path, logic: Logic) -> Result<Base, CliError> {
    Base::parse(&read(path)?, discipline(logic))
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn outcome_code<T>(o: &Outcome<T>) -> i32 {
    match o {
        Outcome::Found(_) => AFFIRMATIVE,
        Outcome::NotFound => NEGATIVE,
        Outcome::BudgetExhausted => INDETERMINATE,
    }
}

pub fn prove(args: &ProveArgs, out: &Emitter, budgets: Budgets) -> Result<i32, CliError> {
    let logic: Logic = args.logic.into();
    let sequents = match (&args.sequent, &args.file) {
        (Some(text), None) => vec![sequent(text, logic)?],
        (None, Some(path)) => parse_sequent_file(&read(path)?, logic)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?,
        _ => {
            return Err(CliError::Usage(
                "give exactly one of a sequent or --file".into(),
            ))
        }
    };
    if args.emit_proof.is_some() && sequents.len() != 1 {
        return Err(CliError::Usage(
            "--emit-proof needs a single sequent".into(),
        ));
    }
    let mut code = AFFIRMATIVE;
    for s in &sequents {
        let result = prove_any(s, &budgets.prover);
        let c = outcome_code(&result);
        code = code.max(c);
        if let (Some(path), Outcome::Found(p)) = (&args.emit_proof, &result) {
            write(path, &format!("{:#}\n", p.to_json()))?;
        }
        let proof = result.as_ref().found();
        out.emit(
            json!({
                "sequent": s.to_string(),
                "logic": logic.to_string(),
                "outcome": result.label(),
                "proof": proof.map(Proof::to_json),
            }),
            || match proof {
                Some(p) => format!("{s}: provable\n{p}"),
                None => format!("{s}: {}", result.label()),
            },
        );
    }
    Ok(code)
}

pub fn check(args: &CheckArgs, out: &Emitter) -> Result<i32, CliError> {
    let logic: Logic = args.logic.into();
    let (kind, result) = match (&args.proof, &args.derivation, &args.base) {
        (Some(path), None, None) => {
            let v: Value = serde_json::from_str(&read(path)?)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            let p = Proof::from_json(&v, logic)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            let result = match &args.sequent {
                Some(text) => check_proof_of(&p, &sequent(text, logic)?),
                None => check_proof(&p),
            };
            ("proof", result)
        }
        (None, Some(path), Some(base_path)) => {
            let base = load_base(base_path, logic)?;
            let d: Derivation = serde_json::from_str(&read(path)?)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            ("derivation", check_derivation(&base, &d))
        }
        _ => {
            return Err(CliError::Usage(
                "give --proof, or --derivation together with --base".into(),
            ))
        }
    };
    let rejection = result.as_ref().err().map(ToString::to_string);
    out.emit(
        json!({ "kind": kind, "accepted": result.is_ok(), "rejection": rejection }),
        || match &rejection {
            None => format!("{kind} accepted"),
            Some(r) => format!("{kind} rejected: {r}"),
        },
    );
    Ok(if result.is_ok() {
        AFFIRMATIVE
    } else {
        NEGATIVE
    })
}

pub fn derive(args: &DeriveArgs, out: &Emitter, budgets: Budgets) -> Result<i32, CliError> {
    let logic: Logic = args.logic.into();
    let base = load_base(&args.base, logic)?;
    let q = sequent(&args.query, logic)?;
    let resources: AtomMultiset = q
        .context
        .iter()
        .map(|f| f.as_atom().cloned())
        .collect::<Option<_>>()
        .ok_or_else(|| CliError::Usage("derivability queries take atoms only".into()))?;
    let goal = q
        .conclusion
        .as_atom()
        .cloned()
        .ok_or_else(|| CliError::Usage("the goal must be an atom".into()))?;
    let resources = if logic == Logic::Ipl {
        resources.support()
    } else {
        resources
    };
    let mut limits = budgets.limits;
    if args.max_resources.is_some() {
        limits.max_resources = args.max_resources;
    }
    let mut d = Deriver::new(&base, limits);
    let result = d
        .derive(&resources, &goal)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let capped = matches!(result, Outcome::NotFound) && d.last_report().truncated;
    let (label, code) = if capped {
        ("capped", INDETERMINATE)
    } else {
        (result.label(), outcome_code(&result))
    };
    if let (Some(path), Outcome::Found(der)) = (&args.emit, &result) {
        let text = serde_json::to_string_pretty(der).expect("derivations serialize");
        write(path, &format!("{text}\n"))?;
    }
    let found = result.as_ref().found();
    out.emit(
        json!({
            "query": format!("{q}"),
            "outcome": label,
            "states": d.last_report().states,
            "derivation": found.map(|x| x.to_document(&base)),
        }),
        || match found {
            Some(x) => {
                let mut s = format!("{q}: derivable\n");
                for r in x.rules_postorder() {
                    s.push_str(&format!("  {r}\n"));
                }
                s
            }
            None => format!("{q}: {label}"),
        },
    );
    Ok(code)
}

pub fn flatten(args: &FlattenArgs, out: &Emitter) -> Result<i32, CliError> {
    let logic: Logic = args.logic.into();
    let s = sequent(&args.sequent, logic)?;
    let bb = bespoke_for(&s, args.mode.into()).map_err(|e| CliError::Usage(e.to_string()))?;
    let (ctx, goal) = bb
        .flatten_sequent(&s)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let flat = Sequent::new(
        logic,
        ctx.iter().cloned().map(Formula::Atom),
        Formula::Atom(goal),
    );
    let fresh: Vec<(String, String)> = bb
        .map
        .fresh_atoms()
        .iter()
        .map(|(a, f)| (a.to_string(), f.to_string()))
        .collect();
    if let Some(path) = &args.out {
        write(path, &bb.base.to_text())?;
    }
    let table: Vec<Value> = bb
        .map
        .table()
        .iter()
        .map(|(f, a)| json!([f.to_string(), a.to_string()]))
        .collect();
    let rules: Vec<Value> = bb
        .base
        .rules()
        .iter()
        .map(|r| json!({ "rule": r.to_string(), "origin": bb.origin(r).map(|o| o.label()) }))
        .collect();
    out.emit(
        json!({
            "sequent": s.to_string(),
            "flattened": flat.to_string(),
            "table": table,
            "fresh_atoms": fresh.iter().map(|(a, f)| json!([a, f])).collect::<Vec<_>>(),
            "base_size": bb.base.len(),
            "base": if args.emit_base { Value::Array(rules) } else { Value::Null },
        }),
        || {
            let mut text = format!("flattened: {flat}\n");
            text.push_str(&format!("fresh atoms: {}\n", fresh.len()));
            for (a, f) in &fresh {
                text.push_str(&format!("  {a}\t{f}\n"));
            }
            text.push_str("table:\n");
            for (f, a) in bb.map.table() {
                text.push_str(&format!("  {f}\t{a}\n"));
            }
            text.push_str(&format!("base: {} rules\n", bb.base.len()));
            if args.emit_base {
                for r in bb.base.rules() {
                    let label = bb.origin(r).map_or("", |o| o.label());
                    text.push_str(&format!("{r}\t# {label}\n"));
                }
            }
            text
        },
    );
    Ok(AFFIRMATIVE)
}

pub fn support(args: &SupportArgs, out: &Emitter, budgets: Budgets) -> Result<i32, CliError> {
    let logic: Logic = args.logic.into();
    let mode: ConjunctionMode = args.mode.into();
    let s = sequent(&args.sequent, logic)?;
    let mut j = SupportJudgement::validity(&s, mode);
    if let Some(path) = &args.base {
        j.base = load_base(path, logic)?;
    }
    if let Some(text) = &args.resources {
        let atoms = parse_atom_list(text, true).map_err(|e| CliError::Usage(e.to_string()))?;
        j.resources = atoms.into_iter().collect();
    }
    let alphabet = match &args.alphabet {
        Some(text) => parse_atom_list(text, true).map_err(|e| CliError::Usage(e.to_string()))?,
        None => {
            let mut a = default_alphabet(&s);
            for extra in j.atoms() {
                if !a.contains(&extra) {
                    a.push(extra);
                }
            }
            a
        }
    };
    let defaults = EnumeratorBounds::default();
    let bounds = EnumeratorBounds {
        max_rules: args.max_rules.unwrap_or(defaults.max_rules),
        max_premises: args.max_premises.unwrap_or(defaults.max_premises),
        max_assumptions: args.max_assumptions.unwrap_or(defaults.max_assumptions),
        max_resources: args.max_resources.unwrap_or(defaults.max_resources),
    };
    let space = SearchSpace::new(alphabet.clone(), bounds);
    let mut ev =
        SupportEvaluator::new(logic, mode, space).map_err(|e| CliError::Usage(e.to_string()))?;
    let work = args.work.unwrap_or(budgets.support_work);
    let outcome = ev
        .eval(&j, work)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let report = ev.last_report();
    let (code, replayed) = match &outcome {
        EvalOutcome::Holds => (AFFIRMATIVE, None),
        EvalOutcome::Refuted(w) => (NEGATIVE, Some(ev.replay(&j, w).map_err(|e| e.to_string()))),
        EvalOutcome::NotRefutedWithinBudget(_) => (INDETERMINATE, None),
    };
    let witness = match &outcome {
        EvalOutcome::Refuted(w) => Some(w),
        _ => None,
    };
    if let (Some(dir), Some(w)) = (&args.emit_witness, witness) {
        export_witness(dir, logic, &j.base, w)?;
    }
    let replay_ok = replayed.as_ref().map(Result::is_ok);
    out.emit(
        json!({
            "sequent": s.to_string(),
            "alphabet": alphabet.iter().map(Atom::to_string).collect::<Vec<_>>(),
            "bounds": bounds,
            "outcome": outcome.label(),
            "work": report.work,
            "extensions": report.extensions,
            "instances": report.instances,
            "witness": witness,
            "replayed": replay_ok,
        }),
        || {
            let mut text = format!("{s}: {}\n", outcome.label());
            text.push_str(&format!(
                "work {} over {} extensions, {} instances\n",
                report.work, report.extensions, report.instances
            ));
            if let Some(w) = witness {
                describe(w, 0, &mut text);
                match &replayed {
                    Some(Ok(())) => text.push_str("witness replayed\n"),
                    Some(Err(e)) => text.push_str(&format!("witness failed to replay: {e}\n")),
                    None => {}
                }
            }
            text
        },
    );
    match replayed {
        Some(Err(e)) => Err(CliError::Internal(e)),
        _ => Ok(code),
    }
}

fn describe(w: &Witness, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match w {
        Witness::Underivable { resources, atom } => {
            let res: Vec<String> = resources.iter().map(Atom::to_string).collect();
            let lhs = if res.is_empty() {
                String::new()
            } else {
                format!("{} ", res.join(", "))
            };
            out.push_str(&format!("{pad}fails: {lhs}|- {atom}\n"));
        }
        Witness::Instance {
            clause,
            extension,
            resources,
            atom,
            refutation,
        } => {
            let res: Vec<String> = resources.iter().map(Atom::to_string).collect();
            out.push_str(&format!(
                "{pad}{clause:?} instance, U = {{{}}}{}, extension of {} rules:\n",
                res.join(","),
                atom.as_ref()
                    .map(|a| format!(", p = {a}"))
                    .unwrap_or_default(),
                extension.len()
            ));
            for r in extension {
                out.push_str(&format!("{pad}  {r}\n"));
            }
            describe(refutation, depth + 1, out);
        }
        Witness::Conjunct { index, refutation } => {
            out.push_str(&format!("{pad}conjunct {index} fails\n"));
            describe(refutation, depth + 1, out);
        }
    }
}

/// Writes the witness as JSON, the base in force at each level in the base
/// file format, and a script of the derive queries that fail at the leaves.
fn export_witness(dir: &Path, logic: Logic, seed: &Base, w: &Witness) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io {
        path: dir.to_path_buf(),
        source: e,
    })?;
    let text = serde_json::to_string_pretty(w).expect("witnesses serialize");
    write(&dir.join("witness.json"), &format!("{text}\n"))?;
    let mut script = String::from(
        "#!/bin/sh\n# Each query below is expected to exit 1 (not derivable).\nset -u\n",
    );
    let mut level = 0;
    let mut rules = seed.rules().to_vec();
    let mut cur = w;
    loop {
        let name = format!("level-{level}.base");
        let base = Base::from_rules(seed.discipline(), rules.iter().cloned());
        write(&dir.join(&name), &base.to_text())?;
        match cur {
            Witness::Underivable { resources, atom } => {
                let res: Vec<String> = resources.iter().map(Atom::to_string).collect();
                script.push_str(&format!(
                    "besiml derive --logic {logic} --base {name} '{} |- {atom}'; test $? -eq 1 || exit 1\n",
                    res.join(", ")
                ));
                break;
            }
            Witness::Instance {
                extension,
                refutation,
                ..
            } => {
                rules = extension.clone();
                cur = refutation;
                level += 1;
            }
            Witness::Conjunct { refutation, .. } => cur = refutation,
        }
    }
    write(&dir.join("replay.sh"), &script)
}

pub fn crosscheck(args: &CrosscheckArgs, out: &Emitter, budgets: Budgets) -> Result<i32, CliError> {
    let logic: Logic = args.logic.into();
    let mut cfg = CrosscheckConfig::new(logic, args.atoms, args.max_connectives, args.max_context);
    cfg.mode = args.mode.into();
    cfg.prover = budgets.prover;
    cfg.limits = budgets.limits;
    let mut family = enumerate_sequents(
        logic,
        &atom_names(args.atoms),
        args.max_connectives,
        args.max_context,
    );
    if let Some(n) = args.sample {
        let mut rng = rand::rngs::StdRng::seed_from_u64(args.seed);
        family.shuffle(&mut rng);
        family.truncate(n);
        family.sort();
    }
    let report = crosscheck_sequents(&family, &cfg);
    let pct = report.agreement_percent();
    let pct_text = if report.perfect() {
        "100".to_string()
    } else {
        format!("{pct:.2}")
    };
    let disagreements: Vec<Value> = report
        .disagreements
        .iter()
        .map(|c| json!({ "sequent": c.sequent.to_string(), "provable": c.provable, "derivable": c.derivable }))
        .collect();
    out.emit(
        json!({
            "logic": logic.to_string(),
            "total": report.total,
            "agreed": report.agreed,
            "provable": report.provable,
            "agreement_percent": pct,
            "indeterminate": report.indeterminate.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "capped": report.capped.len(),
            "disagreements": disagreements,
        }),
        || {
            let mut text = format!(
                "sequents {} provable {} indeterminate {} capped {}\n",
                report.total,
                report.provable,
                report.indeterminate.len(),
                report.capped.len()
            );
            for c in &report.disagreements {
                text.push_str(&format!(
                    "disagreement: {} provable={:?} derivable={:?}\n",
                    c.sequent, c.provable, c.derivable
                ));
            }
            for s in &report.indeterminate {
                text.push_str(&format!("indeterminate: {s}\n"));
            }
            text.push_str(&format!("agreement {pct_text}%\n"));
            text
        },
    );
    Ok(if !report.disagreements.is_empty() {
        NEGATIVE
    } else if !report.indeterminate.is_empty() {
        INDETERMINATE
    } else {
        AFFIRMATIVE
    })
}

impl From<LogicArg> for Logic {
    fn from(l: LogicArg) -> Logic {
        match l {
            LogicArg::Imll => Logic::Imll,
            LogicArg::Ipl => Logic::Ipl,
        }
    }
}

impl From<ModeArg> for ConjunctionMode {
    fn from(m: ModeArg) -> ConjunctionMode {
        match m {
            ModeArg::Standard => ConjunctionMode::Standard,
            ModeArg::Generalized => ConjunctionMode::Generalized,
        }
    }
}
