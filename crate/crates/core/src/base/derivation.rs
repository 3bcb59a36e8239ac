use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::rule::{AtomicRule, Base, Discipline};
use crate::outcome::{CheckResult, Rejection};
use crate::syntax::{Atom, AtomMultiset};

/// A derivation witnessing `S ⊢_B q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Derivation {
    /// `[q] ⊢ q` (multiset discipline) or `S ∪ {q} ⊢ q` (set discipline).
    Ref {
        #[serde(with = "multiset_serde")]
        resources: AtomMultiset,
        atom: Atom,
    },
    App {
        rule: AtomicRule,
        #[serde(with = "multiset_serde")]
        resources: AtomMultiset,
        goal: Atom,
        premises: Vec<PremiseDerivation>,
    },
}

/// The subderivation for one rule premise. `share` is the part of the
/// node's resources handed to this premise (the whole of it under the set
/// discipline); the subderivation's resources are `share ⨾ Qᵢ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PremiseDerivation {
    #[serde(with = "multiset_serde")]
    pub share: AtomMultiset,
    pub derivation: Arc<Derivation>,
}

pub(crate) mod multiset_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::syntax::{Atom, AtomMultiset};

    pub fn serialize<S: Serializer>(m: &AtomMultiset, s: S) -> Result<S::Ok, S::Error> {
        m.to_vec().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<AtomMultiset, D::Error> {
        Ok(Vec::<Atom>::deserialize(d)?.into_iter().collect())
    }
}

impl Derivation {
    pub fn resources(&self) -> &AtomMultiset {
        match self {
            Derivation::Ref { resources, .. } | Derivation::App { resources, .. } => resources,
        }
    }

    pub fn goal(&self) -> &Atom {
        match self {
            Derivation::Ref { atom, .. } => atom,
            Derivation::App { goal, .. } => goal,
        }
    }

    pub fn height(&self) -> usize {
        match self {
            Derivation::Ref { .. } => 1,
            Derivation::App { premises, .. } => {
                1 + premises
                    .iter()
                    .map(|p| p.derivation.height())
                    .max()
                    .unwrap_or(0)
            }
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Derivation::Ref { .. } => 1,
            Derivation::App { premises, .. } => {
                1 + premises
                    .iter()
                    .map(|p| p.derivation.node_count())
                    .sum::<usize>()
            }
        }
    }

    /// Rules used, in post-order (premises before the node concluding them).
    pub fn rules_postorder(&self) -> Vec<&AtomicRule> {
        let mut out = Vec::new();
        self.collect_rules(&mut out);
        out
    }

    fn collect_rules<'a>(&'a self, out: &mut Vec<&'a AtomicRule>) {
        if let Derivation::App { rule, premises, .. } = self {
            for p in premises {
                p.derivation.collect_rules(out);
            }
            out.push(rule);
        }
    }

    /// The node at a child-index path, if any.
    pub fn node_at(&self, path: &[usize]) -> Option<&Derivation> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => match self {
                Derivation::App { premises, .. } => premises.get(i)?.derivation.node_at(rest),
                Derivation::Ref { .. } => None,
            },
        }
    }

    /// JSON document with each rule's index in `base` alongside its text.
    pub fn to_document(&self, base: &Base) -> serde_json::Value {
        use serde_json::json;
        match self {
            Derivation::Ref { resources, atom } => json!({
                "kind": "ref",
                "resources": resources.to_vec(),
                "atom": atom,
            }),
            Derivation::App {
                rule,
                resources,
                goal,
                premises,
            } => json!({
                "kind": "app",
                "rule": rule,
                "rule_index": base.position(rule),
                "resources": resources.to_vec(),
                "goal": goal,
                "premises": premises.iter().map(|p| json!({
                    "share": p.share.to_vec(),
                    "derivation": p.derivation.to_document(base),
                })).collect::<Vec<_>>(),
            }),
        }
    }
}

/// Verifies every node of `d` against `base`.
pub fn check_derivation(base: &Base, d: &Derivation) -> CheckResult {
    let mut path = Vec::new();
    check_node(base, d, &mut path)
}

fn check_node(base: &Base, d: &Derivation, path: &mut Vec<usize>) -> CheckResult {
    let set = base.discipline() == Discipline::Set;
    if set && !d.resources().is_set() {
        return Err(Rejection::at(
            path,
            "set-discipline resources contain repeated atoms",
        ));
    }
    match d {
        Derivation::Ref { resources, atom } => {
            let ok = if set {
                resources.contains(atom)
            } else {
                resources.len() == 1 && resources.contains(atom)
            };
            if ok {
                Ok(())
            } else {
                Err(Rejection::at(
                    path,
                    format!("Ref does not apply to {:?} ⊢ {atom}", resources),
                ))
            }
        }
        Derivation::App {
            rule,
            resources,
            goal,
            premises,
        } => {
            if !base.contains(rule) {
                return Err(Rejection::at(
                    path,
                    format!("rule `{rule}` is not in the base"),
                ));
            }
            if &rule.conclusion != goal {
                return Err(Rejection::at(
                    path,
                    format!("rule `{rule}` does not conclude {goal}"),
                ));
            }
            if premises.len() != rule.premises.len() {
                return Err(Rejection::at(
                    path,
                    format!(
                        "rule has {} premises, node has {}",
                        rule.premises.len(),
                        premises.len()
                    ),
                ));
            }
            for (i, (prem, sub)) in rule.premises.iter().zip(premises).enumerate() {
                let expected_resources = if set {
                    if &sub.share != resources {
                        return Err(Rejection::at(
                            path,
                            format!("premise {i} does not receive the node's resources"),
                        ));
                    }
                    sub.share.union(&prem.assumptions).support()
                } else {
                    sub.share.union(&prem.assumptions)
                };
                if sub.derivation.goal() != &prem.conclusion {
                    return Err(Rejection::at(
                        path,
                        format!(
                            "premise {i} derives {} instead of {}",
                            sub.derivation.goal(),
                            prem.conclusion
                        ),
                    ));
                }
                if sub.derivation.resources() != &expected_resources {
                    return Err(Rejection::at(
                        path,
                        format!(
                            "premise {i} uses resources {:?}, expected {:?}",
                            sub.derivation.resources(),
                            expected_resources
                        ),
                    ));
                }
            }
            if !set {
                let total = AtomMultiset::union_all(premises.iter().map(|p| &p.share));
                if &total != resources {
                    return Err(Rejection::at(
                        path,
                        format!(
                            "premise shares {:?} do not add up to {:?}",
                            total, resources
                        ),
                    ));
                }
            }
            for (i, sub) in premises.iter().enumerate() {
                path.push(i);
                check_node(base, &sub.derivation, path)?;
                path.pop();
            }
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraftError {
    #[error("inner derivation {index} concludes {found}, expected {expected}")]
    ConclusionMismatch {
        index: usize,
        expected: Atom,
        found: Atom,
    },
    #[error("outer resources {outer:?} do not contain the grafted atoms {grafted:?}")]
    NotContained {
        outer: AtomMultiset,
        grafted: AtomMultiset,
    },
    #[error("grafting is defined for the multiset discipline only")]
    UnsupportedDiscipline,
}

/// Constructive atomic cut. Given `outer` deriving `P ⨾ S ⊢ q` with
/// `P = [p₁, …, pₙ]` and `inner[i]` deriving `Tᵢ ⊢ pᵢ`, builds a derivation
/// of `T₁ ⨾ … ⨾ Tₙ ⨾ S ⊢ q` by replacing the `Ref` leaves that consume the
/// `P` occurrences. The result uses the rules of both inputs.
pub fn graft(
    outer: &Derivation,
    p: &[Atom],
    inner: &[Derivation],
) -> Result<Derivation, GraftError> {
    if outer_is_set_shaped(outer) {
        return Err(GraftError::UnsupportedDiscipline);
    }
    for (i, (a, d)) in p.iter().zip(inner).enumerate() {
        if d.goal() != a {
            return Err(GraftError::ConclusionMismatch {
                index: i,
                expected: a.clone(),
                found: d.goal().clone(),
            });
        }
    }
    assert_eq!(
        p.len(),
        inner.len(),
        "one inner derivation per grafted atom"
    );
    let grafted: AtomMultiset = p.iter().cloned().collect();
    if !grafted.is_submultiset_of(outer.resources()) {
        return Err(GraftError::NotContained {
            outer: outer.resources().clone(),
            grafted,
        });
    }
    let mut queues: BTreeMap<Atom, std::collections::VecDeque<&Derivation>> = BTreeMap::new();
    for (a, d) in p.iter().zip(inner) {
        queues.entry(a.clone()).or_default().push_back(d);
    }
    Ok(graft_node(outer, &grafted, &mut queues))
}

/// Set-discipline Ref leaves may carry extra atoms; multiset ones never do.
fn outer_is_set_shaped(d: &Derivation) -> bool {
    match d {
        Derivation::Ref { resources, .. } => resources.len() != 1,
        Derivation::App {
            premises,
            resources,
            ..
        } => {
            let total = AtomMultiset::union_all(premises.iter().map(|p| &p.share));
            (!premises.is_empty() && &total != resources)
                || premises.iter().any(|p| outer_is_set_shaped(&p.derivation))
        }
    }
}

fn graft_node(
    d: &Derivation,
    marked: &AtomMultiset,
    queues: &mut BTreeMap<Atom, std::collections::VecDeque<&Derivation>>,
) -> Derivation {
    match d {
        Derivation::Ref { atom, .. } => {
            if marked.contains(atom) {
                let q = queues.get_mut(atom).expect("queue for marked atom");
                q.pop_front()
                    .expect("inner derivation for marked atom")
                    .clone()
            } else {
                d.clone()
            }
        }
        Derivation::App {
            rule,
            goal,
            premises,
            ..
        } => {
            let mut remaining = marked.clone();
            let mut new_premises = Vec::with_capacity(premises.len());
            for (prem, sub) in rule.premises.iter().zip(premises) {
                let mut mine = AtomMultiset::new();
                for (a, n) in sub.share.entries() {
                    let take = n.min(remaining.count(a));
                    for _ in 0..take {
                        remaining.remove_one(a);
                    }
                    mine.insert_n(a.clone(), take);
                }
                let new_sub = graft_node(&sub.derivation, &mine, queues);
                let local = new_sub
                    .resources()
                    .difference(&prem.assumptions)
                    .expect("premise assumptions survive grafting");
                new_premises.push(PremiseDerivation {
                    share: local,
                    derivation: Arc::new(new_sub),
                });
            }
            let resources = AtomMultiset::union_all(new_premises.iter().map(|p| &p.share));
            Derivation::App {
                rule: rule.clone(),
                resources,
                goal: goal.clone(),
                premises: new_premises,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(s: &str) -> Atom {
        Atom::new(s)
    }

    fn ms(items: &[&str]) -> AtomMultiset {
        items.iter().map(|s| at(s)).collect()
    }

    fn rule(s: &str) -> AtomicRule {
        s.parse().unwrap()
    }

    fn reff(a: &str) -> Derivation {
        Derivation::Ref {
            resources: ms(&[a]),
            atom: at(a),
        }
    }

    #[test]
    fn ref_checks_by_discipline() {
        let multi = Base::new(Discipline::Multiset);
        let set = Base::new(Discipline::Set);
        assert!(check_derivation(&multi, &reff("q")).is_ok());
        let wide = Derivation::Ref {
            resources: ms(&["p", "q"]),
            atom: at("q"),
        };
        assert!(check_derivation(&set, &wide).is_ok());
        assert!(check_derivation(&multi, &wide).is_err());
    }

    #[test]
    fn absent_rule_rejected() {
        let d = Derivation::App {
            rule: rule("=> p"),
            resources: ms(&[]),
            goal: at("p"),
            premises: vec![],
        };
        let err = check_derivation(&Base::new(Discipline::Multiset), &d).unwrap_err();
        assert!(err.location.is_empty());
        let b = Base::from_rules(Discipline::Multiset, [rule("=> p")]);
        assert!(check_derivation(&b, &d).is_ok());
    }

    #[test]
    fn graft_replaces_consumed_occurrence() {
        let r = rule("({} > p) => q");
        let outer = Derivation::App {
            rule: r.clone(),
            resources: ms(&["p"]),
            goal: at("q"),
            premises: vec![PremiseDerivation {
                share: ms(&["p"]),
                derivation: Arc::new(reff("p")),
            }],
        };
        let inner = Derivation::App {
            rule: rule("=> p"),
            resources: ms(&[]),
            goal: at("p"),
            premises: vec![],
        };
        let out = graft(&outer, &[at("p")], std::slice::from_ref(&inner)).unwrap();
        assert!(out.resources().is_empty());
        let x = Base::from_rules(Discipline::Multiset, [r, rule("=> p")]);
        assert!(check_derivation(&x, &out).is_ok());
        assert_eq!(graft(&outer, &[], &[]).unwrap(), outer);
        assert_eq!(graft(&outer, &[at("p")], &[reff("p")]).unwrap(), outer);
    }

    #[test]
    fn graft_rejects_mismatches() {
        let outer = reff("p");
        assert!(matches!(
            graft(&outer, &[at("p")], &[reff("q")]),
            Err(GraftError::ConclusionMismatch { .. })
        ));
        assert!(matches!(
            graft(&outer, &[at("q")], &[reff("q")]),
            Err(GraftError::NotContained { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let d = Derivation::App {
            rule: rule("({q} > p) => p"),
            resources: ms(&[]),
            goal: at("p"),
            premises: vec![PremiseDerivation {
                share: ms(&[]),
                derivation: Arc::new(reff("x")),
            }],
        };
        let text = serde_json::to_string(&d).unwrap();
        let back: Derivation = serde_json::from_str(&text).unwrap();
        assert_eq!(back, d);
    }
}
