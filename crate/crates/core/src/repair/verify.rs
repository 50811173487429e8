//! Checking a repair and comparing ontologies.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::concept::{Axiom, Concept};
use crate::error::Result;
use crate::normalize::{normalize_tbox_with, FreshNameGenerator};
use crate::oracle::{Judge, Oracle};
use crate::reasoner::Reasoner;
use crate::tbox::TBox;

/// Whether a set of added axioms repairs a TBox.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub valid: bool,
    /// Added axioms the oracle judges wrong.
    pub rejected: Vec<Axiom>,
    /// Wrong axioms that still follow from the result.
    pub rederived: Vec<Axiom>,
}

fn normalized(t: TBox) -> TBox {
    if t.is_normalized() {
        t
    } else {
        let mut gen = FreshNameGenerator::new(t.signature());
        normalize_tbox_with(&t, &mut gen)
    }
}

/// `a` repairs `t` for `w` when the judge accepts every member of `a` and
/// no member of `w` follows from `(t ∪ a) \ w`.
pub fn verify_repair(t: &TBox, w: &[Axiom], a: &[Axiom], judge: &mut Judge) -> Result<Verdict> {
    let mut rejected = Vec::new();
    for ax in a {
        if !judge.judge(ax)? {
            rejected.push(ax.clone());
        }
    }
    let mut result = t.clone();
    for ax in a {
        result.insert(ax.clone());
    }
    let result = normalized(result.remove_axioms(w));
    let reasoner = Reasoner::shared();
    let mut rederived = Vec::new();
    for ax in w {
        if reasoner.entails(&result, ax)? {
            rederived.push(ax.clone());
        }
    }
    Ok(Verdict { valid: rejected.is_empty() && rederived.is_empty(), rejected, rederived })
}

/// How a first ontology relates to a second in one dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    More,
    Less,
    Equal,
    Incomparable,
}

impl Relation {
    fn of(a: &BTreeSet<Axiom>, b: &BTreeSet<Axiom>) -> Relation {
        match (a.is_superset(b), b.is_superset(a)) {
            (true, true) => Relation::Equal,
            (true, false) => Relation::More,
            (false, true) => Relation::Less,
            (false, false) => Relation::Incomparable,
        }
    }
}

/// `completeness` compares the correct probe axioms each ontology entails;
/// `incorrectness` compares the wrong ones. `More` in either reads as "the
/// first ontology entails more of them".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub completeness: Relation,
    pub incorrectness: Relation,
    pub correct_only_first: Vec<Axiom>,
    pub correct_only_second: Vec<Axiom>,
    pub wrong_only_first: Vec<Axiom>,
    pub wrong_only_second: Vec<Axiom>,
}

/// Every `A ⊑ B` with distinct concept names from either signature.
pub fn default_probe(t1: &TBox, t2: &TBox) -> Vec<Axiom> {
    let sig = t1.signature().union(t2.signature());
    let names: Vec<_> = sig.concepts.iter().collect();
    let mut out = Vec::with_capacity(names.len() * names.len().saturating_sub(1));
    for a in &names {
        for b in &names {
            if a != b {
                out.push(Axiom::new(Concept::Atomic((*a).clone()), Concept::Atomic((*b).clone())));
            }
        }
    }
    out
}

/// Probe members entailed by `t`.
pub fn probe_entailments(t: &TBox, probe: &[Axiom]) -> Result<BTreeSet<Axiom>> {
    let t = normalized(t.clone());
    let extra: Vec<Concept> = probe.iter().flat_map(|a| [a.lhs.clone(), a.rhs.clone()]).collect();
    let cls = Reasoner::shared().classify(&t, &extra)?;
    Ok(probe.iter().filter(|a| cls.entails_axiom(a)).cloned().collect())
}

/// Compares two ontologies over the axioms of `probe`.
pub fn compare_ontologies(t1: &TBox, t2: &TBox, oracle: &mut dyn Oracle, probe: &[Axiom]) -> Result<Comparison> {
    let e1 = probe_entailments(t1, probe)?;
    let e2 = probe_entailments(t2, probe)?;
    let mut judge = Judge::new(oracle, FreshNameGenerator::default());
    let mut split = |e: &BTreeSet<Axiom>| -> Result<(BTreeSet<Axiom>, BTreeSet<Axiom>)> {
        let (mut right, mut wrong) = (BTreeSet::new(), BTreeSet::new());
        for a in e {
            if judge.judge(a)? {
                right.insert(a.clone());
            } else {
                wrong.insert(a.clone());
            }
        }
        Ok((right, wrong))
    };
    let (c1, w1) = split(&e1)?;
    let (c2, w2) = split(&e2)?;
    Ok(Comparison {
        completeness: Relation::of(&c1, &c2),
        incorrectness: Relation::of(&w1, &w2),
        correct_only_first: c1.difference(&c2).cloned().collect(),
        correct_only_second: c2.difference(&c1).cloned().collect(),
        wrong_only_first: w1.difference(&w2).cloned().collect(),
        wrong_only_second: w2.difference(&w1).cloned().collect(),
    })
}
