//! Weakening, completing and the helpers they share.

use std::sync::Arc;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use super::Options;
use crate::concept::{Axiom, Concept};
use crate::error::{Error, Result};
use crate::normalize::normalize_axiom;
use crate::oracle::Judge;
use crate::reasoner::{Classification, ConceptPool, PoolMode, Reasoner};
use crate::tbox::TBox;

/// What one call to the weakening algorithm saw and produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Weakening {
    pub sup: Vec<Concept>,
    pub sub: Vec<Concept>,
    /// Every non-trivial `sb ⊑ sp` put to the oracle.
    pub candidates: Vec<Axiom>,
    pub axioms: Vec<Axiom>,
}

/// What one call to the completing algorithm saw and produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Completion {
    pub sup: Vec<Concept>,
    pub sub: Vec<Concept>,
    pub source: Vec<Concept>,
    pub target: Vec<Concept>,
    pub candidates: Vec<Axiom>,
    pub axioms: Vec<Axiom>,
}

/// Runs the repair operations against a judge.
pub struct Engine<'o> {
    pub judge: Judge<'o>,
    pub options: Options,
    reasoner: &'static Reasoner,
}

struct View {
    pool: ConceptPool,
    cls: Arc<Classification>,
    trivial: Arc<Classification>,
}

impl View {
    fn above(&self, c: &Concept) -> Vec<Concept> {
        self.pool.members().iter().filter(|m| self.cls.entails(c, m)).cloned().collect()
    }

    fn below(&self, c: &Concept) -> Vec<Concept> {
        self.pool.members().iter().filter(|m| self.cls.entails(m, c)).cloned().collect()
    }

    /// Valid in every TBox over this signature.
    fn is_trivial(&self, lhs: &Concept, rhs: &Concept) -> bool {
        self.trivial.entails(lhs, rhs)
    }
}

impl<'o> Engine<'o> {
    pub fn new(judge: Judge<'o>, options: Options) -> Self {
        Engine { judge, options, reasoner: Reasoner::shared() }
    }

    pub fn reasoner(&self) -> &'static Reasoner {
        self.reasoner
    }

    fn view(&self, t: &TBox, ax: &Axiom) -> Result<View> {
        let pool = ConceptPool::of(self.options.pool, t);
        let extra = [ax.lhs.clone(), ax.rhs.clone()];
        let cls = pool.classify(self.reasoner, t, &extra)?;
        let mut empty = TBox::new();
        empty.extend_signature(t.signature());
        let trivial = pool.classify(self.reasoner, &empty, &extra)?;
        Ok(View { pool, cls, trivial })
    }

    fn normalize_all(&mut self, axioms: &[Axiom]) -> Result<Vec<Axiom>> {
        let mut out: IndexSet<Axiom> = IndexSet::new();
        for a in axioms {
            out.extend(normalize_axiom(a, self.judge.names_mut())?);
        }
        Ok(out.into_iter().collect())
    }

    /// Judges `candidates` in order and returns the correct ones.
    fn correct(&mut self, candidates: &[Axiom]) -> Result<Vec<Axiom>> {
        let mut out = Vec::new();
        for c in candidates {
            if self.judge.judge(c)? {
                out.push(c.clone());
            }
        }
        Ok(out)
    }

    /// The weakened axiom set of `ax` with respect to `t`.
    pub fn weakened_axiom_set(&mut self, ax: &Axiom, t: &TBox) -> Result<Weakening> {
        let v = self.view(t, ax)?;
        let sub = v.below(&ax.lhs);
        let sup = v.above(&ax.rhs);
        let candidates: Vec<Axiom> = sub
            .iter()
            .flat_map(|sb| sup.iter().map(move |sp| Axiom::new(sb.clone(), sp.clone())))
            .filter(|c| !v.is_trivial(&c.lhs, &c.rhs))
            .collect();
        let correct = self.correct(&candidates)?;
        // sb' ⊑ sp' beats sb ⊑ sp when it has a more general left side or a
        // more specific right side, and is no worse in the other.
        let cls = &v.cls;
        let beaten = |c: &Axiom| {
            correct.iter().any(|d| {
                (cls.entails(&c.lhs, &d.lhs) && cls.strictly(&d.rhs, &c.rhs))
                    || (cls.strictly(&c.lhs, &d.lhs) && cls.entails(&d.rhs, &c.rhs))
            })
        };
        let maximal: Vec<Axiom> = correct.iter().filter(|c| !beaten(c)).cloned().collect();
        let maximal = dedup_equivalent(maximal, cls);
        let axioms = self.normalize_all(&maximal)?;
        Ok(Weakening { sup, sub, candidates, axioms })
    }

    /// The completed axiom set of `ax` with respect to `t`. `ax` must be
    /// judged correct.
    pub fn completed_axiom_set(&mut self, ax: &Axiom, t: &TBox) -> Result<Completion> {
        if !self.judge.judge(ax)? {
            return Err(Error::ContractViolation(ax.clone()));
        }
        let v = self.view(t, ax)?;
        let sup = v.above(&ax.lhs);
        let sub = v.below(&ax.rhs);
        let (source, target) = source_target_in(&v, ax, &sup, &sub);
        let (left, right) = if self.options.equiv_exclude { (&source, &target) } else { (&sup, &sub) };
        let candidates: Vec<Axiom> = left
            .iter()
            .flat_map(|sp| right.iter().map(move |sb| Axiom::new(sp.clone(), sb.clone())))
            .filter(|c| !v.is_trivial(&c.lhs, &c.rhs))
            .collect();
        let correct = self.correct(&candidates)?;
        // sp' ⊑ sb' beats sp ⊑ sb when it has a more general left side or a
        // more specific right side, and is no worse in the other.
        let cls = &v.cls;
        let beaten = |c: &Axiom| {
            correct.iter().any(|d| {
                (cls.entails(&c.lhs, &d.lhs) && cls.strictly(&d.rhs, &c.rhs))
                    || (cls.strictly(&c.lhs, &d.lhs) && cls.entails(&d.rhs, &c.rhs))
            })
        };
        let maximal: Vec<Axiom> = correct.iter().filter(|c| !beaten(c)).cloned().collect();
        let maximal = dedup_equivalent(maximal, cls);
        let mut all = vec![ax.clone()];
        all.extend(maximal);
        let mut axioms = if ax.is_normalized() {
            let mut out = vec![ax.clone()];
            for a in self.normalize_all(&all[1..])? {
                if !out.contains(&a) {
                    out.push(a);
                }
            }
            out
        } else {
            self.normalize_all(&all)?
        };
        if self.options.prune {
            axioms = prune(axioms, self.reasoner)?;
        }
        Ok(Completion { sup, sub, source, target, candidates, axioms })
    }

    /// `(sup(α) \ sup(β), sub(β) \ sub(α))` for `ax = α ⊑ β`.
    pub fn source_target(&self, ax: &Axiom, t: &TBox) -> Result<(Vec<Concept>, Vec<Concept>)> {
        let v = self.view(t, ax)?;
        let sup = v.above(&ax.lhs);
        let sub = v.below(&ax.rhs);
        Ok(source_target_in(&v, ax, &sup, &sub))
    }
}

/// `(sup(α) \ sup(β), sub(β) \ sub(α))` for `ax = α ⊑ β` over the pool of
/// `t`, without an engine.
pub fn source_target(t: &TBox, ax: &Axiom, pool: PoolMode) -> Result<(Vec<Concept>, Vec<Concept>)> {
    let reasoner = Reasoner::shared();
    let pool = ConceptPool::of(pool, t);
    let extra = [ax.lhs.clone(), ax.rhs.clone()];
    let cls = pool.classify(reasoner, t, &extra)?;
    let trivial = cls.clone();
    let v = View { pool, cls, trivial };
    let sup = v.above(&ax.lhs);
    let sub = v.below(&ax.rhs);
    Ok(source_target_in(&v, ax, &sup, &sub))
}

fn source_target_in(v: &View, ax: &Axiom, sup_a: &[Concept], sub_b: &[Concept]) -> (Vec<Concept>, Vec<Concept>) {
    let sup_b = v.above(&ax.rhs);
    let sub_a = v.below(&ax.lhs);
    let source = sup_a.iter().filter(|c| !sup_b.contains(c)).cloned().collect();
    let target = sub_b.iter().filter(|c| !sub_a.contains(c)).cloned().collect();
    (source, target)
}

/// Keeps one axiom, the least in canonical order, from each group of
/// candidates whose sides are pairwise equivalent.
fn dedup_equivalent(axioms: Vec<Axiom>, cls: &Classification) -> Vec<Axiom> {
    let equiv = |a: &Concept, b: &Concept| cls.entails(a, b) && cls.entails(b, a);
    axioms
        .iter()
        .filter(|a| {
            !axioms.iter().any(|b| b < *a && equiv(&a.lhs, &b.lhs) && equiv(&a.rhs, &b.rhs))
        })
        .cloned()
        .collect()
}

/// Drops axioms entailed by the others, last first. Never empties a
/// non-empty set.
pub fn prune(mut axioms: Vec<Axiom>, reasoner: &Reasoner) -> Result<Vec<Axiom>> {
    let mut i = axioms.len();
    while i > 0 {
        i -= 1;
        if axioms.len() == 1 {
            break;
        }
        let others = TBox::from_axioms(axioms.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, a)| a.clone()));
        if reasoner.entails(&others, &axioms[i])? {
            axioms.remove(i);
        }
    }
    Ok(axioms)
}
