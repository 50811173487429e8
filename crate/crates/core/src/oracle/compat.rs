use serde::{Deserialize, Serialize};

use crate::concept::Axiom;
use crate::error::Result;
use crate::normalize::{normalize_tbox_with, FreshNameGenerator};
use crate::reasoner::Reasoner;
use crate::tbox::TBox;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WarningKind {
    /// Answered true, but equivalent under the TBox to an axiom answered false.
    TrueMarkedButContradicted,
    /// Answered false, but follows from the TBox and the true answers.
    FalseMarkedButDerivable,
}

/// An answer that does not fit with the others. `support` is a subset of
/// the TBox and the other answers from which the conflict follows; it is
/// minimal with respect to removing single axioms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationWarning {
    pub kind: WarningKind,
    pub axiom: Axiom,
    pub support: Vec<Axiom>,
}

struct Entailer<'a> {
    reasoner: &'a Reasoner,
    sig_source: TBox,
}

impl Entailer<'_> {
    /// `axioms ⊨ goal`; the axioms may be arbitrary EL.
    fn entails(&self, axioms: &[Axiom], goal: &Axiom) -> Result<bool> {
        let mut t = TBox::new();
        t.extend_signature(self.sig_source.signature());
        for a in axioms {
            t.insert(a.clone());
        }
        let mut gen = FreshNameGenerator::new(t.signature());
        let n = normalize_tbox_with(&t, &mut gen);
        self.reasoner.entails(&n, goal)
    }

    /// Drops members of `axioms` one at a time, last first, while `goal`
    /// stays entailed.
    fn shrink(&self, mut axioms: Vec<Axiom>, goal: &Axiom) -> Result<Vec<Axiom>> {
        let mut i = axioms.len();
        while i > 0 {
            i -= 1;
            let removed = axioms.remove(i);
            if !self.entails(&axioms, goal)? {
                axioms.insert(i, removed);
            }
        }
        Ok(axioms)
    }
}

/// Finds answers that conflict with each other given `t`.
pub fn check_compatibility<'a>(
    answers: impl IntoIterator<Item = (&'a Axiom, bool)>,
    t: &TBox,
) -> Result<Vec<ValidationWarning>> {
    let answers: Vec<(&Axiom, bool)> = answers.into_iter().collect();
    let trues: Vec<Axiom> = answers.iter().filter(|(_, v)| *v).map(|(a, _)| (*a).clone()).collect();
    let falses: Vec<Axiom> = answers.iter().filter(|(_, v)| !*v).map(|(a, _)| (*a).clone()).collect();

    let mut sig_source = t.clone();
    for (a, _) in &answers {
        sig_source.extend_signature(TBox::from_axioms([(*a).clone()]).signature());
    }
    let e = Entailer { reasoner: Reasoner::shared(), sig_source };
    let base: Vec<Axiom> = t.axioms().cloned().collect();

    let mut out = Vec::new();
    for f in &falses {
        let everything: Vec<Axiom> = base.iter().chain(&trues).cloned().collect();
        if e.entails(&everything, f)? {
            out.push(ValidationWarning {
                kind: WarningKind::FalseMarkedButDerivable,
                axiom: f.clone(),
                support: e.shrink(everything, f)?,
            });
        }
    }
    for tr in &trues {
        for f in &falses {
            let with_true: Vec<Axiom> = base.iter().chain([tr]).cloned().collect();
            let with_false: Vec<Axiom> = base.iter().chain([f]).cloned().collect();
            if e.entails(&with_true, f)? && e.entails(&with_false, tr)? {
                out.push(ValidationWarning {
                    kind: WarningKind::TrueMarkedButContradicted,
                    axiom: tr.clone(),
                    support: vec![f.clone()],
                });
            }
        }
    }
    Ok(out)
}
