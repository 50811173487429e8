//! Repairing a TBox that contains wrong axioms.

mod ops;
mod strategy;
mod verify;

use std::fmt;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

pub use ops::{prune, source_target, Completion, Engine, Weakening};
pub use strategy::{
    run_strategy, AddBack, Block, CompletionEntry, Composition, Removal, RunReport, Scope, StrategySpec, Update,
};
pub use verify::{compare_ontologies, default_probe, probe_entailments, verify_repair, Comparison, Relation, Verdict};

use crate::concept::Axiom;
use crate::error::{Error, Result};
use crate::parse::{parse_axiom_list, parse_tbox, Warning};
use crate::reasoner::{entails, PoolMode};
use crate::tbox::TBox;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Options {
    pub pool: PoolMode,
    /// Complete over source/target sets instead of full sup/sub sets.
    pub equiv_exclude: bool,
    /// Drop added axioms that follow from the other added axioms.
    pub prune: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { pool: PoolMode::Atomic, equiv_exclude: false, prune: true }
    }
}

/// A requirement on a repair problem that does not hold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "axiom", rename_all = "snake_case")]
pub enum Precondition {
    /// A wrong axiom is not part of the TBox.
    #[serde(rename = "not_in_tbox")]
    NotInTBox(Axiom),
    /// The TBox contains an axiom outside the four normal shapes.
    NotNormalized(Axiom),
    /// The oracle judges a wrong axiom correct.
    NotFalse(Axiom),
    /// A wrong axiom still follows once all wrong axioms are removed.
    DerivableAfterRemoval(Axiom),
}

impl Precondition {
    pub fn axiom(&self) -> &Axiom {
        match self {
            Precondition::NotInTBox(a)
            | Precondition::NotNormalized(a)
            | Precondition::NotFalse(a)
            | Precondition::DerivableAfterRemoval(a) => a,
        }
    }
}

impl fmt::Display for Precondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precondition::NotInTBox(a) => write!(f, "wrong axiom {a} is not in the ontology"),
            Precondition::NotNormalized(a) => write!(f, "axiom {a} is not normalized"),
            Precondition::NotFalse(a) => write!(f, "the oracle judges wrong axiom {a} correct"),
            Precondition::DerivableAfterRemoval(a) => {
                write!(f, "wrong axiom {a} is still derivable after removing all wrong axioms")
            }
        }
    }
}

/// A normalized TBox with an ordered list of wrong axioms.
///
/// Construction checks everything that does not need the oracle; whether
/// the oracle rejects each wrong axiom is checked when a strategy runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairProblem {
    t: TBox,
    w: Vec<Axiom>,
    pub options: Options,
}

impl RepairProblem {
    pub fn new(t: TBox, w: impl IntoIterator<Item = Axiom>, options: Options) -> Result<Self> {
        let w: Vec<Axiom> = w.into_iter().collect::<IndexSet<_>>().into_iter().collect();
        if let Some(a) = t.axioms().find(|a| !a.is_normalized()) {
            return Err(Error::Precondition(Precondition::NotNormalized(a.clone())));
        }
        if let Some(a) = w.iter().find(|a| !t.contains(a)) {
            return Err(Error::Precondition(Precondition::NotInTBox(a.clone())));
        }
        let rest = t.remove_axioms(&w);
        for a in &w {
            if entails(&rest, a)? {
                return Err(Error::Precondition(Precondition::DerivableAfterRemoval(a.clone())));
            }
        }
        Ok(RepairProblem { t, w, options })
    }

    /// Reads a TBox and a list of wrong axioms in the text format.
    pub fn from_text(ontology: &str, wrong: &str, options: Options) -> Result<(Self, Vec<Warning>)> {
        let parsed = parse_tbox(ontology)?;
        let w = parse_axiom_list(wrong)?;
        Ok((RepairProblem::new(parsed.tbox, w, options)?, parsed.warnings))
    }

    pub fn tbox(&self) -> &TBox {
        &self.t
    }

    pub fn wrong(&self) -> &[Axiom] {
        &self.w
    }

    /// `t \ w`
    pub fn remainder(&self) -> TBox {
        self.t.remove_axioms(&self.w)
    }
}
