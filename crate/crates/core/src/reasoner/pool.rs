use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Classification, Reasoner};
use crate::concept::Concept;
use crate::error::Result;
use crate::tbox::TBox;

/// Which concepts sup/sub range over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PoolMode {
    /// Atomic names only.
    #[default]
    Atomic,
    /// Atomic names, pairwise conjunctions and `∃r.P`.
    Scc,
}

impl std::str::FromStr for PoolMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "atomic" => Ok(PoolMode::Atomic),
            "scc" => Ok(PoolMode::Scc),
            other => Err(format!("unknown pool mode '{other}' (expected atomic or scc)")),
        }
    }
}

impl std::fmt::Display for PoolMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PoolMode::Atomic => "atomic",
            PoolMode::Scc => "scc",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptPool {
    mode: PoolMode,
    members: Vec<Concept>,
}

/// The simple complex concepts over the signature of `t`: every `P`, every
/// `P ⊓ Q` with `P ≠ Q`, and every `∃r.P`. Never contains `Top`.
pub fn scc(t: &TBox) -> ConceptPool {
    ConceptPool::of(PoolMode::Scc, t)
}

impl ConceptPool {
    pub fn of(mode: PoolMode, t: &TBox) -> Self {
        let names: Vec<Concept> = t.signature().concepts.iter().cloned().map(Concept::Atomic).collect();
        let mut members = names.clone();
        if mode == PoolMode::Scc {
            for (i, p) in names.iter().enumerate() {
                for q in &names[i + 1..] {
                    members.push(Concept::and(p.clone(), q.clone()));
                }
            }
            for r in &t.signature().roles {
                for p in &names {
                    members.push(Concept::Exists(r.clone(), Box::new(p.clone())));
                }
            }
        }
        ConceptPool { mode, members }
    }

    pub fn mode(&self) -> PoolMode {
        self.mode
    }

    pub fn members(&self) -> &[Concept] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Classifies `t` so that every member and every concept in `extra` can
    /// be queried.
    pub fn classify(&self, r: &Reasoner, t: &TBox, extra: &[Concept]) -> Result<Arc<Classification>> {
        let mut wanted: Vec<Concept> = Vec::new();
        if self.mode == PoolMode::Scc {
            wanted.extend(self.members.iter().filter(|c| !c.is_basic()).cloned());
        }
        for c in extra {
            let needed = match c {
                Concept::Top => false,
                Concept::Atomic(n) => !t.signature().contains_concept(n),
                _ => true,
            };
            if needed && !wanted.contains(c) {
                wanted.push(c.clone());
            }
        }
        r.classify(t, &wanted)
    }
}

/// `(n² + n) / 2 + t·n`
pub fn scc_size(n: usize, t: usize) -> usize {
    (n * n + n) / 2 + t * n
}
