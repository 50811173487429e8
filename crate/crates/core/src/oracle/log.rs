use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Oracle, OracleError};
use crate::concept::Axiom;
use crate::normalize::FreshNameGenerator;

/// Every judgement made during a run, in order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryLog {
    entries: Vec<(Axiom, bool)>,
}

impl QueryLog {
    pub fn push(&mut self, ax: Axiom, answer: bool) {
        self.entries.push((ax, answer));
    }

    pub fn entries(&self) -> &[(Axiom, bool)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of different axioms judged: the validation effort.
    pub fn distinct(&self) -> usize {
        self.answers().len()
    }

    /// First answer per axiom, in first-asked order.
    pub fn answers(&self) -> Vec<(Axiom, bool)> {
        let mut seen: HashMap<&Axiom, ()> = HashMap::new();
        self.entries
            .iter()
            .filter(|(a, _)| seen.insert(a, ()).is_none())
            .cloned()
            .collect()
    }
}

/// Memoizing, recording front end to an oracle.
///
/// Generated names are expanded to the concepts they stand for before the
/// oracle sees an axiom, so the expert is only ever asked about concepts
/// built from the original signature. A definitional axiom whose expansion
/// is trivially true is answered without asking.
pub struct Judge<'o> {
    oracle: &'o mut dyn Oracle,
    memo: HashMap<Axiom, bool>,
    log: QueryLog,
    names: FreshNameGenerator,
}

impl<'o> Judge<'o> {
    pub fn new(oracle: &'o mut dyn Oracle, names: FreshNameGenerator) -> Self {
        Judge { oracle, memo: HashMap::new(), log: QueryLog::default(), names }
    }

    pub fn judge(&mut self, ax: &Axiom) -> Result<bool, OracleError> {
        let expanded = self.names.expand(ax);
        if expanded.lhs == expanded.rhs {
            return Ok(true);
        }
        let answer = match self.memo.get(&expanded) {
            Some(&a) => a,
            None => {
                let a = self.oracle.judge(&expanded)?;
                self.memo.insert(expanded.clone(), a);
                a
            }
        };
        self.log.push(expanded, answer);
        Ok(answer)
    }

    pub fn log(&self) -> &QueryLog {
        &self.log
    }

    pub fn into_log(self) -> QueryLog {
        self.log
    }

    pub fn names(&self) -> &FreshNameGenerator {
        &self.names
    }

    pub fn names_mut(&mut self) -> &mut FreshNameGenerator {
        &mut self.names
    }
}
