//! Machine-readable run reports. Field order is fixed, and every size
//! vector is indexed by wrong axiom in input order, whatever order the
//! strategy processed them in.

use serde::{Deserialize, Serialize};

use crate::concept::Axiom;
use crate::oracle::QueryLog;
use crate::repair::{Comparison, Options, Relation, RunReport};
use crate::sweep::{InvalidRun, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query {
    pub axiom: Axiom,
    pub answer: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub strategy: String,
    /// Processing order, 1-based.
    pub order: Vec<usize>,
    pub options: Options,
    pub wrong: Vec<Axiom>,
    pub sup_sizes: Vec<usize>,
    pub sub_sizes: Vec<usize>,
    pub weakened: Vec<Axiom>,
    /// One entry per completed axiom, by wrong axiom and then position.
    pub completion_sup_sizes: Vec<usize>,
    pub completion_sub_sizes: Vec<usize>,
    pub source_sizes: Vec<usize>,
    pub target_sizes: Vec<usize>,
    pub completed: Vec<Axiom>,
    pub added: Vec<Axiom>,
    pub removed: Vec<Axiom>,
    pub queries_total: usize,
    pub queries_distinct: usize,
    pub repair_valid: bool,
    pub rejected: Vec<Axiom>,
    pub rederived: Vec<Axiom>,
    pub final_tbox: Vec<Axiom>,
    pub queries: Vec<Query>,
}

fn queries(log: &QueryLog) -> Vec<Query> {
    log.entries().iter().map(|(axiom, answer)| Query { axiom: axiom.clone(), answer: *answer }).collect()
}

impl ReportDocument {
    pub fn from_run(r: &RunReport) -> Self {
        let comp = |f: fn(&crate::repair::Completion) -> usize| -> Vec<usize> {
            r.completions.iter().map(|c| f(&c.completion)).collect()
        };
        ReportDocument {
            strategy: r.strategy.clone(),
            order: r.order.iter().map(|i| i + 1).collect(),
            options: r.options,
            wrong: r.wrong.clone(),
            sup_sizes: r.weakenings.iter().map(|w| w.sup.len()).collect(),
            sub_sizes: r.weakenings.iter().map(|w| w.sub.len()).collect(),
            weakened: r.weakened.clone(),
            completion_sup_sizes: comp(|c| c.sup.len()),
            completion_sub_sizes: comp(|c| c.sub.len()),
            source_sizes: comp(|c| c.source.len()),
            target_sizes: comp(|c| c.target.len()),
            completed: r.completed.clone(),
            added: r.added.clone(),
            removed: r.removed.clone(),
            queries_total: r.log.len(),
            queries_distinct: r.log.distinct(),
            repair_valid: r.verdict.valid,
            rejected: r.verdict.rejected.clone(),
            rederived: r.verdict.rederived.clone(),
            final_tbox: r.final_tbox.axioms().cloned().collect(),
            queries: queries(&r.log),
        }
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

/// One report per processing order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationDocument {
    pub strategy: String,
    pub runs: Vec<ReportDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareDocument {
    /// Where the probe axioms came from.
    pub probe: String,
    pub probe_size: usize,
    pub completeness: Relation,
    pub incorrectness: Relation,
    pub correct_only_first: Vec<Axiom>,
    pub correct_only_second: Vec<Axiom>,
    pub wrong_only_first: Vec<Axiom>,
    pub wrong_only_second: Vec<Axiom>,
}

impl CompareDocument {
    pub fn new(probe: impl Into<String>, probe_size: usize, c: Comparison) -> Self {
        CompareDocument {
            probe: probe.into(),
            probe_size,
            completeness: c.completeness,
            incorrectness: c.incorrectness,
            correct_only_first: c.correct_only_first,
            correct_only_second: c.correct_only_second,
            wrong_only_first: c.wrong_only_first,
            wrong_only_second: c.wrong_only_second,
        }
    }
}

/// Outcome of a corpus check: invalid runs and lattice violations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckDocument {
    pub seed: u64,
    pub corpus: usize,
    pub fixtures: Vec<String>,
    pub cases: usize,
    pub runs: usize,
    pub invalid_runs: Vec<InvalidRun>,
    pub checks: usize,
    pub violations: Vec<Violation>,
}

impl CheckDocument {
    pub fn passed(&self) -> bool {
        self.invalid_runs.is_empty() && self.violations.is_empty()
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}
