//! Running many independent repairs: order permutations, corpus-wide
//! validity and lattice checks. Each run owns its oracle copy and judge, so
//! runs fan out across threads and results come back in input order.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::concept::Axiom;
use crate::corpus::CorpusProblem;
use crate::error::{Error, Result};
use crate::oracle::{DeclarativeOracle, Oracle};
use crate::repair::{
    default_probe, probe_entailments, run_strategy, AddBack, Block, Composition, Removal, RepairProblem, RunReport,
    Scope, StrategySpec, Update, Verdict,
};
use crate::tbox::TBox;

/// How independent runs are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Execution {
    Sequential,
    /// Uses the rayon pool when built with the `parallel` feature and runs
    /// sequentially otherwise.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// `items.iter().map(f)`, possibly across threads, in input order.
pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..k).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("a larger element exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// Runs `spec` once per order.
pub fn permutation_sweep<O>(
    problem: &RepairProblem,
    spec: &StrategySpec,
    oracle: &O,
    orders: &[Vec<usize>],
    exec: Execution,
) -> Result<Vec<RunReport>>
where
    O: Oracle + Clone + Sync,
{
    map(exec, orders, |order| {
        let mut o = oracle.clone();
        run_strategy(problem, spec, Some(order), &mut o)
    })
    .into_iter()
    .collect()
}

/// Probe members entailed by each TBox.
pub fn probe_sweep(tboxes: &[TBox], probe: &[Axiom], exec: Execution) -> Result<Vec<BTreeSet<Axiom>>> {
    map(exec, tboxes, |t| probe_entailments(t, probe)).into_iter().collect()
}

/// A repair problem with its oracle.
#[derive(Debug, Clone)]
pub struct Case {
    pub label: String,
    pub problem: RepairProblem,
    pub oracle: DeclarativeOracle,
}

impl From<CorpusProblem> for Case {
    fn from(c: CorpusProblem) -> Self {
        Case { label: format!("seed {}", c.seed), problem: c.problem, oracle: c.oracle }
    }
}

/// A strategy run whose result is not a repair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvalidRun {
    pub case: String,
    pub strategy: String,
    pub verdict: Verdict,
}

/// Runs all thirteen strategies on every case and returns the runs that
/// failed verification.
pub fn validity_check(cases: &[Case], exec: Execution) -> Result<Vec<InvalidRun>> {
    let per_case = map(exec, cases, |c| -> Result<Vec<InvalidRun>> {
        let mut bad = Vec::new();
        for spec in StrategySpec::all_named() {
            let mut o = c.oracle.clone();
            let r = run_strategy(&c.problem, &spec, None, &mut o)?;
            if !r.verdict.valid {
                bad.push(InvalidRun { case: c.label.clone(), strategy: spec.to_string(), verdict: r.verdict });
            }
        }
        Ok(bad)
    });
    let mut out = Vec::new();
    for r in per_case {
        out.extend(r?);
    }
    Ok(out)
}

/// One lattice property that failed on one case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub case: String,
    pub property: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HasseReport {
    pub cases: usize,
    pub checks: usize,
    pub violations: Vec<Violation>,
}

/// Names of the properties [`hasse_check`] evaluates.
pub mod property {
    /// A subset TBox entails no more probe axioms.
    pub const SUBSET: &str = "subset-monotone";
    /// Weakening with one axiom removed sees at least the candidates seen
    /// with all removed, and asks at least as many distinct questions.
    pub const CANDIDATES: &str = "candidate-superset";
    /// Completing with immediate updates entails at least what completing
    /// with updates at the end entails.
    pub const C10_C9: &str = "c10-over-c9";
    /// Updating after each weakening or after each wrong axiom is the same.
    pub const WEAKEN_UPDATE: &str = "weakening-update";
    /// Completion updates: now over end-of-axiom over end-of-all.
    pub const COMPLETE_UPDATE: &str = "completion-update";
    /// Completing one at a time or all at once, both updated at the end.
    pub const COMPLETE_SCOPE: &str = "completion-scope";
}

fn block(removal: Removal, add_back: AddBack, scope: Scope, update: Update) -> Block {
    Block::new(removal, add_back, scope, update)
}

struct Checker<'a> {
    case: &'a Case,
    probe: Vec<Axiom>,
    report: HasseReport,
}

impl Checker<'_> {
    fn run(&self, spec: &StrategySpec) -> Result<RunReport> {
        let mut o = self.case.oracle.clone();
        run_strategy(&self.case.problem, spec, None, &mut o)
    }

    fn probe(&self, t: &TBox) -> Result<BTreeSet<Axiom>> {
        probe_entailments(t, &self.probe)
    }

    fn check(&mut self, property: &str, ok: bool, detail: impl FnOnce() -> String) {
        self.report.checks += 1;
        if !ok {
            self.report.violations.push(Violation {
                case: self.case.label.clone(),
                property: property.to_string(),
                detail: detail(),
            });
        }
    }

    fn superset(&mut self, property: &str, big: &TBox, small: &TBox, what: &str) -> Result<()> {
        let (b, s) = (self.probe(big)?, self.probe(small)?);
        let missing: Vec<String> = s.difference(&b).map(|a| a.to_string()).collect();
        self.check(property, missing.is_empty(), || format!("{what}: missing {}", missing.join(", ")));
        Ok(())
    }
}

fn check_case(case: &Case) -> Result<HasseReport> {
    let t = case.problem.tbox();
    let mut c = Checker { case, probe: default_probe(t, t), report: HasseReport { cases: 1, ..Default::default() } };
    let named: Vec<RunReport> = StrategySpec::all_named().map(|s| c.run(&s)).collect::<Result<_>>()?;
    let run = |n: usize| &named[n - 1];

    let base = case.problem.remainder();
    c.superset(property::SUBSET, t, &base, "T over T\\W")?;
    for r in &named {
        c.superset(property::SUBSET, &r.final_tbox, &base, &format!("{} over T\\W", r.strategy))?;
    }

    for (big, small) in [(1, 3), (2, 4)] {
        for i in 0..case.problem.wrong().len() {
            let b = &run(big).weakenings[i].candidates;
            let extra: Vec<String> =
                run(small).weakenings[i].candidates.iter().filter(|a| !b.contains(a)).map(|a| a.to_string()).collect();
            c.check(property::CANDIDATES, extra.is_empty(), || {
                format!("C{big} lacks C{small} candidates for wrong axiom {i}: {}", extra.join(", "))
            });
        }
        let (qb, qs) = (run(big).log.distinct(), run(small).log.distinct());
        c.check(property::CANDIDATES, qb >= qs, || format!("C{big} asked {qb} questions, C{small} asked {qs}"));
    }

    c.superset(property::C10_C9, &run(10).final_tbox, &run(9).final_tbox, "C10 over C9")?;
    let (q10, q9) = (run(10).log.distinct(), run(9).log.distinct());
    c.check(property::C10_C9, q10 >= q9, || format!("C10 asked {q10} questions, C9 asked {q9}"));

    for (removal, add_back) in [(Removal::One, AddBack::One), (Removal::One, AddBack::None), (Removal::All, AddBack::None)]
    {
        let now = block(removal, add_back, Scope::One, Update::Now);
        let end_one = block(removal, add_back, Scope::One, Update::EndOne);
        let a = c.run(&StrategySpec::Composed(Composition { weaken: now, complete: None }))?;
        let b = c.run(&StrategySpec::Composed(Composition { weaken: end_one, complete: None }))?;
        c.check(property::WEAKEN_UPDATE, a.final_tbox == b.final_tbox && a.weakened == b.weakened, || {
            format!("{} and {} differ", a.strategy, b.strategy)
        });
    }

    let c1_weak = block(Removal::One, AddBack::One, Scope::One, Update::EndAll);
    let completing = |scope, update| {
        StrategySpec::Composed(Composition {
            weaken: c1_weak,
            complete: Some(block(Removal::All, AddBack::None, scope, update)),
        })
    };
    let now = c.run(&completing(Scope::One, Update::Now))?;
    let end_one = c.run(&completing(Scope::One, Update::EndOne))?;
    let end_all = c.run(&completing(Scope::One, Update::EndAll))?;
    let all = c.run(&completing(Scope::All, Update::EndAll))?;
    c.superset(property::COMPLETE_UPDATE, &now.final_tbox, &end_one.final_tbox, "U-now over U-end_one")?;
    c.superset(property::COMPLETE_UPDATE, &end_one.final_tbox, &end_all.final_tbox, "U-end_one over U-end_all")?;
    c.check(property::COMPLETE_SCOPE, end_all.final_tbox == all.final_tbox, || {
        format!("C-one gives {:?}, C-all gives {:?}", end_all.added, all.added)
    });
    Ok(c.report)
}

/// Checks the strategy lattice properties on every case.
pub fn hasse_check(cases: &[Case], exec: Execution) -> Result<HasseReport> {
    let mut out = HasseReport::default();
    for r in map(exec, cases, check_case) {
        let r = r?;
        out.cases += r.cases;
        out.checks += r.checks;
        out.violations.extend(r.violations);
    }
    Ok(out)
}

/// Refuses sweeps over more than `bound` wrong axioms.
pub fn check_bound(k: usize, bound: usize) -> Result<()> {
    if k > bound {
        Err(Error::Invalid(format!("{k} wrong axioms give {} orders; the bound is {bound} axioms", factorial(k))))
    } else {
        Ok(())
    }
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}
