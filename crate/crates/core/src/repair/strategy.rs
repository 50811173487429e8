//! The thirteen named strategies and a general phase interpreter.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use super::ops::{prune, Completion, Engine, Weakening};
use super::verify::{verify_repair, Verdict};
use super::{Options, Precondition, RepairProblem};
use crate::concept::Axiom;
use crate::error::{Error, Result};
use crate::normalize::FreshNameGenerator;
use crate::oracle::{Judge, Oracle, QueryLog};
use crate::tbox::TBox;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Removal {
    All,
    One,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AddBack {
    All,
    One,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scope {
    One,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Update {
    Now,
    EndOne,
    EndAll,
}

/// One phase of a composed strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Block {
    pub removal: Removal,
    pub add_back: AddBack,
    pub scope: Scope,
    pub update: Update,
}

impl Block {
    pub const fn new(removal: Removal, add_back: AddBack, scope: Scope, update: Update) -> Self {
        Block { removal, add_back, scope, update }
    }

    fn effective_update(&self) -> Update {
        match self.scope {
            Scope::All => Update::EndAll,
            Scope::One => self.update,
        }
    }
}

/// A weakening phase, optionally followed by a completing phase. Each phase
/// runs to the end before the next starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Composition {
    pub weaken: Block,
    pub complete: Option<Block>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StrategySpec {
    /// One of C1 to C13.
    Named(u8),
    Composed(Composition),
}

impl StrategySpec {
    pub fn named(n: u8) -> Result<Self> {
        if (1..=13).contains(&n) {
            Ok(StrategySpec::Named(n))
        } else {
            Err(Error::Strategy(format!("there is no strategy C{n}")))
        }
    }

    pub fn all_named() -> impl Iterator<Item = StrategySpec> {
        (1..=13).map(StrategySpec::Named)
    }

    pub fn completes(&self) -> bool {
        match self {
            StrategySpec::Named(n) => *n >= 5,
            StrategySpec::Composed(c) => c.complete.is_some(),
        }
    }

    /// The phase composition a named strategy amounts to, where the phases
    /// do not interleave. C6, C7 and C13 weaken and complete in turn for
    /// each wrong axiom and have none.
    pub fn composition(&self) -> Option<Composition> {
        use AddBack as A;
        use Removal as R;
        use Scope as S;
        use Update as U;
        let c1_weak = Block::new(R::One, A::One, S::One, U::EndAll);
        let comp = |weaken, complete| Some(Composition { weaken, complete });
        match self {
            StrategySpec::Composed(c) => Some(*c),
            StrategySpec::Named(n) => match n {
                1 => comp(c1_weak, None),
                2 => comp(Block::new(R::One, A::None, S::One, U::Now), None),
                3 => comp(Block::new(R::All, A::None, S::One, U::EndAll), None),
                4 => comp(Block::new(R::All, A::None, S::One, U::Now), None),
                5 | 8 => comp(c1_weak, Some(Block::new(R::None, A::None, S::One, U::EndAll))),
                9 => comp(c1_weak, Some(Block::new(R::All, A::None, S::One, U::EndAll))),
                10 => comp(c1_weak, Some(Block::new(R::All, A::None, S::One, U::Now))),
                11 => comp(c1_weak, Some(Block::new(R::One, A::One, S::One, U::EndOne))),
                12 => comp(
                    Block::new(R::All, A::None, S::All, U::EndAll),
                    Some(Block::new(R::All, A::None, S::All, U::EndAll)),
                ),
                _ => None,
            },
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = match self.removal {
            Removal::All => "all",
            Removal::One => "one",
            Removal::None => "none",
        };
        let ab = match self.add_back {
            AddBack::All => "all",
            AddBack::One => "one",
            AddBack::None => "none",
        };
        let u = match self.update {
            Update::Now => "now",
            Update::EndOne => "end_one",
            Update::EndAll => "end_all",
        };
        let s = match self.scope {
            Scope::One => "one",
            Scope::All => "all",
        };
        write!(f, "R-{r},AB-{ab},{{}}-{s},U-{u}")
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.weaken.to_string().replace("{}", "W"))?;
        if let Some(c) = &self.complete {
            write!(f, "->{}", c.to_string().replace("{}", "C"))?;
        }
        Ok(())
    }
}

impl fmt::Display for StrategySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategySpec::Named(n) => write!(f, "C{n}"),
            StrategySpec::Composed(c) => write!(f, "{c}"),
        }
    }
}

fn parse_block(text: &str, op: char) -> Result<Block> {
    let bad = |m: String| Error::Strategy(m);
    let (mut removal, mut add_back, mut scope, mut update) = (None, AddBack::None, None, None);
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part.split_once('-').ok_or_else(|| bad(format!("malformed block '{part}'")))?;
        match (key, value) {
            ("R", "all") => removal = Some(Removal::All),
            ("R", "one") => removal = Some(Removal::One),
            ("R", "none") => removal = Some(Removal::None),
            ("AB", "all") => add_back = AddBack::All,
            ("AB", "one") => add_back = AddBack::One,
            ("AB", "none") => add_back = AddBack::None,
            ("U", "now") => update = Some(Update::Now),
            ("U", "end_one") => update = Some(Update::EndOne),
            ("U", "end_all") | ("U", "end") => update = Some(Update::EndAll),
            (k, "one") if k.len() == 1 && k.starts_with(op) => scope = Some(Scope::One),
            (k, "all") if k.len() == 1 && k.starts_with(op) => scope = Some(Scope::All),
            _ => return Err(bad(format!("unexpected block '{part}'"))),
        }
    }
    Ok(Block {
        removal: removal.ok_or_else(|| bad(format!("phase '{text}' has no R- block")))?,
        add_back,
        scope: scope.ok_or_else(|| bad(format!("phase '{text}' has no {op}- block")))?,
        update: update.ok_or_else(|| bad(format!("phase '{text}' has no U- block")))?,
    })
}

impl FromStr for StrategySpec {
    type Err = Error;

    /// `C1` to `C13`, or phases such as
    /// `R-one,AB-one,W-one,U-end_all->R-all,AB-none,C-one,U-now`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(n) = s.strip_prefix(['C', 'c']).and_then(|d| d.parse::<u8>().ok()) {
            return StrategySpec::named(n);
        }
        let normalized = s.replace(['→', ';'], "->");
        let phases: Vec<&str> = normalized.split("->").collect();
        match phases.as_slice() {
            [w] => Ok(StrategySpec::Composed(Composition { weaken: parse_block(w, 'W')?, complete: None })),
            [w, c] => Ok(StrategySpec::Composed(Composition {
                weaken: parse_block(w, 'W')?,
                complete: Some(parse_block(c, 'C')?),
            })),
            _ => Err(Error::Strategy(format!("cannot read strategy '{s}'"))),
        }
    }
}

/// The completion of one weakened axiom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletionEntry {
    /// Index of the wrong axiom, in input order.
    pub wrong_index: usize,
    pub weakened: Axiom,
    pub completion: Completion,
}

/// Everything a strategy run computed.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub strategy: String,
    pub options: Options,
    /// Wrong axioms in input order.
    pub wrong: Vec<Axiom>,
    /// Processing order, as indices into `wrong`.
    pub order: Vec<usize>,
    /// Indexed like `wrong`.
    pub weakenings: Vec<Weakening>,
    /// Ordered by wrong axiom, then by position in its weakened set.
    pub completions: Vec<CompletionEntry>,
    pub weakened: Vec<Axiom>,
    pub completed: Vec<Axiom>,
    /// The repair: axioms of the result not in `t \ w`.
    pub added: Vec<Axiom>,
    pub removed: Vec<Axiom>,
    pub final_tbox: TBox,
    pub log: QueryLog,
    pub verdict: Verdict,
}

struct Runner<'r, 'o> {
    eng: &'r mut Engine<'o>,
    w: Vec<Axiom>,
    order: Vec<usize>,
    weak: Vec<Option<Weakening>>,
    comp: Vec<Vec<(Axiom, Completion)>>,
}

impl Runner<'_, '_> {
    fn weaken(&mut self, i: usize, t: &TBox) -> Result<Vec<Axiom>> {
        let wk = self.eng.weakened_axiom_set(&self.w[i], t)?;
        let out = wk.axioms.clone();
        self.weak[i] = Some(wk);
        Ok(out)
    }

    fn weakened(&self, i: usize) -> Vec<Axiom> {
        self.weak[i].as_ref().map(|w| w.axioms.clone()).unwrap_or_default()
    }

    fn complete(&mut self, i: usize, a: &Axiom, t: &TBox) -> Result<Vec<Axiom>> {
        let c = self.eng.completed_axiom_set(a, t)?;
        let out = c.axioms.clone();
        self.comp[i].push((a.clone(), c));
        Ok(out)
    }

    fn one(&self, i: usize) -> [Axiom; 1] {
        [self.w[i].clone()]
    }

    /// Weakens every wrong axiom against `t` without it.
    fn weaken_each_alone(&mut self, t: &TBox) -> Result<Vec<Vec<Axiom>>> {
        let mut w = vec![Vec::new(); self.w.len()];
        for i in self.order.clone() {
            let tr = t.remove_axioms(&self.one(i));
            w[i] = self.weaken(i, &tr)?;
        }
        Ok(w)
    }

    fn in_order(&self, sets: &[Vec<Axiom>]) -> Vec<Axiom> {
        self.order.iter().flat_map(|&i| sets[i].iter().cloned()).collect()
    }
}

fn named(n: u8, r: &mut Runner, t: &TBox) -> Result<TBox> {
    let all = r.w.clone();
    let order = r.order.clone();
    let k = all.len();
    Ok(match n {
        1 => {
            let w = r.weaken_each_alone(t)?;
            t.add_axioms(&r.in_order(&w))?.remove_axioms(&all)
        }
        2 => {
            let mut tr = t.clone();
            for &i in &order {
                tr = tr.remove_axioms(&r.one(i));
                let w = r.weaken(i, &tr)?;
                tr = tr.add_axioms(&w)?;
            }
            tr
        }
        3 => {
            let tr = t.remove_axioms(&all);
            let mut w = vec![Vec::new(); k];
            for &i in &order {
                w[i] = r.weaken(i, &tr)?;
            }
            tr.add_axioms(&r.in_order(&w))?
        }
        4 => {
            let mut tr = t.remove_axioms(&all);
            for &i in &order {
                let w = r.weaken(i, &tr)?;
                tr = tr.add_axioms(&w)?;
            }
            tr
        }
        5 => {
            r.weaken_each_alone(t)?;
            let mut c = vec![Vec::new(); k];
            for &i in &order {
                for a in r.weakened(i) {
                    let got = r.complete(i, &a, t)?;
                    c[i].extend(got);
                }
            }
            t.add_axioms(&r.in_order(&c))?.remove_axioms(&all)
        }
        6 => {
            let mut t = t.clone();
            for &i in &order {
                let tr = t.remove_axioms(&r.one(i));
                for a in r.weaken(i, &tr)? {
                    let got = r.complete(i, &a, &tr)?;
                    t = t.add_axioms(&got)?;
                }
            }
            t.remove_axioms(&all)
        }
        7 => {
            let mut tr = t.clone();
            for &i in &order {
                tr = tr.remove_axioms(&r.one(i));
                for a in r.weaken(i, &tr)? {
                    let got = r.complete(i, &a, &tr)?;
                    tr = tr.add_axioms(&got)?;
                }
            }
            tr
        }
        8 => {
            let mut c = vec![Vec::new(); k];
            for &i in &order {
                let tr = t.remove_axioms(&r.one(i));
                for a in r.weaken(i, &tr)? {
                    let got = r.complete(i, &a, t)?;
                    c[i].extend(got);
                }
            }
            t.add_axioms(&r.in_order(&c))?.remove_axioms(&all)
        }
        9 => {
            let mut tr = t.clone();
            for &i in &order {
                tr = t.remove_axioms(&r.one(i));
                r.weaken(i, &tr)?;
            }
            let tr = tr.remove_axioms(&all);
            let mut c = vec![Vec::new(); k];
            for &i in &order {
                for a in r.weakened(i) {
                    let got = r.complete(i, &a, &tr)?;
                    c[i].extend(got);
                }
            }
            tr.add_axioms(&r.in_order(&c))?
        }
        10 => {
            r.weaken_each_alone(t)?;
            let mut tr = t.remove_axioms(&all);
            for &i in &order {
                for a in r.weakened(i) {
                    let got = r.complete(i, &a, &tr)?;
                    tr = tr.add_axioms(&got)?;
                }
            }
            tr
        }
        11 => {
            r.weaken_each_alone(t)?;
            let mut t = t.clone();
            for &i in &order {
                let tr = t.remove_axioms(&r.one(i));
                for a in r.weakened(i) {
                    let got = r.complete(i, &a, &tr)?;
                    t = t.add_axioms(&got)?;
                }
            }
            t.remove_axioms(&all)
        }
        12 => {
            let tr = t.remove_axioms(&all);
            for &i in &order {
                r.weaken(i, &tr)?;
            }
            let mut c = vec![Vec::new(); k];
            for &i in &order {
                for a in r.weakened(i) {
                    let got = r.complete(i, &a, &tr)?;
                    c[i].extend(got);
                }
            }
            tr.add_axioms(&r.in_order(&c))?
        }
        13 => {
            let mut tr = t.remove_axioms(&all);
            for &i in &order {
                for a in r.weaken(i, &tr)? {
                    let got = r.complete(i, &a, &tr)?;
                    tr = tr.add_axioms(&got)?;
                }
            }
            tr
        }
        _ => return Err(Error::Strategy(format!("there is no strategy C{n}"))),
    })
}

/// The TBox a phase works against for the `k`-th processed wrong axiom,
/// before any of the phase's own updates.
fn phase_base(b: &Block, t: &TBox, all: &[Axiom], done: &[Axiom]) -> TBox {
    match (b.removal, b.add_back) {
        (Removal::None, _) => t.clone(),
        (Removal::All, _) => t.remove_axioms(all),
        (Removal::One, AddBack::None) => t.remove_axioms(done),
        (Removal::One, _) => t.remove_axioms(&done[done.len() - 1..]),
    }
}

fn composed(c: &Composition, r: &mut Runner, t: &TBox) -> Result<TBox> {
    let all = r.w.clone();
    let order = r.order.clone();
    let done = |k: usize| -> Vec<Axiom> { order[..=k].iter().map(|&i| all[i].clone()).collect() };

    let update = c.weaken.effective_update();
    let mut visible: Vec<Axiom> = Vec::new();
    let mut pending: Vec<Axiom> = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        let ctx = phase_base(&c.weaken, t, &all, &done(k)).add_axioms(&visible)?;
        let w = r.weaken(i, &ctx)?;
        match update {
            Update::Now | Update::EndOne => visible.extend(w),
            Update::EndAll => pending.extend(w),
        }
    }
    visible.extend(pending);

    let Some(cb) = &c.complete else {
        return t.remove_axioms(&all).add_axioms(&visible);
    };
    let update = cb.effective_update();
    let mut visible: Vec<Axiom> = Vec::new();
    let mut pending: Vec<Axiom> = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        let base = phase_base(cb, t, &all, &done(k));
        let mut round: Vec<Axiom> = Vec::new();
        for a in r.weakened(i) {
            let ctx = base.add_axioms(&visible)?;
            let got = r.complete(i, &a, &ctx)?;
            match update {
                Update::Now => visible.extend(got),
                Update::EndOne => round.extend(got),
                Update::EndAll => pending.extend(got),
            }
        }
        visible.extend(round);
    }
    visible.extend(pending);
    t.remove_axioms(&all).add_axioms(&visible)
}

fn check_order(order: Option<&[usize]>, k: usize) -> Result<Vec<usize>> {
    let Some(order) = order else {
        return Ok((0..k).collect());
    };
    let mut seen = vec![false; k];
    let ok = order.len() == k && order.iter().all(|&i| i < k && !std::mem::replace(&mut seen[i], true));
    if ok {
        Ok(order.to_vec())
    } else {
        Err(Error::Invalid(format!("order {order:?} is not a permutation of the {k} wrong axioms")))
    }
}

fn union<'a>(sets: impl IntoIterator<Item = &'a Vec<Axiom>>) -> Vec<Axiom> {
    let mut out: IndexSet<Axiom> = IndexSet::new();
    for s in sets {
        out.extend(s.iter().cloned());
    }
    out.into_iter().collect()
}

/// Runs `spec` on `problem`, processing wrong axioms in `order` (input order
/// when `None`), and verifies the result.
///
/// The oracle is first asked to confirm that every wrong axiom is wrong.
/// An oracle that has no answer yet surfaces as
/// [`OracleError::Pending`](crate::oracle::OracleError::Pending).
pub fn run_strategy(
    problem: &RepairProblem,
    spec: &StrategySpec,
    order: Option<&[usize]>,
    oracle: &mut dyn Oracle,
) -> Result<RunReport> {
    let t = problem.tbox();
    let w = problem.wrong().to_vec();
    let order = check_order(order, w.len())?;
    let judge = Judge::new(oracle, FreshNameGenerator::new(t.signature()));
    let mut eng = Engine::new(judge, problem.options);
    for a in &w {
        if eng.judge.judge(a)? {
            return Err(Error::Precondition(Precondition::NotFalse(a.clone())));
        }
    }

    let mut runner = Runner {
        eng: &mut eng,
        w: w.clone(),
        order: order.clone(),
        weak: vec![None; w.len()],
        comp: vec![Vec::new(); w.len()],
    };
    let result = match spec {
        StrategySpec::Named(n) => named(*n, &mut runner, t)?,
        StrategySpec::Composed(c) => composed(c, &mut runner, t)?,
    };
    let Runner { weak, comp, .. } = runner;

    let base = problem.remainder();
    let raw: Vec<Axiom> = result.axioms().filter(|a| !base.contains(a)).cloned().collect();
    let prune_on = problem.options.prune;
    let added = if prune_on { prune(raw, eng.reasoner())? } else { raw };
    let final_tbox = base.add_axioms(&added)?;

    let weakenings: Vec<Weakening> = weak
        .into_iter()
        .map(|x| x.unwrap_or(Weakening { sup: vec![], sub: vec![], candidates: vec![], axioms: vec![] }))
        .collect();
    let weakened = union(weakenings.iter().map(|x| &x.axioms));
    let completions: Vec<CompletionEntry> = comp
        .into_iter()
        .enumerate()
        .flat_map(|(i, cs)| {
            cs.into_iter().map(move |(weakened, completion)| CompletionEntry { wrong_index: i, weakened, completion })
        })
        .collect();
    let completed = if spec.completes() {
        let u = union(completions.iter().map(|c| &c.completion.axioms));
        if prune_on {
            prune(u, eng.reasoner())?
        } else {
            u
        }
    } else {
        Vec::new()
    };

    let verdict = verify_repair(t, &w, &added, &mut eng.judge)?;
    Ok(RunReport {
        strategy: spec.to_string(),
        options: problem.options,
        wrong: w.clone(),
        order,
        weakenings,
        completions,
        weakened,
        completed,
        added,
        removed: w,
        final_tbox,
        log: eng.judge.into_log(),
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_named_and_composed() {
        assert_eq!("C9".parse::<StrategySpec>().unwrap(), StrategySpec::Named(9));
        assert!("C14".parse::<StrategySpec>().is_err());
        let s: StrategySpec = "R-all,AB-none,W-one,U-now".parse().unwrap();
        assert_eq!(s.composition(), StrategySpec::Named(4).composition());
        let s: StrategySpec = "R-one,AB-one,W-one,U-end->R-all,C-one,U-end_all".parse().unwrap();
        assert_eq!(s.composition(), StrategySpec::Named(9).composition());
        assert!("R-all,W-one".parse::<StrategySpec>().is_err());
        assert!("R-all,C-one,U-now".parse::<StrategySpec>().is_err());
    }

    #[test]
    fn composition_text_round_trips() {
        for n in 1..=13 {
            if let Some(c) = StrategySpec::Named(n).composition() {
                let text = c.to_string();
                assert_eq!(text.parse::<StrategySpec>().unwrap(), StrategySpec::Composed(c), "{text}");
            }
        }
    }

    #[test]
    fn order_must_be_permutation() {
        assert_eq!(check_order(None, 3).unwrap(), vec![0, 1, 2]);
        assert!(check_order(Some(&[0, 0, 1]), 3).is_err());
        assert!(check_order(Some(&[0, 1]), 3).is_err());
        assert_eq!(check_order(Some(&[2, 0, 1]), 3).unwrap(), vec![2, 0, 1]);
    }
}
