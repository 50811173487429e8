//! Seeded random TBoxes and repair problems.
//!
//! Repair problems are built from a hidden ground truth: a random DAG over
//! atomic names whose reflexive-transitive closure, widened by a few extra
//! random edges, is what the oracle accepts. The TBox keeps some true edges
//! and gains a few edges outside the closure; those are the wrong axioms.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::concept::{Axiom, Concept, Name};
use crate::oracle::{Closure, DeclarativeOracle};
use crate::repair::{Options, RepairProblem};
use crate::tbox::TBox;

/// Sizes for [`random_problem`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    pub min_concepts: usize,
    pub max_concepts: usize,
    /// Chance that a forward pair is a ground-truth edge.
    pub edge_chance: f64,
    /// Extra random forward edges added to the oracle's truths.
    pub extra_truths: usize,
    /// Chance that a true edge is kept in the TBox.
    pub keep_chance: f64,
    pub max_wrong: usize,
}

impl Default for ProblemParams {
    fn default() -> Self {
        ProblemParams {
            min_concepts: 4,
            max_concepts: 8,
            edge_chance: 0.3,
            extra_truths: 2,
            keep_chance: 0.7,
            max_wrong: 3,
        }
    }
}

/// A repair problem with the oracle that knows its ground truth.
#[derive(Debug, Clone)]
pub struct CorpusProblem {
    pub seed: u64,
    pub problem: RepairProblem,
    pub oracle: DeclarativeOracle,
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn concept_names(n: usize) -> Vec<Name> {
    (0..n).map(|i| Name::new(format!("A{i}"))).collect()
}

fn role_names(n: usize) -> Vec<Name> {
    (0..n).map(|i| Name::new(format!("r{i}"))).collect()
}

fn closure(n: usize, edges: &BTreeSet<(usize, usize)>) -> BTreeSet<(usize, usize)> {
    let mut reach = vec![vec![false; n]; n];
    for &(a, b) in edges {
        reach[a][b] = true;
    }
    for k in 0..n {
        let via = reach[k].clone();
        for row in reach.iter_mut() {
            if row[k] {
                for (cell, &hop) in row.iter_mut().zip(&via) {
                    *cell |= hop;
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for (i, row) in reach.iter().enumerate() {
        for (j, &r) in row.iter().enumerate() {
            if r && i != j {
                out.insert((i, j));
            }
        }
    }
    out
}

/// A random repair problem over atomic names. Always satisfies the
/// structural preconditions, and its oracle rejects every wrong axiom.
pub fn random_problem(seed: u64, params: &ProblemParams, options: Options) -> CorpusProblem {
    let mut r = rng(seed);
    let n = r.gen_range(params.min_concepts..=params.max_concepts);
    let names = concept_names(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut r);
    let mut truth = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            if r.gen_bool(params.edge_chance) {
                truth.insert((order[i], order[j]));
            }
        }
    }
    let mut accepted = truth.clone();
    for _ in 0..params.extra_truths {
        let i = r.gen_range(0..n);
        let j = r.gen_range(0..n);
        if i < j {
            accepted.insert((order[i], order[j]));
        }
    }
    let accepted = closure(n, &accepted);

    let ax = |(a, b): (usize, usize)| Axiom::new(Concept::Atomic(names[a].clone()), Concept::Atomic(names[b].clone()));
    let mut t = TBox::new();
    for name in &names {
        t.declare_concept(name.clone());
    }
    for &e in &truth {
        if r.gen_bool(params.keep_chance) {
            t.insert(ax(e));
        }
    }
    let mut rejected: Vec<(usize, usize)> =
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| a != b && !accepted.contains(&(a, b))).collect();
    rejected.shuffle(&mut r);
    let k = r.gen_range(1..=params.max_wrong.max(1)).min(rejected.len());
    let wrong: Vec<Axiom> = rejected[..k].iter().map(|&e| ax(e)).collect();
    for w in &wrong {
        t.insert(w.clone());
    }

    let oracle = DeclarativeOracle::new(accepted.iter().map(|&e| ax(e)))
        .with_closure(Closure { reflexive: true, constructors: true, transitive: true });
    let problem = RepairProblem::new(t, wrong, options).expect("generated problems satisfy the preconditions");
    CorpusProblem { seed, problem, oracle }
}

/// `count` problems from consecutive seeds.
pub fn corpus(first_seed: u64, count: usize, params: &ProblemParams, options: Options) -> Vec<CorpusProblem> {
    (0..count as u64).map(|i| random_problem(first_seed + i, params, options)).collect()
}

/// A TBox declaring `n` concept names and `k` role names, with a handful
/// of random normalized axioms. Returns `(tbox, n, k)`.
pub fn random_signature(seed: u64, max_concepts: usize, max_roles: usize) -> (TBox, usize, usize) {
    let mut r = rng(seed);
    let n = r.gen_range(1..=max_concepts.max(1));
    let k = r.gen_range(0..=max_roles);
    let t = random_normalized_with(&mut r, n, k, n + k);
    (t, n, k)
}

/// Random `A ⊑ B` edges over at most `max_concepts` names, cycles allowed.
pub fn random_atomic_tbox(seed: u64, max_concepts: usize) -> TBox {
    let mut r = rng(seed);
    let n = r.gen_range(1..=max_concepts.max(1));
    let names = concept_names(n);
    let mut t = TBox::new();
    for name in &names {
        t.declare_concept(name.clone());
    }
    let edges = r.gen_range(0..=2 * n);
    for _ in 0..edges {
        let a = names.choose(&mut r).expect("non-empty").clone();
        let b = names.choose(&mut r).expect("non-empty").clone();
        t.insert(Axiom::new(Concept::Atomic(a), Concept::Atomic(b)));
    }
    t
}

fn basic(r: &mut ChaCha8Rng, names: &[Name]) -> Concept {
    if r.gen_ratio(1, 12) {
        Concept::Top
    } else {
        Concept::Atomic(names.choose(r).expect("non-empty").clone())
    }
}

fn atom(r: &mut ChaCha8Rng, names: &[Name]) -> Concept {
    Concept::Atomic(names.choose(r).expect("non-empty").clone())
}

fn random_normalized_with(r: &mut ChaCha8Rng, n: usize, k: usize, count: usize) -> TBox {
    let names = concept_names(n);
    let roles = role_names(k);
    let mut t = TBox::new();
    for name in &names {
        t.declare_concept(name.clone());
    }
    for role in &roles {
        t.declare_role(role.clone());
    }
    for _ in 0..count {
        let shape = if roles.is_empty() { r.gen_range(0..2) } else { r.gen_range(0..4) };
        let ax = match shape {
            0 => Axiom::new(basic(r, &names), atom(r, &names)),
            1 => Axiom::new(Concept::and(atom(r, &names), atom(r, &names)), atom(r, &names)),
            2 => {
                let role = roles.choose(r).expect("non-empty").as_str().to_string();
                Axiom::new(Concept::exists(role, basic(r, &names)), atom(r, &names))
            }
            _ => {
                let role = roles.choose(r).expect("non-empty").as_str().to_string();
                Axiom::new(basic(r, &names), Concept::exists(role, basic(r, &names)))
            }
        };
        if ax.is_normalized() {
            t.insert(ax);
        }
    }
    t
}

/// Random normalized axioms of all four shapes.
pub fn random_normalized_tbox(seed: u64, max_concepts: usize, max_roles: usize, max_axioms: usize) -> TBox {
    let mut r = rng(seed);
    let n = r.gen_range(1..=max_concepts.max(1));
    let k = r.gen_range(0..=max_roles);
    let count = r.gen_range(0..=max_axioms);
    random_normalized_with(&mut r, n, k, count)
}

/// A random concept of at most `depth` nested constructors.
pub fn random_concept(r: &mut impl Rng, names: &[Name], roles: &[Name], depth: usize) -> Concept {
    let pick = if depth == 0 { 0 } else { r.gen_range(0..4) };
    match pick {
        0 | 1 => {
            if r.gen_ratio(1, 10) {
                Concept::Top
            } else {
                Concept::Atomic(names.choose(r).expect("non-empty").clone())
            }
        }
        2 if !roles.is_empty() => {
            let role = roles.choose(r).expect("non-empty").as_str().to_string();
            Concept::exists(role, random_concept(r, names, roles, depth - 1))
        }
        _ => Concept::and(random_concept(r, names, roles, depth - 1), random_concept(r, names, roles, depth - 1)),
    }
}

/// Random axioms with nested concepts on both sides.
pub fn random_nested_tbox(seed: u64, max_concepts: usize, max_roles: usize, max_axioms: usize, depth: usize) -> TBox {
    let mut r = rng(seed);
    let n = r.gen_range(1..=max_concepts.max(1));
    let k = r.gen_range(0..=max_roles);
    let names = concept_names(n);
    let roles = role_names(k);
    let mut t = TBox::new();
    for name in &names {
        t.declare_concept(name.clone());
    }
    for role in &roles {
        t.declare_role(role.clone());
    }
    let count = r.gen_range(1..=max_axioms.max(1));
    for _ in 0..count {
        let lhs = random_concept(&mut r, &names, &roles, depth);
        let rhs = random_concept(&mut r, &names, &roles, depth);
        t.insert(Axiom::new(lhs, rhs));
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_problem() {
        let p = ProblemParams::default();
        let a = random_problem(7, &p, Options::default());
        let b = random_problem(7, &p, Options::default());
        assert_eq!(a.problem, b.problem);
        assert_eq!(a.oracle, b.oracle);
    }

    #[test]
    fn oracle_rejects_wrong_axioms() {
        for seed in 0..50 {
            let c = random_problem(seed, &ProblemParams::default(), Options::default());
            assert!(!c.problem.wrong().is_empty());
            for w in c.problem.wrong() {
                assert!(!c.oracle.holds(w), "seed {seed}: {w}");
            }
        }
    }

    #[test]
    fn normalized_generator_is_normalized() {
        for seed in 0..30 {
            assert!(random_normalized_tbox(seed, 8, 2, 12).is_normalized());
        }
    }
}
