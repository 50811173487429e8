//! Completion-rule saturation for normalized TBoxes.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::concept::{Axiom, Concept, Name};
use crate::error::{Error, Result};
use crate::tbox::TBox;

#[derive(Clone, Default, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, i % 64);
        if w >= self.0.len() {
            self.0.resize(w + 1, 0);
        }
        let fresh = self.0[w] & (1 << b) == 0;
        self.0[w] |= 1 << b;
        fresh
    }

    fn contains(&self, i: usize) -> bool {
        self.0.get(i / 64).is_some_and(|w| w & (1 << (i % 64)) != 0)
    }
}

enum Job {
    Add(usize, usize),
    Link(usize, usize, usize),
}

/// Subsumers and role links of every basic concept of a normalized TBox.
///
/// Node 0 is `Top`; every other node is an atomic name of the signature.
#[derive(Clone)]
pub struct Saturation {
    nodes: Vec<Concept>,
    index: HashMap<Concept, usize>,
    roles: Vec<Name>,
    subsumers: Vec<BitSet>,
    lists: Vec<Vec<usize>>,
    links: Vec<BTreeSet<(usize, usize)>>,
    fingerprint: u64,
}

/// Computes the least fixpoint of the completion rules.
pub fn saturate(t: &TBox) -> Result<Saturation> {
    if let Some(bad) = t.axioms().find(|a| !a.is_normalized()) {
        return Err(Error::Shape(format!("cannot saturate non-normalized axiom {bad:?}")));
    }
    let mut nodes = vec![Concept::Top];
    nodes.extend(t.signature().concepts.iter().cloned().map(Concept::Atomic));
    let index: HashMap<Concept, usize> = nodes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let roles: Vec<Name> = t.signature().roles.iter().cloned().collect();
    let role_index: HashMap<&Name, usize> = roles.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let n = nodes.len();

    let node = |c: &Concept| index[c];
    let mut inc: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut conj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut ex_right: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut ex_left: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for ax in t.axioms() {
        match (&ax.lhs, &ax.rhs) {
            (Concept::And(a, b), r) => {
                let (a, b, r) = (node(a), node(b), node(r));
                conj[a].push((b, r));
                if a != b {
                    conj[b].push((a, r));
                }
            }
            (Concept::Exists(role, f), r) => {
                ex_left.entry((role_index[role], node(f))).or_default().push(node(r));
            }
            (l, Concept::Exists(role, f)) => ex_right[node(l)].push((role_index[role], node(f))),
            (l, r) => inc[node(l)].push(node(r)),
        }
    }

    let mut subsumers = vec![BitSet::default(); n];
    let mut lists: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut links: Vec<BTreeSet<(usize, usize)>> = vec![BTreeSet::new(); roles.len()];
    // preds[r][d] = every c with (c, d) ∈ R(r)
    let mut preds: Vec<HashMap<usize, Vec<usize>>> = vec![HashMap::new(); roles.len()];

    let mut work: Vec<Job> = Vec::new();
    for c in (0..n).rev() {
        work.push(Job::Add(c, 0));
        work.push(Job::Add(c, c));
    }
    while let Some(job) = work.pop() {
        match job {
            Job::Add(c, x) => {
                if !subsumers[c].insert(x) {
                    continue;
                }
                lists[c].push(x);
                for &d in &inc[x] {
                    work.push(Job::Add(c, d));
                }
                for &(y, z) in &conj[x] {
                    if subsumers[c].contains(y) {
                        work.push(Job::Add(c, z));
                    }
                }
                for &(r, d) in &ex_right[x] {
                    work.push(Job::Link(r, c, d));
                }
                for (r, p) in preds.iter().enumerate() {
                    if let (Some(from), Some(to)) = (p.get(&c), ex_left.get(&(r, x))) {
                        for &e in from {
                            for &t in to {
                                work.push(Job::Add(e, t));
                            }
                        }
                    }
                }
            }
            Job::Link(r, c, d) => {
                if !links[r].insert((c, d)) {
                    continue;
                }
                preds[r].entry(d).or_default().push(c);
                for &x in &lists[d] {
                    if let Some(to) = ex_left.get(&(r, x)) {
                        for &e in to {
                            work.push(Job::Add(c, e));
                        }
                    }
                }
            }
        }
    }

    Ok(Saturation { nodes, index, roles, subsumers, lists, links, fingerprint: t.fingerprint() })
}

impl Saturation {
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// `Some(a ⊑ b)` for basic concepts of the signature, `None` otherwise.
    pub fn subsumes(&self, a: &Concept, b: &Concept) -> Option<bool> {
        let (&i, &j) = (self.index.get(a)?, self.index.get(b)?);
        Some(self.subsumers[i].contains(j))
    }

    /// `S(c)` in derivation order.
    pub fn subsumers_of(&self, c: &Concept) -> impl Iterator<Item = &Concept> + '_ {
        let list = self.index.get(c).map(|&i| self.lists[i].as_slice()).unwrap_or(&[]);
        list.iter().map(|&j| &self.nodes[j])
    }

    pub fn links(&self, role: &Name) -> Vec<(Concept, Concept)> {
        self.roles
            .iter()
            .position(|r| r == role)
            .map(|r| {
                self.links[r]
                    .iter()
                    .map(|&(c, d)| (self.nodes[c].clone(), self.nodes[d].clone()))
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Order-independent view of S, for comparisons.
    pub fn subsumer_map(&self) -> BTreeMap<Concept, BTreeSet<Concept>> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), self.lists[i].iter().map(|&j| self.nodes[j].clone()).collect()))
            .collect()
    }

    /// Order-independent view of R, for comparisons.
    pub fn link_map(&self) -> BTreeMap<Name, BTreeSet<(Concept, Concept)>> {
        self.roles.iter().map(|r| (r.clone(), self.links(r).into_iter().collect())).collect()
    }

    /// Every entailed `A ⊑ B` between distinct atomic names.
    pub fn atomic_subsumptions(&self) -> Vec<Axiom> {
        let mut out = Vec::new();
        for (i, c) in self.nodes.iter().enumerate().skip(1) {
            for &j in &self.lists[i] {
                if j != 0 && j != i {
                    out.push(Axiom::new(c.clone(), self.nodes[j].clone()));
                }
            }
        }
        out
    }
}
