//! Reference implementations the library is checked against. They share
//! no code with the library beyond the data types.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use elrepair_core::{Axiom, Concept, TBox};

/// Reflexive-transitive closure of the atomic inclusions, by repeated
/// relaxation.
pub fn atomic_closure(t: &TBox) -> BTreeSet<(String, String)> {
    let names: Vec<String> = t.signature().concepts.iter().map(|n| n.to_string()).collect();
    let mut reach: BTreeSet<(String, String)> = names.iter().map(|n| (n.clone(), n.clone())).collect();
    for a in t.axioms() {
        if let (Concept::Atomic(l), Concept::Atomic(r)) = (&a.lhs, &a.rhs) {
            reach.insert((l.to_string(), r.to_string()));
        }
    }
    loop {
        let mut next = reach.clone();
        for (a, b) in &reach {
            for (c, d) in &reach {
                if b == c {
                    next.insert((a.clone(), d.clone()));
                }
            }
        }
        if next == reach {
            return reach;
        }
        reach = next;
    }
}

fn key(c: &Concept) -> Option<String> {
    match c {
        Concept::Top => Some("⊤".into()),
        Concept::Atomic(n) => Some(n.to_string()),
        _ => None,
    }
}

/// Subsumers of every concept name and ⊤ in a normalized TBox, by applying
/// the four completion rules to every node until nothing changes.
pub fn naive_subsumers(t: &TBox) -> BTreeMap<String, BTreeSet<String>> {
    let mut nodes: Vec<String> = vec!["⊤".into()];
    nodes.extend(t.signature().concepts.iter().map(|n| n.to_string()));
    let mut s: BTreeMap<String, BTreeSet<String>> =
        nodes.iter().map(|n| (n.clone(), [n.clone(), "⊤".to_string()].into())).collect();
    let mut links: BTreeSet<(String, String, String)> = BTreeSet::new();
    loop {
        let before = (s.clone(), links.clone());
        for x in &nodes {
            for a in t.axioms() {
                match (&a.lhs, &a.rhs) {
                    (Concept::And(p, q), r) => {
                        let (p, q, r) = (key(p).unwrap(), key(q).unwrap(), key(r).unwrap());
                        if s[x].contains(&p) && s[x].contains(&q) {
                            s.get_mut(x).unwrap().insert(r);
                        }
                    }
                    (l, Concept::Exists(role, f)) => {
                        if s[x].contains(&key(l).unwrap()) {
                            links.insert((role.to_string(), x.clone(), key(f).unwrap()));
                        }
                    }
                    (Concept::Exists(..), _) => {}
                    (l, r) => {
                        if s[x].contains(&key(l).unwrap()) {
                            s.get_mut(x).unwrap().insert(key(r).unwrap());
                        }
                    }
                }
            }
        }
        for (role, x, y) in links.clone() {
            for a in t.axioms() {
                if let Concept::Exists(r2, f) = &a.lhs {
                    if r2.to_string() == role && s[&y].contains(&key(f).unwrap()) {
                        s.get_mut(&x).unwrap().insert(key(&a.rhs).unwrap());
                    }
                }
            }
        }
        if (s.clone(), links.clone()) == before {
            return s;
        }
    }
}

pub fn ax(s: &str) -> Axiom {
    elrepair_core::parse::parse_axiom(s).unwrap()
}

pub fn axs(items: &[&str]) -> BTreeSet<Axiom> {
    items.iter().map(|s| ax(s)).collect()
}
