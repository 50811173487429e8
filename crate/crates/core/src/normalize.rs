//! Normal forms and fresh-name introduction.

use std::collections::{HashMap, HashSet, VecDeque};

use indexmap::IndexMap;

use crate::concept::{Axiom, Concept, Name};
use crate::error::{Error, Result};
use crate::tbox::{Signature, TBox};

/// Names complex concepts as `Q-AND-R` / `r-SOME-Q`.
///
/// The same concept always gets the same name within one generator. A name
/// already taken by the signature, or by a different concept, gets a `-2`,
/// `-3`, ... suffix.
#[derive(Debug, Clone, Default)]
pub struct FreshNameGenerator {
    taken: HashSet<Name>,
    by_concept: HashMap<Concept, Name>,
    definitions: IndexMap<Name, Concept>,
}

impl FreshNameGenerator {
    pub fn new(sig: &Signature) -> Self {
        let mut g = FreshNameGenerator::default();
        g.reserve(sig);
        g
    }

    /// Marks every name of `sig` as unavailable.
    pub fn reserve(&mut self, sig: &Signature) {
        self.taken.extend(sig.concepts.iter().cloned());
        self.taken.extend(sig.roles.iter().cloned());
    }

    pub fn name_for(&mut self, concept: &Concept) -> Name {
        if let Some(n) = self.by_concept.get(concept) {
            return n.clone();
        }
        let base = render(concept);
        let mut candidate = Name::new(&base);
        let mut k = 2;
        while self.taken.contains(&candidate) {
            candidate = Name::new(format!("{base}-{k}"));
            k += 1;
        }
        self.taken.insert(candidate.clone());
        self.by_concept.insert(concept.clone(), candidate.clone());
        self.definitions.insert(candidate.clone(), concept.clone());
        candidate
    }

    /// The concept a generated name stands for.
    pub fn definition(&self, name: &Name) -> Option<&Concept> {
        self.definitions.get(name)
    }

    pub fn definitions(&self) -> impl Iterator<Item = (&Name, &Concept)> {
        self.definitions.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.definitions.is_empty()
    }

    /// Replaces generated names by their definitions, recursively.
    pub fn expand(&self, axiom: &Axiom) -> Axiom {
        if self.definitions.is_empty() {
            return axiom.clone();
        }
        axiom.substitute(&|n| self.definitions.get(n).cloned())
    }
}

fn render(c: &Concept) -> String {
    match c {
        Concept::Top => "Top".to_string(),
        Concept::Atomic(n) => n.to_string(),
        Concept::And(a, b) => format!("{}-AND-{}", render(a), render(b)),
        Concept::Exists(r, f) => format!("{r}-SOME-{}", render(f)),
    }
}

fn scc_shaped(c: &Concept) -> bool {
    match c {
        Concept::Top | Concept::Atomic(_) => true,
        Concept::And(a, b) => a.is_basic() && b.is_basic(),
        Concept::Exists(_, f) => f.is_basic(),
    }
}

/// Splits an axiom whose sides are simple complex concepts into normal
/// shapes, introducing a fresh name where both sides are complex.
pub fn normalize_axiom(ax: &Axiom, gen: &mut FreshNameGenerator) -> Result<Vec<Axiom>> {
    if !scc_shaped(&ax.lhs) || !scc_shaped(&ax.rhs) {
        return Err(Error::Shape(format!("{ax:?} is not built from simple complex concepts")));
    }
    let lhs = &ax.lhs;
    Ok(match &ax.rhs {
        Concept::Top | Concept::Atomic(_) => vec![ax.clone()],
        Concept::And(p, q) => vec![
            Axiom::new(lhs.clone(), (**p).clone()),
            Axiom::new(lhs.clone(), (**q).clone()),
        ],
        Concept::Exists(..) => match lhs {
            Concept::Top | Concept::Atomic(_) => vec![ax.clone()],
            Concept::Exists(..) => {
                let z = Concept::Atomic(gen.name_for(lhs));
                vec![
                    Axiom::new(lhs.clone(), z.clone()),
                    Axiom::new(z.clone(), lhs.clone()),
                    Axiom::new(z, ax.rhs.clone()),
                ]
            }
            Concept::And(q, r) => {
                let z = Concept::Atomic(gen.name_for(lhs));
                vec![
                    Axiom::new(lhs.clone(), z.clone()),
                    Axiom::new(z.clone(), (**q).clone()),
                    Axiom::new(z.clone(), (**r).clone()),
                    Axiom::new(z, ax.rhs.clone()),
                ]
            }
        },
    })
}

/// Rewrites an arbitrary EL TBox into the four normal shapes.
///
/// Every non-basic subconcept that has to be flattened gets a fresh name `Z`
/// together with both `Z ⊑ C` and `C ⊑ Z`, so the result is a conservative
/// extension of the input.
pub fn normalize_tbox(t: &TBox) -> TBox {
    let mut gen = FreshNameGenerator::new(t.signature());
    normalize_tbox_with(t, &mut gen)
}

pub fn normalize_tbox_with(t: &TBox, gen: &mut FreshNameGenerator) -> TBox {
    let mut out = TBox::new();
    out.extend_signature(t.signature());
    let mut queue: VecDeque<Axiom> = t.axioms().cloned().collect();
    let mut defined: HashSet<Name> = HashSet::new();

    let mut name = |c: &Concept, queue: &mut VecDeque<Axiom>| -> Concept {
        if c.is_basic() {
            return c.clone();
        }
        let z = gen.name_for(c);
        if defined.insert(z.clone()) {
            let zc = Concept::Atomic(z.clone());
            queue.push_back(Axiom::new(zc.clone(), c.clone()));
            queue.push_back(Axiom::new(c.clone(), zc.clone()));
        }
        Concept::Atomic(z)
    };

    while let Some(ax) = queue.pop_front() {
        if ax.is_normalized() {
            out.insert(ax);
            continue;
        }
        let Axiom { lhs, rhs } = ax;
        match (&lhs, &rhs) {
            (_, Concept::Top) => {}
            (_, Concept::And(a, b)) => {
                queue.push_back(Axiom::new(lhs.clone(), (**a).clone()));
                queue.push_back(Axiom::new(lhs.clone(), (**b).clone()));
            }
            (l, Concept::Exists(r, f)) if !f.is_basic() => {
                let z = name(f, &mut queue);
                queue.push_back(Axiom::new(l.clone(), Concept::Exists(r.clone(), Box::new(z))));
            }
            (l, Concept::Exists(..)) => {
                let z = name(l, &mut queue);
                queue.push_back(Axiom::new(z, rhs.clone()));
            }
            (Concept::And(a, b), _) => {
                let a = name(a, &mut queue);
                let b = name(b, &mut queue);
                queue.push_back(Axiom::new(Concept::and(a, b), rhs.clone()));
            }
            (Concept::Exists(r, f), _) => {
                let z = name(f, &mut queue);
                queue.push_back(Axiom::new(Concept::Exists(r.clone(), Box::new(z)), rhs.clone()));
            }
            (Concept::Top | Concept::Atomic(_), Concept::Atomic(_)) => {
                unreachable!("basic inclusions are normalized")
            }
        }
    }
    out
}
