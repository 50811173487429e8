use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};

use indexmap::IndexSet;

use crate::concept::{Axiom, Concept, Name};
use crate::error::Error;

/// Concept and role names of a TBox, in first-seen order.
#[derive(Clone, Default)]
pub struct Signature {
    pub concepts: IndexSet<Name>,
    pub roles: IndexSet<Name>,
}

impl Signature {
    pub fn add_concept(&mut self, name: Name) {
        self.concepts.insert(name);
    }

    pub fn add_role(&mut self, name: Name) {
        self.roles.insert(name);
    }

    pub fn absorb_concept(&mut self, concept: &Concept) {
        let mut roles = Vec::new();
        concept.visit_names(&mut |n| {
            self.concepts.insert(n.clone());
        }, &mut |r| roles.push(r.clone()));
        self.roles.extend(roles);
    }

    pub fn absorb(&mut self, axiom: &Axiom) {
        self.absorb_concept(&axiom.lhs);
        self.absorb_concept(&axiom.rhs);
    }

    pub fn contains_concept(&self, name: &Name) -> bool {
        self.concepts.contains(name)
    }

    pub fn union(&self, other: &Signature) -> Signature {
        let mut out = self.clone();
        out.concepts.extend(other.concepts.iter().cloned());
        out.roles.extend(other.roles.iter().cloned());
        out
    }
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        self.concepts.iter().eq(other.concepts.iter()) && self.roles.iter().eq(other.roles.iter())
    }
}

impl Eq for Signature {}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Signature")
            .field("concepts", &self.concepts.iter().collect::<Vec<_>>())
            .field("roles", &self.roles.iter().collect::<Vec<_>>())
            .finish()
    }
}

/// An ordered, duplicate-free set of axioms plus its signature.
///
/// Order is part of the value: strategies iterate in insertion order.
/// Removing axioms keeps their names in the signature.
#[derive(Clone, Default)]
pub struct TBox {
    axioms: IndexSet<Axiom>,
    signature: Signature,
}

impl PartialEq for TBox {
    fn eq(&self, other: &Self) -> bool {
        self.axioms.iter().eq(other.axioms.iter()) && self.signature == other.signature
    }
}

impl Eq for TBox {}

impl TBox {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_axioms(axioms: impl IntoIterator<Item = Axiom>) -> Self {
        let mut t = TBox::new();
        for ax in axioms {
            t.insert(ax);
        }
        t
    }

    /// Appends `axiom` unless present. Returns whether it was new.
    pub fn insert(&mut self, axiom: Axiom) -> bool {
        self.signature.absorb(&axiom);
        self.axioms.insert(axiom)
    }

    pub fn declare_concept(&mut self, name: Name) {
        self.signature.add_concept(name);
    }

    pub fn declare_role(&mut self, name: Name) {
        self.signature.add_role(name);
    }

    pub fn extend_signature(&mut self, sig: &Signature) {
        self.signature = self.signature.union(sig);
    }

    pub fn axioms(&self) -> impl ExactSizeIterator<Item = &Axiom> + '_ {
        self.axioms.iter()
    }

    pub fn contains(&self, axiom: &Axiom) -> bool {
        self.axioms.contains(axiom)
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn is_normalized(&self) -> bool {
        self.axioms.iter().all(Axiom::is_normalized)
    }

    /// `self \ d`, survivors in their original order.
    pub fn remove_axioms<'a>(&self, d: impl IntoIterator<Item = &'a Axiom>) -> TBox {
        let drop: IndexSet<&Axiom> = d.into_iter().collect();
        TBox {
            axioms: self.axioms.iter().filter(|a| !drop.contains(a)).cloned().collect(),
            signature: self.signature.clone(),
        }
    }

    /// `self ∪ a`, new axioms appended in the given order. Every added axiom
    /// must be normalized.
    pub fn add_axioms<'a>(&self, a: impl IntoIterator<Item = &'a Axiom>) -> Result<TBox, Error> {
        let mut out = self.clone();
        for ax in a {
            if !ax.is_normalized() {
                return Err(Error::Shape(format!("cannot add non-normalized axiom {ax:?}")));
            }
            out.insert(ax.clone());
        }
        Ok(out)
    }

    /// Order-insensitive hash of the axiom set.
    pub fn fingerprint(&self) -> u64 {
        let mut hashes: Vec<u64> = self
            .axioms
            .iter()
            .map(|a| {
                let mut h = DefaultHasher::new();
                a.hash(&mut h);
                h.finish()
            })
            .collect();
        hashes.sort_unstable();
        let mut h = DefaultHasher::new();
        hashes.hash(&mut h);
        h.finish()
    }
}

impl fmt::Debug for TBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.axioms.iter()).finish()
    }
}

impl FromIterator<Axiom> for TBox {
    fn from_iter<I: IntoIterator<Item = Axiom>>(iter: I) -> Self {
        TBox::from_axioms(iter)
    }
}
