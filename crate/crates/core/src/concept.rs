//! EL concepts and general concept inclusions.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// Interned identifier for a concept or role name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: impl AsRef<str>) -> Self {
        Name(Arc::from(s.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// `[A-Za-z_][A-Za-z0-9_-]*`
    pub fn is_valid(s: &str) -> bool {
        let mut chars = s.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return false,
        }
        chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
    }

    /// Names containing the infixes used for generated concepts.
    pub fn is_reserved(s: &str) -> bool {
        s.contains("-AND-") || s.contains("-SOME-")
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

/// An EL concept.
///
/// Conjunctions are kept in canonical order (`left <= right`), so
/// `P ⊓ Q` and `Q ⊓ P` are the same value. Build them with [`Concept::and`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Concept {
    Top,
    Atomic(Name),
    And(Box<Concept>, Box<Concept>),
    Exists(Name, Box<Concept>),
}

impl Concept {
    pub fn atomic(name: impl AsRef<str>) -> Self {
        Concept::Atomic(Name::new(name))
    }

    pub fn and(a: Concept, b: Concept) -> Self {
        if a <= b {
            Concept::And(Box::new(a), Box::new(b))
        } else {
            Concept::And(Box::new(b), Box::new(a))
        }
    }

    pub fn exists(role: impl AsRef<str>, filler: Concept) -> Self {
        Concept::Exists(Name::new(role), Box::new(filler))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Concept::Atomic(_))
    }

    /// Atomic name or `Top`.
    pub fn is_basic(&self) -> bool {
        matches!(self, Concept::Atomic(_) | Concept::Top)
    }

    pub fn name(&self) -> Option<&Name> {
        match self {
            Concept::Atomic(n) => Some(n),
            _ => None,
        }
    }

    /// Member of the simple complex concept shapes: `P`, `P ⊓ Q`, `∃r.P`.
    pub fn is_simple(&self) -> bool {
        match self {
            Concept::Atomic(_) => true,
            Concept::And(a, b) => a.is_atomic() && b.is_atomic(),
            Concept::Exists(_, f) => f.is_atomic(),
            Concept::Top => false,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Concept::Top | Concept::Atomic(_) => 0,
            Concept::And(a, b) => 1 + a.depth().max(b.depth()),
            Concept::Exists(_, f) => 1 + f.depth(),
        }
    }

    /// Calls `concept` for every atomic name and `role` for every role name.
    pub fn visit_names(&self, concept: &mut impl FnMut(&Name), role: &mut impl FnMut(&Name)) {
        match self {
            Concept::Top => {}
            Concept::Atomic(n) => concept(n),
            Concept::And(a, b) => {
                a.visit_names(concept, role);
                b.visit_names(concept, role);
            }
            Concept::Exists(r, f) => {
                role(r);
                f.visit_names(concept, role);
            }
        }
    }

    /// Replaces atomic names using `f`; unmapped names are kept.
    pub fn substitute(&self, f: &impl Fn(&Name) -> Option<Concept>) -> Concept {
        match self {
            Concept::Top => Concept::Top,
            Concept::Atomic(n) => match f(n) {
                Some(c) => c.substitute(f),
                None => self.clone(),
            },
            Concept::And(a, b) => Concept::and(a.substitute(f), b.substitute(f)),
            Concept::Exists(r, c) => Concept::Exists(r.clone(), Box::new(c.substitute(f))),
        }
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Concept::Top => f.write_str("Top"),
            Concept::Atomic(n) => write!(f, "{n}"),
            Concept::And(a, b) => write!(f, "({a} and {b})"),
            Concept::Exists(r, c) => write!(f, "(some {r} {c})"),
        }
    }
}

impl fmt::Debug for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Concept::Top => f.write_str("⊤"),
            Concept::Atomic(n) => write!(f, "{n}"),
            Concept::And(a, b) => write!(f, "({a:?} ⊓ {b:?})"),
            Concept::Exists(r, c) => write!(f, "∃{r}.{c:?}"),
        }
    }
}

/// The normal forms allowed in a normalized TBox.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalShape {
    /// `P ⊑ Q`
    Inclusion,
    /// `P ⊓ Q ⊑ R`
    Conjunction,
    /// `∃r.P ⊑ Q`
    ExistsLeft,
    /// `P ⊑ ∃r.Q`
    ExistsRight,
}

/// A general concept inclusion `lhs ⊑ rhs`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Axiom {
    pub lhs: Concept,
    pub rhs: Concept,
}

impl Axiom {
    pub fn new(lhs: Concept, rhs: Concept) -> Self {
        Axiom { lhs, rhs }
    }

    /// Shorthand for an inclusion between two atomic names.
    pub fn atomic(lhs: &str, rhs: &str) -> Self {
        Axiom::new(Concept::atomic(lhs), Concept::atomic(rhs))
    }

    /// Which normal form this axiom has, if any. `Top` may stand in for an
    /// atomic name.
    pub fn normal_shape(&self) -> Option<NormalShape> {
        let basic = Concept::is_basic;
        match (&self.lhs, &self.rhs) {
            (l, r) if basic(l) && basic(r) => Some(NormalShape::Inclusion),
            (Concept::And(a, b), r) if basic(a) && basic(b) && basic(r) => {
                Some(NormalShape::Conjunction)
            }
            (Concept::Exists(_, f), r) if basic(f) && basic(r) => Some(NormalShape::ExistsLeft),
            (l, Concept::Exists(_, f)) if basic(l) && basic(f) => Some(NormalShape::ExistsRight),
            _ => None,
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.normal_shape().is_some()
    }

    /// `C ⊑ C` or `C ⊑ ⊤`.
    pub fn is_tautology(&self) -> bool {
        self.lhs == self.rhs || self.rhs == Concept::Top
    }

    pub fn substitute(&self, f: &impl Fn(&Name) -> Option<Concept>) -> Axiom {
        Axiom::new(self.lhs.substitute(f), self.rhs.substitute(f))
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} SubClassOf {}", self.lhs, self.rhs)
    }
}

impl fmt::Debug for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} ⊑ {:?}", self.lhs, self.rhs)
    }
}

impl Serialize for Axiom {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Axiom {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        crate::parse::parse_axiom(&text).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Concept {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Concept {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        crate::parse::parse_concept(&text).map_err(serde::de::Error::custom)
    }
}
