//! EL subsumption by saturation, with memoization per TBox.

mod pool;
mod saturation;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use indexmap::IndexSet;

pub use pool::{scc, scc_size, ConceptPool, PoolMode};
pub use saturation::{saturate, Saturation};

use crate::concept::{Axiom, Concept, Name};
use crate::error::Result;
use crate::tbox::TBox;

const CACHE_LIMIT: usize = 8192;

/// A saturation of `t` extended with a scratch name for every requested
/// complex concept, so subsumption between complex concepts reduces to
/// subsumption between names.
pub struct Classification {
    saturation: Saturation,
    aliases: HashMap<Concept, Concept>,
}

impl Classification {
    fn node(&self, c: &Concept) -> Option<Concept> {
        if c.is_basic() {
            Some(c.clone())
        } else {
            self.aliases.get(c).cloned()
        }
    }

    /// `a ⊑ b`; both sides must be basic names of the TBox or concepts that
    /// were requested when classifying.
    pub fn entails(&self, a: &Concept, b: &Concept) -> bool {
        if a == b || *b == Concept::Top {
            return true;
        }
        match (self.node(a), self.node(b)) {
            (Some(x), Some(y)) => self.saturation.subsumes(&x, &y).unwrap_or(false),
            _ => false,
        }
    }

    pub fn entails_axiom(&self, ax: &Axiom) -> bool {
        self.entails(&ax.lhs, &ax.rhs)
    }

    /// `a ⊏ b`: `a ⊑ b` but not `b ⊑ a`.
    pub fn strictly(&self, a: &Concept, b: &Concept) -> bool {
        self.entails(a, b) && !self.entails(b, a)
    }

    pub fn knows(&self, c: &Concept) -> bool {
        self.node(c).is_some_and(|n| self.saturation.subsumes(&n, &n).is_some())
    }

    pub fn saturation(&self) -> &Saturation {
        &self.saturation
    }
}

/// Extends `t` with definitions for the complex subconcepts of `extra` and
/// declares any unknown atomic names. Scratch names start with `?`, which
/// the text format cannot produce.
fn extend(t: &TBox, extra: &[Concept]) -> (TBox, HashMap<Concept, Concept>) {
    let mut ext = t.clone();
    let mut aliases: HashMap<Concept, Concept> = HashMap::new();

    fn define(
        c: &Concept,
        ext: &mut TBox,
        aliases: &mut HashMap<Concept, Concept>,
    ) -> Concept {
        match c {
            Concept::Top => Concept::Top,
            Concept::Atomic(n) => {
                ext.declare_concept(n.clone());
                c.clone()
            }
            _ => {
                if let Some(x) = aliases.get(c) {
                    return x.clone();
                }
                let x = Concept::Atomic(Name::new(format!("?{}", aliases.len())));
                let flat = match c {
                    Concept::And(a, b) => {
                        let (a, b) = (define(a, ext, aliases), define(b, ext, aliases));
                        ext.insert(Axiom::new(x.clone(), a.clone()));
                        ext.insert(Axiom::new(x.clone(), b.clone()));
                        Concept::and(a, b)
                    }
                    Concept::Exists(r, f) => {
                        let f = define(f, ext, aliases);
                        ext.declare_role(r.clone());
                        let e = Concept::Exists(r.clone(), Box::new(f));
                        ext.insert(Axiom::new(x.clone(), e.clone()));
                        e
                    }
                    Concept::Top | Concept::Atomic(_) => unreachable!(),
                };
                ext.insert(Axiom::new(flat, x.clone()));
                aliases.insert(c.clone(), x.clone());
                x
            }
        }
    }

    for c in extra {
        define(c, &mut ext, &mut aliases);
    }
    (ext, aliases)
}

struct Entry {
    axioms: IndexSet<Axiom>,
    concepts: usize,
    classification: Arc<Classification>,
}

/// Memoizing front end to saturation. Safe to share between threads.
#[derive(Default)]
pub struct Reasoner {
    cache: RwLock<HashMap<u64, Vec<Entry>>>,
}

impl Reasoner {
    pub fn new() -> Self {
        Self::default()
    }

    /// A process-wide instance.
    pub fn shared() -> &'static Reasoner {
        static SHARED: OnceLock<Reasoner> = OnceLock::new();
        SHARED.get_or_init(Reasoner::new)
    }

    /// Classifies `t` so that every concept in `extra` (of any depth) can be
    /// queried. `t` must be normalized.
    pub fn classify(&self, t: &TBox, extra: &[Concept]) -> Result<Arc<Classification>> {
        let (ext, aliases) = extend(t, extra);
        let key = ext.fingerprint();
        let n_concepts = ext.signature().concepts.len();
        let same = |e: &Entry| {
            e.concepts == n_concepts
                && e.axioms.len() == ext.len()
                && ext.axioms().all(|a| e.axioms.contains(a))
                && e.classification.aliases == aliases
        };
        if let Some(hit) = self
            .cache
            .read()
            .expect("reasoner cache poisoned")
            .get(&key)
            .and_then(|v| v.iter().find(|e| same(e)))
        {
            return Ok(hit.classification.clone());
        }
        let saturation = saturate(&ext)?;
        let classification = Arc::new(Classification { saturation, aliases });
        let mut cache = self.cache.write().expect("reasoner cache poisoned");
        if cache.values().map(Vec::len).sum::<usize>() >= CACHE_LIMIT {
            cache.clear();
        }
        cache.entry(key).or_default().push(Entry {
            axioms: ext.axioms().cloned().collect(),
            concepts: n_concepts,
            classification: classification.clone(),
        });
        Ok(classification)
    }

    /// `t ⊨ ax`, for sides of any depth. `t` is never modified.
    pub fn entails(&self, t: &TBox, ax: &Axiom) -> Result<bool> {
        if ax.is_tautology() {
            return Ok(true);
        }
        let extra: Vec<Concept> = [&ax.lhs, &ax.rhs]
            .into_iter()
            .filter(|c| match c {
                Concept::Top => false,
                Concept::Atomic(n) => !t.signature().contains_concept(n),
                _ => true,
            })
            .cloned()
            .collect();
        Ok(self.classify(t, &extra)?.entails_axiom(ax))
    }

    pub fn clear(&self) {
        self.cache.write().expect("reasoner cache poisoned").clear();
    }
}

/// `t ⊨ ax` using the shared reasoner.
pub fn entails(t: &TBox, ax: &Axiom) -> Result<bool> {
    Reasoner::shared().entails(t, ax)
}

/// `{ sp ∈ pool | t ⊨ p ⊑ sp }`, in pool order.
pub fn sup(p: &Concept, t: &TBox, pool: &ConceptPool) -> Result<Vec<Concept>> {
    let cls = pool.classify(Reasoner::shared(), t, std::slice::from_ref(p))?;
    Ok(pool.members().iter().filter(|sp| cls.entails(p, sp)).cloned().collect())
}

/// `{ sb ∈ pool | t ⊨ sb ⊑ p }`, in pool order.
pub fn sub(p: &Concept, t: &TBox, pool: &ConceptPool) -> Result<Vec<Concept>> {
    let cls = pool.classify(Reasoner::shared(), t, std::slice::from_ref(p))?;
    Ok(pool.members().iter().filter(|sb| cls.entails(sb, p)).cloned().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_axiom, parse_tbox};

    fn tbox(s: &str) -> TBox {
        parse_tbox(s).unwrap().tbox
    }

    fn ax(s: &str) -> Axiom {
        parse_axiom(s).unwrap()
    }

    #[test]
    fn complex_queries() {
        let t = tbox("A SubClassOf (some r B)\nB SubClassOf C\n(A and D) SubClassOf E");
        let r = Reasoner::new();
        assert!(r.entails(&t, &ax("A SubClassOf (some r C)")).unwrap());
        assert!(!r.entails(&t, &ax("(some r C) SubClassOf A")).unwrap());
        assert!(r.entails(&t, &ax("(A and D) SubClassOf (E and (some r B))")).unwrap());
        assert!(r.entails(&t, &ax("(some r B) SubClassOf (some r C)")).unwrap());
        assert!(r.entails(&t, &ax("(some r (A and D)) SubClassOf (some r E)")).unwrap());
        assert!(!r.entails(&t, &ax("A SubClassOf E")).unwrap());
    }

    #[test]
    fn unknown_names() {
        let t = tbox("A SubClassOf B");
        assert!(entails(&t, &ax("Z SubClassOf Z")).unwrap());
        assert!(!entails(&t, &ax("Z SubClassOf A")).unwrap());
        assert!(entails(&t, &ax("(A and Z) SubClassOf B")).unwrap());
        assert!(entails(&t, &ax("A SubClassOf Top")).unwrap());
    }

    #[test]
    fn queries_leave_tbox_untouched() {
        let t = tbox("A SubClassOf (some r B)");
        let before = t.fingerprint();
        entails(&t, &ax("(some r B) SubClassOf (A and B)")).unwrap();
        assert_eq!(t.fingerprint(), before);
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn cache_distinguishes_signatures() {
        let r = Reasoner::new();
        let mut t = tbox("A SubClassOf B");
        let c1 = r.classify(&t, &[]).unwrap();
        t.declare_concept(Name::new("C"));
        let c2 = r.classify(&t, &[]).unwrap();
        assert!(!c1.knows(&Concept::atomic("C")));
        assert!(c2.knows(&Concept::atomic("C")));
    }
}
