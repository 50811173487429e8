use std::collections::{HashSet, VecDeque};

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use super::{Oracle, OracleError};
use crate::concept::{Axiom, Concept};
use crate::error::{Error, Result};
use crate::parse::{parse_axiom, Warning};
use crate::tbox::Signature;

/// Closure rules applied on top of the listed true axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Closure {
    /// `C ⊑ C`
    pub reflexive: bool,
    /// `∃r.P ⊑ ∃r.Q` from `P ⊑ Q`, and `P ⊓ O ⊑ Q` from `P ⊑ Q`.
    pub constructors: bool,
    /// Chains of listed atomic inclusions.
    pub transitive: bool,
}

impl Default for Closure {
    fn default() -> Self {
        Closure { reflexive: true, constructors: true, transitive: false }
    }
}

/// An oracle given by a list of true axioms; everything outside their
/// closure gets the default answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeclarativeOracle {
    truths: IndexSet<Axiom>,
    closure: Closure,
    default: bool,
}

impl DeclarativeOracle {
    pub fn new(truths: impl IntoIterator<Item = Axiom>) -> Self {
        DeclarativeOracle { truths: truths.into_iter().collect(), closure: Closure::default(), default: false }
    }

    pub fn with_closure(mut self, closure: Closure) -> Self {
        self.closure = closure;
        self
    }

    pub fn with_default(mut self, default: bool) -> Self {
        self.default = default;
        self
    }

    pub fn truths(&self) -> impl Iterator<Item = &Axiom> {
        self.truths.iter()
    }

    pub fn closure(&self) -> Closure {
        self.closure
    }

    pub fn default_answer(&self) -> bool {
        self.default
    }

    /// The answer for `ax`. Constructor rules are checked on demand, so the
    /// closure is never materialized.
    pub fn holds(&self, ax: &Axiom) -> bool {
        self.derivable(ax) || self.default
    }

    fn derivable(&self, ax: &Axiom) -> bool {
        if self.truths.contains(ax) {
            return true;
        }
        if self.closure.reflexive && ax.lhs == ax.rhs {
            return true;
        }
        if self.closure.transitive && self.chain(&ax.lhs, &ax.rhs) {
            return true;
        }
        if self.closure.constructors {
            if let (Concept::Exists(r, p), Concept::Exists(s, q)) = (&ax.lhs, &ax.rhs) {
                if r == s && self.derivable(&Axiom::new((**p).clone(), (**q).clone())) {
                    return true;
                }
            }
            if let Concept::And(p, o) = &ax.lhs {
                if self.derivable(&Axiom::new((**p).clone(), ax.rhs.clone()))
                    || self.derivable(&Axiom::new((**o).clone(), ax.rhs.clone()))
                {
                    return true;
                }
            }
        }
        false
    }

    fn chain(&self, from: &Concept, to: &Concept) -> bool {
        if !from.is_atomic() || !to.is_atomic() {
            return false;
        }
        let mut seen: HashSet<&Concept> = HashSet::from([from]);
        let mut queue = VecDeque::from([from]);
        while let Some(c) = queue.pop_front() {
            for t in self.truths.iter().filter(|t| &t.lhs == c && t.rhs.is_atomic()) {
                if &t.rhs == to {
                    return true;
                }
                if seen.insert(&t.rhs) {
                    queue.push_back(&t.rhs);
                }
            }
        }
        false
    }

    /// The oracle file text for this oracle.
    pub fn to_text(&self) -> String {
        let mut out = format!("default: {}\n", self.default);
        let c = self.closure;
        for (on, name) in [(c.reflexive, "reflexive"), (c.constructors, "constructors"), (c.transitive, "transitive")] {
            if on {
                out.push_str(&format!("closure: {name}\n"));
            }
        }
        for t in &self.truths {
            out.push_str(&format!("true: {t}\n"));
        }
        out
    }
}

impl Oracle for DeclarativeOracle {
    fn judge(&mut self, ax: &Axiom) -> Result<bool, OracleError> {
        Ok(self.holds(ax))
    }
}

#[derive(Debug, Clone)]
pub struct LoadedOracle {
    pub oracle: DeclarativeOracle,
    pub warnings: Vec<Warning>,
}

/// Reads the oracle file format. Names missing from `sig` (when given) are
/// reported as warnings.
pub fn load_oracle(text: &str, sig: Option<&Signature>) -> Result<LoadedOracle> {
    let mut truths = IndexSet::new();
    let mut default = false;
    let mut closure: Option<Closure> = None;
    let mut warnings = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let syntax = |column: usize, message: String| Error::Syntax { line, column, message };
        let Some((key, value)) = trimmed.split_once(':') else {
            return Err(syntax(1, "expected 'key: value'".into()));
        };
        let value = value.trim();
        match key.trim() {
            "default" => {
                default = match value {
                    "true" => true,
                    "false" => false,
                    other => return Err(syntax(key.len() + 2, format!("expected true or false, got '{other}'"))),
                }
            }
            "closure" => {
                let c = closure.get_or_insert(Closure { reflexive: false, constructors: false, transitive: false });
                match value {
                    "reflexive" => c.reflexive = true,
                    "constructors" => c.constructors = true,
                    "transitive" => c.transitive = true,
                    other => return Err(syntax(key.len() + 2, format!("unknown closure rule '{other}'"))),
                }
            }
            "true" => {
                let ax = parse_axiom(value).map_err(|e| match e {
                    Error::Syntax { column, message, .. } => {
                        let offset = raw.find(value).unwrap_or(0);
                        syntax(offset + column, message)
                    }
                    other => other,
                })?;
                if let Some(sig) = sig {
                    let mut missing = Vec::new();
                    let mut roles = Vec::new();
                    for side in [&ax.lhs, &ax.rhs] {
                        side.visit_names(
                            &mut |n| {
                                if !sig.concepts.contains(n) {
                                    missing.push(n.to_string())
                                }
                            },
                            &mut |r| {
                                if !sig.roles.contains(r) {
                                    roles.push(r.to_string())
                                }
                            },
                        );
                    }
                    missing.extend(roles);
                    if !missing.is_empty() {
                        warnings.push(Warning {
                            line,
                            message: format!("undeclared name(s) {} in {ax}", missing.join(", ")),
                        });
                    }
                }
                truths.insert(ax);
            }
            other => return Err(syntax(1, format!("unknown key '{other}'"))),
        }
    }
    let oracle = DeclarativeOracle { truths, closure: closure.unwrap_or_default(), default };
    Ok(LoadedOracle { oracle, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ax(s: &str) -> Axiom {
        parse_axiom(s).unwrap()
    }

    #[test]
    fn empty_file() {
        let o = load_oracle("", None).unwrap().oracle;
        assert!(!o.holds(&ax("A SubClassOf B")));
        assert!(o.holds(&ax("A SubClassOf A")));
    }

    #[test]
    fn constructor_rules() {
        let o = load_oracle("closure: constructors\ntrue: GPr SubClassOf NPr\n", None).unwrap().oracle;
        assert!(o.holds(&ax("(some hAPr GPr) SubClassOf (some hAPr NPr)")));
        assert!(o.holds(&ax("(GPr and X) SubClassOf NPr")));
        assert!(!o.holds(&ax("(some s GPr) SubClassOf (some hAPr NPr)")));
        assert!(!o.holds(&ax("X SubClassOf X")));
    }

    #[test]
    fn transitivity_is_opt_in() {
        let text = "true: A SubClassOf B\ntrue: B SubClassOf C\n";
        assert!(!load_oracle(text, None).unwrap().oracle.holds(&ax("A SubClassOf C")));
        let with = format!("closure: transitive\n{text}");
        assert!(load_oracle(&with, None).unwrap().oracle.holds(&ax("A SubClassOf C")));
    }

    #[test]
    fn default_true() {
        let o = load_oracle("default: true", None).unwrap().oracle;
        assert!(o.holds(&ax("A SubClassOf B")));
    }

    #[test]
    fn errors_and_warnings() {
        assert!(matches!(load_oracle("maybe: A SubClassOf B", None), Err(Error::Syntax { line: 1, .. })));
        assert!(matches!(load_oracle("\ntrue: A SubClassOf", None), Err(Error::Syntax { line: 2, .. })));
        let mut sig = Signature::default();
        sig.add_concept("A".into());
        let loaded = load_oracle("true: A SubClassOf B", Some(&sig)).unwrap();
        assert_eq!(loaded.warnings.len(), 1);
    }

    #[test]
    fn text_round_trip() {
        let o = DeclarativeOracle::new([ax("A SubClassOf B")]);
        assert_eq!(load_oracle(&o.to_text(), None).unwrap().oracle, o);
    }
}
