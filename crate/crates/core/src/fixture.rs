//! The Mini-GALEN example: a small medical TBox with three wrong axioms.

use crate::concept::Axiom;
use crate::oracle::{load_oracle, DeclarativeOracle};
use crate::parse::{parse_axiom_list, parse_tbox};
use crate::repair::{Options, RepairProblem};
use crate::tbox::TBox;

pub const MINI_GALEN_TBOX: &str = "\
# Mini-GALEN
CVD SubClassOf PPh
F SubClassOf PPh
(some hAPr PPr) SubClassOf PPh
E SubClassOf C
E SubClassOf (some hAPr IPr)
GPr SubClassOf NPr
PPr SubClassOf IPr
IPr SubClassOf GPr
E SubClassOf PPr
";

/// In processing order: PPr ⊑ IPr, IPr ⊑ GPr, E ⊑ PPr.
pub const MINI_GALEN_WRONG: &str = "\
PPr SubClassOf IPr
IPr SubClassOf GPr
E SubClassOf PPr
";

/// The axioms a domain expert accepts; everything else is rejected.
pub const MINI_GALEN_ORACLE: &str = "\
default: false
closure: reflexive
closure: constructors
true: GPr SubClassOf IPr
true: GPr SubClassOf PPr
true: GPr SubClassOf NPr
true: IPr SubClassOf PPr
true: IPr SubClassOf NPr
true: PPr SubClassOf NPr
true: CVD SubClassOf PPh
true: F SubClassOf PPh
true: E SubClassOf PPh
true: E SubClassOf C
true: E SubClassOf CVD
true: C SubClassOf PPh
true: C SubClassOf CVD
true: (some hAPr PPr) SubClassOf PPh
true: (some hAPr IPr) SubClassOf PPh
true: E SubClassOf (some hAPr IPr)
true: E SubClassOf (some hAPr PPh)
";

/// Names accepted by `--fixture`.
pub const FIXTURES: &[&str] = &["mini-galen"];

pub fn mini_galen_tbox() -> TBox {
    parse_tbox(MINI_GALEN_TBOX).expect("fixture parses").tbox
}

pub fn mini_galen_wrong() -> Vec<Axiom> {
    parse_axiom_list(MINI_GALEN_WRONG).expect("fixture parses")
}

pub fn mini_galen_oracle() -> DeclarativeOracle {
    load_oracle(MINI_GALEN_ORACLE, None).expect("fixture parses").oracle
}

pub fn mini_galen(options: Options) -> RepairProblem {
    RepairProblem::new(mini_galen_tbox(), mini_galen_wrong(), options).expect("fixture is a valid problem")
}
