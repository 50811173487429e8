//! Repairing EL TBoxes: remove wrong axioms, then weaken and complete them
//! under the judgement of an oracle.

pub mod concept;
pub mod corpus;
pub mod error;
pub mod fixture;
pub mod normalize;
pub mod oracle;
pub mod parse;
pub mod reasoner;
pub mod repair;
pub mod report;
pub mod sweep;
pub mod tbox;

pub use concept::{Axiom, Concept, Name};
pub use error::{Error, Result};
pub use tbox::{Signature, TBox};
