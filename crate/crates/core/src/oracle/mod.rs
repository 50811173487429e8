//! Oracles answer whether a candidate axiom is correct in the domain.

mod compat;
mod declarative;
mod log;
mod pending;

use thiserror::Error;

pub use compat::{check_compatibility, ValidationWarning, WarningKind};
pub use declarative::{load_oracle, Closure, DeclarativeOracle, LoadedOracle};
pub use log::{Judge, QueryLog};
pub use pending::{AnswerBook, OracleHandle, PendingOracle, Recorded, ReplayOracle, RevisionError};

use crate::concept::Axiom;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    /// No answer is available yet; the caller may resume once one is.
    #[error("awaiting an answer for {axiom}")]
    Pending { axiom: Axiom },
    #[error("session cancelled while waiting for an answer")]
    Cancelled,
}

/// Judges candidate axioms.
pub trait Oracle: Send {
    fn judge(&mut self, ax: &Axiom) -> Result<bool, OracleError>;
}

impl<O: Oracle + ?Sized> Oracle for &mut O {
    fn judge(&mut self, ax: &Axiom) -> Result<bool, OracleError> {
        (**self).judge(ax)
    }
}

impl<O: Oracle + ?Sized> Oracle for Box<O> {
    fn judge(&mut self, ax: &Axiom) -> Result<bool, OracleError> {
        (**self).judge(ax)
    }
}
