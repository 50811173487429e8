use thiserror::Error;

use crate::concept::Axiom;
use crate::oracle::OracleError;
use crate::repair::Precondition;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("shape error: {0}")]
    Shape(String),

    #[error(transparent)]
    Oracle(#[from] OracleError),

    #[error("precondition violated: {0}")]
    Precondition(Precondition),

    #[error("completion requested for {0:?}, which the oracle judges false")]
    ContractViolation(Axiom),

    #[error("invalid strategy: {0}")]
    Strategy(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
