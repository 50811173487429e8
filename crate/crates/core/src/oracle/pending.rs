use std::sync::mpsc::{channel, Receiver, Sender};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Oracle, OracleError};
use crate::concept::Axiom;

/// Answers given by a person, in the order given.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerBook {
    answers: IndexMap<Axiom, bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recorded {
    New,
    /// The same verdict was already on record.
    Unchanged,
    /// A different verdict is already on record; use a revision instead.
    Conflict,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RevisionError {
    #[error("{0} has not been answered")]
    NotFound(Axiom),
}

impl AnswerBook {
    pub fn get(&self, ax: &Axiom) -> Option<bool> {
        self.answers.get(ax).copied()
    }

    pub fn record(&mut self, ax: Axiom, verdict: bool) -> Recorded {
        match self.answers.get(&ax) {
            Some(&v) if v == verdict => Recorded::Unchanged,
            Some(_) => Recorded::Conflict,
            None => {
                self.answers.insert(ax, verdict);
                Recorded::New
            }
        }
    }

    /// Changes a recorded verdict. Returns whether anything changed.
    pub fn revise(&mut self, ax: &Axiom, verdict: bool) -> Result<bool, RevisionError> {
        match self.answers.get_mut(ax) {
            None => Err(RevisionError::NotFound(ax.clone())),
            Some(v) if *v == verdict => Ok(false),
            Some(v) => {
                *v = verdict;
                Ok(true)
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Axiom, bool)> {
        self.answers.iter().map(|(a, &v)| (a, v))
    }

    pub fn len(&self) -> usize {
        self.answers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.answers.is_empty()
    }
}

/// Answers from an [`AnswerBook`]; anything else is [`OracleError::Pending`].
///
/// Re-running a deterministic engine against a growing book resumes it
/// exactly where it stopped.
#[derive(Debug, Clone, Default)]
pub struct ReplayOracle {
    book: AnswerBook,
}

impl ReplayOracle {
    pub fn new(book: AnswerBook) -> Self {
        ReplayOracle { book }
    }
}

impl Oracle for ReplayOracle {
    fn judge(&mut self, ax: &Axiom) -> Result<bool, OracleError> {
        self.book.get(ax).ok_or_else(|| OracleError::Pending { axiom: ax.clone() })
    }
}

/// Blocks the engine until an answer arrives through the paired
/// [`OracleHandle`]. Dropping the handle cancels.
pub struct PendingOracle {
    questions: Sender<Axiom>,
    answers: Receiver<Option<bool>>,
}

pub struct OracleHandle {
    questions: Receiver<Axiom>,
    answers: Sender<Option<bool>>,
}

impl PendingOracle {
    pub fn new() -> (PendingOracle, OracleHandle) {
        let (qtx, qrx) = channel();
        let (atx, arx) = channel();
        (PendingOracle { questions: qtx, answers: arx }, OracleHandle { questions: qrx, answers: atx })
    }
}

impl Oracle for PendingOracle {
    fn judge(&mut self, ax: &Axiom) -> Result<bool, OracleError> {
        self.questions.send(ax.clone()).map_err(|_| OracleError::Cancelled)?;
        match self.answers.recv() {
            Ok(Some(v)) => Ok(v),
            Ok(None) | Err(_) => Err(OracleError::Cancelled),
        }
    }
}

impl OracleHandle {
    /// The next question, or `None` once the engine has finished.
    pub fn next_question(&self) -> Option<Axiom> {
        self.questions.recv().ok()
    }

    pub fn answer(&self, verdict: bool) -> bool {
        self.answers.send(Some(verdict)).is_ok()
    }

    pub fn cancel(&self) {
        let _ = self.answers.send(None);
    }
}
