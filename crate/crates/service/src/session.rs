//! One repair session. The engine never blocks on a person: each step
//! re-runs the strategy against the answers recorded so far and stops at
//! the first question without one.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use elrepair_core::fixture;
use elrepair_core::oracle::{
    check_compatibility, load_oracle, AnswerBook, DeclarativeOracle, Oracle, OracleError, Recorded, ReplayOracle,
    ValidationWarning,
};
use elrepair_core::parse::serialize_tbox;
use elrepair_core::repair::{run_strategy, source_target, Options, RepairProblem, StrategySpec};
use elrepair_core::report::ReportDocument;
use elrepair_core::{Axiom, Concept, Error as CoreError};
use serde::{Deserialize, Serialize};

use crate::error::{Result, ServiceError};

/// Body of `POST /sessions`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CreateSession {
    /// Ontology text; required unless `fixture` is given.
    #[serde(default)]
    pub ontology: Option<String>,
    /// Wrong axioms, one per line; required unless `fixture` is given.
    #[serde(default)]
    pub wrong: Option<String>,
    /// A built-in example such as `mini-galen`.
    #[serde(default)]
    pub fixture: Option<String>,
    pub strategy: String,
    #[serde(default)]
    pub options: Options,
    /// Processing order of the wrong axioms, 1-based.
    #[serde(default)]
    pub order: Option<Vec<usize>>,
    /// Oracle text. When present the session answers its own questions.
    #[serde(default)]
    pub oracle: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum State {
    NotStarted,
    Running,
    AwaitingAnswer { axiom: Axiom },
    Done,
    /// An earlier answer was revised; start again to recompute.
    Stale,
    Failed { message: String },
}

/// A line of `answers.log`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum LogLine {
    Answer { axiom: Axiom, verdict: bool },
    Revision { axiom: Axiom, verdict: bool },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Snapshot {
    state: State,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionView {
    pub id: String,
    pub strategy: String,
    pub state: State,
    pub answers: usize,
    pub warnings: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaneEntry {
    pub concept: Concept,
    /// A side of one of the wrong axioms.
    pub highlighted: bool,
}

/// The question the engine is waiting on, with the concepts it relates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PendingQuestion {
    pub axiom: Axiom,
    /// Concepts above the left side but not above the right side.
    pub source: Vec<PaneEntry>,
    /// Concepts below the right side but not below the left side.
    pub target: Vec<PaneEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnswerOutcome {
    pub state: State,
    pub warnings: Vec<ValidationWarning>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionResult {
    pub report: ReportDocument,
    pub ontology: String,
}

pub struct Session {
    pub id: String,
    request: CreateSession,
    problem: RepairProblem,
    spec: StrategySpec,
    order: Option<Vec<usize>>,
    auto: Option<DeclarativeOracle>,
    book: AnswerBook,
    state: State,
    warnings: Vec<ValidationWarning>,
    result: Option<SessionResult>,
    dir: Option<PathBuf>,
}

const PROBLEM: &str = "problem.json";
const ANSWERS: &str = "answers.log";
const STATE: &str = "state.json";

fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = File::create(&tmp)?;
        f.write_all(text.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(tmp, path)
}

fn inputs(req: &CreateSession) -> Result<(String, String)> {
    match (&req.fixture, &req.ontology, &req.wrong) {
        (Some(f), None, None) if f == "mini-galen" => {
            Ok((fixture::MINI_GALEN_TBOX.to_string(), fixture::MINI_GALEN_WRONG.to_string()))
        }
        (Some(f), None, None) => Err(ServiceError::bad_request(format!("unknown fixture '{f}'"))),
        (None, Some(o), Some(w)) => Ok((o.clone(), w.clone())),
        _ => Err(ServiceError::bad_request("give either a fixture, or both ontology and wrong")),
    }
}

impl Session {
    /// Validates a request. Whether the wrong axioms are wrong is asked as
    /// the first questions once the session starts.
    pub fn create(id: String, request: CreateSession, dir: Option<PathBuf>) -> Result<Session> {
        let (ontology, wrong) = inputs(&request)?;
        let (problem, _) = RepairProblem::from_text(&ontology, &wrong, request.options)?;
        let spec: StrategySpec = request.strategy.parse()?;
        let k = problem.wrong().len();
        let order = match &request.order {
            None => None,
            Some(o) => {
                let zero: Vec<usize> = o.iter().map(|i| i.wrapping_sub(1)).collect();
                let mut sorted = zero.clone();
                sorted.sort_unstable();
                if sorted != (0..k).collect::<Vec<_>>() {
                    return Err(ServiceError::bad_request(format!("order {o:?} is not a permutation of 1..={k}")));
                }
                Some(zero)
            }
        };
        let auto = match &request.oracle {
            None => None,
            Some(text) => Some(load_oracle(text, Some(problem.tbox().signature()))?.oracle),
        };
        let mut s = Session {
            id,
            request,
            problem,
            spec,
            order,
            auto,
            book: AnswerBook::default(),
            state: State::NotStarted,
            warnings: Vec::new(),
            result: None,
            dir,
        };
        if let Some(dir) = &s.dir {
            fs::create_dir_all(dir)?;
            write_atomic(&dir.join(PROBLEM), &serde_json::to_string_pretty(&s.request).expect("serializes"))?;
            File::create(dir.join(ANSWERS))?;
        }
        if k == 0 {
            s.advance()?;
        } else {
            s.persist_state()?;
        }
        Ok(s)
    }

    /// Rebuilds a session from its directory.
    pub fn load(dir: &Path) -> Result<Session> {
        let id = dir
            .file_name()
            .and_then(|n| n.to_str())
            .ok_or_else(|| ServiceError::Internal(format!("bad session directory {}", dir.display())))?
            .to_string();
        let request: CreateSession = serde_json::from_str(&fs::read_to_string(dir.join(PROBLEM))?)
            .map_err(|e| ServiceError::Internal(format!("{}: {e}", dir.display())))?;
        let snapshot: Option<Snapshot> =
            fs::read_to_string(dir.join(STATE)).ok().and_then(|t| serde_json::from_str(&t).ok());
        let mut s = Session::create_unpersisted(id, request, dir)?;
        let log = File::open(dir.join(ANSWERS))?;
        let mut kept = String::new();
        let mut torn = false;
        for line in BufReader::new(log).lines() {
            let line = line?;
            // A torn final line from a crash mid-append carries no answer.
            let Ok(entry) = serde_json::from_str::<LogLine>(&line) else {
                torn = true;
                continue;
            };
            kept.push_str(&line);
            kept.push('\n');
            match entry {
                LogLine::Answer { axiom, verdict } => {
                    s.book.record(axiom, verdict);
                }
                LogLine::Revision { axiom, verdict } => {
                    let _ = s.book.revise(&axiom, verdict);
                }
            }
        }
        if torn {
            write_atomic(&dir.join(ANSWERS), &kept)?;
        }
        s.refresh_warnings()?;
        match snapshot.map(|x| x.state) {
            None | Some(State::NotStarted) if s.book.is_empty() => s.state = State::NotStarted,
            Some(State::Stale) => s.state = State::Stale,
            _ => s.advance()?,
        }
        Ok(s)
    }

    fn create_unpersisted(id: String, request: CreateSession, dir: &Path) -> Result<Session> {
        let mut s = Session::create(id, request, None)?;
        s.dir = Some(dir.to_path_buf());
        Ok(s)
    }

    fn persist_state(&self) -> Result<()> {
        if let Some(dir) = &self.dir {
            let snap = Snapshot { state: self.state.clone() };
            write_atomic(&dir.join(STATE), &serde_json::to_string_pretty(&snap).expect("serializes"))?;
        }
        Ok(())
    }

    fn append(&self, line: &LogLine) -> Result<()> {
        if let Some(dir) = &self.dir {
            let mut f = OpenOptions::new().append(true).create(true).open(dir.join(ANSWERS))?;
            let mut text = serde_json::to_string(line).expect("serializes");
            text.push('\n');
            f.write_all(text.as_bytes())?;
            f.sync_data()?;
        }
        Ok(())
    }

    fn refresh_warnings(&mut self) -> Result<()> {
        let base = self.problem.remainder();
        self.warnings = check_compatibility(self.book.iter(), &base)?;
        Ok(())
    }

    /// Runs until the result is known or a question has no answer.
    fn advance(&mut self) -> Result<()> {
        self.state = State::Running;
        self.persist_state()?;
        let order = self.order.clone();
        let mut auto_answered = false;
        loop {
            let mut oracle = ReplayOracle::new(self.book.clone());
            match run_strategy(&self.problem, &self.spec, order.as_deref(), &mut oracle) {
                Ok(r) => {
                    self.result = Some(SessionResult {
                        report: ReportDocument::from_run(&r),
                        ontology: serialize_tbox(&r.final_tbox),
                    });
                    self.state = State::Done;
                    break;
                }
                Err(CoreError::Oracle(OracleError::Pending { axiom })) => match &mut self.auto {
                    Some(auto) => {
                        let verdict = auto.judge(&axiom).map_err(|e| ServiceError::Internal(e.to_string()))?;
                        self.book.record(axiom.clone(), verdict);
                        self.append(&LogLine::Answer { axiom, verdict })?;
                        auto_answered = true;
                    }
                    None => {
                        self.state = State::AwaitingAnswer { axiom };
                        break;
                    }
                },
                Err(e) => {
                    self.state = State::Failed { message: e.to_string() };
                    break;
                }
            }
        }
        if auto_answered {
            self.refresh_warnings()?;
        }
        self.persist_state()
    }

    pub fn view(&self) -> SessionView {
        SessionView {
            id: self.id.clone(),
            strategy: self.spec.to_string(),
            state: self.state.clone(),
            answers: self.book.len(),
            warnings: self.warnings.len(),
        }
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    pub fn warnings(&self) -> &[ValidationWarning] {
        &self.warnings
    }

    /// Starts a new session or restarts a stale one.
    pub fn start(&mut self) -> Result<SessionView> {
        match self.state {
            State::NotStarted | State::Stale => {
                self.result = None;
                self.advance()?;
                Ok(self.view())
            }
            _ => Err(ServiceError::conflict("wrong_state", format!("session is {}", status(&self.state)))),
        }
    }

    pub fn pending(&self) -> Result<PendingQuestion> {
        let State::AwaitingAnswer { axiom } = &self.state else {
            return Err(ServiceError::conflict("wrong_state", format!("session is {}", status(&self.state))));
        };
        let base = self.problem.remainder();
        let (source, target) = source_target(&base, axiom, self.problem.options.pool)?;
        let sides: Vec<&Concept> = self.problem.wrong().iter().flat_map(|w| [&w.lhs, &w.rhs]).collect();
        let pane = |mut cs: Vec<Concept>| -> Vec<PaneEntry> {
            cs.sort_by_key(|c| c.to_string());
            cs.into_iter().map(|c| PaneEntry { highlighted: sides.contains(&&c), concept: c }).collect()
        };
        Ok(PendingQuestion { axiom: axiom.clone(), source: pane(source), target: pane(target) })
    }

    pub fn answer(&mut self, axiom: Axiom, verdict: bool) -> Result<AnswerOutcome> {
        match self.book.get(&axiom) {
            Some(v) if v == verdict => {
                return Ok(AnswerOutcome { state: self.state.clone(), warnings: self.warnings.clone() });
            }
            Some(_) => {
                return Err(ServiceError::conflict(
                    "already_answered",
                    format!("{axiom} already has the opposite answer; post a revision instead"),
                ))
            }
            None => {}
        }
        match &self.state {
            State::AwaitingAnswer { axiom: pending } if *pending == axiom => {}
            State::AwaitingAnswer { axiom: pending } => {
                return Err(ServiceError::conflict("not_pending", format!("the pending question is {pending}")))
            }
            other => return Err(ServiceError::conflict("wrong_state", format!("session is {}", status(other)))),
        }
        let recorded = self.book.record(axiom.clone(), verdict);
        debug_assert_eq!(recorded, Recorded::New);
        self.append(&LogLine::Answer { axiom, verdict })?;
        self.refresh_warnings()?;
        self.advance()?;
        Ok(AnswerOutcome { state: self.state.clone(), warnings: self.warnings.clone() })
    }

    /// Changes an earlier answer. The session goes stale if anything changed.
    pub fn revise(&mut self, axiom: Axiom, verdict: bool) -> Result<AnswerOutcome> {
        let changed = self
            .book
            .revise(&axiom, verdict)
            .map_err(|e| ServiceError::conflict("not_answered", e.to_string()))?;
        if changed {
            self.append(&LogLine::Revision { axiom, verdict })?;
            self.refresh_warnings()?;
            self.result = None;
            self.state = State::Stale;
            self.persist_state()?;
        }
        Ok(AnswerOutcome { state: self.state.clone(), warnings: self.warnings.clone() })
    }

    pub fn result(&self) -> Result<&SessionResult> {
        match (&self.state, &self.result) {
            (State::Done, Some(r)) => Ok(r),
            (State::Stale, _) => Err(ServiceError::conflict("stale", "an answer was revised; restart the session")),
            (other, _) => Err(ServiceError::conflict("not_done", format!("session is {}", status(other)))),
        }
    }
}

fn status(s: &State) -> &'static str {
    match s {
        State::NotStarted => "not started",
        State::Running => "running",
        State::AwaitingAnswer { .. } => "awaiting an answer",
        State::Done => "done",
        State::Stale => "stale",
        State::Failed { .. } => "failed",
    }
}
