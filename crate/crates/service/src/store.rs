//! All sessions, optionally backed by a directory with one subdirectory per
//! session. Requests on one session are serialized by its lock; requests on
//! different sessions run independently.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, RwLock};

use elrepair_core::oracle::ValidationWarning;
use elrepair_core::Axiom;

use crate::error::{Result, ServiceError};
use crate::session::{AnswerOutcome, CreateSession, PendingQuestion, Session, SessionResult, SessionView};

#[derive(Default)]
pub struct Store {
    root: Option<PathBuf>,
    sessions: RwLock<BTreeMap<String, Arc<Mutex<Session>>>>,
}

impl Store {
    /// Sessions live only as long as the process.
    pub fn in_memory() -> Self {
        Store::default()
    }

    /// Sessions persist under `root`; existing ones are resumed.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root)?;
        let mut sessions = BTreeMap::new();
        let mut dirs: Vec<PathBuf> = fs::read_dir(&root)?
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.join("problem.json").is_file())
            .collect();
        dirs.sort();
        for dir in dirs {
            let s = Session::load(&dir)?;
            sessions.insert(s.id.clone(), Arc::new(Mutex::new(s)));
        }
        Ok(Store { root: Some(root), sessions: RwLock::new(sessions) })
    }

    fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>> {
        self.sessions
            .read()
            .expect("session table poisoned")
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::NotFound(id.to_string()))
    }

    fn with<T>(&self, id: &str, f: impl FnOnce(&mut Session) -> Result<T>) -> Result<T> {
        let s = self.get(id)?;
        let mut guard = s.lock().map_err(|_| ServiceError::Internal(format!("session {id} poisoned")))?;
        f(&mut guard)
    }

    pub fn ids(&self) -> Vec<String> {
        self.sessions.read().expect("session table poisoned").keys().cloned().collect()
    }

    pub fn create(&self, request: CreateSession) -> Result<SessionView> {
        let id = uuid::Uuid::new_v4().simple().to_string();
        let dir = self.root.as_ref().map(|r| r.join(&id));
        let s = Session::create(id.clone(), request, dir)?;
        let view = s.view();
        self.sessions.write().expect("session table poisoned").insert(id, Arc::new(Mutex::new(s)));
        Ok(view)
    }

    pub fn view(&self, id: &str) -> Result<SessionView> {
        self.with(id, |s| Ok(s.view()))
    }

    pub fn start(&self, id: &str) -> Result<SessionView> {
        self.with(id, |s| s.start())
    }

    pub fn pending(&self, id: &str) -> Result<PendingQuestion> {
        self.with(id, |s| s.pending())
    }

    pub fn answer(&self, id: &str, axiom: Axiom, verdict: bool) -> Result<AnswerOutcome> {
        self.with(id, |s| s.answer(axiom, verdict))
    }

    pub fn revise(&self, id: &str, axiom: Axiom, verdict: bool) -> Result<AnswerOutcome> {
        self.with(id, |s| s.revise(axiom, verdict))
    }

    pub fn result(&self, id: &str) -> Result<SessionResult> {
        self.with(id, |s| s.result().cloned())
    }

    pub fn warnings(&self, id: &str) -> Result<Vec<ValidationWarning>> {
        self.with(id, |s| Ok(s.warnings().to_vec()))
    }
}
