use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use serde::Serialize;
use serde_json::Value;
use wordgraph::ideation::{IdeationSession, SessionEvent};
use wordgraph::measures::IcContext;
use wordgraph::{Error, Result, WordGraph};

use crate::error::ErrorBody;

/// One session and, if persistence is on, its event log.
pub struct SessionSlot {
    pub session: IdeationSession,
    log: Option<PathBuf>,
}

impl SessionSlot {
    /// Appends events to the log; sessions without a log ignore this.
    pub fn record(&self, events: &[SessionEvent]) -> Result<()> {
        let Some(path) = &self.log else { return Ok(()) };
        let mut f = OpenOptions::new().create(true).append(true).open(path)?;
        for e in events {
            writeln!(f, "{}", serde_json::to_string(e)?)?;
        }
        f.sync_data()?;
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Job {
    Running,
    Done { report: Value },
    Failed { error: ErrorBody },
}

pub struct AppState {
    pub graph: Arc<WordGraph>,
    pub ctx: IcContext,
    /// Database and cache paths, recorded in analysis reports.
    pub db: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    sessions: RwLock<HashMap<String, Arc<Mutex<SessionSlot>>>>,
    pub jobs: RwLock<HashMap<String, Job>>,
    persist: Option<PathBuf>,
}

/// Client-chosen ids double as file names, so keep them tame.
pub fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.len() <= 64 && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

impl AppState {
    pub fn new(graph: Arc<WordGraph>) -> Self {
        let ctx = graph.ic_context();
        AppState {
            graph,
            ctx,
            db: None,
            cache: None,
            sessions: RwLock::default(),
            jobs: RwLock::default(),
            persist: None,
        }
    }

    /// Persists sessions as JSON-lines event logs under `dir` and replays
    /// the logs already there. Returns the number of sessions restored.
    pub fn with_persistence(mut self, dir: impl AsRef<Path>) -> Result<(Self, usize)> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir)?;
        let mut entries: Vec<PathBuf> = fs::read_dir(&dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
            .collect();
        entries.sort();
        let mut restored = 0;
        for path in entries {
            let events = read_log(&path)?;
            let session = IdeationSession::replay(&self.graph, &events, &self.ctx)?;
            let slot = SessionSlot { session, log: Some(path) };
            self.sessions.get_mut().expect("not shared yet").insert(slot.session.id.clone(), Arc::new(Mutex::new(slot)));
            restored += 1;
        }
        self.persist = Some(dir);
        Ok((self, restored))
    }

    pub fn session(&self, id: &str) -> Option<Arc<Mutex<SessionSlot>>> {
        self.sessions.read().expect("session map lock").get(id).cloned()
    }

    pub fn session_count(&self) -> usize {
        self.sessions.read().expect("session map lock").len()
    }

    /// Registers a new session and writes its `started` event.
    pub fn insert_session(&self, session: IdeationSession, started: SessionEvent) -> Result<()> {
        let mut map = self.sessions.write().expect("session map lock");
        if map.contains_key(&session.id) {
            return Err(Error::Session(format!("session `{}` already exists", session.id)));
        }
        let log = self.persist.as_ref().map(|d| d.join(format!("{}.jsonl", session.id)));
        let slot = SessionSlot { session, log };
        slot.record(&[started])?;
        map.insert(slot.session.id.clone(), Arc::new(Mutex::new(slot)));
        Ok(())
    }
}

fn read_log(path: &Path) -> Result<Vec<SessionEvent>> {
    let mut events = Vec::new();
    for line in BufReader::new(File::open(path)?).lines() {
        let line = line?;
        if !line.trim().is_empty() {
            events.push(serde_json::from_str(&line)?);
        }
    }
    Ok(events)
}
