use std::collections::{BTreeSet, HashMap};
use std::io;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use serde::{Deserialize, Serialize};
use uuid::Uuid;

use crate::aco::LearningPath;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub query: String,
    pub graph_version: u64,
    pub seed: u64,
    pub path: LearningPath,
}

/// A learner's drill-down loop: the terms they know and every path they were
/// shown, oldest first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Session {
    pub id: String,
    pub graph_version: u64,
    pub known_terms: BTreeSet<String>,
    pub history: Vec<HistoryEntry>,
}

impl Session {
    pub fn new(graph_version: u64, known_terms: BTreeSet<String>) -> Self {
        Session {
            id: Uuid::new_v4().simple().to_string(),
            graph_version,
            known_terms,
            history: Vec::new(),
        }
    }

    pub fn last_path(&self) -> Option<&LearningPath> {
        self.history.last().map(|h| &h.path)
    }
}

/// In-memory sessions, optionally mirrored to one JSON file per session.
#[derive(Debug, Default)]
pub struct SessionStore {
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    dir: Option<PathBuf>,
}

impl SessionStore {
    pub fn new(dir: Option<PathBuf>) -> Self {
        SessionStore {
            sessions: RwLock::new(HashMap::new()),
            dir,
        }
    }

    /// Loads every `*.json` session file from the persistence directory.
    pub fn load(dir: PathBuf) -> io::Result<Self> {
        std::fs::create_dir_all(&dir)?;
        let mut sessions = HashMap::new();
        for entry in std::fs::read_dir(&dir)? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "json") {
                let text = std::fs::read_to_string(&path)?;
                let session: Session = serde_json::from_str(&text).map_err(|e| {
                    io::Error::new(
                        io::ErrorKind::InvalidData,
                        format!("{}: {e}", path.display()),
                    )
                })?;
                sessions.insert(session.id.clone(), Arc::new(Mutex::new(session)));
            }
        }
        Ok(SessionStore {
            sessions: RwLock::new(sessions),
            dir: Some(dir),
        })
    }

    pub fn insert(&self, session: Session) -> io::Result<()> {
        self.persist(&session)?;
        self.sessions
            .write()
            .expect("session map poisoned")
            .insert(session.id.clone(), Arc::new(Mutex::new(session)));
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<Arc<Mutex<Session>>> {
        self.sessions
            .read()
            .expect("session map poisoned")
            .get(id)
            .cloned()
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("session map poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn persist(&self, session: &Session) -> io::Result<()> {
        let Some(dir) = &self.dir else {
            return Ok(());
        };
        write_atomically(
            &dir.join(format!("{}.json", session.id)),
            &serde_json::to_string_pretty(session).expect("session serializes"),
        )
    }
}

fn write_atomically(path: &Path, text: &str) -> io::Result<()> {
    let tmp = path.with_extension("json.tmp");
    std::fs::write(&tmp, text)?;
    std::fs::rename(tmp, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn persisted_sessions_reload() {
        let dir = tempfile::tempdir().unwrap();
        let store = SessionStore::load(dir.path().to_path_buf()).unwrap();
        let session = Session::new(3, BTreeSet::from(["cell".to_string()]));
        let id = session.id.clone();
        store.insert(session.clone()).unwrap();

        let reloaded = SessionStore::load(dir.path().to_path_buf()).unwrap();
        assert_eq!(reloaded.len(), 1);
        let got = reloaded.get(&id).unwrap();
        assert_eq!(*got.lock().unwrap(), session);
    }

    #[test]
    fn ids_are_unique() {
        let a = Session::new(1, BTreeSet::new());
        let b = Session::new(1, BTreeSet::new());
        assert_ne!(a.id, b.id);
        assert!(a.last_path().is_none());
    }
}
