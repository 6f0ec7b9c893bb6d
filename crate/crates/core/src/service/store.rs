//! Plain-file session persistence.
//!
//! ```text
//! <workspace>/<session-id>/session.json     SessionRecord
//! <workspace>/<session-id>/transcript.jsonl one Turn per line
//! <workspace>/<session-id>/model.icb        current model as DSL
//! <workspace>/<session-id>/out/<platform>/  generated files
//! ```
//!
//! Every write goes to a temporary sibling first and is then renamed.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::transcript::{self, Turn};
use crate::codegen::GeneratedArtifact;
use crate::dialogue::{Engine, Session};
use crate::model_store::serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SessionStatus {
    Active,
    Done,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionRecord {
    pub session_id: String,
    pub created_at: DateTime<Utc>,
    pub transcript_path: PathBuf,
    pub model_path: PathBuf,
    pub status: SessionStatus,
}

/// A session rebuilt from disk by replaying its transcript.
#[derive(Debug, Clone)]
pub struct Restored {
    pub record: SessionRecord,
    pub session: Session,
    pub turns: Vec<Turn>,
    pub artifacts: Vec<GeneratedArtifact>,
}

pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "path has no file name"))?;
    let tmp = dir.join(format!(".{}.tmp", name.to_string_lossy()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

fn status_of(session: &Session) -> SessionStatus {
    if session.state.is_terminal() {
        SessionStatus::Done
    } else {
        SessionStatus::Active
    }
}

fn invalid(msg: String) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg)
}

#[derive(Debug, Clone)]
pub struct Workspace {
    root: PathBuf,
}

impl Workspace {
    pub fn open(root: impl Into<PathBuf>) -> io::Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root)?;
        Ok(Workspace { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn session_dir(&self, id: &str) -> PathBuf {
        self.root.join(id)
    }

    pub fn out_dir(&self, id: &str) -> PathBuf {
        self.session_dir(id).join("out")
    }

    /// Creates the directory and files of a new session.
    pub fn create(&self, session: &Session) -> io::Result<SessionRecord> {
        let dir = self.session_dir(&session.id);
        fs::create_dir_all(&dir)?;
        let record = SessionRecord {
            session_id: session.id.clone(),
            created_at: Utc::now(),
            transcript_path: dir.join("transcript.jsonl"),
            model_path: dir.join("model.icb"),
            status: status_of(session),
        };
        self.persist(&record, session, &[])?;
        Ok(record)
    }

    /// Writes the transcript, the model and the record for the current turn.
    pub fn persist(
        &self,
        record: &SessionRecord,
        session: &Session,
        turns: &[Turn],
    ) -> io::Result<()> {
        write_atomic(
            &record.transcript_path,
            transcript::render(turns).as_bytes(),
        )?;
        write_atomic(&record.model_path, serialize(&session.model).as_bytes())?;
        let json = serde_json::to_vec_pretty(record).map_err(|e| invalid(e.to_string()))?;
        write_atomic(
            &self.session_dir(&record.session_id).join("session.json"),
            &json,
        )
    }

    /// Updates the record status after a turn, then persists.
    pub fn save_turn(
        &self,
        record: &mut SessionRecord,
        session: &Session,
        turns: &[Turn],
    ) -> io::Result<()> {
        record.status = status_of(session);
        self.persist(record, session, turns)
    }

    pub fn write_artifacts(
        &self,
        id: &str,
        artifacts: &[GeneratedArtifact],
    ) -> io::Result<Vec<PathBuf>> {
        write_artifacts(&self.out_dir(id), artifacts)
    }

    /// Replays every persisted session. Sessions whose replay no longer
    /// matches their transcript are reported instead of restored.
    pub fn load(&self, engine: &Engine) -> io::Result<(Vec<Restored>, Vec<(PathBuf, String)>)> {
        let mut restored = Vec::new();
        let mut skipped = Vec::new();
        let mut dirs: Vec<PathBuf> = fs::read_dir(&self.root)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.join("session.json").is_file())
            .collect();
        dirs.sort();
        for dir in dirs {
            match self.load_one(engine, &dir) {
                Ok(r) => restored.push(r),
                Err(e) => skipped.push((dir, e)),
            }
        }
        Ok((restored, skipped))
    }

    fn load_one(&self, engine: &Engine, dir: &Path) -> Result<Restored, String> {
        let raw = fs::read(dir.join("session.json")).map_err(|e| e.to_string())?;
        let mut record: SessionRecord = serde_json::from_slice(&raw).map_err(|e| e.to_string())?;
        let text = fs::read_to_string(&record.transcript_path).map_err(|e| e.to_string())?;
        let recorded = transcript::parse(&text).map_err(|e| e.to_string())?;
        let report =
            transcript::replay(engine, &record.session_id, &recorded).map_err(|e| e.to_string())?;
        if let Some(m) = report.mismatches.first() {
            return Err(format!(
                "replay diverges from the transcript at turn {}",
                m.turn
            ));
        }
        if status_of(&report.session) != record.status {
            // The process stopped between the transcript and record writes.
            record.status = status_of(&report.session);
            self.persist(&record, &report.session, &report.turns)
                .map_err(|e| e.to_string())?;
        }
        Ok(Restored {
            record,
            session: report.session,
            turns: report.turns,
            artifacts: report.artifacts,
        })
    }
}

/// Writes each artifact to `<out>/<platform>/<filename>`.
pub fn write_artifacts(out: &Path, artifacts: &[GeneratedArtifact]) -> io::Result<Vec<PathBuf>> {
    let mut paths = Vec::with_capacity(artifacts.len());
    for a in artifacts {
        let path = out.join(a.relative_path());
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        write_atomic(&path, a.content.as_bytes())?;
        paths.push(path);
    }
    Ok(paths)
}
