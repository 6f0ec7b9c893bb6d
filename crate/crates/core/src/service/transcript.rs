//! Transcripts: one JSON object per turn, replayable on any surface.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codegen::GeneratedArtifact;
use crate::dialogue::{BotResponse, DialogueError, DialogueState, Engine, Session};

/// One recorded turn. Artifacts are not stored inline; they are written to
/// the session's output directory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Turn {
    pub turn: u64,
    pub user: String,
    pub reply: BotResponse,
    pub state_before: DialogueState,
    pub state_after: DialogueState,
}

impl Turn {
    pub fn new(
        turn: u64,
        user: &str,
        reply: &BotResponse,
        state_before: DialogueState,
        state_after: DialogueState,
    ) -> Self {
        let mut reply = reply.clone();
        reply.artifacts.clear();
        Turn {
            turn,
            user: user.to_string(),
            reply,
            state_before,
            state_after,
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("turns always serialize")
    }
}

/// A transcript line: either a full recorded turn or a bare utterance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recorded {
    pub user: String,
    pub expected: Option<Turn>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("transcript line {line}: {message}")]
pub struct TranscriptError {
    pub line: usize,
    pub message: String,
}

/// Reads a transcript. Lines starting with `{` are turn records; other
/// non-blank lines are utterances; `#` starts a comment line.
pub fn parse(text: &str) -> Result<Vec<Recorded>, TranscriptError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.starts_with('{') {
            let turn: Turn = serde_json::from_str(line).map_err(|e| TranscriptError {
                line: i + 1,
                message: e.to_string(),
            })?;
            out.push(Recorded {
                user: turn.user.clone(),
                expected: Some(turn),
            });
        } else {
            out.push(Recorded {
                user: line.to_string(),
                expected: None,
            });
        }
    }
    Ok(out)
}

pub fn render(turns: &[Turn]) -> String {
    let mut s = String::new();
    for t in turns {
        s.push_str(&t.to_line());
        s.push('\n');
    }
    s
}

/// A replayed turn that differs from its recording.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub turn: u64,
    pub expected: Turn,
    pub actual: Turn,
}

#[derive(Debug, Clone)]
pub struct ReplayReport {
    pub session: Session,
    pub turns: Vec<Turn>,
    pub artifacts: Vec<GeneratedArtifact>,
    pub mismatches: Vec<Mismatch>,
}

/// Runs the utterances through a fresh session, comparing each turn with
/// its recording when there is one.
pub fn replay(
    engine: &Engine,
    session_id: &str,
    recorded: &[Recorded],
) -> Result<ReplayReport, DialogueError> {
    let mut session = Session::with_id(session_id);
    let mut turns = Vec::with_capacity(recorded.len());
    let mut artifacts = Vec::new();
    let mut mismatches = Vec::new();
    for (i, r) in recorded.iter().enumerate() {
        let before = session.state;
        let reply = engine.handle_message(&mut session, &r.user)?;
        let turn = Turn::new(i as u64 + 1, &r.user, &reply, before, session.state);
        if !reply.artifacts.is_empty() {
            artifacts = reply.artifacts;
        }
        if let Some(expected) = &r.expected {
            if *expected != turn {
                mismatches.push(Mismatch {
                    turn: turn.turn,
                    expected: expected.clone(),
                    actual: turn.clone(),
                });
            }
        }
        turns.push(turn);
    }
    Ok(ReplayReport {
        session,
        turns,
        artifacts,
        mismatches,
    })
}
