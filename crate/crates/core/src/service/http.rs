//! JSON-over-HTTP conversation API.
//!
//! | method | path                       | result                         |
//! |--------|----------------------------|--------------------------------|
//! | POST   | `/sessions`                | 201 `{session_id, greeting}`   |
//! | POST   | `/sessions/{id}/messages`  | `BotResponse`                  |
//! | GET    | `/sessions/{id}/model`     | `{dsl, model, state}`          |
//! | GET    | `/sessions/{id}/artifacts` | `{artifacts: [...]}`           |
//! | GET    | `/healthz`                 | `{status: "ok"}`               |
//!
//! Errors are `{"error": {"code", "message"}}`. A session handles one
//! message at a time; a message that arrives while another is in flight, or
//! after the session is done, gets 409.

use std::collections::HashMap;
use std::io;
use std::sync::{Arc, RwLock};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tokio::sync::Mutex;

use super::store::{SessionRecord, Workspace};
use super::transcript::Turn;
use crate::codegen::GeneratedArtifact;
use crate::dialogue::{BotResponse, DialogueError, DialogueState, Engine, Session};
use crate::metamodel::{ContractModel, PlatformTarget};
use crate::model_store::serialize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            code,
            message: message.into(),
        }
    }

    fn unknown_session(id: &str) -> Self {
        Self::new(
            StatusCode::NOT_FOUND,
            "session_not_found",
            format!("no session with id `{id}`"),
        )
    }

    fn internal(e: impl std::fmt::Display) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "error": { "code": self.code, "message": self.message } });
        (self.status, Json(body)).into_response()
    }
}

/// In-memory state of one session.
#[derive(Debug)]
struct Live {
    record: SessionRecord,
    session: Session,
    turns: Vec<Turn>,
    artifacts: Vec<GeneratedArtifact>,
}

pub struct AppState {
    engine: Arc<Engine>,
    workspace: Workspace,
    sessions: RwLock<HashMap<String, Arc<Mutex<Live>>>>,
}

impl AppState {
    pub fn new(engine: Arc<Engine>, workspace: Workspace) -> Self {
        AppState {
            engine,
            workspace,
            sessions: RwLock::new(HashMap::new()),
        }
    }

    /// Builds the state and reloads every persisted session. Returns the
    /// sessions that could not be restored alongside.
    pub fn restore(
        engine: Arc<Engine>,
        workspace: Workspace,
    ) -> io::Result<(Self, Vec<(std::path::PathBuf, String)>)> {
        let (restored, skipped) = workspace.load(&engine)?;
        let state = AppState::new(engine, workspace);
        {
            let mut map = state.sessions.write().expect("session map poisoned");
            for r in restored {
                let live = Live {
                    record: r.record,
                    session: r.session,
                    turns: r.turns,
                    artifacts: r.artifacts,
                };
                map.insert(live.session.id.clone(), Arc::new(Mutex::new(live)));
            }
        }
        Ok((state, skipped))
    }

    pub fn session_count(&self) -> usize {
        self.sessions.read().expect("session map poisoned").len()
    }

    fn get(&self, id: &str) -> Result<Arc<Mutex<Live>>, ApiError> {
        self.sessions
            .read()
            .expect("session map poisoned")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::unknown_session(id))
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/healthz", get(healthz))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}/messages", post(post_message))
        .route("/sessions/{id}/model", get(get_model))
        .route("/sessions/{id}/artifacts", get(get_artifacts))
        .fallback(|| async { ApiError::new(StatusCode::NOT_FOUND, "not_found", "no such route") })
        .with_state(state)
}

async fn healthz() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok" }))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Created {
    pub session_id: String,
    pub greeting: BotResponse,
}

async fn create_session(
    State(app): State<Arc<AppState>>,
) -> Result<(StatusCode, Json<Created>), ApiError> {
    let session = app.engine.new_session();
    let ws = app.workspace.clone();
    let (record, session) =
        tokio::task::spawn_blocking(move || ws.create(&session).map(|r| (r, session)))
            .await
            .map_err(ApiError::internal)?
            .map_err(ApiError::internal)?;
    let id = session.id.clone();
    let live = Live {
        record,
        session,
        turns: Vec::new(),
        artifacts: Vec::new(),
    };
    app.sessions
        .write()
        .expect("session map poisoned")
        .insert(id.clone(), Arc::new(Mutex::new(live)));
    Ok((
        StatusCode::CREATED,
        Json(Created {
            session_id: id,
            greeting: app.engine.greeting(),
        }),
    ))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MessageIn {
    pub text: String,
}

async fn post_message(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Json<MessageIn>, JsonRejection>,
) -> Result<Json<BotResponse>, ApiError> {
    let Json(msg) =
        body.map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "bad_request", e.body_text()))?;
    let slot = app.get(&id)?;
    let mut live = slot.try_lock_owned().map_err(|_| {
        ApiError::new(
            StatusCode::CONFLICT,
            "session_busy",
            "another message for this session is still being handled",
        )
    })?;
    if live.session.state.is_terminal() {
        return Err(ApiError::new(
            StatusCode::CONFLICT,
            "session_done",
            DialogueError::SessionDone.to_string(),
        ));
    }
    let engine = app.engine.clone();
    let ws = app.workspace.clone();
    // The guard moves into the blocking task, so the session stays locked
    // until the turn is on disk.
    tokio::task::spawn_blocking(move || -> Result<BotResponse, ApiError> {
        let live = &mut *live;
        let before = live.session.state;
        let reply = engine
            .handle_message(&mut live.session, &msg.text)
            .map_err(|e| ApiError::new(StatusCode::CONFLICT, "session_done", e.to_string()))?;
        let turn = Turn::new(
            live.turns.len() as u64 + 1,
            &msg.text,
            &reply,
            before,
            live.session.state,
        );
        live.turns.push(turn);
        if !reply.artifacts.is_empty() {
            ws.write_artifacts(&live.session.id, &reply.artifacts)
                .map_err(ApiError::internal)?;
            live.artifacts = reply.artifacts.clone();
        }
        ws.save_turn(&mut live.record, &live.session, &live.turns)
            .map_err(ApiError::internal)?;
        Ok(reply)
    })
    .await
    .map_err(ApiError::internal)?
    .map(Json)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ModelView {
    pub dsl: String,
    pub model: ContractModel,
    pub state: DialogueState,
}

async fn get_model(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<ModelView>, ApiError> {
    let slot = app.get(&id)?;
    let live = slot.lock().await;
    Ok(Json(ModelView {
        dsl: serialize(&live.session.model),
        model: live.session.model.clone(),
        state: live.session.state,
    }))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ArtifactView {
    pub path: String,
    pub filename: String,
    pub platform: PlatformTarget,
    pub content: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ArtifactList {
    pub artifacts: Vec<ArtifactView>,
}

async fn get_artifacts(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<ArtifactList>, ApiError> {
    let slot = app.get(&id)?;
    let live = slot.lock().await;
    if live.artifacts.is_empty() {
        return Err(ApiError::new(
            StatusCode::NOT_FOUND,
            "no_artifacts",
            "no code has been generated for this session yet",
        ));
    }
    let artifacts = live
        .artifacts
        .iter()
        .map(|a| ArtifactView {
            path: a.relative_path().to_string_lossy().replace('\\', "/"),
            filename: a.filename.clone(),
            platform: a.platform,
            content: a.content.clone(),
        })
        .collect();
    Ok(Json(ArtifactList { artifacts }))
}
