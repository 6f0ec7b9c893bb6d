mod common;

use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use common::script;
use http_body_util::BodyExt;
use icb::dialogue::Engine;
use icb::service::{router, AppState, Workspace};
use serde_json::{json, Value};
use tower::ServiceExt;

fn app(dir: &std::path::Path) -> (Arc<AppState>, Router) {
    let state = Arc::new(AppState::new(
        Arc::new(Engine::builtin()),
        Workspace::open(dir).unwrap(),
    ));
    (state.clone(), router(state))
}

async fn send(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let mut req = Request::builder().method(method).uri(uri);
    let body = match body {
        Some(v) => {
            req = req.header("content-type", "application/json");
            Body::from(v.to_string())
        }
        None => Body::empty(),
    };
    let resp = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = resp.status();
    let ct = resp.headers().get("content-type").cloned();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    assert_eq!(
        ct.as_ref().and_then(|v| v.to_str().ok()),
        Some("application/json"),
        "{uri}"
    );
    (status, serde_json::from_slice(&bytes).unwrap())
}

async fn new_session(app: &Router) -> String {
    let (status, body) = send(app, "POST", "/sessions", None).await;
    assert_eq!(status, StatusCode::CREATED);
    assert!(body["greeting"]["text"]
        .as_str()
        .unwrap()
        .contains("contract"));
    body["session_id"].as_str().unwrap().to_string()
}

async fn say(app: &Router, id: &str, text: &str) -> (StatusCode, Value) {
    send(
        app,
        "POST",
        &format!("/sessions/{id}/messages"),
        Some(json!({ "text": text })),
    )
    .await
}

#[tokio::test]
async fn health_check() {
    let dir = tempfile::tempdir().unwrap();
    let (_, app) = app(dir.path());
    let (status, body) = send(&app, "GET", "/healthz", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["status"], "ok");
}

#[tokio::test]
async fn first_message_asks_for_the_contract_name() {
    let dir = tempfile::tempdir().unwrap();
    let (_, app) = app(dir.path());
    let id = new_session(&app).await;
    let (status, body) = say(&app, &id, "I want to create a contract").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["kind"], "Prompt");
    assert!(body["text"]
        .as_str()
        .unwrap()
        .contains("name of the contract"));
}

#[tokio::test]
async fn unknown_session_is_404_everywhere() {
    let dir = tempfile::tempdir().unwrap();
    let (_, app) = app(dir.path());
    for (method, uri, body) in [
        (
            "POST",
            "/sessions/nope/messages",
            Some(json!({"text": "hi"})),
        ),
        ("GET", "/sessions/nope/model", None),
        ("GET", "/sessions/nope/artifacts", None),
    ] {
        let (status, body) = send(&app, method, uri, body).await;
        assert_eq!(status, StatusCode::NOT_FOUND, "{uri}");
        assert_eq!(body["error"]["code"], "session_not_found");
        assert!(body["error"]["message"].as_str().unwrap().contains("nope"));
    }
}

#[tokio::test]
async fn artifacts_are_404_before_generation() {
    let dir = tempfile::tempdir().unwrap();
    let (_, app) = app(dir.path());
    let id = new_session(&app).await;
    let (status, body) = send(&app, "GET", &format!("/sessions/{id}/artifacts"), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["error"]["code"], "no_artifacts");
}

#[tokio::test]
async fn full_medical_flow_over_http() {
    let dir = tempfile::tempdir().unwrap();
    let (_, app) = app(dir.path());
    let id = new_session(&app).await;
    let lines = script("medical.transcript");
    let mut last = Value::Null;
    for l in &lines {
        let (status, body) = say(&app, &id, l).await;
        assert_eq!(status, StatusCode::OK, "{l}: {body}");
        // The model endpoint tracks every turn.
        let (status, model) = send(&app, "GET", &format!("/sessions/{id}/model"), None).await;
        assert_eq!(status, StatusCode::OK);
        assert!(model["dsl"].is_string() && model["model"].is_object());
        last = body;
    }
    assert_eq!(last["kind"], "CodeReady");
    assert_eq!(last["artifacts"][0]["filename"], "MedicalRecord.sol");

    let (status, model) = send(&app, "GET", &format!("/sessions/{id}/model"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert!(model["dsl"]
        .as_str()
        .unwrap()
        .starts_with("Contract: MedicalRecord\nPlatform: Solidity\n"));
    assert_eq!(model["model"]["participants"][0]["name"], "patient");
    assert_eq!(model["state"]["state"], "Done");

    let (status, arts) = send(&app, "GET", &format!("/sessions/{id}/artifacts"), None).await;
    assert_eq!(status, StatusCode::OK);
    let a = &arts["artifacts"][0];
    assert_eq!(a["path"], "ethereum/MedicalRecord.sol");
    let on_disk =
        std::fs::read_to_string(dir.path().join(&id).join("out/ethereum/MedicalRecord.sol"))
            .unwrap();
    assert_eq!(a["content"].as_str().unwrap(), on_disk);
    assert!(on_disk.contains("contract MedicalRecord{"));

    let (status, body) = say(&app, &id, "hello again").await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["error"]["code"], "session_done");
}

#[tokio::test]
async fn http_transcript_replays_identically_in_the_engine() {
    let dir = tempfile::tempdir().unwrap();
    let (_, app) = app(dir.path());
    let id = new_session(&app).await;
    let lines = script("auction.transcript");
    let mut http_replies = Vec::new();
    for l in &lines {
        let (_, body) = say(&app, &id, l).await;
        http_replies.push(body["text"].as_str().unwrap().to_string());
    }
    let engine = Engine::builtin();
    let refs: Vec<&str> = lines.iter().map(String::as_str).collect();
    let (session, replies) = engine.replay("local", refs).unwrap();
    let local: Vec<String> = replies.into_iter().map(|r| r.text).collect();
    assert_eq!(http_replies, local);
    let persisted = std::fs::read_to_string(dir.path().join(&id).join("model.icb")).unwrap();
    assert_eq!(persisted, icb::model_store::serialize(&session.model));
    let text = std::fs::read_to_string(dir.path().join(&id).join("transcript.jsonl")).unwrap();
    let report = icb::service::transcript::replay(
        &engine,
        "again",
        &icb::service::transcript::parse(&text).unwrap(),
    )
    .unwrap();
    assert!(report.mismatches.is_empty());
}

#[tokio::test]
async fn restart_restores_sessions_from_transcripts() {
    let dir = tempfile::tempdir().unwrap();
    let (_, app1) = app(dir.path());
    let id = new_session(&app1).await;
    for l in script("medical.transcript").iter().take(10) {
        say(&app1, &id, l).await;
    }
    let (_, before) = send(&app1, "GET", &format!("/sessions/{id}/model"), None).await;
    drop(app1);

    let (state, skipped) = AppState::restore(
        Arc::new(Engine::builtin()),
        Workspace::open(dir.path()).unwrap(),
    )
    .unwrap();
    assert!(skipped.is_empty());
    assert_eq!(state.session_count(), 1);
    let app2 = router(Arc::new(state));
    let (_, after) = send(&app2, "GET", &format!("/sessions/{id}/model"), None).await;
    assert_eq!(before, after);
    // The conversation continues where it stopped.
    for l in script("medical.transcript").iter().skip(10) {
        let (status, _) = say(&app2, &id, l).await;
        assert_eq!(status, StatusCode::OK);
    }
    let (status, _) = send(&app2, "GET", &format!("/sessions/{id}/artifacts"), None).await;
    assert_eq!(status, StatusCode::OK);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_messages_are_serialized_or_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let (_, app) = app(dir.path());
    let id = new_session(&app).await;
    let mut handles = Vec::new();
    for _ in 0..16 {
        let app = app.clone();
        let id = id.clone();
        handles.push(tokio::spawn(async move { say(&app, &id, "help").await }));
    }
    let mut ok = 0;
    for h in handles {
        let (status, body) = h.await.unwrap();
        match status {
            StatusCode::OK => ok += 1,
            StatusCode::CONFLICT => assert_eq!(body["error"]["code"], "session_busy"),
            other => panic!("unexpected {other}"),
        }
    }
    assert!(ok >= 1);
    let text = std::fs::read_to_string(dir.path().join(&id).join("transcript.jsonl")).unwrap();
    let turns: Vec<u64> = text
        .lines()
        .map(|l| {
            serde_json::from_str::<Value>(l).unwrap()["turn"]
                .as_u64()
                .unwrap()
        })
        .collect();
    assert_eq!(turns, (1..=ok as u64).collect::<Vec<_>>());
}

#[tokio::test]
async fn sessions_are_independent() {
    let dir = tempfile::tempdir().unwrap();
    let (_, app) = app(dir.path());
    let a = new_session(&app).await;
    let b = new_session(&app).await;
    assert_ne!(a, b);
    say(&app, &a, "I want to create a contract").await;
    let (_, ma) = send(&app, "GET", &format!("/sessions/{a}/model"), None).await;
    let (_, mb) = send(&app, "GET", &format!("/sessions/{b}/model"), None).await;
    assert_eq!(ma["state"]["state"], "AwaitContractName");
    assert_eq!(mb["state"]["state"], "Start");
}
