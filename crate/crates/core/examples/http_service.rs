//! Drives the HTTP API in-process: creates a session, posts messages and
//! fetches the model. `icb serve` runs the same router on a socket.
//!
//! ```bash
//! cargo run --example http_service
//! ```

use std::sync::Arc;

use axum::body::Body;
use axum::http::Request;
use http_body_util::BodyExt;
use icb::dialogue::Engine;
use icb::service::{router, AppState, Workspace};
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(app: &axum::Router, req: Request<Body>) -> (u16, Value) {
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status().as_u16();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap())
}

#[tokio::main]
async fn main() {
    let dir = tempfile::tempdir().unwrap();
    let state = AppState::new(
        Arc::new(Engine::builtin()),
        Workspace::open(dir.path()).unwrap(),
    );
    let app = router(Arc::new(state));

    let (status, created) = call(
        &app,
        Request::post("/sessions").body(Body::empty()).unwrap(),
    )
    .await;
    println!("POST /sessions -> {status}\n{created:#}");
    let id = created["session_id"].as_str().unwrap().to_string();

    for text in [
        "I want to create a contract",
        "Escrow",
        "ethereum",
        "create an asset deed",
    ] {
        let req = Request::post(format!("/sessions/{id}/messages"))
            .header("content-type", "application/json")
            .body(Body::from(json!({ "text": text }).to_string()))
            .unwrap();
        let (status, reply) = call(&app, req).await;
        println!("POST messages {text:?} -> {status}: {}", reply["text"]);
    }

    let (status, model) = call(
        &app,
        Request::get(format!("/sessions/{id}/model"))
            .body(Body::empty())
            .unwrap(),
    )
    .await;
    println!(
        "GET model -> {status} (state {})\n{}",
        model["state"],
        model["dsl"].as_str().unwrap()
    );

    let (status, err) = call(
        &app,
        Request::get("/sessions/nope/model")
            .body(Body::empty())
            .unwrap(),
    )
    .await;
    println!("GET unknown session -> {status}: {err}");
    println!("session files under {}", dir.path().join(&id).display());
}
