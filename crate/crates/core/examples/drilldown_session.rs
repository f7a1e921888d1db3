//! Drives a drill-down session through the HTTP router in-process.
//!
//! ```sh
//! cargo run --example drilldown_session
//! ```

use std::sync::Arc;

use axum::body::Body;
use axum::http::Request;
use http_body_util::BodyExt;
use learning_path::aco::AcoParams;
use learning_path::fixtures;
use learning_path::service::{router, AppState, SessionStore};
use serde_json::{json, Value};
use tower::ServiceExt;

async fn post(app: &axum::Router, uri: &str, body: Value) -> anyhow::Result<Value> {
    let req = Request::post(uri)
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))?;
    let resp = app.clone().oneshot(req).await?;
    let bytes = resp.into_body().collect().await?.to_bytes();
    Ok(serde_json::from_slice(&bytes)?)
}

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    let state = AppState::with_graph(
        AcoParams::default(),
        SessionStore::new(None),
        fixtures::case_study_graph(),
    );
    let app = router(Arc::new(state));

    let session = post(&app, "/sessions", json!({})).await?;
    let id = session["id"].as_str().unwrap_or_default().to_string();

    let first = post(
        &app,
        "/query",
        json!({"term": "mitochondria", "session": id, "params": {"seed": 1}}),
    )
    .await?;
    println!("mitochondria: {}", first["recommended"]);

    let second = post(
        &app,
        &format!("/sessions/{id}/drilldown"),
        json!({"term": "eukaryotic"}),
    )
    .await?;
    println!(
        "  eukaryotic: {} (depth {})",
        second["recommended"], second["depth"]
    );

    post(
        &app,
        &format!("/sessions/{id}/known"),
        json!({"term": "cell"}),
    )
    .await?;
    let third = post(&app, "/query", json!({"term": "dna", "session": id})).await?;
    println!(
        "dna knowing cell: {} (seed {})",
        third["path"], third["seed"]
    );
    Ok(())
}
