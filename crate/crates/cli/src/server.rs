//! HTTP grading service.
//!
//! `POST /v1/grade` takes a JSON array of grading records and answers with
//! the results in input order. The status is 200 when every record graded,
//! 422 when some record failed (errors are reported inline), and 503 when
//! an oracle dependency was down for at least one record. `GET /healthz`
//! reports artifact versions.

use std::sync::Arc;
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde_json::{json, Value};
use tokio::net::TcpListener;
use tokio::sync::Semaphore;
use tokio::time::{timeout_at, Instant};

use crate::engine::{Engine, Fault};

#[derive(Clone)]
struct AppState {
    engine: Arc<Engine>,
    permits: Arc<Semaphore>,
    deadline: Duration,
    max_batch: usize,
}

fn json_response(status: StatusCode, body: &Value) -> Response {
    let bytes = serde_json::to_vec(body).expect("serializing a JSON value");
    (status, [(header::CONTENT_TYPE, "application/json")], bytes).into_response()
}

fn error_response(status: StatusCode, code: &str, message: impl Into<String>) -> Response {
    json_response(status, &json!({"error": {"code": code, "message": message.into()}}))
}

pub fn router(engine: Arc<Engine>) -> Router {
    let cfg = &engine.config.server;
    let state = AppState {
        permits: Arc::new(Semaphore::new(cfg.max_in_flight)),
        deadline: Duration::from_millis(cfg.request_timeout_ms),
        max_batch: cfg.max_batch,
        engine,
    };
    Router::new().route("/v1/grade", post(grade)).route("/healthz", get(healthz)).with_state(state)
}

async fn healthz(State(state): State<AppState>) -> Response {
    json_response(StatusCode::OK, &json!({"status": "ok", "versions": state.engine.versions()}))
}

async fn grade(State(state): State<AppState>, body: Bytes) -> Response {
    let deadline = Instant::now() + state.deadline;
    let records = match serde_json::from_slice::<Value>(&body) {
        Ok(Value::Array(records)) => records,
        Ok(_) => return error_response(StatusCode::BAD_REQUEST, "malformed_body", "body must be a JSON array of records"),
        Err(e) => return error_response(StatusCode::BAD_REQUEST, "malformed_body", format!("invalid JSON: {e}")),
    };
    if records.len() > state.max_batch {
        return error_response(
            StatusCode::PAYLOAD_TOO_LARGE,
            "batch_too_large",
            format!("{} records exceed the limit of {}", records.len(), state.max_batch),
        );
    }
    let permit = match timeout_at(deadline, state.permits.clone().acquire_owned()).await {
        Ok(Ok(p)) => p,
        _ => return error_response(StatusCode::SERVICE_UNAVAILABLE, "busy", "too many requests in flight"),
    };
    let engine = state.engine.clone();
    let work = tokio::task::spawn_blocking(move || {
        let _permit = permit;
        records.iter().map(|r| engine.grade_value(r)).collect::<Vec<_>>()
    });
    let graded = match timeout_at(deadline, work).await {
        Ok(Ok(g)) => g,
        Ok(Err(e)) => return error_response(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()),
        Err(_) => return error_response(StatusCode::GATEWAY_TIMEOUT, "deadline_exceeded", "request deadline exceeded"),
    };
    let status = if graded.iter().any(|g| g.fault == Some(Fault::Unavailable)) {
        StatusCode::SERVICE_UNAVAILABLE
    } else if graded.iter().any(|g| g.fault.is_some()) {
        StatusCode::UNPROCESSABLE_ENTITY
    } else {
        StatusCode::OK
    };
    let body = Value::Array(graded.into_iter().map(|g| g.json).collect());
    json_response(status, &body)
}

/// Serves on an already bound listener until `shutdown` resolves.
pub async fn serve_on(
    listener: TcpListener,
    engine: Arc<Engine>,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(engine)).with_graceful_shutdown(shutdown).await
}

pub async fn serve(engine: Arc<Engine>) -> anyhow::Result<()> {
    let bind = engine.config.server.bind.clone();
    let listener = TcpListener::bind(&bind).await?;
    tracing::info!(addr = %listener.local_addr()?, "grading service listening");
    serve_on(listener, engine, async {
        let _ = tokio::signal::ctrl_c().await;
    })
    .await?;
    Ok(())
}
