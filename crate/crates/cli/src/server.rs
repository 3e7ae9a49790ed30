//! HTTP API over [`Explorer`].
//!
//! | method | path               | body / query                                  |
//! |--------|--------------------|-----------------------------------------------|
//! | GET    | `/health`          |                                               |
//! | GET    | `/scales`          |                                               |
//! | GET    | `/progressions`    | `mode`, `length` (4), `page` (0), `page_size` (100) |
//! | POST   | `/base-progression`| `{"scale", "progression"}`                    |
//! | POST   | `/midi`            | `{"scale", "progression", "tempo", "octave", "voicing"}` |
//!
//! Errors are `{"error": <code>, "reason": <text>}` with a 4xx status.

use std::sync::Arc;

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chordgen_core::explorer::{
    BaseProgressionRequest, BaseProgressionResponse, Explorer, MidiRequest, ProgressionPage,
    DEFAULT_PAGE_SIZE,
};
use chordgen_core::{Error, Mode};
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;

#[derive(Debug, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    status: StatusCode,
    pub error: &'static str,
    pub reason: String,
}

impl ApiError {
    fn new(status: StatusCode, error: &'static str, reason: impl Into<String>) -> Self {
        Self {
            status,
            error,
            reason: reason.into(),
        }
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let (status, code) = match &e {
            Error::UnknownScale(_) => (StatusCode::BAD_REQUEST, "invalid_scale"),
            Error::InvalidProgression(_) | Error::InvalidDegreeToken { .. } => {
                (StatusCode::BAD_REQUEST, "invalid_progression")
            }
            Error::InvalidConfig(_) => (StatusCode::BAD_REQUEST, "invalid_playback_config"),
            Error::OutOfMidiRange(_) => (StatusCode::BAD_REQUEST, "out_of_midi_range"),
            Error::Overflow(_) => (StatusCode::BAD_REQUEST, "count_overflow"),
            Error::UnspellableNote { .. } => (StatusCode::UNPROCESSABLE_ENTITY, "unspellable_note"),
            _ => (StatusCode::INTERNAL_SERVER_ERROR, "internal"),
        };
        ApiError::new(status, code, e.to_string())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "invalid_body", e.body_text())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(e: QueryRejection) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "invalid_query", e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self)).into_response()
    }
}

type Shared = Arc<Explorer>;

pub fn router(explorer: Explorer) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/scales", get(scales))
        .route("/progressions", get(progressions))
        .route("/base-progression", post(base_progression))
        .route("/midi", post(midi))
        .fallback(not_found)
        .layer(CorsLayer::permissive())
        .with_state(Arc::new(explorer))
}

async fn health() -> Json<serde_json::Value> {
    Json(serde_json::json!({ "status": "ok" }))
}

#[derive(Serialize)]
struct ScalesResponse {
    scales: Vec<String>,
}

async fn scales(State(explorer): State<Shared>) -> Json<ScalesResponse> {
    Json(ScalesResponse {
        scales: explorer.scale_ids(),
    })
}

#[derive(Deserialize)]
struct ProgressionsQuery {
    mode: String,
    length: Option<usize>,
    page: Option<usize>,
    page_size: Option<usize>,
}

async fn progressions(
    State(explorer): State<Shared>,
    query: Result<Query<ProgressionsQuery>, QueryRejection>,
) -> Result<Json<ProgressionPage>, ApiError> {
    let Query(q) = query?;
    let mode: Mode = q.mode.parse().map_err(|_| {
        ApiError::new(
            StatusCode::BAD_REQUEST,
            "invalid_mode",
            format!("unknown mode {:?}", q.mode),
        )
    })?;
    let page = explorer.progressions_page(
        mode,
        q.length.unwrap_or(4),
        q.page.unwrap_or(0),
        q.page_size.unwrap_or(DEFAULT_PAGE_SIZE),
    )?;
    Ok(Json(page))
}

async fn base_progression(
    State(explorer): State<Shared>,
    body: Result<Json<BaseProgressionRequest>, JsonRejection>,
) -> Result<Json<BaseProgressionResponse>, ApiError> {
    let Json(req) = body?;
    Ok(Json(explorer.base_progression(
        &req.scale,
        &req.progression.to_text(),
    )?))
}

async fn midi(
    State(explorer): State<Shared>,
    body: Result<Json<MidiRequest>, JsonRejection>,
) -> Result<Response, ApiError> {
    let Json(req) = body?;
    let config = req.playback_config()?;
    let bytes = explorer.midi(&req.scale, &req.progression.to_text(), &config)?;
    Ok(([(header::CONTENT_TYPE, "audio/midi")], bytes).into_response())
}

async fn not_found() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "not_found", "no such route")
}

/// Serve until Ctrl-C, letting in-flight requests finish.
pub async fn serve(explorer: Explorer, addr: std::net::SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(explorer))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
            tracing::info!("shutting down");
        })
        .await
}
