//! HTTP feedback service for sample authoring.
//!
//! Candidates are scored against a frozen [`Snapshot`] of the corpus; the
//! corpus statistics are never refit per request, so identical requests
//! against one snapshot version get byte-identical answers. Accepted
//! samples go to an append-only journal and, with a refit interval, are
//! folded into a new snapshot that replaces the old one atomically.
//!
//! | Method | Path           | Body              |
//! |--------|----------------|-------------------|
//! | GET    | `/v1/health`   |                   |
//! | GET    | `/v1/config`   |                   |
//! | POST   | `/v1/feedback` | `{p, h, label}`   |
//! | POST   | `/v1/accept`   | `{p, h, label}`   |

mod feedback;
mod snapshot;

use std::io::Write;
use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use dqi_core::config::BIN_KEYS;
use dqi_core::Sample;
use serde_json::json;
use tokio::net::TcpListener;
use tokio::sync::Mutex;

pub use feedback::{
    evaluate_candidate, validate, Artifact, FeedbackRequest, FeedbackResponse, ValidationError,
};
pub use snapshot::{word_overlap, OverlapProfile, Snapshot};

#[derive(Debug, Default)]
struct AcceptLog {
    total: usize,
    pending: Vec<Sample>,
}

pub struct AppState {
    current: RwLock<Arc<Snapshot>>,
    journal: Option<PathBuf>,
    refit_interval: Option<usize>,
    accepted: Mutex<AcceptLog>,
}

impl AppState {
    pub fn new(
        snapshot: Snapshot,
        journal: Option<PathBuf>,
        refit_interval: Option<usize>,
    ) -> Self {
        AppState {
            current: RwLock::new(Arc::new(snapshot)),
            journal,
            refit_interval: refit_interval.filter(|&n| n > 0),
            accepted: Mutex::new(AcceptLog::default()),
        }
    }

    /// The snapshot in force right now. Callers keep it for the whole request.
    pub fn snapshot(&self) -> Arc<Snapshot> {
        Arc::clone(&self.current.read().expect("snapshot lock"))
    }

    fn swap(&self, next: Snapshot) {
        *self.current.write().expect("snapshot lock") = Arc::new(next);
    }
}

struct ApiError(StatusCode, ValidationError);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(self.1)).into_response()
    }
}

impl From<ValidationError> for ApiError {
    fn from(e: ValidationError) -> Self {
        ApiError(StatusCode::BAD_REQUEST, e)
    }
}

fn internal(e: impl std::fmt::Display) -> ApiError {
    ApiError(
        StatusCode::INTERNAL_SERVER_ERROR,
        ValidationError {
            error: e.to_string(),
            field: None,
        },
    )
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/v1/health", get(health))
        .route("/v1/config", get(config))
        .route("/v1/feedback", post(feedback))
        .route("/v1/accept", post(accept))
        .with_state(state)
}

/// Serves until the listener fails.
pub async fn serve(listener: TcpListener, state: Arc<AppState>) -> std::io::Result<()> {
    axum::serve(listener, router(state)).await
}

async fn health(State(state): State<Arc<AppState>>) -> Json<serde_json::Value> {
    let s = state.snapshot();
    Json(json!({
        "status": "ok",
        "snapshotVersion": s.version,
        "corpus": s.corpus_id,
        "sizeX": s.index.size(),
        "sizeS": s.index.sentence_count(),
        "vocabulary": s.index.vocabulary(),
        "labels": s.index.labels(),
        "sentenceSimilarity": s.providers.sentence.method(),
        "wordSimilarity": s.providers.word.method(),
    }))
}

async fn config(State(state): State<Arc<AppState>>) -> Json<serde_json::Value> {
    let s = state.snapshot();
    Json(json!({
        "snapshotVersion": s.version,
        "config": s.cfg,
        "binKeys": BIN_KEYS,
    }))
}

async fn feedback(
    State(state): State<Arc<AppState>>,
    body: Bytes,
) -> Result<Json<FeedbackResponse>, ApiError> {
    let req = FeedbackRequest::parse(&body)?;
    let snapshot = state.snapshot();
    let response = tokio::task::spawn_blocking(move || evaluate_candidate(&req, &snapshot))
        .await
        .map_err(internal)??;
    Ok(Json(response))
}

async fn accept(
    State(state): State<Arc<AppState>>,
    body: Bytes,
) -> Result<Json<serde_json::Value>, ApiError> {
    let req = FeedbackRequest::parse(&body)?;
    let snapshot = state.snapshot();
    validate(&req, &snapshot)?;

    let mut log = state.accepted.lock().await;
    log.total += 1;
    let sample = Sample {
        id: format!("accepted-{}-{}", snapshot.version, log.total),
        p: req.p,
        h: req.h,
        label: req.label,
        split: Default::default(),
        partition: Default::default(),
    };
    if let Some(path) = &state.journal {
        let line = serde_json::to_string(&sample).map_err(internal)?;
        let mut file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(internal)?;
        writeln!(file, "{line}").map_err(internal)?;
    }
    log.pending.push(sample.clone());
    log::info!(
        "accepted {} ({} pending refit)",
        sample.id,
        log.pending.len()
    );

    let mut refit = false;
    if state.refit_interval.is_some_and(|n| log.pending.len() >= n) {
        let batch = std::mem::take(&mut log.pending);
        let base = state.snapshot();
        let next = tokio::task::spawn_blocking(move || base.refit(&batch))
            .await
            .map_err(internal)?
            .map_err(internal)?;
        log::info!(
            "refit: snapshot version {} with {} samples",
            next.version,
            next.index.size()
        );
        state.swap(next);
        refit = true;
    }
    Ok(Json(json!({
        "snapshotVersion": state.snapshot().version,
        "accepted": sample.id,
        "journaled": state.journal.is_some(),
        "pendingRefit": log.pending.len(),
        "refit": refit,
    })))
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/service.md")]
mod book {}
