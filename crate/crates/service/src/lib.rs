//! HTTP/JSON front end for one prebuilt [`SceneIndex`].
//!
//! | method | path       | body                              | response                 |
//! |--------|------------|-----------------------------------|--------------------------|
//! | GET    | `/health`  |                                   | `ok`                     |
//! | GET    | `/scene`   |                                   | scene file JSON          |
//! | GET    | `/stats`   |                                   | build statistics         |
//! | POST   | `/query`   | `{"path": [[x, y], ...], "c": c}` | clearance report         |
//! | POST   | `/nearest` | `{"segment": [[x, y], [x, y]]}`   | nearest obstacle         |
//!
//! Errors come back as `{"error": kind, "reason": text}` with status 400
//! for malformed bodies and invalid geometry, 422 for a non-positive or
//! non-finite `c`, and 409 for `/nearest` against an empty scene.
//!
//! The index is immutable and shared; queries run on the blocking pool so
//! long paths do not stall the reactor.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use clearance_core::io::{ErrorBody, NearestRequest, QueryRequest, SceneFile};
use clearance_core::{PolyPath, QueryError, SceneIndex};
use serde::de::DeserializeOwned;
use tokio::net::TcpListener;

pub struct AppState {
    index: SceneIndex,
    scene_file: SceneFile,
}

impl AppState {
    pub fn new(index: SceneIndex) -> Self {
        let scene_file = SceneFile::from_scene(index.scene());
        AppState { index, scene_file }
    }
}

pub fn router(index: SceneIndex) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/scene", get(scene))
        .route("/stats", get(stats))
        .route("/query", post(query))
        .route("/nearest", post(nearest))
        .with_state(Arc::new(AppState::new(index)))
}

/// Serves until ctrl-c.
pub async fn serve(listener: TcpListener, index: SceneIndex) -> std::io::Result<()> {
    tracing::info!(addr = ?listener.local_addr()?, n = index.stats().n, "serving");
    axum::serve(listener, router(index))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, error: &str, reason: impl ToString) -> Self {
        ApiError {
            status,
            body: ErrorBody {
                error: error.to_string(),
                reason: reason.to_string(),
            },
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "malformed_body", e))
}

async fn health() -> &'static str {
    "ok"
}

async fn scene(State(state): State<Arc<AppState>>) -> Json<SceneFile> {
    Json(state.scene_file.clone())
}

async fn stats(State(state): State<Arc<AppState>>) -> Response {
    Json(*state.index.stats()).into_response()
}

async fn query(State(state): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let req: QueryRequest = parse_body(&body)?;
    let path = PolyPath::new(req.path)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "invalid_path", e))?;
    let report = blocking(move || state.index.path_clearance(&path, req.c)).await?;
    match report {
        Ok(r) => Ok(Json(r).into_response()),
        Err(e @ QueryError::InvalidClearance(_)) => Err(ApiError::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            "invalid_clearance",
            e,
        )),
        Err(e) => Err(ApiError::new(StatusCode::CONFLICT, "empty_scene", e)),
    }
}

async fn nearest(State(state): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let req: NearestRequest = parse_body(&body)?;
    let s = req
        .to_segment()
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "invalid_segment", e))?;
    match blocking(move || state.index.nearest_polygon_to_segment(&s)).await? {
        Ok(r) => Ok(Json(r).into_response()),
        Err(e) => Err(ApiError::new(StatusCode::CONFLICT, "empty_scene", e)),
    }
}

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> T + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e))
}
