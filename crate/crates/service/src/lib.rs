//! HTTP API over the analysis pipeline. Clients upload an archive to
//! create a session, then query analyses of that session's data.
//!
//! Numbers follow one policy throughout: infinities are the strings
//! `"Inf"` / `"-Inf"` and undefined values are `null`.

mod error;
pub mod params;
pub mod session;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use axum::extract::{DefaultBodyLimit, Multipart, Path, Query, State};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use ioha_core::DataSetCollection;
use ioha_export::report::{self, Report, Request};
use ioha_export::{json as js, Format};
use serde_json::{json, Value};
use tower_http::cors::{AllowOrigin, CorsLayer};
use tower_http::services::ServeDir;

pub use error::ApiError;
pub use session::{Session, SessionStore};

pub const DEFAULT_PORT: u16 = 8080;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub max_upload_bytes: usize,
    pub session_ttl: Duration,
    /// Allowed CORS origin; any origin when unset.
    pub allow_origin: Option<String>,
    /// Directory of static UI assets served at `/`.
    pub static_dir: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            max_upload_bytes: 100 * 1024 * 1024,
            session_ttl: Duration::from_secs(3600),
            allow_origin: None,
            static_dir: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AppState {
    pub sessions: Arc<SessionStore>,
}

/// The analyses exposed under `/api/sessions/{id}/`.
const ANALYSES: [&str; 10] = [
    "overview", "stats", "samples", "params", "ecdf", "auc", "test", "rank", "radar", "density",
];

fn run_analysis(name: &str, c: &DataSetCollection, req: &Request) -> Result<Report, ApiError> {
    let rep = match name {
        "overview" => report::overview(c, req),
        "stats" => report::stats(c, req),
        "samples" => report::samples(c, req),
        "params" => report::params(c, req),
        "ecdf" => report::ecdf(c, req),
        "auc" => report::auc(c, req),
        "test" => report::test(c, req),
        "rank" => report::rank(c, req),
        "radar" => report::radar(c, req),
        "density" => report::density(c, req),
        _ => return Err(ApiError::NotFound(format!("no analysis named `{name}`"))),
    };
    rep.map_err(ApiError::from)
}

pub fn router(config: &ServiceConfig) -> Router {
    router_with_store(config, Arc::new(SessionStore::new(config.session_ttl)))
}

pub fn router_with_store(config: &ServiceConfig, sessions: Arc<SessionStore>) -> Router {
    let cors = CorsLayer::new()
        .allow_methods([Method::GET, Method::POST, Method::DELETE])
        .allow_headers([header::CONTENT_TYPE])
        .allow_origin(match &config.allow_origin {
            Some(o) => match HeaderValue::from_str(o) {
                Ok(v) => AllowOrigin::exact(v),
                Err(_) => AllowOrigin::list([]),
            },
            None => AllowOrigin::any(),
        });
    let api = Router::new()
        .route("/api/health", get(|| async { Json(json!({"status": "ok"})) }))
        .route("/api/sessions", post(upload))
        .route("/api/sessions/{id}", get(session_summary).delete(delete_session))
        .route("/api/sessions/{id}/export/{analysis}", get(export))
        .route("/api/sessions/{id}/{analysis}", get(analysis))
        .layer(DefaultBodyLimit::max(config.max_upload_bytes))
        .layer(cors)
        .with_state(AppState { sessions });
    match &config.static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

/// Binds `addr` and serves until the process ends, purging idle sessions
/// in the background.
pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let sessions = Arc::new(SessionStore::new(config.session_ttl));
    let reaper = Arc::clone(&sessions);
    let period = (config.session_ttl / 4).clamp(Duration::from_secs(1), Duration::from_secs(60));
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(period);
        loop {
            tick.tick().await;
            let n = reaper.purge_expired();
            if n > 0 {
                log::info!("expired {n} idle sessions");
            }
        }
    });
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router_with_store(&config, sessions)).await
}

fn lookup(state: &AppState, id: &str) -> Result<Arc<Session>, ApiError> {
    state
        .sessions
        .get(id)
        .ok_or_else(|| ApiError::NotFound(format!("unknown session `{id}`")))
}

async fn upload(State(state): State<AppState>, mut multipart: Multipart) -> Result<Json<Value>, ApiError> {
    let mut bytes = None;
    while let Some(field) = multipart.next_field().await.map_err(ApiError::from)? {
        if field.file_name().is_some() || matches!(field.name(), Some("archive" | "file")) {
            bytes = Some(field.bytes().await.map_err(ApiError::from)?);
            break;
        }
    }
    let bytes = bytes.ok_or_else(|| ApiError::BadUpload {
        kind: "MissingArchive",
        detail: "multipart body has no file field".into(),
    })?;
    let collection = tokio::task::spawn_blocking(move || ioha_core::load_archive_bytes(&bytes))
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))??;
    let session = state.sessions.insert(collection);
    Ok(Json(json!({
        "sessionId": session.id,
        "createdAt": session.created_at,
        "summary": js::collection_summary(&session.collection),
    })))
}

async fn session_summary(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let s = lookup(&state, &id)?;
    Ok(Json(json!({
        "sessionId": s.id,
        "createdAt": s.created_at,
        "summary": js::collection_summary(&s.collection),
    })))
}

async fn delete_session(State(state): State<AppState>, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    if state.sessions.remove(&id) {
        Ok(StatusCode::NO_CONTENT)
    } else {
        Err(ApiError::NotFound(format!("unknown session `{id}`")))
    }
}

async fn compute(state: &AppState, id: &str, name: String, q: HashMap<String, String>) -> Result<Report, ApiError> {
    let s = lookup(state, id)?;
    if !ANALYSES.contains(&name.as_str()) {
        return Err(ApiError::NotFound(format!("no analysis named `{name}`")));
    }
    let req = params::request(&q).map_err(|e| ApiError::Invalid(e.0))?;
    tokio::task::spawn_blocking(move || run_analysis(&name, &s.collection, &req))
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))?
}

async fn analysis(
    State(state): State<AppState>,
    Path((id, name)): Path<(String, String)>,
    Query(q): Query<HashMap<String, String>>,
) -> Result<Json<Value>, ApiError> {
    Ok(Json(compute(&state, &id, name, q).await?.to_json()))
}

/// The analysis as a downloadable table, `format=csv|latex|json`.
async fn export(
    State(state): State<AppState>,
    Path((id, name)): Path<(String, String)>,
    Query(q): Query<HashMap<String, String>>,
) -> Result<Response, ApiError> {
    let format: Format = q
        .get("format")
        .map_or(Ok(Format::Csv), |f| f.parse())
        .map_err(|e: ioha_export::ExportError| ApiError::Invalid(e.to_string()))?;
    let rep = compute(&state, &id, name.clone(), q).await?;
    let body = rep
        .table
        .render(format)
        .map_err(|e| ApiError::Internal(e.to_string()))?;
    let (mime, ext) = match format {
        Format::Csv => ("text/csv; charset=utf-8", "csv"),
        Format::Latex => ("application/x-latex; charset=utf-8", "tex"),
        Format::Json => ("application/json", "json"),
    };
    Ok((
        [
            (header::CONTENT_TYPE, mime.to_string()),
            (
                header::CONTENT_DISPOSITION,
                format!("attachment; filename=\"{name}.{ext}\""),
            ),
        ],
        body,
    )
        .into_response())
}
