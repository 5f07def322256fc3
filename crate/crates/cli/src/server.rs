//! HTTP facade over the commands and the session store.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use chrono::Utc;
use serde_json::{json, Value};
use tokio::sync::Mutex as SessionLock;

use qpw_core::json as docs;
use qpw_core::witness::WitnessOptions;

use crate::commands::{self, render, CommandError};
use crate::session::{self, Mode, Session, Step};

pub const DEFAULT_PORT: u16 = 7878;

/// Shared state. The outer map lock is held only for lookups; each session
/// has its own lock, which orders that session's requests.
pub struct AppState {
    sessions: Mutex<HashMap<String, Arc<SessionLock<Session>>>>,
    state_dir: Option<PathBuf>,
}

impl AppState {
    pub fn new(state_dir: Option<PathBuf>) -> Self {
        let mut sessions = HashMap::new();
        if let Some(dir) = &state_dir {
            let (loaded, problems) = session::load_all(dir);
            for p in problems {
                eprintln!("skipping session file {p}");
            }
            for s in loaded {
                sessions.insert(s.id.clone(), Arc::new(SessionLock::new(s)));
            }
        }
        AppState { sessions: Mutex::new(sessions), state_dir }
    }

    fn get(&self, id: &str) -> Result<Arc<SessionLock<Session>>, ApiError> {
        self.sessions
            .lock()
            .expect("session map lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError(StatusCode::NOT_FOUND, "unknown-session", format!("no session {id}")))
    }

    fn persist(&self, s: &Session) -> Result<(), ApiError> {
        match &self.state_dir {
            Some(dir) => s.save(dir).map_err(ApiError::from),
            None => Ok(()),
        }
    }
}

pub struct ApiError(StatusCode, &'static str, String);

impl From<CommandError> for ApiError {
    fn from(e: CommandError) -> Self {
        let status = match &e {
            CommandError::Malformed(_) | CommandError::Usage(_) => StatusCode::BAD_REQUEST,
            CommandError::TwoCycle { .. } => StatusCode::CONFLICT,
            CommandError::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
            CommandError::Domain { .. } => StatusCode::UNPROCESSABLE_ENTITY,
        };
        ApiError(status, e.reason(), e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({"error": {"reason": self.1, "message": self.2}});
        document(self.0, &body)
    }
}

fn document(status: StatusCode, v: &Value) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], render(v)).into_response()
}

type ApiResult = Result<Response, ApiError>;

fn body_value(body: &Bytes) -> Result<Value, ApiError> {
    let text = std::str::from_utf8(body).map_err(|e| CommandError::Malformed(e.to_string()))?;
    Ok(docs::parse_value(text).map_err(CommandError::from)?)
}

/// `{"qp": {...}, ...}` or a bare QP document.
fn qp_of(v: &Value) -> Result<qpw_core::qp::QuiverWithPotential, ApiError> {
    let doc = v.get("qp").unwrap_or(v);
    Ok(docs::qp_from_value(doc).map_err(CommandError::from)?)
}

fn usize_field(v: &Value, name: &str) -> Result<Option<usize>, ApiError> {
    match v.get(name) {
        None | Some(Value::Null) => Ok(None),
        Some(x) => x
            .as_u64()
            .map(|x| Some(x as usize))
            .ok_or_else(|| CommandError::Malformed(format!("{name} must be a non-negative integer")).into()),
    }
}

fn i64_list(v: &Value, name: &str) -> Result<Vec<i64>, ApiError> {
    serde_json::from_value(v.get(name).cloned().unwrap_or(Value::Null))
        .map_err(|e| CommandError::Malformed(format!("{name}: {e}")).into())
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/session", post(create_session))
        .route("/api/session/{id}", get(get_session))
        .route("/api/session/{id}/mutate", post(mutate_session))
        .route("/api/session/{id}/undo", post(undo_session))
        .route("/api/session/{id}/redo", post(redo_session))
        .route("/api/classify", post(classify))
        .route("/api/jacobian", post(jacobian))
        .route("/api/stable", post(stable))
        .route("/api/witness", post(witness))
        .with_state(state)
}

async fn create_session(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult {
    let p = qp_of(&body_value(&body)?)?;
    let s = Session::new(uuid::Uuid::new_v4().to_string(), p, Utc::now());
    state.persist(&s)?;
    let view = s.view();
    state.sessions.lock().expect("session map lock").insert(s.id.clone(), Arc::new(SessionLock::new(s)));
    Ok(document(StatusCode::CREATED, &view))
}

async fn get_session(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    let s = state.get(&id)?;
    let view = s.lock().await.view();
    Ok(document(StatusCode::OK, &view))
}

async fn mutate_session(State(state): State<Arc<AppState>>, Path(id): Path<String>, body: Bytes) -> ApiResult {
    let v = body_value(&body)?;
    let k = usize_field(&v, "k")?.ok_or_else(|| CommandError::Malformed("missing k".into()))?;
    let mode: Mode = match v.get("mode") {
        None => Mode::Qp,
        Some(m) => serde_json::from_value(m.clone())
            .map_err(|_| CommandError::Malformed("mode must be \"quiver\" or \"qp\"".into()))?,
    };
    let s = state.get(&id)?;
    let mut guard = s.lock().await;
    guard.apply(Step { k, mode }, Utc::now())?;
    state.persist(&guard)?;
    Ok(document(StatusCode::OK, &guard.view()))
}

async fn undo_session(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    let s = state.get(&id)?;
    let mut guard = s.lock().await;
    if !guard.undo(Utc::now())? {
        return Err(ApiError(StatusCode::CONFLICT, "nothing-to-undo", "history is at its start".into()));
    }
    state.persist(&guard)?;
    Ok(document(StatusCode::OK, &guard.view()))
}

async fn redo_session(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    let s = state.get(&id)?;
    let mut guard = s.lock().await;
    if !guard.redo(Utc::now())? {
        return Err(ApiError(StatusCode::CONFLICT, "nothing-to-redo", "history is at its end".into()));
    }
    state.persist(&guard)?;
    Ok(document(StatusCode::OK, &guard.view()))
}

async fn classify(body: Bytes) -> ApiResult {
    let v = body_value(&body)?;
    let q = docs::quiver_from_value(v.get("quiver").or(v.get("qp")).unwrap_or(&v)).map_err(CommandError::from)?;
    Ok(document(StatusCode::OK, &commands::classify_doc(&q)?))
}

async fn jacobian(body: Bytes) -> ApiResult {
    let v = body_value(&body)?;
    let p = qp_of(&v)?;
    let n = usize_field(&v, "trunc")?.unwrap_or(crate::DEFAULT_JACOBIAN_TRUNCATION);
    let doc = tokio::task::spawn_blocking(move || commands::jacobian(&p, n)).await.expect("worker")?;
    Ok(document(StatusCode::OK, &doc))
}

async fn stable(body: Bytes) -> ApiResult {
    let v = body_value(&body)?;
    let p = qp_of(&v)?;
    let theta = i64_list(&v, "theta")?;
    let rep = v.get("rep").cloned().ok_or_else(|| CommandError::Malformed("missing rep".into()))?;
    let doc = tokio::task::spawn_blocking(move || commands::stable(&p, &rep, &theta)).await.expect("worker")?;
    Ok(document(StatusCode::OK, &doc))
}

/// Body: a QP document, `{"qp": ..., "k": ...}`, or `{"sessionId": ..., "k": ...}`.
async fn witness(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult {
    let v = body_value(&body)?;
    let p = match v.get("sessionId").and_then(Value::as_str) {
        Some(id) => state.get(id)?.lock().await.current().clone(),
        None => qp_of(&v)?,
    };
    let mut opts = WitnessOptions::default();
    if let Some(k) = usize_field(&v, "k")? {
        opts.k = k;
    }
    let doc = tokio::task::spawn_blocking(move || commands::witness(&p, &opts, &mut |_| {})).await.expect("worker")?;
    Ok(document(StatusCode::OK, &doc))
}

pub async fn serve(host: &str, port: u16, state_dir: Option<PathBuf>) -> std::io::Result<()> {
    let addr: SocketAddr =
        format!("{host}:{port}").parse().map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidInput, e))?;
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(AppState::new(state_dir)))).await
}
