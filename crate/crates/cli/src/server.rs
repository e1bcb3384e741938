//! HTTP/JSON service: decision sessions plus a stateless models endpoint.
//!
//! Steps on one session are serialized by a per-session lock; distinct
//! sessions proceed independently. With a state directory every session is
//! written to `<dir>/<id>.json` after each step and reloaded at startup.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{delete, get, post};
use axum::{Json, Router};
use jfy_core::branch::BranchEvaluation;
use jfy_core::par::Exec;
use jfy_core::program::{self, OpensError, ProgramError};
use jfy_core::semantics;
use jfy_core::session::{self, Action, SessionError, SessionState};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tokio::sync::{Mutex, RwLock};

pub struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> ApiError {
        ApiError {
            status,
            body: json!({ "error": message.into() }),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        match r {
            JsonRejection::MissingJsonContentType(_) => ApiError::new(StatusCode::UNSUPPORTED_MEDIA_TYPE, r.body_text()),
            _ => ApiError::new(StatusCode::BAD_REQUEST, r.body_text()),
        }
    }
}

impl From<ProgramError> for ApiError {
    fn from(e: ProgramError) -> Self {
        match e {
            ProgramError::Syntax(errors) => ApiError {
                status: StatusCode::UNPROCESSABLE_ENTITY,
                body: json!({
                    "error": "syntax errors",
                    "errors": errors
                        .iter()
                        .map(|e| json!({ "line": e.line, "col": e.col, "message": e.message }))
                        .collect::<Vec<_>>(),
                }),
            },
            other => ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, other.to_string()),
        }
    }
}

impl From<OpensError> for ApiError {
    fn from(e: OpensError) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, e.to_string())
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let status = match e {
            SessionError::NotOpen(_) | SessionError::UnknownFact(_) => StatusCode::BAD_REQUEST,
            SessionError::TooManyOpens { .. } => StatusCode::UNPROCESSABLE_ENTITY,
        };
        ApiError::new(status, e.to_string())
    }
}

fn parse_semantics(name: Option<&str>) -> Result<BranchEvaluation, ApiError> {
    name.unwrap_or("wf")
        .parse()
        .map_err(|e: jfy_core::branch::UnknownEvaluation| ApiError::new(StatusCode::BAD_REQUEST, e.to_string()))
}

/// What is persisted per session: enough to rebuild the state.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct Record {
    program: String,
    semantics: BranchEvaluation,
    answered: BTreeMap<String, bool>,
    queries: Vec<String>,
}

struct Entry {
    program: String,
    state: SessionState,
}

impl Entry {
    fn record(&self) -> Record {
        Record {
            program: self.program.clone(),
            semantics: self.state.evaluation(),
            answered: self.state.answered_named(),
            queries: self.state.query_names(),
        }
    }
}

#[derive(Default)]
pub struct AppState {
    sessions: RwLock<HashMap<String, Arc<Mutex<Entry>>>>,
    state_dir: Option<PathBuf>,
}

impl AppState {
    /// Loads every `*.json` session in `dir` (created if missing).
    pub fn with_state_dir(dir: &Path) -> std::io::Result<AppState> {
        std::fs::create_dir_all(dir)?;
        let mut sessions = HashMap::new();
        for entry in std::fs::read_dir(dir)? {
            let path = entry?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            let Some(id) = path.file_stem().and_then(|s| s.to_str()).map(str::to_owned) else {
                continue;
            };
            let text = std::fs::read_to_string(&path)?;
            let record: Record = serde_json::from_str(&text)
                .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, format!("{}: {e}", path.display())))?;
            let entry = rebuild(&record).map_err(|e| {
                std::io::Error::new(std::io::ErrorKind::InvalidData, format!("{}: {}", path.display(), e.body))
            })?;
            sessions.insert(id, Arc::new(Mutex::new(entry)));
        }
        Ok(AppState {
            sessions: RwLock::new(sessions),
            state_dir: Some(dir.to_owned()),
        })
    }

    fn persist(&self, id: &str, entry: &Entry) -> Result<(), ApiError> {
        let Some(dir) = &self.state_dir else {
            return Ok(());
        };
        let text = serde_json::to_string_pretty(&entry.record()).expect("records serialize");
        let tmp = dir.join(format!("{id}.json.tmp"));
        std::fs::write(&tmp, text)
            .and_then(|_| std::fs::rename(&tmp, dir.join(format!("{id}.json"))))
            .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, format!("cannot persist session: {e}")))
    }

    async fn entry(&self, id: &str) -> Result<Arc<Mutex<Entry>>, ApiError> {
        self.sessions
            .read()
            .await
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("unknown session {id}")))
    }
}

fn build(
    program_text: &str,
    semantics: BranchEvaluation,
    answered: &BTreeMap<String, bool>,
    queries: &[String],
) -> Result<Entry, ApiError> {
    let opens_json = serde_json::to_string(answered).expect("maps serialize");
    let mut extra = program::opens_constants(&opens_json)?;
    for q in queries {
        let bare = q.trim().trim_start_matches('~').trim_start_matches("not ").trim();
        if let Ok(atom) = program::parse_atom(bare) {
            extra.extend(atom.args.into_iter().filter_map(|t| match t {
                program::Term::Const(c) => Some(c),
                program::Term::Var(_) => None,
            }));
        }
    }
    let (_, frame) = program::load(program_text, &extra)?;
    let opens = program::opens_from_json(&frame, &opens_json)?;
    let facts = queries
        .iter()
        .map(|q| session::resolve_query(&frame, q))
        .collect::<Result<Vec<_>, _>>()?;
    let state = SessionState::new(Arc::new(frame), semantics, opens, facts)?;
    Ok(Entry {
        program: program_text.to_owned(),
        state,
    })
}

fn rebuild(record: &Record) -> Result<Entry, ApiError> {
    build(&record.program, record.semantics, &record.answered, &record.queries)
}

fn view(id: &str, entry: &Entry) -> Value {
    let mut v = entry.state.view_json();
    v["session_id"] = id.into();
    v
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
}

#[derive(Deserialize)]
struct CreateBody {
    program: String,
    #[serde(default)]
    opens: BTreeMap<String, bool>,
    semantics: Option<String>,
    #[serde(default)]
    queries: Vec<String>,
}

async fn create(
    State(app): State<Arc<AppState>>,
    body: Result<Json<CreateBody>, JsonRejection>,
) -> Result<(StatusCode, Json<Value>), ApiError> {
    let Json(body) = body?;
    let be = parse_semantics(body.semantics.as_deref())?;
    let entry = blocking(move || build(&body.program, be, &body.opens, &body.queries)).await?;
    let id = uuid::Uuid::new_v4().to_string();
    app.persist(&id, &entry)?;
    app.sessions.write().await.insert(id.clone(), Arc::new(Mutex::new(entry)));
    Ok((StatusCode::CREATED, Json(json!({ "session_id": id }))))
}

async fn show(State(app): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> Result<Json<Value>, ApiError> {
    let entry = app.entry(&id).await?;
    let guard = entry.lock().await;
    Ok(Json(view(&id, &guard)))
}

async fn step(app: &AppState, id: &str, action: Action) -> Result<Json<Value>, ApiError> {
    let entry = app.entry(id).await?;
    let mut guard = entry.lock().await;
    let current = guard.state.clone();
    let next = blocking(move || session::session_step(&current, &action).map_err(ApiError::from)).await?;
    guard.state = next;
    app.persist(id, &guard)?;
    Ok(Json(view(id, &guard)))
}

#[derive(Deserialize)]
struct AnswerBody {
    fact: String,
    value: bool,
}

async fn answer(
    State(app): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    body: Result<Json<AnswerBody>, JsonRejection>,
) -> Result<Json<Value>, ApiError> {
    app.entry(&id).await?;
    let Json(body) = body?;
    step(&app, &id, Action::Answer(body.fact, body.value)).await
}

async fn retract(
    State(app): State<Arc<AppState>>,
    UrlPath((id, fact)): UrlPath<(String, String)>,
) -> Result<Json<Value>, ApiError> {
    step(&app, &id, Action::Retract(fact)).await
}

#[derive(Deserialize)]
struct QueryBody {
    fact: String,
}

async fn add_query(
    State(app): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    body: Result<Json<QueryBody>, JsonRejection>,
) -> Result<Json<Value>, ApiError> {
    app.entry(&id).await?;
    let Json(body) = body?;
    step(&app, &id, Action::AddQuery(body.fact)).await
}

#[derive(Deserialize)]
struct ModelsParams {
    program: String,
    semantics: Option<String>,
    opens: Option<String>,
}

async fn models(params: Result<Query<ModelsParams>, axum::extract::rejection::QueryRejection>) -> Result<Json<Value>, ApiError> {
    let Query(params) = params.map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e.body_text()))?;
    let be = parse_semantics(params.semantics.as_deref())?;
    blocking(move || {
        let opens_json = params.opens.unwrap_or_else(|| "{}".to_owned());
        let extra = program::opens_constants(&opens_json)?;
        let (_, frame) = program::load(&params.program, &extra)?;
        let opens = program::opens_from_json(&frame, &opens_json)?;
        let outcome = semantics::engine_outcome(&frame, be, &opens, Exec::default())
            .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()))?;
        Ok(Json(json!({
            "result": outcome,
            "semantics": be.name(),
            "unassigned_opens": "absent",
        })))
    })
    .await
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(show))
        .route("/sessions/{id}/answers", post(answer))
        .route("/sessions/{id}/answers/{fact}", delete(retract))
        .route("/sessions/{id}/queries", post(add_query))
        .route("/models", get(models))
        .with_state(state)
}

pub async fn serve(port: u16, state: AppState) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(state))).await
}
