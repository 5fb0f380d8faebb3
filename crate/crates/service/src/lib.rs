//! HTTP JSON facade over the wordgraph engine: measure queries, batch
//! analysis jobs and ideation sessions.
//!
//! Routes:
//!
//! | method | path | |
//! |---|---|---|
//! | GET | `/health` | version and database constants |
//! | GET | `/measures` | the 49-entry measure catalog |
//! | POST | `/similarity` | `{x, y, measures?}` |
//! | POST | `/analyze` | start an analysis job → `202 {job_id}` |
//! | GET | `/analyze/{id}` | job status and report |
//! | POST | `/session` | `{base, candidates?, measure?, id?}` |
//! | GET | `/session/{id}` | session state |
//! | POST | `/session/{id}/propose` | `{k?}` |
//! | POST | `/session/{id}/decision` | `{candidate, decision}` |
//!
//! Errors come back as `{code, message, details}`.

mod error;
mod state;

use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::{FromRequest, Path, State};
use axum::http::{HeaderValue, StatusCode};
use axum::response::IntoResponse;
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tower_http::cors::{Any, CorsLayer};
use wordgraph::dynamics::GroupingFile;
use wordgraph::ideation::{Decision, HistoryEntry, IdeationSession, Proposal, SessionEvent, DEFAULT_MEASURE};
use wordgraph::measures::{catalog, parse_measure_list, MeasureId};
use wordgraph::report::{analyze, nearest_entries, similarity_report, Document, RunConfig, TOOLKIT, VERSION};
use wordgraph::{Error, WordGraph};

pub use error::{ApiError, ErrorBody};
pub use state::{valid_id, AppState, Job};

type Shared = Arc<AppState>;
type ApiResult<T> = Result<T, ApiError>;

/// `Json` with rejections rendered as structured error bodies.
#[derive(FromRequest)]
#[from_request(via(axum::Json), rejection(ApiError))]
struct ApiJson<T>(T);

fn engine_error(graph: &WordGraph) -> impl Fn(Error) -> ApiError + '_ {
    move |e| ApiError::from_engine(e, |ws| json!(nearest_entries(graph, ws)))
}

/// Runs CPU-bound engine work off the async workers.
async fn blocking<T: Send + 'static>(f: impl FnOnce() -> ApiResult<T> + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(f).await.map_err(|e| {
        ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", format!("worker failed: {e}"), Value::Null)
    })?
}

pub fn router(state: Shared, cors_origin: Option<&str>) -> Router {
    let cors = match cors_origin.and_then(|o| HeaderValue::from_str(o).ok()) {
        Some(origin) => CorsLayer::new().allow_origin(origin),
        None => CorsLayer::new().allow_origin(Any),
    }
    .allow_methods(Any)
    .allow_headers(Any);
    Router::new()
        .route("/health", get(health))
        .route("/measures", get(measures))
        .route("/similarity", post(similarity))
        .route("/analyze", post(start_analysis))
        .route("/analyze/{id}", get(job_status))
        .route("/session", post(create_session))
        .route("/session/{id}", get(get_session))
        .route("/session/{id}/propose", post(propose))
        .route("/session/{id}/decision", post(decide))
        .layer(cors)
        .with_state(state)
}

/// Serves until Ctrl-C.
pub async fn serve(state: Shared, addr: SocketAddr, cors_origin: Option<&str>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state, cors_origin))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

async fn health(State(st): State<Shared>) -> Json<Value> {
    Json(json!({
        "status": "ok",
        "toolkit": TOOLKIT,
        "version": VERSION,
        "constants": st.graph.constants(),
        "sessions": st.session_count(),
    }))
}

async fn measures() -> Json<Value> {
    Json(json!(catalog()))
}

fn parse_measures(list: &[String]) -> Result<Vec<MeasureId>, Error> {
    parse_measure_list(&list.join(","))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SimilarityRequest {
    x: String,
    y: String,
    #[serde(default)]
    measures: Vec<String>,
}

async fn similarity(State(st): State<Shared>, ApiJson(req): ApiJson<SimilarityRequest>) -> ApiResult<impl IntoResponse> {
    blocking(move || {
        let g = &st.graph;
        let measures = parse_measures(&req.measures).map_err(engine_error(g))?;
        let report = similarity_report(g, &req.x, &req.y, &measures).map_err(engine_error(g))?;
        Ok(Json(report))
    })
    .await
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AnalyzeRequest {
    documents: Vec<Document>,
    #[serde(default)]
    grouping: Option<GroupingFile>,
    #[serde(default)]
    config: Option<RunConfig>,
}

async fn start_analysis(State(st): State<Shared>, ApiJson(req): ApiJson<AnalyzeRequest>) -> ApiResult<impl IntoResponse> {
    if req.documents.is_empty() {
        return Err(ApiError::bad_request("no documents to analyze"));
    }
    let id = uuid::Uuid::new_v4().to_string();
    st.jobs.write().expect("job map lock").insert(id.clone(), Job::Running);
    let job_id = id.clone();
    tokio::task::spawn_blocking(move || {
        let mut cfg = req.config.unwrap_or_default();
        cfg.db.clone_from(&st.db);
        cfg.cache.clone_from(&st.cache);
        let g = &st.graph;
        let outcome = analyze(g, &req.documents, req.grouping.as_ref(), &cfg)
            .and_then(|r| Ok(serde_json::to_value(r)?))
            .map_err(engine_error(g));
        let job = match outcome {
            Ok(report) => Job::Done { report },
            Err(e) => Job::Failed { error: e.body },
        };
        st.jobs.write().expect("job map lock").insert(job_id, job);
    });
    Ok((StatusCode::ACCEPTED, Json(json!({ "job_id": id, "status": "running" }))))
}

async fn job_status(State(st): State<Shared>, Path(id): Path<String>) -> ApiResult<impl IntoResponse> {
    let job = st.jobs.read().expect("job map lock").get(&id).cloned();
    let job = job.ok_or_else(|| ApiError::not_found("analysis job", &id))?;
    let mut body = serde_json::to_value(&job).expect("job serializes");
    body["job_id"] = json!(id);
    Ok(Json(body))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SessionRequest {
    #[serde(default)]
    id: Option<String>,
    base: Vec<String>,
    #[serde(default)]
    candidates: Vec<String>,
    #[serde(default)]
    measure: Option<String>,
}

async fn create_session(State(st): State<Shared>, ApiJson(req): ApiJson<SessionRequest>) -> ApiResult<impl IntoResponse> {
    let id = req.id.clone().unwrap_or_else(|| uuid::Uuid::new_v4().to_string());
    if !valid_id(&id) {
        return Err(ApiError::bad_request("session id must be 1-64 characters from [A-Za-z0-9_-]"));
    }
    blocking(move || {
        let g = &st.graph;
        let measure = match &req.measure {
            Some(m) => m.parse().map_err(engine_error(g))?,
            None => DEFAULT_MEASURE,
        };
        let session =
            IdeationSession::start(g, id.clone(), &req.base, &req.candidates, measure, &st.ctx).map_err(engine_error(g))?;
        let started = SessionEvent::Started { id, base: req.base, candidates: req.candidates, measure };
        let body = serde_json::to_value(&session).expect("session serializes");
        st.insert_session(session, started).map_err(engine_error(g))?;
        Ok((StatusCode::CREATED, Json(body)))
    })
    .await
}

async fn get_session(State(st): State<Shared>, Path(id): Path<String>) -> ApiResult<impl IntoResponse> {
    let slot = st.session(&id).ok_or_else(|| ApiError::not_found("session", &id))?;
    let slot = slot.lock().expect("session lock");
    Ok(Json(serde_json::to_value(&slot.session).expect("session serializes")))
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProposeRequest {
    #[serde(default)]
    k: Option<usize>,
}

#[derive(Serialize)]
struct ProposeResponse<'a> {
    proposals: Vec<Proposal>,
    session: &'a IdeationSession,
}

async fn propose(State(st): State<Shared>, Path(id): Path<String>, body: axum::body::Bytes) -> ApiResult<impl IntoResponse> {
    let req: ProposeRequest = if body.iter().all(u8::is_ascii_whitespace) {
        ProposeRequest::default()
    } else {
        serde_json::from_slice(&body)
            .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "invalid_json", e.to_string(), Value::Null))?
    };
    let slot = st.session(&id).ok_or_else(|| ApiError::not_found("session", &id))?;
    blocking(move || {
        let g = &st.graph;
        let mut slot = slot.lock().expect("session lock");
        let proposals = slot.session.propose(g, req.k, &st.ctx).map_err(engine_error(g))?;
        slot.record(&[SessionEvent::Proposed { k: req.k }]).map_err(engine_error(g))?;
        let body = serde_json::to_value(ProposeResponse { proposals, session: &slot.session }).expect("serializes");
        Ok(Json(body))
    })
    .await
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DecisionRequest {
    candidate: String,
    decision: Decision,
}

#[derive(Serialize)]
struct DecisionResponse<'a> {
    entry: HistoryEntry,
    session: &'a IdeationSession,
}

async fn decide(
    State(st): State<Shared>,
    Path(id): Path<String>,
    ApiJson(req): ApiJson<DecisionRequest>,
) -> ApiResult<impl IntoResponse> {
    let slot = st.session(&id).ok_or_else(|| ApiError::not_found("session", &id))?;
    blocking(move || {
        let g = &st.graph;
        let mut slot = slot.lock().expect("session lock");
        let entry = slot.session.decide(g, &req.candidate, req.decision, &st.ctx).map_err(engine_error(g))?.clone();
        let event = SessionEvent::Decided { candidate: entry.candidate.clone(), decision: req.decision };
        slot.record(&[event]).map_err(engine_error(g))?;
        let body = serde_json::to_value(DecisionResponse { entry, session: &slot.session }).expect("serializes");
        Ok(Json(body))
    })
    .await
}
