//! HTTP+JSON facade over the graph and the colony.
//!
//! | method | path                        | body                         |
//! |--------|-----------------------------|------------------------------|
//! | POST   | `/graph`                    | snapshot document            |
//! | GET    | `/graph`                    |                              |
//! | GET    | `/terms`                    |                              |
//! | POST   | `/query`                    | `{"term", "known"?, "params"?, "session"?}` |
//! | POST   | `/transactions`             | Q&A log (JSON Lines)         |
//! | POST   | `/sessions`                 | `{"known"?}`                 |
//! | GET    | `/sessions/{id}`            |                              |
//! | POST   | `/sessions/{id}/drilldown`  | `{"term", "params"?}`        |
//! | POST   | `/sessions/{id}/known`      | `{"term"}`                   |
//!
//! The served graph is an immutable `Arc` swapped under a single writer
//! gate, so queries always finish against the version they started on and
//! echo that version back.

mod config;
mod error;
mod session;

use std::collections::BTreeSet;
use std::net::SocketAddr;
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::IntoResponse;
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aco::{self, AcoParams, LearningPath, ParamOverrides};
use crate::corpus::{normalize_term, parse_qa_log};
use crate::fpgraph::{FpGraph, QaMatch, Snapshot};
use crate::ROOT;

pub use config::{ConfigError, ServiceConfig};
pub use error::ApiError;
pub use session::{HistoryEntry, Session, SessionStore};

/// A loaded graph and the version it was published under.
#[derive(Debug)]
pub struct ServedGraph {
    pub version: u64,
    pub graph: FpGraph,
}

#[derive(Debug)]
pub struct AppState {
    current: RwLock<Option<Arc<ServedGraph>>>,
    writer: tokio::sync::Mutex<()>,
    sessions: SessionStore,
    defaults: AcoParams,
}

impl AppState {
    pub fn new(defaults: AcoParams, sessions: SessionStore) -> Self {
        AppState {
            current: RwLock::new(None),
            writer: tokio::sync::Mutex::new(()),
            sessions,
            defaults,
        }
    }

    pub fn with_graph(defaults: AcoParams, sessions: SessionStore, graph: FpGraph) -> Self {
        let state = Self::new(defaults, sessions);
        *state.current.write().expect("graph lock poisoned") =
            Some(Arc::new(ServedGraph { version: 1, graph }));
        state
    }

    pub fn current(&self) -> Option<Arc<ServedGraph>> {
        self.current.read().expect("graph lock poisoned").clone()
    }

    fn require_graph(&self) -> Result<Arc<ServedGraph>, ApiError> {
        self.current().ok_or_else(ApiError::no_graph)
    }

    /// Publishes `graph` as the next version. Callers hold the writer gate.
    fn publish(&self, graph: FpGraph) -> u64 {
        let mut slot = self.current.write().expect("graph lock poisoned");
        let version = slot.as_ref().map_or(1, |g| g.version + 1);
        *slot = Some(Arc::new(ServedGraph { version, graph }));
        version
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/graph", post(load_graph).get(get_graph))
        .route("/terms", get(list_terms))
        .route("/query", post(query))
        .route("/transactions", post(apply_transactions))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/drilldown", post(drilldown))
        .route("/sessions/{id}/known", post(mark_known))
        .with_state(state)
}

#[derive(Debug, Error)]
pub enum ServeError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("loading graph {path}: {reason}")]
    Graph { path: String, reason: String },
    #[error("session store: {0}")]
    Sessions(std::io::Error),
    #[error("address {0} is already in use")]
    PortInUse(SocketAddr),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

/// Builds the application state described by `config`.
pub fn state_from_config(config: &ServiceConfig) -> Result<AppState, ServeError> {
    let sessions = match &config.sessions_dir {
        Some(dir) => SessionStore::load(dir.clone()).map_err(ServeError::Sessions)?,
        None => SessionStore::new(None),
    };
    let Some(path) = &config.graph_path else {
        return Ok(AppState::new(config.aco.clone(), sessions));
    };
    let graph_err = |reason: String| ServeError::Graph {
        path: path.display().to_string(),
        reason,
    };
    let text = std::fs::read_to_string(path).map_err(|e| graph_err(e.to_string()))?;
    let graph = FpGraph::from_json(&text).map_err(|e| graph_err(e.to_string()))?;
    Ok(AppState::with_graph(config.aco.clone(), sessions, graph))
}

/// Binds the configured address and serves until Ctrl-C.
pub async fn serve(config: ServiceConfig) -> Result<(), ServeError> {
    let state = Arc::new(state_from_config(&config)?);
    let addr: SocketAddr = format!("{}:{}", config.host, config.port)
        .parse()
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidInput, format!("{e}")))?;
    let listener = match tokio::net::TcpListener::bind(addr).await {
        Ok(l) => l,
        Err(e) if e.kind() == std::io::ErrorKind::AddrInUse => {
            return Err(ServeError::PortInUse(addr))
        }
        Err(e) => return Err(e.into()),
    };
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

fn parse_json<T: DeserializeOwned + Default>(
    body: &Bytes,
    allow_empty: bool,
) -> Result<T, ApiError> {
    if allow_empty && body.iter().all(u8::is_ascii_whitespace) {
        return Ok(T::default());
    }
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request("malformed_body", e.to_string()))
}

fn parse_term(raw: &str) -> Result<String, ApiError> {
    let term =
        normalize_term(raw).map_err(|e| ApiError::bad_request("invalid_term", e.to_string()))?;
    if term == ROOT {
        return Err(ApiError::bad_request(
            "root_not_queryable",
            "the root is not a term a learner can ask about",
        ));
    }
    Ok(term)
}

fn parse_terms(raw: &[String]) -> Result<BTreeSet<String>, ApiError> {
    raw.iter().map(|t| parse_term(t)).collect()
}

fn require_term(graph: &FpGraph, term: &str) -> Result<(), ApiError> {
    if graph.contains(term) {
        Ok(())
    } else {
        Err(ApiError::unknown_term(term, graph.suggest(term, 5)))
    }
}

// POST /graph

#[derive(Serialize)]
struct VersionReply {
    version: u64,
}

async fn load_graph(
    State(state): State<Arc<AppState>>,
    body: Bytes,
) -> Result<Json<VersionReply>, ApiError> {
    let text = std::str::from_utf8(&body)
        .map_err(|e| ApiError::bad_request("invalid_snapshot", e.to_string()))?;
    let graph = Snapshot::from_json(text)
        .and_then(|doc| FpGraph::restore(&doc))
        .map_err(|e| ApiError::bad_request("invalid_snapshot", e.to_string()))?;
    let _gate = state.writer.lock().await;
    let version = state.publish(graph);
    Ok(Json(VersionReply { version }))
}

// GET /graph

async fn get_graph(State(state): State<Arc<AppState>>) -> Result<impl IntoResponse, ApiError> {
    let served = state.require_graph()?;
    Ok((
        [(axum::http::header::CONTENT_TYPE, "application/json")],
        served.graph.to_json(),
    ))
}

// GET /terms

#[derive(Debug, Serialize, Deserialize)]
pub struct TermInfo {
    pub term: String,
    pub data_list_size: usize,
    pub in_degree: usize,
    pub out_degree: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TermIndex {
    pub version: u64,
    pub terms: Vec<TermInfo>,
}

async fn list_terms(State(state): State<Arc<AppState>>) -> Result<Json<TermIndex>, ApiError> {
    let served = state.require_graph()?;
    let g = &served.graph;
    let terms = g
        .nodes()
        .map(|n| TermInfo {
            term: n.term.clone(),
            data_list_size: n.data_list.len(),
            in_degree: g.in_degree(&n.term),
            out_degree: g.out_degree(&n.term),
        })
        .collect();
    Ok(Json(TermIndex {
        version: served.version,
        terms,
    }))
}

// POST /query and drill-downs

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryRequest {
    pub term: String,
    #[serde(default)]
    pub known: Vec<String>,
    #[serde(default)]
    pub params: Option<ParamOverrides>,
    #[serde(default)]
    pub session: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeView {
    pub from: String,
    pub to: String,
    pub frequency: u64,
    pub association: bool,
    pub tau: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QueryResponse {
    #[serde(flatten)]
    pub path: LearningPath,
    pub version: u64,
    pub seed: u64,
    pub known: Vec<String>,
    pub edges: Vec<EdgeView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub session: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
}

/// Runs the colony against one graph version. A missing seed is drawn here
/// and returned so the answer can be replayed.
async fn run_query(
    served: Arc<ServedGraph>,
    term: String,
    known: BTreeSet<String>,
    defaults: &AcoParams,
    overrides: Option<ParamOverrides>,
) -> Result<QueryResponse, ApiError> {
    if known.contains(&term) {
        return Err(ApiError::bad_request(
            "query_known",
            format!("{term:?} is already known"),
        ));
    }
    require_term(&served.graph, &term)?;
    let overrides = overrides.unwrap_or_default();
    let mut params = overrides.apply(defaults);
    if overrides.seed.is_none() {
        params.seed = rand::random();
    }
    let seed = params.seed;
    let version = served.version;
    let known_list: Vec<String> = known.iter().cloned().collect();

    let outcome = tokio::task::spawn_blocking(move || {
        let outcome = aco::search(&served.graph, &term, &known, &params)?;
        let edges = outcome
            .path
            .edges()
            .map(|(from, to)| {
                let stats = served.graph.edge(from, to).expect("path edges exist");
                EdgeView {
                    from: from.to_string(),
                    to: to.to_string(),
                    frequency: stats.frequency,
                    association: stats.is_association,
                    tau: outcome.pheromone.tau(from, to).unwrap_or(params.tau0),
                }
            })
            .collect::<Vec<_>>();
        Ok::<_, aco::AcoError>((outcome.path, edges))
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))??;

    Ok(QueryResponse {
        path: outcome.0,
        version,
        seed,
        known: known_list,
        edges: outcome.1,
        session: None,
        depth: None,
    })
}

fn record(
    state: &AppState,
    session: &mut Session,
    reply: &mut QueryResponse,
) -> Result<(), ApiError> {
    session.graph_version = reply.version;
    session.history.push(HistoryEntry {
        query: reply.path.query.clone(),
        graph_version: reply.version,
        seed: reply.seed,
        path: reply.path.clone(),
    });
    reply.session = Some(session.id.clone());
    reply.depth = Some(session.history.len());
    state.sessions.persist(session).map_err(|e| {
        ApiError::new(
            StatusCode::INTERNAL_SERVER_ERROR,
            "persistence",
            e.to_string(),
        )
    })
}

async fn query(
    State(state): State<Arc<AppState>>,
    body: Bytes,
) -> Result<Json<QueryResponse>, ApiError> {
    let req: QueryRequest = parse_json(&body, false)?;
    let term = parse_term(&req.term)?;
    let mut known = parse_terms(&req.known)?;
    let served = state.require_graph()?;

    let session = match &req.session {
        Some(id) => Some(
            state
                .sessions
                .get(id)
                .ok_or_else(|| ApiError::session_not_found(id))?,
        ),
        None => None,
    };
    if let Some(session) = &session {
        known.extend(
            session
                .lock()
                .expect("session poisoned")
                .known_terms
                .iter()
                .cloned(),
        );
    }

    let mut reply = run_query(served, term, known, &state.defaults, req.params).await?;
    if let Some(session) = session {
        let mut session = session.lock().expect("session poisoned");
        record(&state, &mut session, &mut reply)?;
    }
    Ok(Json(reply))
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DrilldownRequest {
    pub term: String,
    #[serde(default)]
    pub params: Option<ParamOverrides>,
}

async fn drilldown(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<QueryResponse>, ApiError> {
    let req: DrilldownRequest = parse_json(&body, false)?;
    let term = parse_term(&req.term)?;
    let handle = state
        .sessions
        .get(&id)
        .ok_or_else(|| ApiError::session_not_found(&id))?;
    let known = {
        let session = handle.lock().expect("session poisoned");
        if session.known_terms.contains(&term) {
            return Err(ApiError::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "drilldown_known",
                format!("{term:?} is marked known in this session"),
            ));
        }
        let shown = session
            .last_path()
            .is_some_and(|p| p.recommended_terms.contains(&term));
        if !shown {
            return Err(ApiError::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "drilldown_target",
                format!("{term:?} is not a recommended term of the last path shown"),
            ));
        }
        session.known_terms.clone()
    };
    let served = state.require_graph()?;
    let mut reply = run_query(served, term, known, &state.defaults, req.params).await?;
    let mut session = handle.lock().expect("session poisoned");
    record(&state, &mut session, &mut reply)?;
    Ok(Json(reply))
}

// Sessions

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateSessionRequest {
    #[serde(default)]
    pub known: Vec<String>,
}

async fn create_session(
    State(state): State<Arc<AppState>>,
    body: Bytes,
) -> Result<(StatusCode, Json<Session>), ApiError> {
    let req: CreateSessionRequest = parse_json(&body, true)?;
    let known = parse_terms(&req.known)?;
    let version = state.current().map_or(0, |g| g.version);
    let session = Session::new(version, known);
    state.sessions.insert(session.clone()).map_err(|e| {
        ApiError::new(
            StatusCode::INTERNAL_SERVER_ERROR,
            "persistence",
            e.to_string(),
        )
    })?;
    Ok((StatusCode::CREATED, Json(session)))
}

async fn get_session(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<Session>, ApiError> {
    let handle = state
        .sessions
        .get(&id)
        .ok_or_else(|| ApiError::session_not_found(&id))?;
    let session = handle.lock().expect("session poisoned").clone();
    Ok(Json(session))
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkKnownRequest {
    pub term: String,
}

async fn mark_known(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<Session>, ApiError> {
    let req: MarkKnownRequest = parse_json(&body, false)?;
    let term = parse_term(&req.term)?;
    let handle = state
        .sessions
        .get(&id)
        .ok_or_else(|| ApiError::session_not_found(&id))?;
    let served = state.require_graph()?;
    require_term(&served.graph, &term)?;
    let mut session = handle.lock().expect("session poisoned");
    if session.known_terms.insert(term) {
        state.sessions.persist(&session).map_err(|e| {
            ApiError::new(
                StatusCode::INTERNAL_SERVER_ERROR,
                "persistence",
                e.to_string(),
            )
        })?;
    }
    Ok(Json(session.clone()))
}

// POST /transactions

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransactionResult {
    pub question: String,
    /// `matched`, `unmatched` or `unknown_target`.
    pub outcome: String,
    pub matched_len: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PromotedEdge {
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatchReport {
    pub version: u64,
    pub applied: usize,
    pub matched: usize,
    pub unmatched: usize,
    pub unknown_targets: usize,
    pub results: Vec<TransactionResult>,
    pub promoted: Vec<PromotedEdge>,
}

async fn apply_transactions(
    State(state): State<Arc<AppState>>,
    body: Bytes,
) -> Result<Json<MatchReport>, ApiError> {
    let text = std::str::from_utf8(&body)
        .map_err(|e| ApiError::bad_request("malformed_log", e.to_string()))?;
    let txns =
        parse_qa_log(text).map_err(|e| ApiError::bad_request("malformed_log", e.to_string()))?;

    let _gate = state.writer.lock().await;
    let served = state.require_graph()?;
    if txns.is_empty() {
        return Ok(Json(MatchReport {
            version: served.version,
            applied: 0,
            matched: 0,
            unmatched: 0,
            unknown_targets: 0,
            results: Vec::new(),
            promoted: Vec::new(),
        }));
    }

    // Work on a copy; the served graph is only replaced once every record applied.
    let mut graph = served.graph.clone();
    let mut results = Vec::with_capacity(txns.len());
    let (mut matched, mut unmatched, mut unknown) = (0, 0, 0);
    for txn in &txns {
        let outcome = graph
            .apply_qa_transaction(txn)
            .map_err(|e| ApiError::bad_request("malformed_log", e.to_string()))?;
        let label = match outcome {
            QaMatch::Matched { .. } => {
                matched += 1;
                "matched"
            }
            QaMatch::Unmatched => {
                unmatched += 1;
                "unmatched"
            }
            QaMatch::UnknownTarget => {
                unknown += 1;
                "unknown_target"
            }
        };
        results.push(TransactionResult {
            question: txn.target().to_string(),
            outcome: label.to_string(),
            matched_len: outcome.matched_len(txn),
        });
    }
    let promoted = graph
        .promote_associations()
        .into_iter()
        .map(|(from, to)| PromotedEdge { from, to })
        .collect();
    let version = state.publish(graph);
    Ok(Json(MatchReport {
        version,
        applied: txns.len(),
        matched,
        unmatched,
        unknown_targets: unknown,
        results,
        promoted,
    }))
}
