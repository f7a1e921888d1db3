use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde_json::{json, Map, Value};

use crate::aco::AcoError;

/// Error body `{"error": code, "detail": text}`, plus optional extra fields
/// such as `suggestions` or `frontier`.
#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub detail: String,
    pub extra: Map<String, Value>,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, detail: impl Into<String>) -> Self {
        ApiError {
            status,
            code,
            detail: detail.into(),
            extra: Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: Value) -> Self {
        self.extra.insert(key.to_string(), value);
        self
    }

    pub fn bad_request(code: &'static str, detail: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, code, detail)
    }

    pub fn no_graph() -> Self {
        Self::new(StatusCode::CONFLICT, "no_graph", "no graph has been loaded")
    }

    pub fn unknown_term(term: &str, suggestions: Vec<String>) -> Self {
        Self::new(
            StatusCode::NOT_FOUND,
            "unknown_term",
            format!("no term {term:?} in the graph"),
        )
        .with("suggestions", json!(suggestions))
    }

    pub fn session_not_found(id: &str) -> Self {
        Self::new(
            StatusCode::NOT_FOUND,
            "unknown_session",
            format!("no session {id:?}"),
        )
    }
}

impl From<AcoError> for ApiError {
    fn from(err: AcoError) -> Self {
        match err {
            AcoError::NoPath { ref frontier, .. } => {
                let frontier = json!(frontier);
                ApiError::new(StatusCode::CONFLICT, "no_path", err.to_string())
                    .with("frontier", frontier)
            }
            AcoError::UnknownTerm(ref term) => ApiError::unknown_term(term, Vec::new()),
            AcoError::QueryIsRoot => ApiError::bad_request("root_not_queryable", err.to_string()),
            AcoError::QueryKnown(_) => ApiError::bad_request("query_known", err.to_string()),
            AcoError::InvalidParameter(_) => {
                ApiError::bad_request("invalid_params", err.to_string())
            }
            AcoError::EmptyNeighborhood | AcoError::OracleTooLarge { .. } => ApiError::new(
                StatusCode::INTERNAL_SERVER_ERROR,
                "internal",
                err.to_string(),
            ),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut body = Map::new();
        body.insert("error".into(), json!(self.code));
        body.insert("detail".into(), json!(self.detail));
        body.extend(self.extra);
        (self.status, Json(Value::Object(body))).into_response()
    }
}
