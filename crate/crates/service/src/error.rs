use axum::extract::rejection::JsonRejection;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;
use serde_json::{json, Value};
use wordgraph::{Error, ErrorKind};

/// Structured error body: `{code, message, details}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    pub details: Value,
}

#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: ErrorBody,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &str, message: impl Into<String>, details: Value) -> Self {
        ApiError { status, body: ErrorBody { code: code.into(), message: message.into(), details } }
    }

    pub fn not_found(what: &str, id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", format!("no {what} `{id}`"), json!({ "id": id }))
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "invalid_input", message, Value::Null)
    }

    /// Maps an engine error; `nearest` supplies lexicon suggestions for
    /// unresolvable words.
    pub fn from_engine(e: Error, nearest: impl Fn(&[String]) -> Value) -> Self {
        let (status, details) = match &e {
            Error::UnresolvedWords(ws) => (StatusCode::UNPROCESSABLE_ENTITY, json!({ "unresolved": ws, "nearest": nearest(ws) })),
            Error::UnknownWord(w) => {
                let ws = vec![w.clone()];
                (StatusCode::UNPROCESSABLE_ENTITY, json!({ "unresolved": ws, "nearest": nearest(&ws) }))
            }
            Error::TooFewNouns { needed, got } => (StatusCode::UNPROCESSABLE_ENTITY, json!({ "needed": needed, "got": got })),
            Error::Session(_) => (StatusCode::CONFLICT, Value::Null),
            _ => match e.kind() {
                ErrorKind::Input => (StatusCode::BAD_REQUEST, Value::Null),
                ErrorKind::Constraint => (StatusCode::UNPROCESSABLE_ENTITY, Value::Null),
                ErrorKind::Database => (StatusCode::INTERNAL_SERVER_ERROR, Value::Null),
            },
        };
        Self::new(status, e.code(), e.to_string(), details)
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "invalid_json", r.body_text(), Value::Null)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}
