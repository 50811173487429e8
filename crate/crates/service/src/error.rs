use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use elrepair_core::repair::Precondition;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

/// Everything a request can fail with. Each variant maps to one status.
#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("{message}")]
    BadRequest { code: &'static str, message: String, detail: Value },

    #[error("no session {0}")]
    NotFound(String),

    #[error("{message}")]
    Conflict { code: &'static str, message: String },

    #[error("{0}")]
    Precondition(Precondition),

    #[error("storage: {0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Internal(String),
}

#[derive(Serialize)]
struct Body {
    code: String,
    message: String,
    detail: Value,
}

impl ServiceError {
    pub fn conflict(code: &'static str, message: impl Into<String>) -> Self {
        ServiceError::Conflict { code, message: message.into() }
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        ServiceError::BadRequest { code: "bad_request", message: message.into(), detail: Value::Null }
    }

    pub fn status(&self) -> StatusCode {
        match self {
            ServiceError::BadRequest { .. } => StatusCode::BAD_REQUEST,
            ServiceError::NotFound(_) => StatusCode::NOT_FOUND,
            ServiceError::Conflict { .. } => StatusCode::CONFLICT,
            ServiceError::Precondition(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::Io(_) | ServiceError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::BadRequest { code, .. } | ServiceError::Conflict { code, .. } => code,
            ServiceError::NotFound(_) => "not_found",
            ServiceError::Precondition(_) => "precondition",
            ServiceError::Io(_) => "storage",
            ServiceError::Internal(_) => "internal",
        }
    }

    fn detail(&self) -> Value {
        match self {
            ServiceError::BadRequest { detail, .. } => detail.clone(),
            ServiceError::NotFound(id) => json!({ "id": id }),
            ServiceError::Precondition(p) => serde_json::to_value(p).unwrap_or(Value::Null),
            _ => Value::Null,
        }
    }
}

impl From<elrepair_core::Error> for ServiceError {
    fn from(e: elrepair_core::Error) -> Self {
        use elrepair_core::Error as E;
        match e {
            E::Syntax { line, column, ref message } => ServiceError::BadRequest {
                code: "parse_error",
                message: e.to_string(),
                detail: json!({ "line": line, "column": column, "reason": message }),
            },
            E::Shape(_) | E::Strategy(_) | E::Invalid(_) => {
                ServiceError::BadRequest { code: "bad_request", message: e.to_string(), detail: Value::Null }
            }
            E::Precondition(p) => ServiceError::Precondition(p),
            E::Oracle(_) | E::ContractViolation(_) => ServiceError::Internal(e.to_string()),
        }
    }
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let body = Body { code: self.code().to_string(), message: self.to_string(), detail: self.detail() };
        (self.status(), Json(body)).into_response()
    }
}

pub type Result<T, E = ServiceError> = std::result::Result<T, E>;
