use axum::extract::multipart::MultipartError;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use ioha_core::dataset::LoadError;
use serde_json::json;

/// Error responses carry `{"error": kind, "detail": message}`.
#[derive(Debug)]
pub enum ApiError {
    NotFound(String),
    /// Request parameters that cannot be satisfied; 422.
    Invalid(String),
    /// Unusable upload; 400.
    BadUpload {
        kind: &'static str,
        detail: String,
    },
    TooLarge(String),
    Internal(String),
}

impl ApiError {
    fn parts(&self) -> (StatusCode, &str, &str) {
        match self {
            ApiError::NotFound(d) => (StatusCode::NOT_FOUND, "NotFound", d),
            ApiError::Invalid(d) => (StatusCode::UNPROCESSABLE_ENTITY, "InvalidParameters", d),
            ApiError::BadUpload { kind, detail } => (StatusCode::BAD_REQUEST, kind, detail),
            ApiError::TooLarge(d) => (StatusCode::PAYLOAD_TOO_LARGE, "PayloadTooLarge", d),
            ApiError::Internal(d) => (StatusCode::INTERNAL_SERVER_ERROR, "Internal", d),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, kind, detail) = self.parts();
        (status, Json(json!({"error": kind, "detail": detail}))).into_response()
    }
}

impl From<ioha_core::Error> for ApiError {
    fn from(e: ioha_core::Error) -> Self {
        ApiError::Invalid(e.to_string())
    }
}

impl From<LoadError> for ApiError {
    fn from(e: LoadError) -> Self {
        let kind = match &e {
            LoadError::MissingRawFile(_) => "MissingRawFile",
            LoadError::EmptyArchive => "EmptyArchive",
            LoadError::UnsupportedArchive(_) => "UnsupportedArchive",
            LoadError::Parse { .. } => "ParseError",
            LoadError::MixedMonotonicity { .. } => "MixedMonotonicity",
            LoadError::Io(_) => "Io",
        };
        ApiError::BadUpload {
            kind,
            detail: e.to_string(),
        }
    }
}

impl From<MultipartError> for ApiError {
    fn from(e: MultipartError) -> Self {
        if e.status() == StatusCode::PAYLOAD_TOO_LARGE {
            ApiError::TooLarge(e.body_text())
        } else {
            ApiError::BadUpload {
                kind: "MalformedUpload",
                detail: e.body_text(),
            }
        }
    }
}
