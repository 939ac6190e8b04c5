use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use barn_core::BarnError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ErrorCode {
    BadInput,
    OutOfDomain,
    NotFound,
    SolverFailure,
}

impl ErrorCode {
    fn status(self) -> StatusCode {
        match self {
            ErrorCode::BadInput | ErrorCode::OutOfDomain => StatusCode::BAD_REQUEST,
            ErrorCode::NotFound => StatusCode::NOT_FOUND,
            ErrorCode::SolverFailure => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

/// Error body returned by every endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiError {
    pub code: ErrorCode,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub field: Option<String>,
}

impl ApiError {
    pub fn bad_input(field: &str, message: impl Into<String>) -> Self {
        Self {
            code: ErrorCode::BadInput,
            message: message.into(),
            field: Some(field.to_owned()),
        }
    }

    pub fn out_of_domain(field: &str, message: impl Into<String>) -> Self {
        Self {
            code: ErrorCode::OutOfDomain,
            message: message.into(),
            field: Some(field.to_owned()),
        }
    }

    pub fn not_found(path: &str) -> Self {
        Self {
            code: ErrorCode::NotFound,
            message: format!("no route for {path}"),
            field: None,
        }
    }

    /// Maps a library error onto the API vocabulary. Library parameter
    /// names are translated to the query/body names the client sent.
    pub fn from_barn(err: BarnError) -> Self {
        let field = err.parameter().map(api_name).map(str::to_owned);
        let message = err.describe_in_degrees();
        let code = match err {
            BarnError::InvalidParameter { .. } | BarnError::Precondition(_) => ErrorCode::BadInput,
            BarnError::OutOfDomain { .. } => ErrorCode::OutOfDomain,
            BarnError::SolverFailure(_) => ErrorCode::SolverFailure,
            BarnError::AtIndex { source, .. } => return Self::from_barn(*source),
        };
        Self {
            code,
            message,
            field,
        }
    }
}

fn api_name(param: &'static str) -> &'static str {
    match param {
        "alpha" => "alpha_deg",
        "resolution" => "res",
        other => other,
    }
}

impl From<BarnError> for ApiError {
    fn from(err: BarnError) -> Self {
        Self::from_barn(err)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = barn_core::export::to_json(&self).unwrap_or_else(|_| self.message.clone());
        (
            self.code.status(),
            [(header::CONTENT_TYPE, "application/json")],
            body,
        )
            .into_response()
    }
}
