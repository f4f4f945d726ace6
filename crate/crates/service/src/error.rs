use std::time::Duration;

use advisor_core::graph::{CitationGraph, PaperId};
use advisor_core::Error;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde_json::json;

#[derive(Debug)]
pub enum ApiError {
    BadRequest(String),
    NotFound(String),
    Conflict(String),
    /// Nothing in the request could be resolved.
    Unprocessable { message: String, unmatched: Vec<String> },
    /// The ranking did not finish within the time budget.
    Busy(Duration),
    Internal(String),
}

impl ApiError {
    /// Maps an engine error, naming papers by their external keys.
    pub fn from_core(e: Error, g: &CitationGraph) -> Self {
        let keys = |ids: &[PaperId]| ids.iter().map(|&v| g.meta(v).key.clone()).collect::<Vec<_>>().join(", ");
        match e {
            Error::FeedbackOverlap(ids) => ApiError::Conflict(format!("papers both relevant and irrelevant: {}", keys(&ids))),
            Error::FeedbackNotShown(ids) => ApiError::BadRequest(format!("papers never shown in this session: {}", keys(&ids))),
            Error::InactivePaper(v) if v.index() < g.paper_count() => {
                ApiError::BadRequest(format!("paper {} is not in the active graph", g.meta(v).key))
            }
            e @ (Error::InvalidParameter(_)
            | Error::EmptySeeds
            | Error::SeedsOutsideMask(_)
            | Error::InactivePaper(_)
            | Error::Bibliography(_)
            | Error::Parse { .. }) => ApiError::BadRequest(e.to_string()),
            e => ApiError::Internal(e.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, body) = match self {
            ApiError::BadRequest(m) => (StatusCode::BAD_REQUEST, json!({ "error": m })),
            ApiError::NotFound(m) => (StatusCode::NOT_FOUND, json!({ "error": m })),
            ApiError::Conflict(m) => (StatusCode::CONFLICT, json!({ "error": m })),
            ApiError::Unprocessable { message, unmatched } => {
                (StatusCode::UNPROCESSABLE_ENTITY, json!({ "error": message, "unmatched": unmatched }))
            }
            ApiError::Busy(budget) => {
                let retry = budget.as_secs().max(1);
                let body = json!({ "error": "ranking exceeded the time budget", "retry_after_secs": retry });
                return (StatusCode::SERVICE_UNAVAILABLE, [(header::RETRY_AFTER, retry.to_string())], Json(body))
                    .into_response();
            }
            ApiError::Internal(m) => (StatusCode::INTERNAL_SERVER_ERROR, json!({ "error": m })),
        };
        (status, Json(body)).into_response()
    }
}
