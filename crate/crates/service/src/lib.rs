//! HTTP JSON facade over the recommendation engine.
//!
//! The graph and title index are loaded once and shared read-only by every
//! request. The only mutable state is the [`SessionStore`]; each session is
//! behind its own lock, so requests for different sessions never interleave.
//! Wire ids are the graph's external paper keys.

mod api;
mod error;
mod store;

use std::net::SocketAddr;
use std::sync::Arc;
use std::time::Duration;

use advisor_core::graph::CitationGraph;
use advisor_core::ingest::{MatchConfig, TitleIndex};
use axum::http::{header, HeaderValue, Method};
use axum::routing::{get, post};
use axum::Router;
use tower_http::cors::{AllowOrigin, CorsLayer};

pub use error::ApiError;
pub use store::{new_session_id, SessionStore};

#[derive(Debug, Clone, PartialEq)]
pub struct ServiceConfig {
    /// Idle time after which a session is dropped.
    pub session_ttl: Duration,
    /// Longest a single ranking may run before the request answers 503.
    pub time_budget: Duration,
    /// Allowed browser origin; `None` allows any.
    pub cors_origin: Option<String>,
    pub match_config: MatchConfig,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            session_ttl: Duration::from_secs(3600),
            time_budget: Duration::from_secs(30),
            cors_origin: None,
            match_config: MatchConfig::default(),
        }
    }
}

#[derive(Clone)]
pub struct AppState {
    pub graph: Arc<CitationGraph>,
    pub index: Arc<TitleIndex>,
    pub sessions: Arc<SessionStore>,
    pub config: Arc<ServiceConfig>,
}

impl AppState {
    pub fn new(graph: CitationGraph, config: ServiceConfig) -> Self {
        let index = TitleIndex::from_graph(&graph, config.match_config);
        Self {
            graph: Arc::new(graph),
            index: Arc::new(index),
            sessions: Arc::new(SessionStore::new(config.session_ttl)),
            config: Arc::new(config),
        }
    }
}

pub fn router(state: AppState) -> Router {
    let origin = match &state.config.cors_origin {
        Some(o) => HeaderValue::from_str(o).map(AllowOrigin::exact).unwrap_or_else(|_| AllowOrigin::any()),
        None => AllowOrigin::any(),
    };
    let cors = CorsLayer::new()
        .allow_origin(origin)
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE]);
    Router::new()
        .route("/api/health", get(api::health))
        .route("/api/bibliography", post(api::bibliography))
        .route("/api/search", get(api::search))
        .route("/api/recommend", post(api::recommend))
        .route("/api/feedback", post(api::feedback))
        .route("/api/session/{id}", get(api::session))
        .layer(cors)
        .with_state(state)
}

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(state: AppState, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(%addr, papers = state.graph.paper_count(), "listening");
    axum::serve(listener, router(state)).await
}
