use std::collections::HashMap;
use std::sync::Arc;

use advisor_core::graph::{CitationGraph, PaperId};
use advisor_core::ingest::parse_bibliography;
use advisor_core::rankers::{Algorithm, RankedList};
use advisor_core::recommend::{author_scores, top_indices, venue_scores, FeedbackSession, Query, DEFAULT_PAGE_SIZE};
use axum::body::Bytes;
use axum::extract::{Path, Query as UrlQuery, State};
use axum::Json;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::ApiError;
use crate::store::new_session_id;
use crate::AppState;

const SEARCH_LIMIT: usize = 20;

type ApiResult<T = Json<Value>> = Result<T, ApiError>;

fn paper_json(g: &CitationGraph, v: PaperId) -> Value {
    let m = g.meta(v);
    json!({
        "id": m.key,
        "title": m.title,
        "year": m.year,
        "venue": m.venue.map(|x| g.venue_name(x)),
    })
}

fn page_json(g: &CitationGraph, page: &RankedList) -> Vec<Value> {
    page.iter()
        .map(|s| {
            let mut p = paper_json(g, s.id);
            p["score"] = json!(s.score);
            p
        })
        .collect()
}

fn keys(g: &CitationGraph, ids: impl IntoIterator<Item = PaperId>) -> Vec<String> {
    ids.into_iter().map(|v| g.meta(v).key.clone()).collect()
}

fn parse_body<T: for<'de> Deserialize<'de>>(body: &Bytes) -> ApiResult<T> {
    if body.iter().all(u8::is_ascii_whitespace) {
        return Err(ApiError::BadRequest("empty request body".into()));
    }
    serde_json::from_slice(body).map_err(|e| ApiError::BadRequest(format!("malformed request: {e}")))
}

/// Runs `work` on a private copy of the session, off the async runtime and
/// within the time budget. The copy replaces the stored session only when
/// the work succeeds in time, so a timed-out request leaves no trace.
async fn with_session<T: Send + 'static>(
    state: &AppState,
    id: &str,
    work: impl FnOnce(&CitationGraph, &mut FeedbackSession) -> Result<T, ApiError> + Send + 'static,
) -> ApiResult<T> {
    let shared = state.sessions.get(id).ok_or_else(|| ApiError::NotFound(format!("unknown session `{id}`")))?;
    let mut guard = shared.lock().await;
    let mut copy = guard.clone();
    let g = Arc::clone(&state.graph);
    let job = tokio::task::spawn_blocking(move || work(&g, &mut copy).map(|out| (copy, out)));
    match tokio::time::timeout(state.config.time_budget, job).await {
        Err(_) => Err(ApiError::Busy(state.config.time_budget)),
        Ok(Err(join)) => Err(ApiError::Internal(format!("ranking task failed: {join}"))),
        Ok(Ok(result)) => {
            let (copy, out) = result?;
            *guard = copy;
            Ok(out)
        }
    }
}

pub async fn health(State(state): State<AppState>) -> Json<Value> {
    let g = &state.graph;
    Json(json!({
        "status": "ok",
        "papers": g.paper_count(),
        "edges": g.edge_count(),
        "venues": g.venue_count(),
        "authors": g.author_count(),
        "sessions": state.sessions.len(),
    }))
}

pub async fn bibliography(State(state): State<AppState>, body: String) -> ApiResult {
    let g = &state.graph;
    let res = parse_bibliography(&body, g, &state.index).map_err(|e| ApiError::BadRequest(e.to_string()))?;
    if res.seeds.is_empty() {
        return Err(ApiError::Unprocessable {
            message: "no bibliography entry matched a known paper".into(),
            unmatched: res.unmatched,
        });
    }
    let id = new_session_id();
    let query = Query::new(res.seeds.clone(), DEFAULT_PAGE_SIZE, Algorithm::DaRwr);
    let session = FeedbackSession::new(g, id.clone(), query).map_err(|e| ApiError::from_core(e, g))?;
    state.sessions.insert(session);
    Ok(Json(json!({
        "session_id": id,
        "seeds": res.seeds.iter().map(|&v| paper_json(g, v)).collect::<Vec<_>>(),
        "unmatched": res.unmatched,
    })))
}

pub async fn search(State(state): State<AppState>, UrlQuery(params): UrlQuery<HashMap<String, String>>) -> ApiResult {
    let q = params.get("q").map(|s| s.trim()).unwrap_or_default();
    if q.is_empty() {
        return Err(ApiError::BadRequest("query parameter `q` is required".into()));
    }
    let g = &state.graph;
    let hits: Vec<Value> = state
        .index
        .search(q, SEARCH_LIMIT)
        .into_iter()
        .map(|h| {
            let mut p = paper_json(g, PaperId(h.record));
            p["overlap"] = json!(h.overlap);
            p["distance"] = json!(h.distance);
            p
        })
        .collect();
    Ok(Json(json!({ "query": q, "results": hits })))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    #[default]
    Papers,
    Venues,
    Experts,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecommendRequest {
    session_id: String,
    algorithm: Option<Algorithm>,
    k: Option<usize>,
    lambda: Option<f64>,
    d: Option<f64>,
    beta: Option<f64>,
    #[serde(rename = "L")]
    max_len: Option<usize>,
    #[serde(default)]
    target: Target,
}

pub async fn recommend(State(state): State<AppState>, body: Bytes) -> ApiResult {
    let req: RecommendRequest = parse_body(&body)?;
    if req.k == Some(0) {
        return Err(ApiError::BadRequest("k must be at least 1".into()));
    }
    let id = req.session_id.clone();
    let (session_id, items, algorithm, params, k) = with_session(&state, &id, move |g, s| {
        let mut params = s.query.params;
        params.lambda = req.lambda.unwrap_or(params.lambda);
        params.damping = req.d.unwrap_or(params.damping);
        params.beta = req.beta.unwrap_or(params.beta);
        params.max_len = req.max_len.unwrap_or(params.max_len);
        params.validate().map_err(|e| ApiError::from_core(e, g))?;
        s.query.params = params;
        s.query.algorithm = req.algorithm.unwrap_or(s.query.algorithm);
        let k = req.k.unwrap_or(s.page_size);
        let items = match req.target {
            Target::Papers => {
                s.page_size = k;
                page_json(g, &s.next_page(g).map_err(|e| ApiError::from_core(e, g))?)
            }
            Target::Venues | Target::Experts => {
                let (view, scores) = s.score(g).map_err(|e| ApiError::from_core(e, g))?;
                let (sums, name): (Vec<f64>, &dyn Fn(u32) -> String) = if req.target == Target::Venues {
                    (venue_scores(&view, &scores), &|i| g.venue_name(advisor_core::graph::VenueId(i)).to_owned())
                } else {
                    (author_scores(&view, &scores), &|i| g.author_name(advisor_core::graph::AuthorId(i)).to_owned())
                };
                top_indices(&sums, k).iter().map(|x| json!({ "id": name(x.id), "score": x.score })).collect()
            }
        };
        Ok((s.id.clone(), items, s.query.algorithm, params, k))
    })
    .await?;
    Ok(Json(json!({
        "session_id": session_id,
        "target": req.target,
        "algorithm": algorithm,
        "k": k,
        "lambda": params.lambda,
        "d": params.damping,
        "beta": params.beta,
        "L": params.max_len,
        "items": items,
    })))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeedbackRequest {
    session_id: String,
    #[serde(default)]
    relevant: Vec<String>,
    #[serde(default)]
    irrelevant: Vec<String>,
}

pub async fn feedback(State(state): State<AppState>, body: Bytes) -> ApiResult {
    let req: FeedbackRequest = parse_body(&body)?;
    if req.relevant.is_empty() && req.irrelevant.is_empty() {
        return Err(ApiError::BadRequest("no papers marked relevant or irrelevant".into()));
    }
    let g = &state.graph;
    let resolve = |ks: &[String]| -> ApiResult<Vec<PaperId>> {
        ks.iter()
            .map(|k| g.paper_by_key(k).ok_or_else(|| ApiError::BadRequest(format!("unknown paper `{k}`"))))
            .collect()
    };
    let (pos, neg) = (resolve(&req.relevant)?, resolve(&req.irrelevant)?);
    let (relevant, irrelevant, items) = with_session(&state, &req.session_id, move |g, s| {
        s.apply_feedback(&pos, &neg).map_err(|e| ApiError::from_core(e, g))?;
        let page = s.next_page(g).map_err(|e| ApiError::from_core(e, g))?;
        Ok((s.relevant().len(), s.irrelevant().len(), page_json(g, &page)))
    })
    .await?;
    Ok(Json(json!({
        "session_id": req.session_id,
        "relevant_count": relevant,
        "irrelevant_count": irrelevant,
        "items": items,
    })))
}

pub async fn session(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let shared = state.sessions.get(&id).ok_or_else(|| ApiError::NotFound(format!("unknown session `{id}`")))?;
    let s = shared.lock().await;
    let g = &state.graph;
    Ok(Json(json!({
        "session_id": s.id,
        "algorithm": s.query.algorithm,
        "params": s.query.params,
        "page_size": s.page_size,
        "seeds": keys(g, s.seeds()),
        "relevant": keys(g, s.relevant().iter().copied()),
        "irrelevant": keys(g, s.irrelevant().iter().copied()),
        "relevant_count": s.relevant().len(),
        "irrelevant_count": s.irrelevant().len(),
        "shown_count": s.shown().len(),
        "pages_served": s.pages_served(),
    })))
}
