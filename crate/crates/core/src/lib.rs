//! Citation-graph recommendation engine.
//!
//! Given a set of seed papers, the rankers score every other paper of a
//! citation graph; walks and Katz counts can be biased towards newer or
//! older work with a single direction parameter. On top of the scores the
//! crate provides venue and expert aggregation, relevance-feedback sessions,
//! corpus ingestion and an evaluation harness for hidden-citation recovery.

pub mod error;
pub mod eval;
pub mod graph;
pub mod ingest;
pub mod recommend;
pub mod rankers;

pub use error::{Error, Result};
