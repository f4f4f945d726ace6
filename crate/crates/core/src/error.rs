use thiserror::Error;

use crate::graph::PaperId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("paper {0} is out of range or inactive under the current mask")]
    InactivePaper(PaperId),

    #[error("seed set is empty")]
    EmptySeeds,

    #[error("seeds outside the active graph: {}", .0.join(", "))]
    SeedsOutsideMask(Vec<String>),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid year {year} for paper `{key}` (expected 0 or 1900..=2100)")]
    InvalidYear { key: String, year: i64 },

    #[error("duplicate paper key `{0}`")]
    DuplicateKey(String),

    #[error("self-loop on paper `{0}`")]
    SelfLoop(String),

    #[error("edge references unknown paper `{0}`")]
    UnknownKey(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("bibliography: {0}")]
    Bibliography(String),

    #[error("xml: {0}")]
    Xml(String),

    #[error("feedback ids both relevant and irrelevant: {0:?}")]
    FeedbackOverlap(Vec<PaperId>),

    #[error("feedback ids were never shown in this session: {0:?}")]
    FeedbackNotShown(Vec<PaperId>),

    #[error("only {eligible} eligible source papers, {required} trials requested")]
    TooFewSources { eligible: usize, required: usize },

    #[error("result sets were produced on different trials")]
    MismatchedTrials,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
