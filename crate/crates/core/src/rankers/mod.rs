//! Relevance scoring over a masked citation graph.
//!
//! Every ranker is a pure function of `(view, seeds, params)` and returns a
//! dense [`ScoreVector`] indexed by [`PaperId`]. [`top_k`] turns a score
//! vector into a deterministic [`RankedList`].

mod katz;
mod local;
mod topk;
mod walk;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GraphView, PaperId};

pub use katz::{dakatz, katz};
pub use local::{ccidf, cocitation, cocoupling};
pub use topk::{top_k, top_k_by, RankedList, Scored};
pub use walk::{darwr, pagerank, paperrank};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RankerParams {
    /// Probability that a walk continues to a neighbour instead of restarting.
    pub damping: f64,
    /// Share of the continuing mass sent towards citing (newer) papers.
    pub lambda: f64,
    /// Katz decay per step.
    pub beta: f64,
    /// Longest walk counted by the Katz family.
    pub max_len: usize,
    /// Convergence threshold on the L2 norm of the per-iteration change.
    pub epsilon: f64,
    pub max_iters: usize,
}

impl Default for RankerParams {
    fn default() -> Self {
        Self {
            damping: 0.75,
            lambda: 0.5,
            beta: 0.0005,
            max_len: 10,
            epsilon: 1e-8,
            max_iters: 200,
        }
    }
}

impl RankerParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.to_owned()));
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return bad("damping must be in (0, 1]");
        }
        if !(0.0..=1.0).contains(&self.lambda) {
            return bad("lambda must be in [0, 1]");
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return bad("beta must be positive");
        }
        if self.max_len == 0 {
            return bad("max_len must be at least 1");
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return bad("epsilon must be positive");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1");
        }
        Ok(())
    }

    pub fn with_damping(mut self, d: f64) -> Self {
        self.damping = d;
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }
}

/// Relevance scores for every paper of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    pub scores: Vec<f64>,
    /// Mass held by the artificial source node (random-walk rankers only).
    pub source_score: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Largest `|source + Σ scores − 1|` seen over all iterations
    /// (random-walk rankers only).
    pub max_mass_drift: f64,
}

impl ScoreVector {
    pub(crate) fn exact(scores: Vec<f64>, rounds: usize) -> Self {
        Self {
            scores,
            source_score: 0.0,
            iterations: rounds,
            converged: true,
            max_mass_drift: 0.0,
        }
    }

    pub fn score(&self, v: PaperId) -> f64 {
        self.scores[v.index()]
    }

    pub fn total_mass(&self) -> f64 {
        self.source_score + self.scores.iter().sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    PaperRank,
    DaRwr,
    Katz,
    DaKatz,
    Cocitation,
    Cocoupling,
    Ccidf,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::DaRwr,
        Algorithm::PaperRank,
        Algorithm::DaKatz,
        Algorithm::Katz,
        Algorithm::Cocitation,
        Algorithm::Cocoupling,
        Algorithm::Ccidf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::PaperRank => "paperrank",
            Algorithm::DaRwr => "darwr",
            Algorithm::Katz => "katz",
            Algorithm::DaKatz => "dakatz",
            Algorithm::Cocitation => "cocitation",
            Algorithm::Cocoupling => "cocoupling",
            Algorithm::Ccidf => "ccidf",
        }
    }

    pub fn score(self, view: &GraphView<'_>, seeds: &[PaperId], p: &RankerParams) -> Result<ScoreVector> {
        p.validate()?;
        match self {
            Algorithm::PaperRank => paperrank(view, seeds, p),
            Algorithm::DaRwr => darwr(view, seeds, p),
            Algorithm::Katz => Ok(katz(view, seeds, p.beta, p.max_len)),
            Algorithm::DaKatz => Ok(dakatz(view, seeds, p.beta, p.max_len, p.lambda)),
            Algorithm::Cocitation => Ok(cocitation(view, seeds)),
            Algorithm::Cocoupling => Ok(cocoupling(view, seeds)),
            Algorithm::Ccidf => Ok(ccidf(view, seeds)),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown algorithm `{s}`")))
    }
}

/// Deduplicated seeds; errors when empty or when a seed is inactive.
pub(crate) fn checked_seeds(view: &GraphView<'_>, seeds: &[PaperId]) -> Result<Vec<PaperId>> {
    if seeds.is_empty() {
        return Err(Error::EmptySeeds);
    }
    let mut out = seeds.to_vec();
    out.sort_unstable();
    out.dedup();
    for &s in &out {
        view.require_active(s)?;
    }
    Ok(out)
}

/// Deduplicated active seeds; inactive ones are dropped.
pub(crate) fn active_seeds(view: &GraphView<'_>, seeds: &[PaperId]) -> Vec<PaperId> {
    let mut out: Vec<PaperId> = seeds.iter().copied().filter(|&s| view.is_active(s)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validation() {
        assert!(RankerParams::default().validate().is_ok());
        assert!(RankerParams::default().with_damping(0.0).validate().is_err());
        assert!(RankerParams::default().with_damping(1.0).validate().is_ok());
        assert!(RankerParams::default().with_lambda(1.5).validate().is_err());
        assert!(RankerParams::default().with_beta(0.0).validate().is_err());
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
            let json = serde_json::to_string(&a).unwrap();
            assert_eq!(json, format!("\"{}\"", a.name()));
        }
        assert!("pagerank".parse::<Algorithm>().is_err());
    }
}
