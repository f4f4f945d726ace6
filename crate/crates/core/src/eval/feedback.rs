//! Simulated users paging through recommendations towards a distant target.
//!
//! The simulated user knows the target and labels every shown paper as
//! relevant or irrelevant according to a [`Labeling`]. Four behaviours are compared by the number of pages needed to see the
//! target: ignoring the labels, submitting only the relevant ones, only the
//! irrelevant ones, or both.

use std::collections::HashSet;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{active_refs, mean, SourceFilter};
use crate::error::Result;
use crate::graph::{prune_after_year, undirected_distances, CitationGraph, GraphMask, PaperId};
use crate::rankers::{darwr, Algorithm, RankerParams};
use crate::recommend::{FeedbackSession, Query};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeedbackMode {
    None,
    Positive,
    Negative,
    Both,
}

impl FeedbackMode {
    pub const ALL: [FeedbackMode; 4] = [FeedbackMode::None, FeedbackMode::Positive, FeedbackMode::Negative, FeedbackMode::Both];

    fn sends_positive(self) -> bool {
        matches!(self, FeedbackMode::Positive | FeedbackMode::Both)
    }

    fn sends_negative(self) -> bool {
        matches!(self, FeedbackMode::Negative | FeedbackMode::Both)
    }
}

impl fmt::Display for FeedbackMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FeedbackMode::None => "none",
            FeedbackMode::Positive => "positive",
            FeedbackMode::Negative => "negative",
            FeedbackMode::Both => "both",
        };
        f.write_str(s)
    }
}

/// How the simulated user decides relevance, using undirected distances in
/// the trial's graph before any feedback.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Labeling {
    /// Relevant iff the paper lies on a shortest path from the seeds to the
    /// target. Masking irrelevant papers then never lengthens that path.
    ShortestPath,
    /// Relevant iff the paper is within this many hops of the target.
    Radius(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FeedbackSpec {
    pub trials: usize,
    pub filter: SourceFilter,
    pub seed: u64,
    /// Undirected distance between the seed set and the target.
    pub target_distance: u32,
    pub labeling: Labeling,
    pub page_size: usize,
    /// Pages counted for a user who never reaches the target.
    pub max_pages: usize,
    pub algorithm: Algorithm,
    pub params: RankerParams,
}

impl Default for FeedbackSpec {
    fn default() -> Self {
        Self {
            trials: 500,
            filter: SourceFilter::default(),
            seed: 0,
            target_distance: 5,
            labeling: Labeling::ShortestPath,
            page_size: 10,
            max_pages: 100,
            algorithm: Algorithm::DaRwr,
            params: RankerParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackTrial {
    pub source: PaperId,
    pub target: PaperId,
    /// Pages needed per mode, indexed like [`FeedbackMode::ALL`].
    pub pages: [usize; 4],
    /// Whether the target was reached before `max_pages`, per mode.
    pub found: [bool; 4],
}

impl FeedbackTrial {
    pub fn pages(&self, mode: FeedbackMode) -> usize {
        self.pages[mode_index(mode)]
    }
}

fn mode_index(mode: FeedbackMode) -> usize {
    FeedbackMode::ALL.iter().position(|&m| m == mode).expect("listed mode")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackResult {
    pub trials: Vec<FeedbackTrial>,
    /// Sampled sources without any paper at the target distance.
    pub skipped: usize,
}

impl FeedbackResult {
    pub fn mean_pages(&self, mode: FeedbackMode) -> f64 {
        let p: Vec<f64> = self.trials.iter().map(|t| t.pages(mode) as f64).collect();
        mean(&p)
    }

    /// Relative reduction of mean pages against no feedback, in [0, 1].
    pub fn reduction(&self, mode: FeedbackMode) -> f64 {
        let none = self.mean_pages(FeedbackMode::None);
        if none == 0.0 {
            return 0.0;
        }
        1.0 - self.mean_pages(mode) / none
    }
}

pub fn feedback_simulation(g: &CitationGraph, spec: &FeedbackSpec) -> Result<FeedbackResult> {
    spec.params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let sources = spec.filter.sample(g, spec.trials, &mut rng)?;
    let trials = sources
        .par_iter()
        .map(|&s| run_trial(g, spec, s))
        .collect::<Result<Vec<_>>>()?;
    let skipped = trials.iter().filter(|t| t.is_none()).count();
    Ok(FeedbackResult { trials: trials.into_iter().flatten().collect(), skipped })
}

fn run_trial(g: &CitationGraph, spec: &FeedbackSpec, s: PaperId) -> Result<Option<FeedbackTrial>> {
    let mask = prune_after_year(g, g.year(s), &HashSet::from([s]));
    let view = g.view(mask.clone());
    let seeds = active_refs(&view, s);
    if seeds.is_empty() {
        return Ok(None);
    }
    let from_seeds = undirected_distances(&view, &seeds);
    let relevance = darwr(&view, &seeds, &RankerParams::default())?;
    let target = view
        .active_papers()
        .filter(|v| from_seeds[v.index()] == spec.target_distance)
        .max_by(|a, b| relevance.score(*a).total_cmp(&relevance.score(*b)).then(b.cmp(a)));
    let Some(target) = target else {
        return Ok(None);
    };
    let from_target = undirected_distances(&view, &[target]);
    let relevant = |v: PaperId| match spec.labeling {
        Labeling::ShortestPath => from_seeds[v.index()].saturating_add(from_target[v.index()]) == spec.target_distance,
        Labeling::Radius(r) => from_target[v.index()] <= r,
    };

    let mut pages = [0; 4];
    let mut found = [false; 4];
    for (i, mode) in FeedbackMode::ALL.into_iter().enumerate() {
        (pages[i], found[i]) = pages_to_target(g, spec, &seeds, &mask, target, mode, relevant)?;
    }
    Ok(Some(FeedbackTrial { source: s, target, pages, found }))
}

fn pages_to_target(
    g: &CitationGraph,
    spec: &FeedbackSpec,
    seeds: &[PaperId],
    mask: &GraphMask,
    target: PaperId,
    mode: FeedbackMode,
    relevant: impl Fn(PaperId) -> bool,
) -> Result<(usize, bool)> {
    let query = Query::new(seeds.to_vec(), spec.page_size, spec.algorithm).with_params(spec.params);
    let mut session = FeedbackSession::with_mask(g, "sim", query, mask.clone())?.with_page_size(spec.page_size);
    for page_no in 1..=spec.max_pages {
        let page = session.next_page(g)?;
        if page.iter().any(|p| p.id == target) {
            return Ok((page_no, true));
        }
        if page.is_empty() {
            break;
        }
        let (pos, neg): (Vec<PaperId>, Vec<PaperId>) = page.iter().map(|p| p.id).partition(|&v| relevant(v));
        let pos = if mode.sends_positive() { pos } else { Vec::new() };
        let neg = if mode.sends_negative() { neg } else { Vec::new() };
        session.apply_feedback(&pos, &neg)?;
    }
    Ok((spec.max_pages, false))
}
