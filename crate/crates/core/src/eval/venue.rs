//! Venue and reviewer recommendation for held-out papers.
//!
//! A source paper and everything published after it are removed; its
//! references become the seeds. A venue trial hits when the source's venue
//! is among the top venues; a reviewer trial checks whether any (or all) of
//! the source's authors are among the top experts.

use std::collections::{BTreeSet, HashSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{active_refs, SourceFilter};
use crate::error::Result;
use crate::graph::{prune_after_year, CitationGraph, GraphView, PaperId};
use crate::rankers::{Algorithm, RankerParams};
use crate::recommend::{author_scores, top_indices, venue_scores};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Method {
    Ranker(Algorithm, RankerParams),
    /// Most frequent venues (authors) among the seeds.
    Baseline1,
    /// Most frequent venues (authors) among the seeds and their neighbours.
    Baseline2,
}

impl Method {
    pub fn name(&self) -> String {
        match self {
            Method::Ranker(a, _) => a.to_string(),
            Method::Baseline1 => "baseline1".into(),
            Method::Baseline2 => "baseline2".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentSpec {
    pub trials: usize,
    pub filter: SourceFilter,
    pub seed: u64,
    pub venue_k: usize,
    pub expert_k: usize,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self { trials: 500, filter: SourceFilter::default(), seed: 0, venue_k: 10, expert_k: 25 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VenueRow {
    pub method: String,
    pub evaluated: usize,
    pub hits: usize,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReviewerRow {
    pub method: String,
    pub evaluated: usize,
    pub any_hits: usize,
    pub all_hits: usize,
    pub any_accuracy: f64,
    pub all_accuracy: f64,
}

#[derive(Clone, Copy)]
enum Entity {
    Venue,
    Author,
}

fn count_entities(view: &GraphView<'_>, papers: impl Iterator<Item = PaperId>, entity: Entity) -> Vec<f64> {
    let g = view.graph();
    let mut counts = vec![
        0.0;
        match entity {
            Entity::Venue => g.venue_count(),
            Entity::Author => g.author_count(),
        }
    ];
    for v in papers {
        let m = g.meta(v);
        match entity {
            Entity::Venue => {
                if let Some(x) = m.venue {
                    counts[x.0 as usize] += 1.0;
                }
            }
            Entity::Author => {
                for a in &m.authors {
                    counts[a.0 as usize] += 1.0;
                }
            }
        }
    }
    counts
}

fn method_sums(view: &GraphView<'_>, seeds: &[PaperId], method: &Method, entity: Entity) -> Result<Vec<f64>> {
    Ok(match method {
        Method::Ranker(a, p) => {
            let scores = a.score(view, seeds, p)?;
            match entity {
                Entity::Venue => venue_scores(view, &scores),
                Entity::Author => author_scores(view, &scores),
            }
        }
        Method::Baseline1 => count_entities(view, seeds.iter().copied(), entity),
        Method::Baseline2 => {
            let mut around: BTreeSet<PaperId> = seeds.iter().copied().collect();
            for &m in seeds {
                around.extend(view.neighbors(m));
            }
            count_entities(view, around.into_iter(), entity)
        }
    })
}

/// Per sampled source: `None` when skipped, else the trial's seeds and view.
fn for_each_trial<T: Send>(
    g: &CitationGraph,
    spec: &ExperimentSpec,
    keep: impl Fn(PaperId) -> bool + Sync,
    run: impl Fn(&GraphView<'_>, &[PaperId], PaperId) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let sources = spec.filter.sample(g, spec.trials, &mut rng)?;
    let out = sources
        .par_iter()
        .filter(|&&s| keep(s))
        .map(|&s| {
            let view = g.view(prune_after_year(g, g.year(s), &HashSet::from([s])));
            let seeds = active_refs(&view, s);
            if seeds.is_empty() {
                return Ok(None);
            }
            run(&view, &seeds, s).map(Some)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(out.into_iter().flatten().collect())
}

pub fn venue_experiment(g: &CitationGraph, spec: &ExperimentSpec, methods: &[Method]) -> Result<Vec<VenueRow>> {
    let trials = for_each_trial(
        g,
        spec,
        |s| g.meta(s).venue.is_some(),
        |view, seeds, s| {
            let venue = g.meta(s).venue.expect("filtered").0;
            methods
                .iter()
                .map(|m| {
                    let sums = method_sums(view, seeds, m, Entity::Venue)?;
                    Ok(top_indices(&sums, spec.venue_k).iter().any(|x| x.id == venue))
                })
                .collect::<Result<Vec<bool>>>()
        },
    )?;
    Ok(methods
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let hits = trials.iter().filter(|t| t[i]).count();
            VenueRow {
                method: m.name(),
                evaluated: trials.len(),
                hits,
                accuracy: hits as f64 / trials.len().max(1) as f64,
            }
        })
        .collect())
}

pub fn reviewer_experiment(g: &CitationGraph, spec: &ExperimentSpec, methods: &[Method]) -> Result<Vec<ReviewerRow>> {
    let trials = for_each_trial(
        g,
        spec,
        |s| !g.meta(s).authors.is_empty(),
        |view, seeds, s| {
            let authors = &g.meta(s).authors;
            methods
                .iter()
                .map(|m| {
                    let sums = method_sums(view, seeds, m, Entity::Author)?;
                    let top: HashSet<u32> = top_indices(&sums, spec.expert_k).iter().map(|x| x.id).collect();
                    let found = authors.iter().filter(|a| top.contains(&a.0)).count();
                    Ok((found > 0, found == authors.len()))
                })
                .collect::<Result<Vec<(bool, bool)>>>()
        },
    )?;
    let n = trials.len().max(1) as f64;
    Ok(methods
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let any_hits = trials.iter().filter(|t| t[i].0).count();
            let all_hits = trials.iter().filter(|t| t[i].1).count();
            ReviewerRow {
                method: m.name(),
                evaluated: trials.len(),
                any_hits,
                all_hits,
                any_accuracy: any_hits as f64 / n,
                all_accuracy: all_hits as f64 / n,
            }
        })
        .collect())
}
