//! Damping/direction grid over the properties of the top recommendations.

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{active_refs, SourceFilter};
use crate::error::{Error, Result};
use crate::graph::{undirected_distances, CitationGraph, PaperId, UNKNOWN_YEAR, UNREACHABLE};
use crate::rankers::{darwr, top_k, RankerParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepSpec {
    pub dampings: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub sources: usize,
    pub filter: SourceFilter,
    /// Length of the recommendation list being described.
    pub top: usize,
    pub seed: u64,
    /// Template for everything but damping and lambda.
    pub params: RankerParams,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            dampings: vec![0.1, 0.25, 0.5, 0.75, 0.9],
            lambdas: (0..=10).map(|i| i as f64 / 10.0).collect(),
            sources: 500,
            filter: SourceFilter::default(),
            top: 10,
            seed: 0,
            params: RankerParams::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub damping: f64,
    pub lambda: f64,
    /// Mean undirected distance from the seed set, averaged over sources.
    pub mean_distance: f64,
    /// Mean publication year (known years only), averaged over sources.
    pub mean_year: f64,
    /// Sources that produced at least one recommendation.
    pub sources: usize,
}

#[derive(Clone, Copy, Default)]
struct Acc {
    distance: f64,
    year: f64,
    distance_n: usize,
    year_n: usize,
}

/// Mean distance and, when any year is known, mean year of one top list.
type Cell = Option<(f64, Option<f64>)>;

/// For each source, its references are the seeds and the source itself is
/// removed from the graph. Rows come out in damping-major order.
pub fn parameter_sweep(g: &CitationGraph, spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    if spec.dampings.is_empty() || spec.lambdas.is_empty() || spec.top == 0 {
        return Err(Error::InvalidParameter("sweep grid and list length must be non-empty".into()));
    }
    let grid: Vec<RankerParams> = spec
        .dampings
        .iter()
        .flat_map(|&d| spec.lambdas.iter().map(move |&l| spec.params.with_damping(d).with_lambda(l)))
        .collect();
    for p in &grid {
        p.validate()?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let sources = spec.filter.sample(g, spec.sources, &mut rng)?;

    let per_source: Vec<Vec<Cell>> = sources
        .par_iter()
        .map(|&s| {
            let mut mask = g.full_mask();
            mask.deactivate(s);
            let view = g.view(mask);
            let seeds = active_refs(&view, s);
            let dist = undirected_distances(&view, &seeds);
            let exclude: HashSet<PaperId> = seeds.iter().copied().collect();
            grid.iter()
                .map(|p| {
                    let scores = darwr(&view, &seeds, p)?;
                    let top = top_k(&view, &scores, &exclude, spec.top);
                    if top.is_empty() {
                        return Ok(None);
                    }
                    let d: Vec<f64> = top
                        .iter()
                        .map(|t| dist[t.id.index()])
                        .filter(|&d| d != UNREACHABLE)
                        .map(f64::from)
                        .collect();
                    let y: Vec<f64> = top
                        .iter()
                        .map(|t| g.year(t.id))
                        .filter(|&y| y != UNKNOWN_YEAR)
                        .map(f64::from)
                        .collect();
                    let yr = (!y.is_empty()).then(|| super::mean(&y));
                    Ok(Some((super::mean(&d), yr)))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut acc = vec![Acc::default(); grid.len()];
    for row in &per_source {
        for (a, cell) in acc.iter_mut().zip(row) {
            if let Some((d, y)) = cell {
                a.distance += d;
                a.distance_n += 1;
                if let Some(y) = y {
                    a.year += y;
                    a.year_n += 1;
                }
            }
        }
    }
    Ok(grid
        .iter()
        .zip(acc)
        .map(|(p, a)| SweepRow {
            damping: p.damping,
            lambda: p.lambda,
            mean_distance: a.distance / a.distance_n.max(1) as f64,
            mean_year: a.year / a.year_n.max(1) as f64,
            sources: a.distance_n,
        })
        .collect())
}
