//! Random walk with restart over the citation graph expanded with
//! back-reference edges and an artificial source node.
//!
//! The source starts with all the mass. Each iteration it hands its mass to
//! the seeds in equal parts, while every paper keeps a `(1 - d)` share for
//! the restart and spreads the rest over its neighbours. Papers with no
//! active neighbour send their continuing share back to the source too, so
//! total mass stays at one.

use rayon::prelude::*;

use super::{checked_seeds, RankerParams, ScoreVector};
use crate::error::Result;
use crate::graph::{GraphView, PaperId};

/// Below this many active edges the gather runs on one thread.
const PARALLEL_EDGES: usize = 200_000;

#[derive(Debug, Clone, Copy)]
enum Split {
    /// Equal share to every neighbour in both directions.
    Undirected,
    /// `lambda` of the continuing mass to citers, the rest to references.
    Directed { lambda: f64 },
}

/// Random walk with restart treating references and citations alike.
pub fn paperrank(view: &GraphView<'_>, seeds: &[PaperId], p: &RankerParams) -> Result<ScoreVector> {
    let seeds = checked_seeds(view, seeds)?;
    Ok(run(view, &seeds, p, Split::Undirected))
}

/// Direction-aware random walk with restart.
///
/// A paper with citers but no references (or the reverse) sends its whole
/// continuing share to the side it has.
pub fn darwr(view: &GraphView<'_>, seeds: &[PaperId], p: &RankerParams) -> Result<ScoreVector> {
    let seeds = checked_seeds(view, seeds)?;
    Ok(run(view, &seeds, p, Split::Directed { lambda: p.lambda }))
}

/// Global PageRank variant: [`paperrank`] with every active paper as a seed.
pub fn pagerank(view: &GraphView<'_>, p: &RankerParams) -> Result<ScoreVector> {
    let seeds: Vec<PaperId> = view.active_papers().collect();
    paperrank(view, &seeds, p)
}

fn run(view: &GraphView<'_>, seeds: &[PaperId], p: &RankerParams, split: Split) -> ScoreVector {
    let n = view.paper_count();
    let d = p.damping;
    let g = view.graph();

    // Per unit of mass: what each citer receives, what each reference
    // receives. Papers with neither side are dangling.
    let mut to_citer = vec![0.0f64; n];
    let mut to_ref = vec![0.0f64; n];
    let mut dangling = Vec::new();
    for v in view.active_papers() {
        let (r, c) = (view.ref_degree(v), view.cite_degree(v));
        let i = v.index();
        match split {
            Split::Undirected => {
                if r + c == 0 {
                    dangling.push(i);
                } else {
                    let w = d / (r + c) as f64;
                    to_citer[i] = w;
                    to_ref[i] = w;
                }
            }
            Split::Directed { lambda } => match (c > 0, r > 0) {
                (true, true) => {
                    to_citer[i] = d * lambda / c as f64;
                    to_ref[i] = d * (1.0 - lambda) / r as f64;
                }
                (true, false) => to_citer[i] = d / c as f64,
                (false, true) => to_ref[i] = d / r as f64,
                (false, false) => dangling.push(i),
            },
        }
    }

    let mut is_dangling = vec![false; n];
    for &i in &dangling {
        is_dangling[i] = true;
    }
    if seeds.iter().all(|s| is_dangling[s.index()]) {
        return isolated_seeds(n, seeds);
    }

    let parallel = view.active_edge_count() >= PARALLEL_EDGES;
    let seed_share = 1.0 / seeds.len() as f64;
    let mut cur = vec![0.0f64; n];
    let mut next = vec![0.0f64; n];
    let mut out_citer = vec![0.0f64; n];
    let mut out_ref = vec![0.0f64; n];
    let mut source = 1.0f64;
    let mut drift = 0.0f64;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < p.max_iters {
        iterations += 1;

        for i in 0..n {
            out_citer[i] = cur[i] * to_citer[i];
            out_ref[i] = cur[i] * to_ref[i];
        }
        // Paper u receives the citer share of every paper it cites and the
        // reference share of every paper citing it. Inactive senders hold
        // zero mass, so raw adjacency rows need no mask test.
        let gather = |(u, slot): (usize, &mut f64)| {
            let v = PaperId(u as u32);
            *slot = if view.is_active(v) {
                let from_refs: f64 = g.refs(v).iter().map(|w| out_citer[w.index()]).sum();
                let from_citers: f64 = g.citers(v).iter().map(|w| out_ref[w.index()]).sum();
                from_refs + from_citers
            } else {
                0.0
            };
        };
        if parallel {
            next.par_iter_mut().enumerate().for_each(gather);
        } else {
            next.iter_mut().enumerate().for_each(gather);
        }

        let walk_mass: f64 = cur.iter().sum();
        let leaked: f64 = dangling.iter().map(|&i| cur[i]).sum::<f64>() * d;
        let next_source = (1.0 - d) * walk_mass + leaked;
        for s in seeds {
            next[s.index()] += source * seed_share;
        }

        let delta: f64 = next
            .iter()
            .zip(&cur)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        std::mem::swap(&mut cur, &mut next);
        source = next_source;
        drift = drift.max((source + cur.iter().sum::<f64>() - 1.0).abs());

        if delta < p.epsilon {
            converged = true;
            break;
        }
    }

    ScoreVector {
        scores: cur,
        source_score: source,
        iterations,
        converged,
        max_mass_drift: drift,
    }
}

/// When no seed has an active neighbour the walk alternates between the
/// source and the seeds forever; its stationary distribution splits the
/// mass evenly between the two sides.
fn isolated_seeds(n: usize, seeds: &[PaperId]) -> ScoreVector {
    let mut scores = vec![0.0; n];
    let share = 0.5 / seeds.len() as f64;
    for s in seeds {
        scores[s.index()] = share;
    }
    ScoreVector {
        scores,
        source_score: 0.5,
        iterations: 0,
        converged: true,
        max_mass_drift: 0.0,
    }
}
