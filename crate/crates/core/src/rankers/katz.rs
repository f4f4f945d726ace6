//! Katz-style walk counting over references and back-references.
//!
//! Walks need not be elementary. Counts are propagated one length at a
//! time from the seed indicator, so round `i` holds the number of walks of
//! length `i` from the seed set to every paper.

use super::{active_seeds, ScoreVector};
use crate::graph::{GraphView, PaperId};

/// `score(v) = Σ_{u ∈ seeds} Σ_{i=1..max_len} beta^i · walks_i(u, v)`.
pub fn katz(view: &GraphView<'_>, seeds: &[PaperId], beta: f64, max_len: usize) -> ScoreVector {
    propagate(view, seeds, beta, max_len, |to_citer, to_ref| to_citer + to_ref)
}

/// Katz with walks weighted by the direction of their final step: `lambda`
/// for a step from a cited paper to one of its citers, `1 - lambda` for a
/// step from a citing paper to one of its references. `lambda → 1` favours
/// newer papers.
pub fn dakatz(
    view: &GraphView<'_>,
    seeds: &[PaperId],
    beta: f64,
    max_len: usize,
    lambda: f64,
) -> ScoreVector {
    propagate(view, seeds, beta, max_len, |to_citer, to_ref| {
        lambda * to_citer + (1.0 - lambda) * to_ref
    })
}

fn propagate(
    view: &GraphView<'_>,
    seeds: &[PaperId],
    beta: f64,
    max_len: usize,
    weigh: impl Fn(f64, f64) -> f64,
) -> ScoreVector {
    let n = view.paper_count();
    let g = view.graph();
    let mut scores = vec![0.0f64; n];
    let mut walks = vec![0.0f64; n];
    for s in active_seeds(view, seeds) {
        walks[s.index()] = 1.0;
    }
    let mut next = vec![0.0f64; n];
    let mut step_weight = 1.0f64;

    for _ in 0..max_len {
        step_weight *= beta;
        for v in view.active_papers() {
            let i = v.index();
            // Arriving from a paper v cites: v is its citer.
            let to_citer: f64 = g.refs(v).iter().map(|w| walks[w.index()]).sum();
            // Arriving from a paper citing v: v is its reference.
            let to_ref: f64 = g.citers(v).iter().map(|w| walks[w.index()]).sum();
            next[i] = to_citer + to_ref;
            scores[i] += step_weight * weigh(to_citer, to_ref);
        }
        std::mem::swap(&mut walks, &mut next);
    }
    ScoreVector::exact(scores, max_len)
}
