use std::cmp::Ordering;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::ScoreVector;
use crate::graph::{GraphView, PaperId, UNKNOWN_YEAR};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scored<T> {
    pub id: T,
    pub score: f64,
}

/// Papers ordered by non-increasing score.
pub type RankedList = Vec<Scored<PaperId>>;

/// The `k` best active papers outside `exclude` with a positive score.
///
/// Ties go to the older paper (unknown years last), then the smaller id.
pub fn top_k(view: &GraphView<'_>, scores: &ScoreVector, exclude: &HashSet<PaperId>, k: usize) -> RankedList {
    let g = view.graph();
    let year_key = |v: PaperId| match g.year(v) {
        UNKNOWN_YEAR => u16::MAX,
        y => y,
    };
    let candidates = view
        .active_papers()
        .filter(|v| !exclude.contains(v))
        .map(|v| Scored { id: v, score: scores.score(v) })
        .filter(|s| s.score > 0.0);
    top_k_by(candidates, k, |a, b| year_key(a.id).cmp(&year_key(b.id)).then(a.id.cmp(&b.id)))
}

/// Selects the `k` highest scores from `items`, breaking ties with `tie`.
pub fn top_k_by<T, I, F>(items: I, k: usize, tie: F) -> Vec<Scored<T>>
where
    I: IntoIterator<Item = Scored<T>>,
    F: Fn(&Scored<T>, &Scored<T>) -> Ordering,
{
    let order = |a: &Scored<T>, b: &Scored<T>| b.score.total_cmp(&a.score).then_with(|| tie(a, b));
    let mut all: Vec<Scored<T>> = items.into_iter().collect();
    if k == 0 {
        return Vec::new();
    }
    if all.len() > k {
        all.select_nth_unstable_by(k - 1, order);
        all.truncate(k);
    }
    all.sort_unstable_by(order);
    all
}
