//! Neighbourhood-overlap baselines: co-citation, bibliographic coupling
//! and coupling weighted by inverse citation frequency.

use super::{active_seeds, ScoreVector};
use crate::graph::{GraphView, PaperId};

/// `score(v) = Σ_{u ∈ seeds} |citers(u) ∩ citers(v)|`.
pub fn cocitation(view: &GraphView<'_>, seeds: &[PaperId]) -> ScoreVector {
    let mut scores = vec![0.0; view.paper_count()];
    for u in active_seeds(view, seeds) {
        for c in view.citers(u) {
            for v in view.refs(c) {
                scores[v.index()] += 1.0;
            }
        }
    }
    ScoreVector::exact(scores, 0)
}

/// `score(v) = Σ_{u ∈ seeds} |refs(u) ∩ refs(v)|`.
pub fn cocoupling(view: &GraphView<'_>, seeds: &[PaperId]) -> ScoreVector {
    coupling(view, seeds, |_| 1.0)
}

/// Coupling where a shared reference `w` contributes `1 / deg⁺(w)`, the
/// inverse of its active citation count.
pub fn ccidf(view: &GraphView<'_>, seeds: &[PaperId]) -> ScoreVector {
    coupling(view, seeds, |w| 1.0 / view.cite_degree(w) as f64)
}

fn coupling(view: &GraphView<'_>, seeds: &[PaperId], weight: impl Fn(PaperId) -> f64) -> ScoreVector {
    let mut scores = vec![0.0; view.paper_count()];
    for u in active_seeds(view, seeds) {
        for w in view.refs(u) {
            let contribution = weight(w);
            for v in view.citers(w) {
                scores[v.index()] += contribution;
            }
        }
    }
    ScoreVector::exact(scores, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::graph;

    fn id(g: &crate::graph::CitationGraph, k: &str) -> PaperId {
        g.paper_by_key(k).unwrap()
    }

    #[test]
    fn cocitation_counts_shared_citers() {
        let g = graph(&[("A", 1990), ("B", 1990), ("C", 2000)], &[("C", "A"), ("C", "B")]);
        assert_eq!(cocitation(&g.full_view(), &[id(&g, "A")]).score(id(&g, "B")), 1.0);

        let g = graph(
            &[("A", 1990), ("B", 1990), ("C", 2000), ("D", 2000)],
            &[("C", "A"), ("C", "B"), ("D", "A"), ("D", "B")],
        );
        assert_eq!(cocitation(&g.full_view(), &[id(&g, "A")]).score(id(&g, "B")), 2.0);

        let g = graph(&[("A", 1990), ("B", 1990), ("C", 2000)], &[("C", "A")]);
        assert_eq!(cocitation(&g.full_view(), &[id(&g, "A")]).score(id(&g, "B")), 0.0);
    }

    #[test]
    fn cocoupling_counts_shared_references() {
        let g = graph(&[("A", 2000), ("B", 2000), ("C", 1990)], &[("A", "C"), ("B", "C")]);
        assert_eq!(cocoupling(&g.full_view(), &[id(&g, "A")]).score(id(&g, "B")), 1.0);

        let g = graph(
            &[("A", 2000), ("B", 2000), ("C", 1990), ("D", 1990)],
            &[("A", "C"), ("B", "D")],
        );
        assert_eq!(cocoupling(&g.full_view(), &[id(&g, "A")]).score(id(&g, "B")), 0.0);
    }

    #[test]
    fn ccidf_weights_by_inverse_citations() {
        let g = graph(&[("A", 2000), ("B", 2000), ("W", 1990)], &[("A", "W"), ("B", "W")]);
        assert_eq!(ccidf(&g.full_view(), &[id(&g, "A")]).score(id(&g, "B")), 0.5);
    }
}
