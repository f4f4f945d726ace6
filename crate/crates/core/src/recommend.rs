//! Paper, venue and expert recommendation plus relevance-feedback sessions.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{prune_after_year, AuthorId, CitationGraph, GraphMask, GraphView, PaperId, VenueId};
use crate::rankers::{top_k, top_k_by, Algorithm, RankedList, RankerParams, ScoreVector, Scored};

pub const DEFAULT_PAGE_SIZE: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Query {
    pub seeds: Vec<PaperId>,
    pub k: usize,
    pub algorithm: Algorithm,
    #[serde(default)]
    pub params: RankerParams,
    /// Only papers published in or before this year take part.
    #[serde(default)]
    pub year_cutoff: Option<u16>,
}

impl Query {
    pub fn new(seeds: Vec<PaperId>, k: usize, algorithm: Algorithm) -> Self {
        Self { seeds, k, algorithm, params: RankerParams::default(), year_cutoff: None }
    }

    pub fn with_params(mut self, params: RankerParams) -> Self {
        self.params = params;
        self
    }

    pub fn with_year_cutoff(mut self, year: u16) -> Self {
        self.year_cutoff = Some(year);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::EmptySeeds);
        }
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        self.params.validate()
    }

    /// The mask implied by the year cutoff (everything when there is none).
    pub fn mask(&self, g: &CitationGraph) -> GraphMask {
        match self.year_cutoff {
            Some(year) => prune_after_year(g, year, &HashSet::new()),
            None => g.full_mask(),
        }
    }
}

fn check_seeds_in(g: &CitationGraph, mask: &GraphMask, seeds: &[PaperId]) -> Result<()> {
    if let Some(&bad) = seeds.iter().find(|s| s.index() >= g.paper_count()) {
        return Err(Error::InactivePaper(bad));
    }
    let outside: Vec<String> = seeds
        .iter()
        .filter(|&&s| !mask.is_active(s))
        .map(|&s| g.meta(s).key.clone())
        .collect();
    if outside.is_empty() {
        Ok(())
    } else {
        Err(Error::SeedsOutsideMask(outside))
    }
}

fn score_query<'g>(g: &'g CitationGraph, q: &Query) -> Result<(GraphView<'g>, ScoreVector)> {
    q.validate()?;
    let mask = q.mask(g);
    check_seeds_in(g, &mask, &q.seeds)?;
    let view = g.view(mask);
    let scores = q.algorithm.score(&view, &q.seeds, &q.params)?;
    Ok((view, scores))
}

/// Top-k papers for the query, never including a seed.
pub fn recommend_papers(g: &CitationGraph, q: &Query) -> Result<RankedList> {
    let (view, scores) = score_query(g, q)?;
    let exclude: HashSet<PaperId> = q.seeds.iter().copied().collect();
    Ok(top_k(&view, &scores, &exclude, q.k))
}

/// Per-venue sums of the scores of active papers (seeds included).
pub fn venue_scores(view: &GraphView<'_>, scores: &ScoreVector) -> Vec<f64> {
    let g = view.graph();
    let mut sums = vec![0.0; g.venue_count()];
    for v in view.active_papers() {
        if let Some(venue) = g.meta(v).venue {
            sums[venue.0 as usize] += scores.score(v);
        }
    }
    sums
}

/// Per-author sums; a coauthored paper counts in full for every author.
pub fn author_scores(view: &GraphView<'_>, scores: &ScoreVector) -> Vec<f64> {
    let g = view.graph();
    let mut sums = vec![0.0; g.author_count()];
    for v in view.active_papers() {
        let s = scores.score(v);
        for a in &g.meta(v).authors {
            sums[a.0 as usize] += s;
        }
    }
    sums
}

/// Best `k` positive entries of a dense sum vector, ties by smaller index.
pub fn top_indices(sums: &[f64], k: usize) -> Vec<Scored<u32>> {
    let items = sums
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > 0.0)
        .map(|(i, &s)| Scored { id: i as u32, score: s });
    top_k_by(items, k, |a, b| a.id.cmp(&b.id))
}

pub fn recommend_venues(g: &CitationGraph, q: &Query) -> Result<Vec<Scored<VenueId>>> {
    let (view, scores) = score_query(g, q)?;
    Ok(top_indices(&venue_scores(&view, &scores), q.k)
        .into_iter()
        .map(|s| Scored { id: VenueId(s.id), score: s.score })
        .collect())
}

pub fn recommend_experts(g: &CitationGraph, q: &Query) -> Result<Vec<Scored<AuthorId>>> {
    let (view, scores) = score_query(g, q)?;
    Ok(top_indices(&author_scores(&view, &scores), q.k)
        .into_iter()
        .map(|s| Scored { id: AuthorId(s.id), score: s.score })
        .collect())
}

/// An interactive query refined page by page.
///
/// Papers marked relevant join the seed set; papers marked irrelevant are
/// removed from the graph for all later rankings. Nothing is shown twice.
#[derive(Debug, Clone)]
pub struct FeedbackSession {
    pub id: String,
    pub query: Query,
    pub page_size: usize,
    base: GraphMask,
    relevant: BTreeSet<PaperId>,
    irrelevant: BTreeSet<PaperId>,
    shown: Vec<PaperId>,
    shown_set: HashSet<PaperId>,
    pages: usize,
}

impl FeedbackSession {
    pub fn new(g: &CitationGraph, id: impl Into<String>, query: Query) -> Result<Self> {
        let mask = query.mask(g);
        Self::with_mask(g, id, query, mask)
    }

    /// Uses `base` instead of the query's year cutoff as the starting graph.
    pub fn with_mask(g: &CitationGraph, id: impl Into<String>, mut query: Query, base: GraphMask) -> Result<Self> {
        query.validate()?;
        query.seeds.sort_unstable();
        query.seeds.dedup();
        check_seeds_in(g, &base, &query.seeds)?;
        Ok(Self {
            id: id.into(),
            query,
            page_size: DEFAULT_PAGE_SIZE,
            base,
            relevant: BTreeSet::new(),
            irrelevant: BTreeSet::new(),
            shown: Vec::new(),
            shown_set: HashSet::new(),
            pages: 0,
        })
    }

    pub fn with_page_size(mut self, page_size: usize) -> Self {
        self.page_size = page_size.max(1);
        self
    }

    /// Original seeds followed by papers marked relevant.
    pub fn seeds(&self) -> Vec<PaperId> {
        let mut s = self.query.seeds.clone();
        s.extend(self.relevant.iter().copied().filter(|r| !self.query.seeds.contains(r)));
        s
    }

    pub fn relevant(&self) -> &BTreeSet<PaperId> {
        &self.relevant
    }

    pub fn irrelevant(&self) -> &BTreeSet<PaperId> {
        &self.irrelevant
    }

    /// Every paper displayed so far, in display order.
    pub fn shown(&self) -> &[PaperId] {
        &self.shown
    }

    pub fn pages_served(&self) -> usize {
        self.pages
    }

    pub fn mask(&self) -> GraphMask {
        let mut m = self.base.clone();
        for &v in &self.irrelevant {
            m.deactivate(v);
        }
        m
    }

    /// Scores every paper under the current seeds and feedback.
    pub fn score<'g>(&self, g: &'g CitationGraph) -> Result<(GraphView<'g>, ScoreVector)> {
        let view = g.view(self.mask());
        let scores = self.query.algorithm.score(&view, &self.seeds(), &self.query.params)?;
        Ok((view, scores))
    }

    /// Recomputes the ranking under the current feedback and returns the
    /// next `page_size` papers not yet shown. An exhausted ranking yields an
    /// empty page.
    pub fn next_page(&mut self, g: &CitationGraph) -> Result<RankedList> {
        let (view, scores) = self.score(g)?;
        let seeds = self.seeds();
        let mut exclude: HashSet<PaperId> = seeds.into_iter().collect();
        exclude.extend(self.shown.iter().copied());
        let page = top_k(&view, &scores, &exclude, self.page_size);
        for s in &page {
            self.shown.push(s.id);
            self.shown_set.insert(s.id);
        }
        self.pages += 1;
        Ok(page)
    }

    pub fn apply_feedback(&mut self, positive: &[PaperId], negative: &[PaperId]) -> Result<()> {
        let pos: BTreeSet<PaperId> = positive.iter().copied().collect();
        let neg: BTreeSet<PaperId> = negative.iter().copied().collect();
        let mut overlap: Vec<PaperId> = pos.intersection(&neg).copied().collect();
        overlap.extend(pos.intersection(&self.irrelevant));
        overlap.extend(neg.intersection(&self.relevant));
        if !overlap.is_empty() {
            overlap.sort_unstable();
            overlap.dedup();
            return Err(Error::FeedbackOverlap(overlap));
        }
        let unshown: Vec<PaperId> = pos.iter().chain(&neg).copied().filter(|v| !self.shown_set.contains(v)).collect();
        if !unshown.is_empty() {
            return Err(Error::FeedbackNotShown(unshown));
        }
        self.relevant.extend(pos);
        self.irrelevant.extend(neg);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::{graph, triangle};
    use crate::graph::GraphBuilder;

    fn id(g: &CitationGraph, k: &str) -> PaperId {
        g.paper_by_key(k).unwrap()
    }

    #[test]
    fn seeds_are_never_recommended() {
        let g = triangle();
        let q = Query::new(vec![id(&g, "C")], 5, Algorithm::DaRwr);
        let top = recommend_papers(&g, &q).unwrap();
        assert_eq!(top.len(), 2);
        assert!(top.iter().all(|s| s.id != id(&g, "C")));

        let all = Query::new(g.papers().collect(), 5, Algorithm::DaRwr);
        assert!(recommend_papers(&g, &all).unwrap().is_empty());
    }

    #[test]
    fn single_candidate() {
        let g = graph(&[("A", 2000), ("B", 2001)], &[("B", "A")]);
        let q = Query::new(vec![id(&g, "B")], 1, Algorithm::PaperRank);
        let top = recommend_papers(&g, &q).unwrap();
        assert_eq!(top.len(), 1);
        assert_eq!(top[0].id, id(&g, "A"));
    }

    #[test]
    fn cutoff_rejects_late_seeds_by_key() {
        let g = graph(&[("A", 2000), ("B", 2005), ("C", 2008)], &[("B", "A"), ("C", "B")]);
        let q = Query::new(vec![id(&g, "B"), id(&g, "C")], 3, Algorithm::DaRwr).with_year_cutoff(2006);
        match recommend_papers(&g, &q) {
            Err(Error::SeedsOutsideMask(keys)) => assert_eq!(keys, vec!["C".to_string()]),
            other => panic!("{other:?}"),
        }
        assert!(recommend_papers(&g, &Query::new(vec![], 3, Algorithm::DaRwr)).is_err());
        assert!(recommend_papers(&g, &Query::new(vec![id(&g, "A")], 0, Algorithm::DaRwr)).is_err());
    }

    fn venue_graph() -> CitationGraph {
        let mut b = GraphBuilder::new();
        let p = |b: &mut GraphBuilder, k: &str, v: &str, a: &[&str]| b.add_paper(k, k, 2000, Some(v), a).unwrap();
        let s = p(&mut b, "S", "X", &["ann"]);
        let a = p(&mut b, "A", "V", &["bob", "cat"]);
        let c = p(&mut b, "B", "W", &["bob"]);
        b.add_edge(s, a).unwrap();
        b.add_edge(s, c).unwrap();
        b.build()
    }

    #[test]
    fn venue_and_expert_sums_include_seeds_and_do_not_split() {
        let g = venue_graph();
        let q = Query::new(vec![id(&g, "S")], 10, Algorithm::PaperRank);
        let view = g.full_view();
        let sv = Algorithm::PaperRank.score(&view, &q.seeds, &q.params).unwrap();
        let venues = recommend_venues(&g, &q).unwrap();
        assert_eq!(venues.len(), 3);
        let x = g.venue_by_name("X").unwrap();
        let got = venues.iter().find(|s| s.id == x).unwrap().score;
        assert_eq!(got, sv.score(id(&g, "S")));
        // mirrored papers tie; the smaller venue id wins
        let v = g.venue_by_name("V").unwrap();
        let w = g.venue_by_name("W").unwrap();
        let pos = |id| venues.iter().position(|s| s.id == id).unwrap();
        assert!(pos(v) < pos(w));

        let experts = recommend_experts(&g, &q).unwrap();
        let bob = g.author_by_name("bob").unwrap();
        let cat = g.author_by_name("cat").unwrap();
        let score = |a| experts.iter().find(|s| s.id == a).unwrap().score;
        assert_eq!(score(bob), sv.score(id(&g, "A")) + sv.score(id(&g, "B")));
        assert_eq!(score(cat), sv.score(id(&g, "A")));
        assert!(experts.windows(2).all(|w| w[0].score >= w[1].score));
    }

    fn chain(n: usize) -> CitationGraph {
        let papers: Vec<(String, i64)> = (0..n).map(|i| (format!("p{i}"), 2000)).collect();
        let refs: Vec<(&str, i64)> = papers.iter().map(|(k, y)| (k.as_str(), *y)).collect();
        let edges: Vec<(String, String)> = (1..n).map(|i| (format!("p{i}"), format!("p{}", i - 1))).collect();
        let e: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        graph(&refs, &e)
    }

    #[test]
    fn pages_never_repeat_and_first_page_matches_plain_query() {
        let g = chain(30);
        let q = Query::new(vec![PaperId(15)], 4, Algorithm::DaRwr);
        let plain = recommend_papers(&g, &q).unwrap();
        let mut s = FeedbackSession::new(&g, "s", q).unwrap().with_page_size(4);
        let first = s.next_page(&g).unwrap();
        assert_eq!(first, plain);
        let mut seen = HashSet::new();
        for p in &first {
            seen.insert(p.id);
        }
        loop {
            let page = s.next_page(&g).unwrap();
            if page.is_empty() {
                break;
            }
            for p in page {
                assert!(seen.insert(p.id), "{} repeated", p.id);
            }
        }
        assert_eq!(seen.len(), 29);
    }

    #[test]
    fn feedback_rules() {
        let g = chain(12);
        let mut s = FeedbackSession::new(&g, "s", Query::new(vec![PaperId(6)], 3, Algorithm::DaRwr))
            .unwrap()
            .with_page_size(2);
        let page = s.next_page(&g).unwrap();
        let (x, y) = (page[0].id, page[1].id);
        assert!(matches!(s.apply_feedback(&[x], &[x]), Err(Error::FeedbackOverlap(_))));
        assert!(matches!(s.apply_feedback(&[PaperId(0)], &[]), Err(Error::FeedbackNotShown(_))));
        s.apply_feedback(&[x], &[y]).unwrap();
        assert!(s.seeds().contains(&x));
        assert!(!s.mask().is_active(y));
        assert!(matches!(s.apply_feedback(&[y], &[]), Err(Error::FeedbackOverlap(_))));
        for _ in 0..10 {
            assert!(s.next_page(&g).unwrap().iter().all(|p| p.id != y && p.id != x));
        }
    }

    #[test]
    fn empty_feedback_only_excludes_shown() {
        let g = chain(20);
        let q = Query::new(vec![PaperId(10)], 3, Algorithm::PaperRank);
        let mut s = FeedbackSession::new(&g, "s", q.clone()).unwrap().with_page_size(3);
        let p1 = s.next_page(&g).unwrap();
        s.apply_feedback(&[], &[]).unwrap();
        let p2 = s.next_page(&g).unwrap();
        let full = recommend_papers(&g, &Query { k: 6, ..q }).unwrap();
        let joined: Vec<_> = p1.into_iter().chain(p2).collect();
        assert_eq!(joined, full);
    }
}
