//! Citation graph model.
//!
//! An edge `(u, v)` means paper `u` cites paper `v`. Each paper keeps two
//! sorted adjacency rows stored in CSR form: its references (outgoing edges)
//! and its citations (incoming edges). Queries run against a [`GraphView`],
//! which pairs the immutable graph with a [`GraphMask`] of active papers and
//! caches the masked degrees.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PaperId(pub u32);

impl PaperId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for PaperId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VenueId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AuthorId(pub u32);

/// Year value meaning "unknown".
pub const UNKNOWN_YEAR: u16 = 0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaperMeta {
    pub key: String,
    pub title: String,
    pub year: u16,
    pub venue: Option<VenueId>,
    pub authors: Vec<AuthorId>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<PaperId>,
}

impl Csr {
    /// Builds rows from `(row, target)` pairs; pairs must already be sorted and unique.
    fn from_sorted_pairs(n: usize, pairs: &[(u32, u32)]) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for &(r, _) in pairs {
            offsets[r as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets = pairs.iter().map(|&(_, t)| PaperId(t)).collect();
        Self { offsets, targets }
    }

    #[inline]
    fn row(&self, v: usize) -> &[PaperId] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Interner {
    names: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Interner {
    fn intern(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = self.names.len() as u32;
        self.names.push(name.to_owned());
        self.ids.insert(name.to_owned(), id);
        id
    }
}

/// Immutable citation graph with dual adjacency and per-paper metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CitationGraph {
    meta: Vec<PaperMeta>,
    refs: Csr,
    cites: Csr,
    venues: Interner,
    authors: Interner,
    keys: HashMap<String, PaperId>,
}

impl CitationGraph {
    pub fn paper_count(&self) -> usize {
        self.meta.len()
    }

    pub fn edge_count(&self) -> usize {
        self.refs.targets.len()
    }

    pub fn venue_count(&self) -> usize {
        self.venues.names.len()
    }

    pub fn author_count(&self) -> usize {
        self.authors.names.len()
    }

    pub fn papers(&self) -> impl ExactSizeIterator<Item = PaperId> {
        (0..self.meta.len() as u32).map(PaperId)
    }

    pub fn meta(&self, v: PaperId) -> &PaperMeta {
        &self.meta[v.index()]
    }

    pub fn year(&self, v: PaperId) -> u16 {
        self.meta[v.index()].year
    }

    /// Papers referenced by `v` (its outgoing edges), sorted.
    pub fn refs(&self, v: PaperId) -> &[PaperId] {
        self.refs.row(v.index())
    }

    /// Papers citing `v` (its incoming edges), sorted.
    pub fn citers(&self, v: PaperId) -> &[PaperId] {
        self.cites.row(v.index())
    }

    pub fn has_edge(&self, citer: PaperId, cited: PaperId) -> bool {
        self.refs(citer).binary_search(&cited).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (PaperId, PaperId)> + '_ {
        self.papers()
            .flat_map(move |u| self.refs(u).iter().map(move |&v| (u, v)))
    }

    pub fn paper_by_key(&self, key: &str) -> Option<PaperId> {
        self.keys.get(key).copied()
    }

    pub fn venue_name(&self, v: VenueId) -> &str {
        &self.venues.names[v.0 as usize]
    }

    pub fn author_name(&self, a: AuthorId) -> &str {
        &self.authors.names[a.0 as usize]
    }

    pub fn venue_by_name(&self, name: &str) -> Option<VenueId> {
        self.venues.ids.get(name).map(|&i| VenueId(i))
    }

    pub fn author_by_name(&self, name: &str) -> Option<AuthorId> {
        self.authors.ids.get(name).map(|&i| AuthorId(i))
    }

    pub fn full_mask(&self) -> GraphMask {
        GraphMask::full(self.paper_count())
    }

    pub fn view(&self, mask: GraphMask) -> GraphView<'_> {
        GraphView::new(self, mask)
    }

    pub fn full_view(&self) -> GraphView<'_> {
        GraphView::new(self, self.full_mask())
    }

    /// Checks the dual-adjacency invariants edge by edge.
    pub fn check_consistency(&self) -> std::result::Result<(), String> {
        let n = self.paper_count();
        if self.refs.offsets.len() != n + 1 || self.cites.offsets.len() != n + 1 {
            return Err("adjacency row count differs from paper count".into());
        }
        if self.refs.targets.len() != self.cites.targets.len() {
            return Err("reference and citation edge totals differ".into());
        }
        for u in self.papers() {
            let row = self.refs(u);
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("reference row of {u} not strictly sorted"));
            }
            for &v in row {
                if v == u {
                    return Err(format!("self-loop on {u}"));
                }
                if self.citers(v).binary_search(&u).is_err() {
                    return Err(format!("edge {u}->{v} missing from citation row"));
                }
            }
            let row = self.citers(u);
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("citation row of {u} not strictly sorted"));
            }
            for &c in row {
                if !self.has_edge(c, u) {
                    return Err(format!("citation {c}->{u} missing from reference row"));
                }
            }
        }
        Ok(())
    }
}

/// Incremental constructor for [`CitationGraph`].
///
/// Venue and author tables are interned in order of first appearance, so
/// adding the same papers in the same order always yields identical ids.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    meta: Vec<PaperMeta>,
    keys: HashMap<String, PaperId>,
    venues: Interner,
    authors: Interner,
    edges: Vec<(u32, u32)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn paper_count(&self) -> usize {
        self.meta.len()
    }

    pub fn paper_by_key(&self, key: &str) -> Option<PaperId> {
        self.keys.get(key).copied()
    }

    pub fn add_paper<S: AsRef<str>>(
        &mut self,
        key: &str,
        title: &str,
        year: i64,
        venue: Option<&str>,
        authors: &[S],
    ) -> Result<PaperId> {
        if year != 0 && !(1900..=2100).contains(&year) {
            return Err(Error::InvalidYear { key: key.to_owned(), year });
        }
        if self.keys.contains_key(key) {
            return Err(Error::DuplicateKey(key.to_owned()));
        }
        let id = PaperId(self.meta.len() as u32);
        let venue = venue
            .filter(|v| !v.is_empty())
            .map(|v| VenueId(self.venues.intern(v)));
        let mut author_ids = Vec::with_capacity(authors.len());
        for a in authors {
            let a = a.as_ref();
            if a.is_empty() {
                continue;
            }
            let aid = AuthorId(self.authors.intern(a));
            if !author_ids.contains(&aid) {
                author_ids.push(aid);
            }
        }
        self.meta.push(PaperMeta {
            key: key.to_owned(),
            title: title.to_owned(),
            year: year as u16,
            venue,
            authors: author_ids,
        });
        self.keys.insert(key.to_owned(), id);
        Ok(id)
    }

    /// Adds `citer -> cited`. Duplicates are collapsed at build time.
    pub fn add_edge(&mut self, citer: PaperId, cited: PaperId) -> Result<()> {
        let n = self.meta.len();
        for v in [citer, cited] {
            if v.index() >= n {
                return Err(Error::InactivePaper(v));
            }
        }
        if citer == cited {
            return Err(Error::SelfLoop(self.meta[citer.index()].key.clone()));
        }
        self.edges.push((citer.0, cited.0));
        Ok(())
    }

    pub fn add_edge_by_key(&mut self, citer: &str, cited: &str) -> Result<()> {
        let u = self
            .paper_by_key(citer)
            .ok_or_else(|| Error::UnknownKey(citer.to_owned()))?;
        let v = self
            .paper_by_key(cited)
            .ok_or_else(|| Error::UnknownKey(cited.to_owned()))?;
        self.add_edge(u, v)
    }

    pub fn build(self) -> CitationGraph {
        let n = self.meta.len();
        let mut fwd = self.edges;
        fwd.sort_unstable();
        fwd.dedup();
        let mut bwd: Vec<(u32, u32)> = fwd.iter().map(|&(u, v)| (v, u)).collect();
        bwd.sort_unstable();
        CitationGraph {
            refs: Csr::from_sorted_pairs(n, &fwd),
            cites: Csr::from_sorted_pairs(n, &bwd),
            meta: self.meta,
            venues: self.venues,
            authors: self.authors,
            keys: self.keys,
        }
    }
}

/// Set of active papers over a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphMask {
    active: Vec<bool>,
    count: usize,
}

impl GraphMask {
    pub fn full(n: usize) -> Self {
        Self { active: vec![true; n], count: n }
    }

    pub fn empty(n: usize) -> Self {
        Self { active: vec![false; n], count: 0 }
    }

    pub fn len(&self) -> usize {
        self.active.len()
    }

    pub fn is_empty(&self) -> bool {
        self.active.is_empty()
    }

    pub fn active_count(&self) -> usize {
        self.count
    }

    #[inline]
    pub fn is_active(&self, v: PaperId) -> bool {
        self.active.get(v.index()).copied().unwrap_or(false)
    }

    pub fn activate(&mut self, v: PaperId) {
        if let Some(slot) = self.active.get_mut(v.index()) {
            if !*slot {
                *slot = true;
                self.count += 1;
            }
        }
    }

    pub fn deactivate(&mut self, v: PaperId) {
        if let Some(slot) = self.active.get_mut(v.index()) {
            if *slot {
                *slot = false;
                self.count -= 1;
            }
        }
    }

    pub fn iter_active(&self) -> impl Iterator<Item = PaperId> + '_ {
        self.active
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(i, _)| PaperId(i as u32))
    }

    /// True if every paper active here is active in `other`.
    pub fn is_subset_of(&self, other: &GraphMask) -> bool {
        self.active.len() == other.active.len()
            && self.active.iter().zip(&other.active).all(|(&a, &b)| !a || b)
    }
}

/// Activates papers with a known year `<= year`, minus `exclude`.
///
/// Papers with unknown year are always inactive in the result.
pub fn prune_after_year(g: &CitationGraph, year: u16, exclude: &HashSet<PaperId>) -> GraphMask {
    let mut mask = GraphMask::empty(g.paper_count());
    for v in g.papers() {
        let y = g.year(v);
        if y != UNKNOWN_YEAR && y <= year && !exclude.contains(&v) {
            mask.activate(v);
        }
    }
    mask
}

/// A graph restricted to the papers of a mask, with cached masked degrees.
#[derive(Debug, Clone)]
pub struct GraphView<'g> {
    graph: &'g CitationGraph,
    mask: GraphMask,
    ref_deg: Vec<u32>,
    cite_deg: Vec<u32>,
}

impl<'g> GraphView<'g> {
    pub fn new(graph: &'g CitationGraph, mask: GraphMask) -> Self {
        assert_eq!(mask.len(), graph.paper_count(), "mask size differs from graph");
        let n = graph.paper_count();
        let mut ref_deg = vec![0u32; n];
        let mut cite_deg = vec![0u32; n];
        for u in graph.papers() {
            if !mask.is_active(u) {
                continue;
            }
            for &v in graph.refs(u) {
                if mask.is_active(v) {
                    ref_deg[u.index()] += 1;
                    cite_deg[v.index()] += 1;
                }
            }
        }
        Self { graph, mask, ref_deg, cite_deg }
    }

    pub fn graph(&self) -> &'g CitationGraph {
        self.graph
    }

    pub fn mask(&self) -> &GraphMask {
        &self.mask
    }

    pub fn into_mask(self) -> GraphMask {
        self.mask
    }

    pub fn paper_count(&self) -> usize {
        self.graph.paper_count()
    }

    #[inline]
    pub fn is_active(&self, v: PaperId) -> bool {
        self.mask.is_active(v)
    }

    pub fn active_papers(&self) -> impl Iterator<Item = PaperId> + '_ {
        self.mask.iter_active()
    }

    /// Active references of `v` (papers `v` cites).
    pub fn refs(&self, v: PaperId) -> impl Iterator<Item = PaperId> + '_ {
        self.graph
            .refs(v)
            .iter()
            .copied()
            .filter(move |&u| self.mask.is_active(u))
    }

    /// Active papers citing `v`.
    pub fn citers(&self, v: PaperId) -> impl Iterator<Item = PaperId> + '_ {
        self.graph
            .citers(v)
            .iter()
            .copied()
            .filter(move |&u| self.mask.is_active(u))
    }

    /// Active neighbours in either direction; a mutual citation yields the
    /// other paper twice.
    pub fn neighbors(&self, v: PaperId) -> impl Iterator<Item = PaperId> + '_ {
        self.refs(v).chain(self.citers(v))
    }

    /// Number of active references (deg⁻). Zero for inactive papers.
    #[inline]
    pub fn ref_degree(&self, v: PaperId) -> usize {
        self.ref_deg[v.index()] as usize
    }

    /// Number of active citers (deg⁺). Zero for inactive papers.
    #[inline]
    pub fn cite_degree(&self, v: PaperId) -> usize {
        self.cite_deg[v.index()] as usize
    }

    /// `(references, citations)` of an active paper.
    pub fn degrees(&self, v: PaperId) -> Result<(usize, usize)> {
        self.require_active(v)?;
        Ok((self.ref_degree(v), self.cite_degree(v)))
    }

    pub fn require_active(&self, v: PaperId) -> Result<()> {
        if self.mask.is_active(v) {
            Ok(())
        } else {
            Err(Error::InactivePaper(v))
        }
    }

    pub fn active_edge_count(&self) -> usize {
        self.ref_deg.iter().map(|&d| d as usize).sum()
    }
}

/// Sentinel distance for unreachable papers in [`undirected_distances`].
pub const UNREACHABLE: u32 = u32::MAX;

/// Hop distances from a set of sources over the undirected view of the
/// active graph. Inactive sources are ignored.
pub fn undirected_distances(view: &GraphView<'_>, from: &[PaperId]) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; view.paper_count()];
    let mut queue = VecDeque::new();
    for &s in from {
        if view.is_active(s) && dist[s.index()] == UNREACHABLE {
            dist[s.index()] = 0;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let next = dist[u.index()] + 1;
        for w in view.neighbors(u) {
            if dist[w.index()] == UNREACHABLE {
                dist[w.index()] = next;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Minimum hop count from any of `from` to `to`, or `None` when unreachable.
pub fn shortest_distance(view: &GraphView<'_>, from: &[PaperId], to: PaperId) -> Result<Option<u32>> {
    if from.is_empty() {
        return Err(Error::EmptySeeds);
    }
    if from.contains(&to) && view.is_active(to) {
        return Ok(Some(0));
    }
    let d = undirected_distances(view, from)
        .get(to.index())
        .copied()
        .unwrap_or(UNREACHABLE);
    Ok((d != UNREACHABLE).then_some(d))
}

/// Citation-edge density of `v`'s closed neighbourhood:
/// `|{(i, j) in E : i, j in N ∪ {v}}| / (|N| (|N| + 1))`, where `N` is the
/// set of active papers citing or cited by `v`. Zero when `N` is empty.
pub fn clustering_coefficient(view: &GraphView<'_>, v: PaperId) -> Result<f64> {
    view.require_active(v)?;
    let mut members: Vec<PaperId> = view.neighbors(v).collect();
    members.sort_unstable();
    members.dedup();
    let k = members.len();
    if k == 0 {
        return Ok(0.0);
    }
    members.push(v);
    members.sort_unstable();
    let mut inside = 0usize;
    for &i in &members {
        inside += view
            .graph()
            .refs(i)
            .iter()
            .filter(|j| members.binary_search(j).is_ok())
            .count();
    }
    Ok(inside as f64 / (k * (k + 1)) as f64)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Builds a graph from `(key, year)` papers and `(citer, cited)` key pairs.
    pub fn graph(papers: &[(&str, i64)], edges: &[(&str, &str)]) -> CitationGraph {
        let mut b = GraphBuilder::new();
        for &(k, y) in papers {
            b.add_paper::<&str>(k, &format!("Paper {k}"), y, None, &[]).unwrap();
        }
        for &(u, v) in edges {
            b.add_edge_by_key(u, v).unwrap();
        }
        b.build()
    }

    /// B→A, C→B, C→A.
    pub fn triangle() -> CitationGraph {
        graph(
            &[("A", 1990), ("B", 2000), ("C", 2010)],
            &[("B", "A"), ("C", "B"), ("C", "A")],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn id(g: &CitationGraph, k: &str) -> PaperId {
        g.paper_by_key(k).unwrap()
    }

    #[test]
    fn isolated_paper_has_no_degree() {
        let g = graph(&[("A", 2000)], &[]);
        assert_eq!(g.full_view().degrees(PaperId(0)).unwrap(), (0, 0));
    }

    #[test]
    fn triangle_degrees() {
        let g = triangle();
        let a = id(&g, "A");
        assert_eq!(g.full_view().degrees(a).unwrap(), (0, 2));
        let mut mask = g.full_mask();
        mask.deactivate(id(&g, "C"));
        let view = g.view(mask);
        assert_eq!(view.degrees(a).unwrap(), (0, 1));
        assert!(view.degrees(id(&g, "C")).is_err());
        assert!(view.degrees(PaperId(7)).is_err());
    }

    #[test]
    fn duplicate_edges_collapse_and_self_loops_fail() {
        let mut b = GraphBuilder::new();
        let a = b.add_paper::<&str>("a", "A", 2000, None, &[]).unwrap();
        let c = b.add_paper::<&str>("c", "C", 2001, None, &[]).unwrap();
        b.add_edge(c, a).unwrap();
        b.add_edge(c, a).unwrap();
        assert!(matches!(b.add_edge(a, a), Err(Error::SelfLoop(_))));
        let g = b.build();
        assert_eq!(g.edge_count(), 1);
        g.check_consistency().unwrap();
    }

    #[test]
    fn builder_rejects_bad_years_and_dedups_authors() {
        let mut b = GraphBuilder::new();
        assert!(b.add_paper::<&str>("x", "X", 1850, None, &[]).is_err());
        let p = b.add_paper("y", "Y", 0, Some("V"), &["ann", "bob", "ann"]).unwrap();
        assert!(matches!(b.add_paper::<&str>("y", "Y", 0, None, &[]), Err(Error::DuplicateKey(_))));
        let g = b.build();
        assert_eq!(g.meta(p).authors.len(), 2);
    }

    #[test]
    fn prune_after_year_examples() {
        let g = graph(&[("a", 1990), ("b", 2005), ("c", 2010), ("u", 0)], &[]);
        let m = prune_after_year(&g, 2005, &HashSet::new());
        let active: Vec<_> = m.iter_active().collect();
        assert_eq!(active, vec![id(&g, "a"), id(&g, "b")]);

        let m = prune_after_year(&g, 2005, &HashSet::from([id(&g, "b")]));
        assert_eq!(m.iter_active().collect::<Vec<_>>(), vec![id(&g, "a")]);

        assert_eq!(prune_after_year(&g, 1950, &HashSet::new()).active_count(), 0);
    }

    #[test]
    fn distances() {
        let g = graph(
            &[("A", 1990), ("B", 1991), ("C", 1992), ("D", 1993)],
            &[("D", "C"), ("C", "B"), ("B", "A")],
        );
        let v = g.full_view();
        let (a, b, d) = (id(&g, "A"), id(&g, "B"), id(&g, "D"));
        assert_eq!(shortest_distance(&v, &[a], a).unwrap(), Some(0));
        assert_eq!(shortest_distance(&v, &[b], a).unwrap(), Some(1));
        assert_eq!(shortest_distance(&v, &[d], a).unwrap(), Some(3));
        assert_eq!(shortest_distance(&v, &[a], d).unwrap(), Some(3));
        assert!(shortest_distance(&v, &[], a).is_err());

        let mut mask = g.full_mask();
        mask.deactivate(id(&g, "C"));
        assert_eq!(shortest_distance(&g.view(mask), &[d], a).unwrap(), None);
    }

    #[test]
    fn clustering_examples() {
        let g = graph(&[("A", 1990)], &[]);
        assert_eq!(clustering_coefficient(&g.full_view(), PaperId(0)).unwrap(), 0.0);

        let g = triangle();
        let cb = clustering_coefficient(&g.full_view(), id(&g, "B")).unwrap();
        assert!((cb - 0.5).abs() < 1e-15);

        let papers: Vec<(String, i64)> = std::iter::once(("v".to_string(), 1990))
            .chain((0..5).map(|i| (format!("c{i}"), 2000)))
            .collect();
        let papers: Vec<(&str, i64)> = papers.iter().map(|(k, y)| (k.as_str(), *y)).collect();
        let edges: Vec<(String, String)> = (0..5).map(|i| (format!("c{i}"), "v".into())).collect();
        let edges: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let g = graph(&papers, &edges);
        let c = clustering_coefficient(&g.full_view(), id(&g, "v")).unwrap();
        assert!((c - 5.0 / 30.0).abs() < 1e-15);
    }
}
