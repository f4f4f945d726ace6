//! Independent reference implementations and random graph generators shared
//! by the integration tests. Nothing here calls into the rankers.

#![allow(dead_code)]

use advisor_core::graph::{CitationGraph, GraphBuilder, GraphMask, GraphView, PaperId};
use proptest::prelude::*;
use rand::Rng;

/// A small graph with a mask and a seed set drawn from its active papers.
#[derive(Debug, Clone)]
pub struct Case {
    pub graph: CitationGraph,
    pub mask: GraphMask,
    pub seeds: Vec<PaperId>,
}

impl Case {
    /// `edges` may contain self-loops and duplicates; both are dropped.
    /// Seeds are forced active.
    pub fn new(n: usize, edges: &[(usize, usize)], active: &[bool], seeds: &[usize]) -> Self {
        let graph = build(n, edges);
        let mut mask = GraphMask::empty(n);
        for (i, &on) in active.iter().enumerate() {
            if on {
                mask.activate(PaperId(i as u32));
            }
        }
        let mut s: Vec<PaperId> = seeds.iter().map(|&i| PaperId(i as u32)).collect();
        s.sort_unstable();
        s.dedup();
        for &v in &s {
            mask.activate(v);
        }
        Case { graph, mask, seeds: s }
    }

    pub fn random<R: Rng>(rng: &mut R, max_n: usize) -> Self {
        let n = rng.gen_range(1..=max_n);
        let density = rng.gen_range(0.0..0.5);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.gen::<f64>() < density {
                    edges.push((u, v));
                }
            }
        }
        let active: Vec<bool> = (0..n).map(|_| rng.gen::<f64>() < 0.85).collect();
        let seeds: Vec<usize> = (0..rng.gen_range(1..=3.min(n))).map(|_| rng.gen_range(0..n)).collect();
        Case::new(n, &edges, &active, &seeds)
    }

    pub fn view(&self) -> GraphView<'_> {
        self.graph.view(self.mask.clone())
    }
}

pub fn build(n: usize, edges: &[(usize, usize)]) -> CitationGraph {
    let mut b = GraphBuilder::new();
    for i in 0..n {
        b.add_paper::<&str>(&format!("p{i}"), &format!("Paper number {i}"), 1990 + i as i64, None, &[])
            .unwrap();
    }
    for &(u, v) in edges {
        if u != v {
            b.add_edge(PaperId(u as u32), PaperId(v as u32)).unwrap();
        }
    }
    b.build()
}

pub fn arb_case(max_n: usize) -> impl Strategy<Value = Case> {
    (1..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec((0..n, 0..n), 0..=n * 3),
                proptest::collection::vec(proptest::bool::weighted(0.85), n),
                proptest::collection::vec(0..n, 1..=3),
            )
        })
        .prop_map(|(n, edges, active, seeds)| Case::new(n, &edges, &active, &seeds))
}

fn active_refs(view: &GraphView<'_>, u: PaperId) -> Vec<PaperId> {
    view.graph().refs(u).iter().copied().filter(|&v| view.is_active(v)).collect()
}

fn active_citers(view: &GraphView<'_>, u: PaperId) -> Vec<PaperId> {
    view.graph().citers(u).iter().copied().filter(|&v| view.is_active(v)).collect()
}

/// Steady state of the seeded walk, solved directly.
///
/// State `n` is the source. Returns `(paper scores, source score)`; inactive
/// papers score 0. `lambda = None` gives the undirected (PaperRank) split.
pub fn dense_walk(view: &GraphView<'_>, seeds: &[PaperId], d: f64, lambda: Option<f64>) -> (Vec<f64>, f64) {
    let n = view.paper_count();
    let src = n;
    // p[to][from]: probability of moving from `from` to `to`
    let mut p = vec![vec![0.0; n + 1]; n + 1];
    for u in view.active_papers() {
        let i = u.index();
        let refs = active_refs(view, u);
        let cites = active_citers(view, u);
        p[src][i] += 1.0 - d;
        match lambda {
            None => {
                let deg = (refs.len() + cites.len()) as f64;
                if deg == 0.0 {
                    p[src][i] += d;
                }
                for v in refs.iter().chain(&cites) {
                    p[v.index()][i] += d / deg;
                }
            }
            Some(l) => {
                let (to_cites, to_refs) = match (cites.is_empty(), refs.is_empty()) {
                    (false, false) => (d * l, d * (1.0 - l)),
                    (false, true) => (d, 0.0),
                    (true, false) => (0.0, d),
                    (true, true) => {
                        p[src][i] += d;
                        (0.0, 0.0)
                    }
                };
                for v in &cites {
                    p[v.index()][i] += to_cites / cites.len() as f64;
                }
                for v in &refs {
                    p[v.index()][i] += to_refs / refs.len() as f64;
                }
            }
        }
    }
    for s in seeds {
        p[s.index()][src] += 1.0 / seeds.len() as f64;
    }

    // Unknowns: active papers and the source. Solve (P - I)x = 0, Σx = 1.
    let states: Vec<usize> = view.active_papers().map(|v| v.index()).chain([src]).collect();
    let m = states.len();
    let mut a = vec![vec![0.0; m + 1]; m];
    for (r, &to) in states.iter().enumerate() {
        for (c, &from) in states.iter().enumerate() {
            a[r][c] = p[to][from] - if to == from { 1.0 } else { 0.0 };
        }
    }
    for c in 0..m {
        a[m - 1][c] = 1.0;
    }
    a[m - 1][m] = 1.0;
    let x = gauss(a);
    let mut scores = vec![0.0; n];
    for (k, &st) in states.iter().enumerate().take(m - 1) {
        scores[st] = x[k];
    }
    (scores, x[m - 1])
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
pub fn gauss(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let m = a.len();
    for col in 0..m {
        let piv = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        let pv = a[col][col];
        assert!(pv.abs() > 1e-300, "singular system");
        for r in 0..m {
            if r != col {
                let f = a[r][col] / pv;
                if f != 0.0 {
                    for c in col..=m {
                        a[r][c] -= f * a[col][c];
                    }
                }
            }
        }
    }
    (0..m).map(|i| a[i][m] / a[i][i]).collect()
}

/// Katz scores by enumerating every walk of length `1..=max_len` from every
/// seed. With `lambda`, a walk whose last step moves to a citing paper is
/// weighted `lambda`, one whose last step moves to a reference `1 - lambda`.
pub fn katz_enum(view: &GraphView<'_>, seeds: &[PaperId], beta: f64, max_len: usize, lambda: Option<f64>) -> Vec<f64> {
    #[derive(Clone, Copy)]
    enum Step {
        ToCiter,
        ToRef,
    }
    fn walk(
        view: &GraphView<'_>,
        at: PaperId,
        len: usize,
        weight: f64,
        ctx: (f64, usize, Option<f64>),
        out: &mut Vec<f64>,
    ) {
        let (beta, max_len, lambda) = ctx;
        if len == max_len {
            return;
        }
        let w = weight * beta;
        let steps = active_citers(view, at)
            .into_iter()
            .map(|v| (v, Step::ToCiter))
            .chain(active_refs(view, at).into_iter().map(|v| (v, Step::ToRef)));
        for (v, step) in steps {
            let dir = match (lambda, step) {
                (None, _) => 1.0,
                (Some(l), Step::ToCiter) => l,
                (Some(l), Step::ToRef) => 1.0 - l,
            };
            out[v.index()] += w * dir;
            walk(view, v, len + 1, w, ctx, out);
        }
    }
    let mut out = vec![0.0; view.paper_count()];
    let mut s = seeds.to_vec();
    s.sort_unstable();
    s.dedup();
    for seed in s {
        walk(view, seed, 0, 1.0, (beta, max_len, lambda), &mut out);
    }
    out
}

/// Undirected BFS distances by repeated relaxation (Bellman-Ford style).
pub fn relax_distances(view: &GraphView<'_>, from: &[PaperId]) -> Vec<u32> {
    let n = view.paper_count();
    let mut dist = vec![u32::MAX; n];
    for &f in from {
        if view.is_active(f) {
            dist[f.index()] = 0;
        }
    }
    loop {
        let mut changed = false;
        for (u, v) in view.graph().edges() {
            if !(view.is_active(u) && view.is_active(v)) {
                continue;
            }
            for (a, b) in [(u, v), (v, u)] {
                let da = dist[a.index()];
                if da != u32::MAX && da + 1 < dist[b.index()] {
                    dist[b.index()] = da + 1;
                    changed = true;
                }
            }
        }
        if !changed {
            return dist;
        }
    }
}

pub fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
