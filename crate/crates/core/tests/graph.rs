mod common;

use std::collections::HashSet;

use advisor_core::graph::{
    clustering_coefficient, prune_after_year, shortest_distance, undirected_distances, GraphBuilder, PaperId,
    UNREACHABLE,
};
use common::{arb_case, build, relax_distances};
use proptest::prelude::*;

proptest! {
    #[test]
    fn adjacency_is_dual_and_sorted(case in arb_case(15)) {
        let g = &case.graph;
        prop_assert!(g.check_consistency().is_ok());
        let mut out_total = 0;
        let mut in_total = 0;
        for v in g.papers() {
            prop_assert!(g.refs(v).windows(2).all(|w| w[0] < w[1]));
            prop_assert!(g.citers(v).windows(2).all(|w| w[0] < w[1]));
            prop_assert!(!g.refs(v).contains(&v));
            for &w in g.refs(v) {
                prop_assert!(g.citers(w).contains(&v));
            }
            out_total += g.refs(v).len();
            in_total += g.citers(v).len();
        }
        prop_assert_eq!(out_total, g.edge_count());
        prop_assert_eq!(in_total, g.edge_count());
    }

    #[test]
    fn masked_degrees_count_active_endpoints(case in arb_case(15)) {
        let view = case.view();
        let g = &case.graph;
        for v in g.papers() {
            if !view.is_active(v) {
                prop_assert!(view.degrees(v).is_err());
                continue;
            }
            let refs = g.edges().filter(|&(a, b)| a == v && view.is_active(b)).count();
            let cites = g.edges().filter(|&(a, b)| b == v && view.is_active(a)).count();
            prop_assert_eq!(view.degrees(v).unwrap(), (refs, cites));
        }
    }

    #[test]
    fn pruning_is_monotone_and_idempotent(case in arb_case(15), y1 in 1985u16..2010, dy in 0u16..10) {
        let g = &case.graph;
        let none = HashSet::new();
        let a = prune_after_year(g, y1, &none);
        let b = prune_after_year(g, y1 + dy, &none);
        prop_assert!(a.is_subset_of(&b));
        prop_assert_eq!(&a, &prune_after_year(g, y1, &none));
        for v in g.papers() {
            prop_assert_eq!(a.is_active(v), g.year(v) != 0 && g.year(v) <= y1);
        }
    }

    #[test]
    fn distances_match_relaxation(case in arb_case(15)) {
        let view = case.view();
        let got = undirected_distances(&view, &case.seeds);
        prop_assert_eq!(&got, &relax_distances(&view, &case.seeds));
        for v in view.graph().papers() {
            let d = shortest_distance(&view, &case.seeds, v).unwrap();
            prop_assert_eq!(d, (got[v.index()] != UNREACHABLE).then_some(got[v.index()]));
        }
    }

    #[test]
    fn distances_obey_triangle_inequality(case in arb_case(12)) {
        let view = case.view();
        let active: Vec<PaperId> = view.active_papers().collect();
        let all: Vec<Vec<u32>> = active.iter().map(|&a| undirected_distances(&view, &[a])).collect();
        for (i, _) in active.iter().enumerate() {
            for (j, &b) in active.iter().enumerate() {
                for &c in &active {
                    let (ab, bc, ac) = (all[i][b.index()], all[j][c.index()], all[i][c.index()]);
                    if ab != UNREACHABLE && bc != UNREACHABLE {
                        prop_assert!(ac <= ab + bc);
                    }
                }
            }
        }
    }

    #[test]
    fn clustering_matches_definition_and_is_bounded(case in arb_case(15)) {
        let view = case.view();
        let g = &case.graph;
        for v in view.active_papers() {
            let nb: HashSet<PaperId> = g
                .refs(v)
                .iter()
                .chain(g.citers(v))
                .copied()
                .filter(|&u| view.is_active(u))
                .collect();
            let got = clustering_coefficient(&view, v).unwrap();
            let k = nb.len();
            let want = if k == 0 {
                0.0
            } else {
                let inside = |u: PaperId| u == v || nb.contains(&u);
                let e = g.edges().filter(|&(a, b)| inside(a) && inside(b)).count();
                e as f64 / (k * (k + 1)) as f64
            };
            prop_assert!((got - want).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&got));
        }
    }

    #[test]
    fn rebuilding_from_edges_is_identity(case in arb_case(15)) {
        let g = &case.graph;
        let edges: Vec<(usize, usize)> = g.edges().map(|(a, b)| (a.index(), b.index())).collect();
        prop_assert_eq!(&build(g.paper_count(), &edges), g);
    }
}

#[test]
fn degree_examples() {
    // B→A, C→B, C→A
    let g = build(3, &[(1, 0), (2, 1), (2, 0)]);
    assert_eq!(g.full_view().degrees(PaperId(0)).unwrap(), (0, 2));
    let mut m = g.full_mask();
    m.deactivate(PaperId(2));
    assert_eq!(g.view(m).degrees(PaperId(0)).unwrap(), (0, 1));
    let lone = build(1, &[]);
    assert_eq!(lone.full_view().degrees(PaperId(0)).unwrap(), (0, 0));
}

#[test]
fn chain_distance_and_star_clustering() {
    // D→C→B→A
    let g = build(4, &[(3, 2), (2, 1), (1, 0)]);
    assert_eq!(shortest_distance(&g.full_view(), &[PaperId(3)], PaperId(0)).unwrap(), Some(3));
    let star = build(6, &[(1, 0), (2, 0), (3, 0), (4, 0), (5, 0)]);
    let c = clustering_coefficient(&star.full_view(), PaperId(0)).unwrap();
    assert!((c - 5.0 / 30.0).abs() < 1e-12);
}

#[test]
fn complete_neighbourhood_reaches_one() {
    // every ordered pair among 4 papers, except the impossible reverse of
    // nothing: with both directions the bound k(k+1) is met exactly
    let mut edges = Vec::new();
    for u in 0..4 {
        for v in 0..4 {
            if u != v {
                edges.push((u, v));
            }
        }
    }
    let g = build(4, &edges);
    for v in g.papers() {
        assert_eq!(clustering_coefficient(&g.full_view(), v).unwrap(), 1.0);
    }
}

#[test]
fn builder_rejects_invalid_input() {
    let mut b = GraphBuilder::new();
    let a = b.add_paper::<&str>("a", "A", 2000, None, &[]).unwrap();
    assert!(b.add_paper::<&str>("a", "A again", 2000, None, &[]).is_err());
    assert!(b.add_paper::<&str>("x", "X", 1800, None, &[]).is_err());
    assert!(b.add_edge(a, a).is_err());
    assert!(b.add_edge_by_key("a", "missing").is_err());
}
