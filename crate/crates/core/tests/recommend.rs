use std::collections::{HashMap, HashSet};

use advisor_core::graph::{CitationGraph, GraphBuilder, PaperId};
use advisor_core::ingest::{synth_corpus, SynthParams};
use advisor_core::rankers::{darwr, Algorithm, RankerParams};
use advisor_core::recommend::{recommend_experts, recommend_papers, recommend_venues, FeedbackSession, Query};
use advisor_core::Error;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn corpus(papers: usize, seed: u64) -> CitationGraph {
    synth_corpus(&SynthParams { papers, mean_refs: 6.0, seed, ..SynthParams::default() }).unwrap()
}

#[test]
fn venue_and_expert_sums_match_direct_accumulation() {
    let g = corpus(300, 3);
    let seeds = vec![PaperId(250), PaperId(260), PaperId(299)];
    let q = Query::new(seeds.clone(), 1000, Algorithm::DaRwr);
    let scores = darwr(&g.full_view(), &seeds, &RankerParams::default()).unwrap();

    let mut venues: HashMap<&str, f64> = HashMap::new();
    let mut authors: HashMap<&str, f64> = HashMap::new();
    for v in g.papers() {
        let m = g.meta(v);
        if let Some(x) = m.venue {
            *venues.entry(g.venue_name(x)).or_default() += scores.scores[v.index()];
        }
        for &a in &m.authors {
            *authors.entry(g.author_name(a)).or_default() += scores.scores[v.index()];
        }
    }

    let got = recommend_venues(&g, &q).unwrap();
    assert_eq!(got.len(), venues.values().filter(|&&s| s > 0.0).count());
    for s in &got {
        assert!((venues[g.venue_name(s.id)] - s.score).abs() < 1e-12);
    }
    assert!(got.windows(2).all(|w| w[0].score >= w[1].score));

    let got = recommend_experts(&g, &q).unwrap();
    assert_eq!(got.len(), authors.values().filter(|&&s| s > 0.0).count());
    for s in &got {
        assert!((authors[g.author_name(s.id)] - s.score).abs() < 1e-12);
    }
}

#[test]
fn year_cutoff_hides_later_papers() {
    let g = corpus(300, 4);
    let seed = PaperId(150);
    let q = Query::new(vec![seed], 50, Algorithm::PaperRank).with_year_cutoff(g.year(seed));
    let top = recommend_papers(&g, &q).unwrap();
    assert!(!top.is_empty());
    assert!(top.iter().all(|s| g.year(s.id) <= g.year(seed) && s.id != seed));

    let too_early = Query::new(vec![seed], 5, Algorithm::PaperRank).with_year_cutoff(g.year(seed) - 1);
    assert!(matches!(recommend_papers(&g, &too_early), Err(Error::SeedsOutsideMask(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pages_never_repeat_and_respect_feedback(seed in 0u64..1000, page in 1usize..8) {
        let g = corpus(120, seed % 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let seeds: Vec<PaperId> = (0..rng.gen_range(1..4)).map(|_| PaperId(rng.gen_range(60..120))).collect();
        let q = Query::new(seeds.clone(), 10, Algorithm::DaRwr);
        let mut s = FeedbackSession::new(&g, "t", q).unwrap().with_page_size(page);
        let mut seen = HashSet::new();
        for _ in 0..10 {
            let shown = s.next_page(&g).unwrap();
            prop_assert!(shown.len() <= page);
            for r in &shown {
                prop_assert!(seen.insert(r.id), "paper shown twice");
                prop_assert!(!s.seeds().contains(&r.id));
                prop_assert!(!s.irrelevant().contains(&r.id));
            }
            let mut ids: Vec<PaperId> = shown.iter().map(|r| r.id).collect();
            ids.shuffle(&mut rng);
            let cut = rng.gen_range(0..=ids.len());
            let (pos, rest) = ids.split_at(cut);
            let neg = &rest[..rest.len() / 2];
            s.apply_feedback(pos, neg).unwrap();
            if shown.is_empty() {
                break;
            }
        }
        prop_assert_eq!(s.shown().len(), seen.len());
        for v in s.irrelevant() {
            prop_assert!(!s.mask().is_active(*v));
        }
    }
}

/// `s` cites eight fillers and `c`; `c` alone cites `t`.
fn fan() -> (CitationGraph, PaperId, PaperId, PaperId) {
    let mut b = GraphBuilder::new();
    let t = b.add_paper::<&str>("t", "target", 1990, None, &[]).unwrap();
    let c = b.add_paper::<&str>("c", "citer", 2000, None, &[]).unwrap();
    let s = b.add_paper::<&str>("s", "seed", 2010, None, &[]).unwrap();
    b.add_edge(c, t).unwrap();
    b.add_edge(s, c).unwrap();
    for i in 0..8 {
        let f = b.add_paper::<&str>(&format!("f{i}"), "filler", 2001 + i, None, &[]).unwrap();
        b.add_edge(s, f).unwrap();
    }
    (b.build(), s, c, t)
}

fn position_of(g: &CitationGraph, target: PaperId, mark: Option<PaperId>) -> usize {
    let q = Query::new(vec![PaperId(2)], 10, Algorithm::DaRwr);
    let mut s = FeedbackSession::new(g, "x", q).unwrap().with_page_size(3);
    loop {
        let page = s.next_page(g).unwrap();
        assert!(!page.is_empty(), "target never shown");
        if page.iter().any(|r| r.id == target) {
            return s.shown().iter().position(|&v| v == target).unwrap();
        }
        if let Some(m) = mark {
            if page.iter().any(|r| r.id == m) {
                s.apply_feedback(&[m], &[]).unwrap();
            }
        }
    }
}

#[test]
fn marking_a_citer_relevant_pulls_its_reference_forward() {
    let (g, s, c, t) = fan();
    assert_eq!(s, PaperId(2));
    let plain = position_of(&g, t, None);
    let helped = position_of(&g, t, Some(c));
    assert!(helped < plain, "{helped} vs {plain}");
}

#[test]
fn feedback_errors() {
    let (g, s, c, t) = fan();
    let mut sess = FeedbackSession::new(&g, "e", Query::new(vec![s], 10, Algorithm::DaRwr)).unwrap().with_page_size(9);
    assert!(matches!(sess.apply_feedback(&[t], &[]), Err(Error::FeedbackNotShown(_))));
    let page = sess.next_page(&g).unwrap();
    assert!(page.iter().any(|r| r.id == c));
    assert!(matches!(sess.apply_feedback(&[c], &[c]), Err(Error::FeedbackOverlap(_))));
    sess.apply_feedback(&[], &[c]).unwrap();
    assert!(matches!(sess.apply_feedback(&[c], &[]), Err(Error::FeedbackOverlap(_))));
    // with `c` gone, `t` is unreachable and never shown again
    let before = sess.shown().len();
    while !sess.next_page(&g).unwrap().is_empty() {}
    assert!(!sess.shown()[before..].contains(&t));
    assert!(!sess.mask().is_active(c));
    assert!(FeedbackSession::new(&g, "z", Query::new(vec![], 10, Algorithm::DaRwr)).is_err());
}
