//! Merging bibliographic metadata with reference lists.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Deserializer, Serialize};

use super::title::{MatchConfig, TitleIndex};
use crate::graph::{CitationGraph, GraphBuilder, PaperId};

/// One bibliographic record (title, year, venue, authors).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetaRecord {
    pub key: String,
    pub title: String,
    #[serde(default)]
    pub year: i64,
    #[serde(default)]
    pub venue: Option<String>,
    #[serde(default)]
    pub authors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefEntry {
    pub title: String,
    #[serde(default, deserialize_with = "year_or_zero")]
    pub year: i64,
}

/// A document together with the titles it references.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefRecord {
    pub title: String,
    #[serde(default, deserialize_with = "year_or_zero")]
    pub year: i64,
    #[serde(default)]
    pub references: Vec<RefEntry>,
}

fn year_or_zero<'de, D: Deserializer<'de>>(d: D) -> Result<i64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Year {
        Num(i64),
        Text(String),
    }
    Ok(match Option::<Year>::deserialize(d)? {
        Some(Year::Num(y)) => y,
        Some(Year::Text(s)) => s.trim().parse().unwrap_or(0),
        None => 0,
    })
}

/// Counts describing a merge.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildReport {
    /// Papers in the graph.
    pub documents: usize,
    /// Papers matched by at least one reference record.
    pub matched_documents: usize,
    pub authors: usize,
    pub edges: usize,
    pub ref_records: usize,
    pub unmatched_ref_records: usize,
    pub references_seen: usize,
    pub references_resolved: usize,
    /// Metadata records dropped for an empty title or a repeated key.
    pub skipped_meta_records: usize,
    /// Metadata years outside 1900..=2100, stored as unknown.
    pub invalid_years: usize,
}

fn clamp_year(y: i64) -> u16 {
    if (1900..=2100).contains(&y) {
        y as u16
    } else {
        0
    }
}

/// Builds the citation graph: every metadata record becomes a paper, each
/// reference record is matched to at most one paper by title and year, and
/// reference lists of records mapping to the same paper are unioned.
/// References that match no paper are dropped.
pub fn build_graph(meta: &[MetaRecord], refs: &[RefRecord], config: MatchConfig) -> (CitationGraph, BuildReport) {
    let mut report = BuildReport::default();
    let mut b = GraphBuilder::new();
    let mut index = TitleIndex::new(config);
    let mut ids: Vec<PaperId> = Vec::new();

    for m in meta {
        if m.title.trim().is_empty() || b.paper_by_key(&m.key).is_some() {
            report.skipped_meta_records += 1;
            continue;
        }
        let year = if (1900..=2100).contains(&m.year) || m.year == 0 {
            m.year
        } else {
            report.invalid_years += 1;
            0
        };
        let id = b
            .add_paper(&m.key, &m.title, year, m.venue.as_deref(), &m.authors)
            .expect("key and year validated above");
        index.push(&m.title, year as u16);
        ids.push(id);
    }

    let mut matched = HashSet::new();
    let mut edges = BTreeSet::new();
    for r in refs {
        report.ref_records += 1;
        report.references_seen += r.references.len();
        let Some(src) = index.match_record(&r.title, clamp_year(r.year)) else {
            report.unmatched_ref_records += 1;
            continue;
        };
        let src = ids[src as usize];
        matched.insert(src);
        for e in &r.references {
            if let Some(dst) = index.match_record(&e.title, clamp_year(e.year)) {
                report.references_resolved += 1;
                let dst = ids[dst as usize];
                if dst != src {
                    edges.insert((src, dst));
                }
            }
        }
    }
    for (u, v) in edges {
        b.add_edge(u, v).expect("endpoints exist and differ");
    }

    let g = b.build();
    report.documents = g.paper_count();
    report.matched_documents = matched.len();
    report.authors = g.author_count();
    report.edges = g.edge_count();
    (g, report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta(key: &str, title: &str, year: i64) -> MetaRecord {
        MetaRecord {
            key: key.into(),
            title: title.into(),
            year,
            venue: Some("VLDB".into()),
            authors: vec!["Ann".into()],
        }
    }

    fn rr(title: &str, year: i64, refs: &[&str]) -> RefRecord {
        RefRecord {
            title: title.into(),
            year,
            references: refs.iter().map(|t| RefEntry { title: (*t).into(), year: 0 }).collect(),
        }
    }

    fn corpus() -> Vec<MetaRecord> {
        vec![
            meta("a", "Alpha methods for sparse graphs", 1999),
            meta("b", "Beta estimators under noise", 2001),
            meta("s", "Source paper on citation ranking", 2005),
        ]
    }

    #[test]
    fn merges_reference_lists_of_duplicate_sources() {
        let refs = vec![
            rr("Source paper on citation ranking", 2005, &["Alpha methods for sparse graphs"]),
            rr(
                "Source paper on citation rankng",
                2005,
                &["Alpha methods for sparse graphs", "Beta estimators under noise"],
            ),
        ];
        let (g, report) = build_graph(&corpus(), &refs, MatchConfig::default());
        let s = g.paper_by_key("s").unwrap();
        let got: Vec<&str> = g.refs(s).iter().map(|&v| g.meta(v).key.as_str()).collect();
        assert_eq!(got, vec!["a", "b"]);
        assert_eq!(report.matched_documents, 1);
        assert_eq!(report.edges, 2);
        assert_eq!(report.documents, 3);
        assert_eq!(report.authors, 1);
        g.check_consistency().unwrap();
    }

    #[test]
    fn unmatched_sources_and_references_are_dropped() {
        let refs = vec![
            rr("Something nobody wrote", 2005, &["Alpha methods for sparse graphs"]),
            rr("Beta estimators under noise", 2001, &["An unknown reference"]),
        ];
        let (g, report) = build_graph(&corpus(), &refs, MatchConfig::default());
        assert_eq!(g.edge_count(), 0);
        assert_eq!(report.unmatched_ref_records, 1);
        assert_eq!(report.references_resolved, 0);
    }

    #[test]
    fn bad_meta_records_are_reported() {
        let mut m = corpus();
        m.push(meta("a", "Duplicate key", 2000));
        m.push(meta("e", "   ", 2000));
        m.push(meta("f", "Far future", 3000));
        let (g, report) = build_graph(&m, &[], MatchConfig::default());
        assert_eq!(g.paper_count(), 4);
        assert_eq!(report.skipped_meta_records, 2);
        assert_eq!(report.invalid_years, 1);
    }

    #[test]
    fn citeseer_json_years_are_lenient() {
        let r: RefRecord = serde_json::from_str(
            r#"{"title":"T","year":null,"references":[{"title":"U","year":"1999"},{"title":"V"}]}"#,
        )
        .unwrap();
        assert_eq!(r.year, 0);
        assert_eq!(r.references[0].year, 1999);
        assert_eq!(r.references[1].year, 0);
    }
}
