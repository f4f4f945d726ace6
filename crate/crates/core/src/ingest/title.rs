//! Title normalisation and fuzzy title lookup.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use crate::graph::CitationGraph;

/// Lowercases, folds diacritics, turns punctuation into word breaks and
/// collapses whitespace. Apostrophes join their neighbours.
pub fn normalize_title(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut gap = false;
    let push = |out: &mut String, gap: &mut bool, s: &str| {
        if *gap && !out.is_empty() {
            out.push(' ');
        }
        *gap = false;
        out.push_str(s);
    };
    for c in raw.nfkd() {
        if is_combining_mark(c) || c == '\'' || c == '\u{2019}' {
            continue;
        }
        if let Some(folded) = fold_special(c) {
            push(&mut out, &mut gap, folded);
        } else if c.is_alphanumeric() {
            let lower: String = c.to_lowercase().collect();
            push(&mut out, &mut gap, &lower);
        } else {
            gap = true;
        }
    }
    out
}

/// Letters that do not decompose into a base letter plus marks.
fn fold_special(c: char) -> Option<&'static str> {
    Some(match c {
        'ß' => "ss",
        'æ' | 'Æ' => "ae",
        'œ' | 'Œ' => "oe",
        'ø' | 'Ø' => "o",
        'ł' | 'Ł' => "l",
        'đ' | 'Đ' => "d",
        'ı' => "i",
        'þ' | 'Þ' => "th",
        _ => return None,
    })
}

/// Thresholds for fuzzy title matching.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MatchConfig {
    /// Candidates must share at least this fraction of the query's words.
    pub min_word_overlap: f64,
    /// Edit distance allowed as a percentage of the normalised title length.
    pub max_edit_percent: usize,
    /// Edit distance always allowed, whatever the title length.
    pub min_edit: usize,
    /// Largest year difference accepted when both years are known.
    pub year_slack: u16,
}

impl Default for MatchConfig {
    fn default() -> Self {
        Self {
            min_word_overlap: 0.5,
            max_edit_percent: 10,
            min_edit: 2,
            year_slack: 1,
        }
    }
}

impl MatchConfig {
    pub fn edit_threshold(&self, title_chars: usize) -> usize {
        let relative = (title_chars * self.max_edit_percent).div_ceil(100);
        relative.max(self.min_edit)
    }
}

/// Inverted index from normalised title words to record ids.
#[derive(Debug, Clone, Default)]
pub struct TitleIndex {
    config: MatchConfig,
    titles: Vec<String>,
    years: Vec<u16>,
    postings: HashMap<String, Vec<u32>>,
}

/// A search hit: record id, fraction of query words it contains, and the
/// edit distance between the normalised strings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TitleHit {
    pub record: u32,
    pub overlap: f64,
    pub distance: usize,
}

impl TitleIndex {
    pub fn new(config: MatchConfig) -> Self {
        Self { config, ..Self::default() }
    }

    /// Indexes every paper title of a graph; record ids equal paper indices.
    pub fn from_graph(g: &CitationGraph, config: MatchConfig) -> Self {
        let mut idx = Self::new(config);
        for v in g.papers() {
            let m = g.meta(v);
            idx.push(&m.title, m.year);
        }
        idx
    }

    pub fn config(&self) -> &MatchConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.titles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.titles.is_empty()
    }

    pub fn normalized(&self, record: u32) -> &str {
        &self.titles[record as usize]
    }

    pub fn push(&mut self, title: &str, year: u16) -> u32 {
        let id = self.titles.len() as u32;
        let norm = normalize_title(title);
        for w in distinct_words(&norm) {
            self.postings.entry(w.to_owned()).or_default().push(id);
        }
        self.titles.push(norm);
        self.years.push(year);
        id
    }

    /// Records sharing enough of `words`, with their shared-word count.
    fn candidates(&self, words: &[&str]) -> Vec<(u32, usize)> {
        let mut counts: HashMap<u32, usize> = HashMap::new();
        for w in words {
            if let Some(list) = self.postings.get(*w) {
                for &r in list {
                    *counts.entry(r).or_default() += 1;
                }
            }
        }
        let need = self.config.min_word_overlap * words.len() as f64;
        let mut out: Vec<(u32, usize)> = counts
            .into_iter()
            .filter(|&(_, c)| c as f64 >= need)
            .collect();
        out.sort_unstable();
        out
    }

    /// Best record for a title, or `None` when nothing is close enough.
    ///
    /// Among candidates sharing enough words (and, when both years are
    /// known, within the year slack), picks the smallest edit distance,
    /// then the smallest record id.
    pub fn match_record(&self, title: &str, year: u16) -> Option<u32> {
        let query = normalize_title(title);
        let words = distinct_words(&query);
        if words.is_empty() {
            return None;
        }
        let qlen = query.chars().count();
        let threshold = self.config.edit_threshold(qlen);
        let mut best: Option<(usize, u32)> = None;
        for (r, _) in self.candidates(&words) {
            let ry = self.years[r as usize];
            if year != 0 && ry != 0 && year.abs_diff(ry) > self.config.year_slack {
                continue;
            }
            let cand = &self.titles[r as usize];
            if cand.chars().count().abs_diff(qlen) > threshold {
                continue;
            }
            let dist = strsim::levenshtein(&query, cand);
            if dist <= threshold && best.is_none_or(|b| (dist, r) < b) {
                best = Some((dist, r));
            }
        }
        best.map(|(_, r)| r)
    }

    /// Ranked lookup for free-text queries: word overlap first, then edit
    /// distance, then record id.
    pub fn search(&self, query: &str, limit: usize) -> Vec<TitleHit> {
        let norm = normalize_title(query);
        let words = distinct_words(&norm);
        if words.is_empty() {
            return Vec::new();
        }
        let mut hits: Vec<TitleHit> = self
            .candidates(&words)
            .into_iter()
            .map(|(r, shared)| TitleHit {
                record: r,
                overlap: shared as f64 / words.len() as f64,
                distance: strsim::levenshtein(&norm, &self.titles[r as usize]),
            })
            .collect();
        hits.sort_by(|a, b| {
            b.overlap
                .total_cmp(&a.overlap)
                .then(a.distance.cmp(&b.distance))
                .then(a.record.cmp(&b.record))
        });
        hits.truncate(limit);
        hits
    }
}

fn distinct_words(norm: &str) -> Vec<&str> {
    let mut words: Vec<&str> = norm.split(' ').filter(|w| !w.is_empty()).collect();
    words.sort_unstable();
    words.dedup();
    words
}
