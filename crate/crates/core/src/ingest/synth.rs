//! Synthetic time-layered citation corpora.
//!
//! Papers are spread evenly over a range of years and belong to topical
//! communities, each with its own venue and author pool. A paper cites only
//! papers from strictly earlier years: with probability `locality` from its
//! own community, otherwise from the whole earlier corpus. Targets are drawn
//! with weight `(citations + 1)^attachment`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CitationGraph, GraphBuilder, PaperId};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthParams {
    pub papers: usize,
    pub first_year: u16,
    pub last_year: u16,
    /// Mean reference-list length (before capping by available papers).
    pub mean_refs: f64,
    /// Preferential-attachment exponent.
    pub attachment: f64,
    pub communities: usize,
    /// Probability that a reference stays inside the citing paper's community.
    pub locality: f64,
    pub authors_per_community: usize,
    pub seed: u64,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            papers: 1000,
            first_year: 1981,
            last_year: 2010,
            mean_refs: 20.0,
            attachment: 1.0,
            communities: 20,
            locality: 0.85,
            authors_per_community: 25,
            seed: 0,
        }
    }
}

impl SynthParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_owned()));
        if self.papers < 10 {
            return bad("synthetic corpus needs at least 10 papers");
        }
        if self.first_year < 1900 || self.last_year > 2100 || self.first_year > self.last_year {
            return bad("year range must lie within 1900..=2100");
        }
        if self.mean_refs.is_nan() || self.mean_refs < 0.0 || !self.attachment.is_finite() {
            return bad("mean_refs and attachment must be finite and non-negative");
        }
        if self.communities == 0 || self.authors_per_community == 0 {
            return bad("need at least one community and one author per community");
        }
        if !(0.0..=1.0).contains(&self.locality) {
            return bad("locality must be in [0, 1]");
        }
        Ok(())
    }

    pub fn year_of(&self, i: usize) -> u16 {
        let span = (self.last_year - self.first_year) as usize + 1;
        self.first_year + (i * span / self.papers) as u16
    }
}

/// Fenwick tree over non-negative weights supporting weighted sampling.
struct Fenwick {
    tree: Vec<f64>,
    weights: Vec<f64>,
}

impl Fenwick {
    fn new(n: usize) -> Self {
        Self { tree: vec![0.0; n + 1], weights: vec![0.0; n] }
    }

    fn set(&mut self, i: usize, w: f64) {
        let delta = w - self.weights[i];
        self.weights[i] = w;
        let mut j = i + 1;
        while j < self.tree.len() {
            self.tree[j] += delta;
            j += j & j.wrapping_neg();
        }
    }

    fn total(&self) -> f64 {
        let mut j = self.tree.len() - 1;
        let mut s = 0.0;
        while j > 0 {
            s += self.tree[j];
            j &= j - 1;
        }
        s
    }

    /// Smallest index whose prefix sum exceeds `target`.
    fn find(&self, mut target: f64) -> usize {
        let n = self.tree.len() - 1;
        let mut pos = 0;
        let mut step = n.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= target {
                pos = next;
                target -= self.tree[next];
            }
            step >>= 1;
        }
        pos.min(n - 1)
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> Option<usize> {
        let total = self.total();
        if total <= 0.0 {
            return None;
        }
        let i = self.find(rng.gen::<f64>() * total);
        (self.weights[i] > 0.0).then_some(i)
    }
}

const ADJECTIVES: [&str; 12] = [
    "scalable", "robust", "adaptive", "efficient", "distributed", "incremental",
    "probabilistic", "sparse", "parallel", "approximate", "interactive", "secure",
];
const NOUNS: [&str; 12] = [
    "indexing", "ranking", "clustering", "retrieval", "scheduling", "caching",
    "sampling", "matching", "partitioning", "learning", "routing", "verification",
];

pub fn synth_corpus(p: &SynthParams) -> Result<CitationGraph> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let n = p.papers;
    let community: Vec<usize> = (0..n).map(|_| rng.gen_range(0..p.communities)).collect();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); p.communities];
    let mut slot = vec![0usize; n];
    for (i, &c) in community.iter().enumerate() {
        slot[i] = members[c].len();
        members[c].push(i);
    }

    let mut b = GraphBuilder::new();
    for (i, &c) in community.iter().enumerate() {
        let title = format!(
            "{} {} for topic {} number {}",
            ADJECTIVES[rng.gen_range(0..ADJECTIVES.len())],
            NOUNS[rng.gen_range(0..NOUNS.len())],
            c,
            i
        );
        let n_authors = rng.gen_range(1..=3);
        let authors: Vec<String> = (0..n_authors)
            .map(|_| format!("author-{c}-{}", rng.gen_range(0..p.authors_per_community)))
            .collect();
        b.add_paper(&format!("p{i}"), &title, p.year_of(i) as i64, Some(&format!("venue-{c}")), &authors)?;
    }

    let weight = |cites: u32| (cites as f64 + 1.0).powf(p.attachment);
    let mut global = Fenwick::new(n);
    let mut local: Vec<Fenwick> = members.iter().map(|m| Fenwick::new(m.len())).collect();
    let mut cites = vec![0u32; n];
    let mut eligible = 0usize; // papers [0, eligible) are from earlier years
    let mut refs: Vec<usize> = Vec::new();

    for i in 0..n {
        while eligible < i && p.year_of(eligible) < p.year_of(i) {
            let w = weight(0);
            global.set(eligible, w);
            local[community[eligible]].set(slot[eligible], w);
            eligible += 1;
        }
        let want = if p.mean_refs > 0.0 {
            let lo = (p.mean_refs * 0.5).floor() as usize;
            let hi = (p.mean_refs * 1.5).ceil() as usize;
            rng.gen_range(lo..=hi).min(eligible)
        } else {
            0
        };
        refs.clear();
        let mut attempts = 0;
        while refs.len() < want && attempts < want * 30 {
            attempts += 1;
            let c = community[i];
            let pick = if rng.gen::<f64>() < p.locality {
                local[c].sample(&mut rng).map(|s| members[c][s])
            } else {
                None
            };
            let Some(j) = pick.or_else(|| global.sample(&mut rng)) else { break };
            if !refs.contains(&j) {
                refs.push(j);
            }
        }
        for &j in &refs {
            b.add_edge(PaperId(i as u32), PaperId(j as u32))?;
            cites[j] += 1;
            let w = weight(cites[j]);
            global.set(j, w);
            local[community[j]].set(slot[j], w);
        }
    }
    Ok(b.build())
}
