//! Hidden-citation recovery and future co-citation prediction.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{active_refs, mean, SourceFilter};
use crate::error::{Error, Result};
use crate::graph::{prune_after_year, CitationGraph, GraphMask, PaperId};
use crate::rankers::{top_k, Algorithm, RankerParams};

/// Size of the recommendation list judged by future prediction.
pub const FUTURE_TOP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    HideRandom,
    HideRecent,
    HideEarlier,
    FuturePrediction,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 4] = [
        ScenarioKind::HideRandom,
        ScenarioKind::HideRecent,
        ScenarioKind::HideEarlier,
        ScenarioKind::FuturePrediction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::HideRandom => "hide-random",
            ScenarioKind::HideRecent => "hide-recent",
            ScenarioKind::HideEarlier => "hide-earlier",
            ScenarioKind::FuturePrediction => "future-prediction",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        Ok(match norm.as_str() {
            "hide-random" | "random" => ScenarioKind::HideRandom,
            "hide-recent" | "recent" => ScenarioKind::HideRecent,
            "hide-earlier" | "earlier" => ScenarioKind::HideEarlier,
            "future-prediction" | "future" => ScenarioKind::FuturePrediction,
            _ => return Err(Error::InvalidParameter(format!("unknown scenario `{s}`"))),
        })
    }
}

/// Best-performing parameters per scenario, as tuned on the full corpus.
/// Local methods have no parameters and get the defaults.
pub fn tuned_params(kind: ScenarioKind, algorithm: Algorithm) -> RankerParams {
    use Algorithm::*;
    use ScenarioKind::*;
    let base = RankerParams::default();
    match (algorithm, kind) {
        (Katz, _) => base.with_beta(0.0005),
        (DaKatz, HideRandom | FuturePrediction) => base.with_beta(0.005).with_lambda(0.25),
        (DaKatz, HideRecent) => base.with_beta(0.0005).with_lambda(0.75),
        (DaKatz, HideEarlier) => base.with_beta(0.0005).with_lambda(0.0),
        (PaperRank, HideRandom) => base.with_damping(0.5),
        (PaperRank, HideRecent | HideEarlier) => base.with_damping(0.9),
        (PaperRank, FuturePrediction) => base.with_damping(0.75),
        (DaRwr, HideRandom | FuturePrediction) => base.with_lambda(0.5).with_damping(0.75),
        (DaRwr, HideRecent) => base.with_lambda(0.9).with_damping(0.5),
        (DaRwr, HideEarlier) => base.with_lambda(0.1).with_damping(0.5),
        (Cocitation | Cocoupling | Ccidf, _) => base,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    pub trials: usize,
    pub min_refs: usize,
    pub year_window: (u16, u16),
    pub hide_fraction: f64,
    pub seed: u64,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        let f = SourceFilter::default();
        Self {
            kind: ScenarioKind::HideRandom,
            trials: 500,
            min_refs: f.min_refs,
            year_window: f.year_window,
            hide_fraction: 0.1,
            seed: 0,
        }
    }
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.hide_fraction > 0.0 && self.hide_fraction < 1.0) {
            return Err(Error::InvalidParameter("hide_fraction must be in (0, 1)".into()));
        }
        if self.min_refs == 0 || self.trials == 0 {
            return Err(Error::InvalidParameter("min_refs and trials must be at least 1".into()));
        }
        Ok(())
    }

    pub fn filter(&self) -> SourceFilter {
        SourceFilter { year_window: self.year_window, min_refs: self.min_refs }
    }

    pub fn hidden_count(&self, refs: usize) -> usize {
        ((self.hide_fraction * refs as f64).round() as usize).max(1)
    }
}

/// One trial, fixed before any ranker runs so that all rankers see the same
/// sources, seeds and targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialPlan {
    pub source: PaperId,
    pub seeds: Vec<PaperId>,
    /// Papers whose appearance in the list counts as a hit, sorted.
    pub targets: Vec<PaperId>,
    /// Length of the judged recommendation list.
    pub top_n: usize,
    /// Accuracy is `hits / denominator`.
    pub denominator: usize,
    /// Papers a ranker could recommend in this trial.
    pub candidates: usize,
}

impl TrialPlan {
    /// Expected accuracy of `top_n` papers drawn uniformly from the candidates.
    pub fn random_baseline(&self) -> f64 {
        if self.candidates == 0 {
            return 0.0;
        }
        let picked = self.top_n.min(self.candidates) as f64;
        picked * self.targets.len() as f64 / (self.candidates as f64 * self.denominator as f64)
    }
}

fn trial_mask(g: &CitationGraph, kind: ScenarioKind, s: PaperId) -> GraphMask {
    match kind {
        ScenarioKind::FuturePrediction => prune_after_year(g, g.year(s), &HashSet::new()),
        _ => prune_after_year(g, g.year(s), &HashSet::from([s])),
    }
}

/// Samples sources and fixes seeds and targets for every trial. Trials whose
/// seed set would be empty are dropped.
pub fn plan_trials(g: &CitationGraph, spec: &ScenarioSpec) -> Result<Vec<TrialPlan>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let sources = spec.filter().sample(g, spec.trials, &mut rng)?;
    let mut plans = Vec::with_capacity(sources.len());
    for s in sources {
        let view = g.view(trial_mask(g, spec.kind, s));
        let mut refs = active_refs(&view, s);
        let active = view.mask().active_count();
        if refs.is_empty() {
            continue;
        }
        let plan = if spec.kind == ScenarioKind::FuturePrediction {
            let later = g.citers(s).iter().filter(|&&c| g.year(c) > g.year(s));
            let targets: BTreeSet<PaperId> = later.flat_map(|&c| g.refs(c).iter().copied()).filter(|&w| w != s).collect();
            TrialPlan {
                source: s,
                candidates: active - refs.len() - 1,
                seeds: refs,
                targets: targets.into_iter().collect(),
                top_n: FUTURE_TOP,
                denominator: FUTURE_TOP,
            }
        } else {
            let h = spec.hidden_count(refs.len());
            if h >= refs.len() {
                continue;
            }
            match spec.kind {
                ScenarioKind::HideRandom => refs.shuffle(&mut rng),
                ScenarioKind::HideRecent => refs.sort_by_key(|&v| (std::cmp::Reverse(g.year(v)), v)),
                _ => refs.sort_by_key(|&v| (g.year(v), v)),
            }
            // the first `h` papers of the ordering are hidden
            let top_n = refs.len();
            let mut seeds = refs.split_off(h);
            let mut targets = refs;
            seeds.sort_unstable();
            targets.sort_unstable();
            TrialPlan { source: s, candidates: active - seeds.len(), seeds, targets, top_n, denominator: h }
        };
        plans.push(plan);
    }
    Ok(plans)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub source: PaperId,
    pub hidden: usize,
    pub hits: usize,
    pub accuracy: f64,
    #[serde(skip)]
    pub top: Vec<PaperId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub kind: ScenarioKind,
    pub algorithm: Algorithm,
    pub params: RankerParams,
    pub trials: Vec<TrialResult>,
    /// Sampled sources dropped because nothing would remain as seeds.
    pub skipped: usize,
    pub mean_accuracy: f64,
}

/// Runs one ranker over pre-planned trials.
pub fn run_trials(
    g: &CitationGraph,
    kind: ScenarioKind,
    plans: &[TrialPlan],
    algorithm: Algorithm,
    params: &RankerParams,
) -> Result<ScenarioResult> {
    params.validate()?;
    let trials = plans
        .par_iter()
        .map(|p| {
            let view = g.view(trial_mask(g, kind, p.source));
            let scores = algorithm.score(&view, &p.seeds, params)?;
            let mut exclude: HashSet<PaperId> = p.seeds.iter().copied().collect();
            exclude.insert(p.source);
            let top: Vec<PaperId> = top_k(&view, &scores, &exclude, p.top_n).into_iter().map(|s| s.id).collect();
            let hits = top.iter().filter(|v| p.targets.binary_search(v).is_ok()).count();
            Ok(TrialResult {
                source: p.source,
                hidden: if kind == ScenarioKind::FuturePrediction { 0 } else { p.targets.len() },
                hits,
                accuracy: hits as f64 / p.denominator as f64,
                top,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let acc: Vec<f64> = trials.iter().map(|t| t.accuracy).collect();
    Ok(ScenarioResult { kind, algorithm, params: *params, mean_accuracy: mean(&acc), trials, skipped: 0 })
}

/// Plans and runs a scenario for a single ranker.
pub fn run_scenario(g: &CitationGraph, spec: &ScenarioSpec, algorithm: Algorithm, params: &RankerParams) -> Result<ScenarioResult> {
    let plans = plan_trials(g, spec)?;
    let mut r = run_trials(g, spec.kind, &plans, algorithm, params)?;
    r.skipped = spec.trials - plans.len();
    Ok(r)
}

pub fn run_hide_scenario(g: &CitationGraph, spec: &ScenarioSpec, algorithm: Algorithm, params: &RankerParams) -> Result<ScenarioResult> {
    if spec.kind == ScenarioKind::FuturePrediction {
        return Err(Error::InvalidParameter("expected a hide-* scenario".into()));
    }
    run_scenario(g, spec, algorithm, params)
}

pub fn run_future_prediction(g: &CitationGraph, spec: &ScenarioSpec, algorithm: Algorithm, params: &RankerParams) -> Result<ScenarioResult> {
    let spec = ScenarioSpec { kind: ScenarioKind::FuturePrediction, ..*spec };
    run_scenario(g, &spec, algorithm, params)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntersectionMatrix {
    pub names: Vec<String>,
    /// `cells[a][b]`: mean share of targets found by both `a` and `b`.
    pub cells: Vec<Vec<f64>>,
}

pub fn intersection_matrix(plans: &[TrialPlan], results: &[ScenarioResult]) -> Result<IntersectionMatrix> {
    for r in results {
        if r.trials.len() != plans.len() || r.trials.iter().zip(plans).any(|(t, p)| t.source != p.source) {
            return Err(Error::MismatchedTrials);
        }
    }
    let n = results.len();
    let mut cells = vec![vec![0.0; n]; n];
    if plans.is_empty() {
        return Ok(IntersectionMatrix { names: results.iter().map(|r| r.algorithm.to_string()).collect(), cells });
    }
    for a in 0..n {
        for b in a..n {
            let mut total = 0.0;
            for (i, p) in plans.iter().enumerate() {
                let tb: HashSet<PaperId> = results[b].trials[i].top.iter().copied().collect();
                let both = results[a].trials[i]
                    .top
                    .iter()
                    .filter(|v| tb.contains(v) && p.targets.binary_search(v).is_ok())
                    .count();
                total += both as f64 / p.denominator as f64;
            }
            cells[a][b] = total / plans.len() as f64;
            cells[b][a] = cells[a][b];
        }
    }
    Ok(IntersectionMatrix { names: results.iter().map(|r| r.algorithm.to_string()).collect(), cells })
}
