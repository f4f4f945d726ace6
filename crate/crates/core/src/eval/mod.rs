//! Offline evaluation: hidden-citation recovery, parameter sweeps,
//! intersection matrices, citation-pattern distributions, simulated relevance
//! feedback and venue/reviewer recommendation.
//!
//! Every experiment samples its source papers with a seeded ChaCha RNG, so a
//! fixed seed reproduces identical trials and numbers. Trials run in
//! parallel; aggregation only sums per-trial values in trial order.

mod feedback;
mod patterns;
mod scenario;
mod sweep;
mod venue;

use std::io::Write;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CitationGraph, GraphView, PaperId};

pub use feedback::{feedback_simulation, FeedbackMode, FeedbackResult, FeedbackSpec, FeedbackTrial, Labeling};
pub use patterns::{citation_pattern_cdf, ecdf, PatternRow};
pub use scenario::{
    intersection_matrix, plan_trials, run_future_prediction, run_hide_scenario, run_scenario, run_trials,
    tuned_params, IntersectionMatrix, ScenarioKind, ScenarioResult, ScenarioSpec, TrialPlan, TrialResult,
};
pub use sweep::{parameter_sweep, SweepRow, SweepSpec};
pub use venue::{reviewer_experiment, venue_experiment, ExperimentSpec, Method, ReviewerRow, VenueRow};

/// Which papers may serve as the source of a trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceFilter {
    /// Inclusive publication-year range.
    pub year_window: (u16, u16),
    /// Minimum number of references.
    pub min_refs: usize,
}

impl Default for SourceFilter {
    fn default() -> Self {
        Self { year_window: (2005, 2010), min_refs: 20 }
    }
}

impl SourceFilter {
    pub fn accepts(&self, g: &CitationGraph, v: PaperId) -> bool {
        let y = g.year(v);
        y >= self.year_window.0 && y <= self.year_window.1 && g.refs(v).len() >= self.min_refs
    }

    pub fn eligible(&self, g: &CitationGraph) -> Vec<PaperId> {
        g.papers().filter(|&v| self.accepts(g, v)).collect()
    }

    /// Draws `count` distinct eligible sources.
    pub fn sample<R: Rng>(&self, g: &CitationGraph, count: usize, rng: &mut R) -> Result<Vec<PaperId>> {
        let eligible = self.eligible(g);
        if eligible.len() < count || count == 0 {
            return Err(Error::TooFewSources { eligible: eligible.len(), required: count });
        }
        Ok(sample(rng, eligible.len(), count).into_iter().map(|i| eligible[i]).collect())
    }
}

/// References of `s` that are active in `view`, in id order.
pub(crate) fn active_refs(view: &GraphView<'_>, s: PaperId) -> Vec<PaperId> {
    view.graph().refs(s).iter().copied().filter(|&v| view.is_active(v)).collect()
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (0 for fewer than two values).
pub fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Ranks starting at 1; tied values share their average rank.
fn fractional_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation; `NaN` when either side is constant.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len(), "spearman needs paired samples");
    let (rx, ry) = (fractional_ranks(xs), fractional_ranks(ys));
    let (mx, my) = (mean(&rx), mean(&ry));
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    sxy / (sxx * syy).sqrt()
}

pub fn write_csv<W: Write, T: Serialize>(out: W, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spearman_basics() {
        assert!((spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 35.0]) - 1.0).abs() < 1e-12);
        assert!((spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]) + 1.0).abs() < 1e-12);
        assert_eq!(fractional_ranks(&[5.0, 1.0, 5.0]), vec![2.5, 1.0, 2.5]);
        assert!(spearman(&[1.0, 2.0], &[1.0, 1.0]).is_nan());
    }

    #[test]
    fn mean_and_std() {
        assert_eq!(mean(&[]), 0.0);
        assert_eq!(mean(&[1.0, 3.0]), 2.0);
        assert!((std_dev(&[1.0, 3.0]) - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn csv_has_header_and_rows() {
        #[derive(Serialize)]
        struct Row {
            a: u32,
            b: f64,
        }
        let mut buf = Vec::new();
        write_csv(&mut buf, &[Row { a: 1, b: 0.5 }]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n1,0.5\n");
    }
}
