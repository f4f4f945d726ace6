//! Distributions of structural properties over recommended or hidden papers.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{clustering_coefficient, GraphView, PaperId};
use crate::rankers::{pagerank, RankerParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternRow {
    pub list: String,
    /// `clustering` or `pagerank`.
    pub metric: String,
    pub value: f64,
    /// Share of the list's papers with a metric value ≤ `value`.
    pub cdf: f64,
}

/// Empirical CDF as `(value, share ≤ value)` at each distinct value.
pub fn ecdf(values: &[f64]) -> Vec<(f64, f64)> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| !x.is_nan()).collect();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (i, &x) in v.iter().enumerate() {
        let share = (i + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.0 == x => last.1 = share,
            _ => out.push((x, share)),
        }
    }
    out
}

/// Clustering coefficient and global PageRank CDFs for each named list.
/// Inactive papers in a list are ignored.
pub fn citation_pattern_cdf(
    view: &GraphView<'_>,
    lists: &[(String, Vec<PaperId>)],
    params: &RankerParams,
) -> Result<Vec<PatternRow>> {
    let pr = pagerank(view, params)?;
    let mut rows = Vec::new();
    for (name, papers) in lists {
        let active: Vec<PaperId> = papers.iter().copied().filter(|&v| view.is_active(v)).collect();
        let cc = active
            .iter()
            .map(|&v| clustering_coefficient(view, v))
            .collect::<Result<Vec<f64>>>()?;
        let prs: Vec<f64> = active.iter().map(|&v| pr.score(v)).collect();
        for (metric, values) in [("clustering", cc), ("pagerank", prs)] {
            rows.extend(ecdf(&values).into_iter().map(|(value, cdf)| PatternRow {
                list: name.clone(),
                metric: metric.to_owned(),
                value,
                cdf,
            }));
        }
    }
    Ok(rows)
}
