//! Settings file. Every key is optional; command-line flags win over the
//! file, and the file wins over built-in defaults.
//!
//! ```toml
//! graph_dir = "/data/corpus"
//! seed = 7
//! trials = 200
//! d = 0.75
//! lambda = 0.5
//! bind = "127.0.0.1:8080"
//! ```

use std::path::{Path, PathBuf};

use advisor_core::rankers::RankerParams;
use anyhow::{Context, Result};
use serde::Deserialize;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub graph_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub min_refs: Option<usize>,
    pub year_from: Option<u16>,
    pub year_to: Option<u16>,
    pub d: Option<f64>,
    pub lambda: Option<f64>,
    pub beta: Option<f64>,
    #[serde(rename = "L")]
    pub max_len: Option<usize>,
    pub epsilon: Option<f64>,
    pub max_iters: Option<usize>,
    pub bind: Option<String>,
    pub session_ttl_secs: Option<u64>,
    pub time_budget_secs: Option<u64>,
    pub cors_origin: Option<String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn params(&self) -> RankerParams {
        let base = RankerParams::default();
        RankerParams {
            damping: self.d.unwrap_or(base.damping),
            lambda: self.lambda.unwrap_or(base.lambda),
            beta: self.beta.unwrap_or(base.beta),
            max_len: self.max_len.unwrap_or(base.max_len),
            epsilon: self.epsilon.unwrap_or(base.epsilon),
            max_iters: self.max_iters.unwrap_or(base.max_iters),
        }
    }
}
