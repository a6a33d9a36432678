use std::path::Path;

use anyhow::{Context, Result};
use holdtrack::eval::{EvalOptions, MatchMode};
use holdtrack::stats::StatsOptions;
use holdtrack::DetectorConfig;
use serde::{Deserialize, Serialize};

/// Settings from the `--config` file, after command-line overrides.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub detector: DetectorConfig,
    pub eval: EvalOptions,
    pub stats: StatsOptions,
    /// Replaces the frame rate declared by streams and topos.
    pub fps_override: Option<f64>,
    /// Worker threads for multi-video commands; 0 uses every core.
    pub jobs: usize,
}

/// Flags that override config file values.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub fps: Option<f64>,
    pub thresholds: Vec<f64>,
    pub match_mode: Option<MatchMode>,
    pub jobs: Option<usize>,
    pub persistence_seconds: Option<f64>,
    pub memory_seconds: Option<f64>,
    pub confidence: Option<f64>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn apply(mut self, o: &Overrides) -> Self {
        if o.fps.is_some() {
            self.fps_override = o.fps;
        }
        if !o.thresholds.is_empty() {
            self.eval.thresholds = o.thresholds.clone();
        }
        if let Some(m) = o.match_mode {
            self.eval.match_mode = m;
        }
        if let Some(j) = o.jobs {
            self.jobs = j;
        }
        if let Some(v) = o.persistence_seconds {
            self.detector.persistence_seconds = v;
        }
        if let Some(v) = o.memory_seconds {
            self.detector.memory_seconds = v;
        }
        if let Some(v) = o.confidence {
            self.detector.confidence_threshold = v;
        }
        self
    }
}
