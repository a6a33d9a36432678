pub mod calibrate;
pub mod detect;
pub mod eval;
pub mod report;
pub mod simulate;
pub mod stats;

use std::path::Path;

use anyhow::{Context, Result};
use holdtrack::annotation::{parse_topo, parse_usage, UsageInterval};
use holdtrack::RouteTopo;

use crate::config::Config;

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn load_topo(path: &Path, config: &Config) -> Result<RouteTopo> {
    let mut topo: RouteTopo = parse_topo(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))?;
    if let Some(fps) = config.fps_override {
        topo.fps = fps;
    }
    Ok(topo)
}

pub fn load_usage(path: &Path) -> Result<Vec<UsageInterval>> {
    parse_usage(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// Runs `f` on a pool of `config.jobs` threads.
pub fn with_pool<R: Send>(config: &Config, f: impl FnOnce() -> R + Send) -> Result<R> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(config.jobs).build()?;
    Ok(pool.install(f))
}
