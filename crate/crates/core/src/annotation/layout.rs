//! File naming inside a dataset or output directory: every artifact of one
//! video shares the video id as its stem.

use std::collections::BTreeMap;
use std::io;
use std::path::{Path, PathBuf};

pub const USAGE_SUFFIX: &str = ".usage.csv";
pub const TOPO_SUFFIX: &str = ".topo.json";
pub const KEYPOINTS_SUFFIX: &str = ".keypoints.jsonl";
pub const RUNSTATS_SUFFIX: &str = ".runstats.json";

/// Artifacts found for one video id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VideoFiles {
    pub usage: Option<PathBuf>,
    pub topo: Option<PathBuf>,
    pub keypoints: Option<PathBuf>,
    pub runstats: Option<PathBuf>,
}

pub fn artifact_path(dir: &Path, video_id: &str, suffix: &str) -> PathBuf {
    dir.join(format!("{video_id}{suffix}"))
}

/// Groups the recognised files of `dir` (not recursive) by video id.
pub fn scan_dir(dir: &Path) -> io::Result<BTreeMap<String, VideoFiles>> {
    let mut out: BTreeMap<String, VideoFiles> = BTreeMap::new();
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else { continue };
        for suffix in [USAGE_SUFFIX, TOPO_SUFFIX, KEYPOINTS_SUFFIX, RUNSTATS_SUFFIX] {
            if let Some(id) = name.strip_suffix(suffix).filter(|id| !id.is_empty()) {
                let files = out.entry(id.to_string()).or_default();
                let slot = match suffix {
                    USAGE_SUFFIX => &mut files.usage,
                    TOPO_SUFFIX => &mut files.topo,
                    KEYPOINTS_SUFFIX => &mut files.keypoints,
                    _ => &mut files.runstats,
                };
                *slot = Some(path.clone());
                break;
            }
        }
    }
    Ok(out)
}
