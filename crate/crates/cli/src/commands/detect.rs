use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::Args;
use holdtrack::annotation::layout::{artifact_path, scan_dir, RUNSTATS_SUFFIX, USAGE_SUFFIX};
use holdtrack::annotation::{serialize_usage, KeypointReader, UsageInterval, FORMAT_VERSION};
use holdtrack::detector::{events_to_intervals, sort_events, Detector, RunStats};
use rayon::prelude::*;
use serde::Serialize;

use super::{load_topo, with_pool};
use crate::config::Config;
use crate::exit::Precondition;
use crate::output::{comment_header, emit, with_provenance, write_atomic};
use crate::{DetectorFlags, Format};

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// Keypoint stream (JSON lines).
    #[arg(long, requires = "topo", conflicts_with = "input_dir")]
    keypoints: Option<PathBuf>,
    /// Route topo (JSON) for `--keypoints`.
    #[arg(long)]
    topo: Option<PathBuf>,
    /// Directory of `<video>.keypoints.jsonl` and `<video>.topo.json` pairs.
    #[arg(long)]
    input_dir: Option<PathBuf>,
    /// Where `<video>.usage.csv` and `<video>.runstats.json` are written.
    #[arg(long)]
    out_dir: PathBuf,
    #[command(flatten)]
    pub detector: DetectorFlags,
}

#[derive(Debug, Serialize)]
struct VideoResult {
    video_id: String,
    usages: usize,
    stats: RunStats,
}

pub fn detect_file(keypoints: &Path, topo: &Path, config: &Config) -> Result<(String, Vec<UsageInterval>, RunStats)> {
    let topo = load_topo(topo, config)?;
    let file = File::open(keypoints).with_context(|| format!("opening {}", keypoints.display()))?;
    let mut reader: KeypointReader<_, f64> =
        KeypointReader::new(BufReader::new(file)).with_context(|| format!("parsing {}", keypoints.display()))?;
    let mut header = reader.header().clone();
    if let Some(fps) = config.fps_override {
        header.fps = fps;
    }
    let mut det = Detector::new(&header, &topo, &config.detector).with_context(|| keypoints.display().to_string())?;
    let mut events = Vec::new();
    for frame in reader.by_ref() {
        let frame = frame.with_context(|| format!("parsing {}", keypoints.display()))?;
        events.extend(det.step(&frame).with_context(|| keypoints.display().to_string())?);
    }
    let (rest, stats) = det.finish();
    events.extend(rest);
    sort_events(&mut events);
    Ok((header.video_id, events_to_intervals(&events), stats))
}

fn write_outputs(out_dir: &Path, video_id: &str, usages: &[UsageInterval], stats: &RunStats, config: &Config) -> Result<()> {
    let mut csv = comment_header(config);
    csv.push_str(&format!("# format_version: {FORMAT_VERSION}\n# video: {video_id}\n"));
    csv.push_str(&serialize_usage(usages));
    write_atomic(&artifact_path(out_dir, video_id, USAGE_SUFFIX), csv.as_bytes())?;
    #[derive(Serialize)]
    struct RunStatsDoc<'a> {
        video_id: &'a str,
        stats: &'a RunStats,
    }
    let doc = with_provenance(config, &RunStatsDoc { video_id, stats })?;
    write_atomic(&artifact_path(out_dir, video_id, RUNSTATS_SUFFIX), doc.as_bytes())
}

pub fn run(args: &DetectArgs, config: &Config, format: Format) -> Result<()> {
    let jobs: Vec<(PathBuf, PathBuf)> = match (&args.keypoints, &args.topo, &args.input_dir) {
        (Some(k), Some(t), None) => vec![(k.clone(), t.clone())],
        (None, _, Some(dir)) => {
            let found = scan_dir(dir).with_context(|| format!("reading {}", dir.display()))?;
            found.into_values().filter_map(|f| Some((f.keypoints?, f.topo?))).collect()
        }
        _ => return Err(Precondition("give either --keypoints with --topo, or --input-dir".into()).into()),
    };
    if jobs.is_empty() {
        return Err(Precondition("no keypoint stream with a matching topo found".into()).into());
    }
    let results = with_pool(config, || {
        jobs.par_iter()
            .map(|(k, t)| {
                let (id, usages, stats) = detect_file(k, t, config)?;
                write_outputs(&args.out_dir, &id, &usages, &stats, config)?;
                Ok(VideoResult { video_id: id, usages: usages.len(), stats })
            })
            .collect::<Result<Vec<_>>>()
    })??;

    let text = match format {
        Format::Structured => with_provenance(config, &serde_json::json!({ "videos": results }))?,
        Format::Csv => {
            let mut s = String::from("video,usages,frames,missing_detection_frames\n");
            for r in &results {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    r.video_id, r.usages, r.stats.frames_processed, r.stats.missing_detection_frames
                ));
            }
            s
        }
        Format::Text => results
            .iter()
            .map(|r| {
                format!(
                    "{}: {} usages over {} frames ({} without detection)\n",
                    r.video_id, r.usages, r.stats.frames_processed, r.stats.missing_detection_frames
                )
            })
            .collect(),
    };
    emit(None, &text)
}
