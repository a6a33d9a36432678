use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use holdtrack::annotation::layout::{artifact_path, KEYPOINTS_SUFFIX, TOPO_SUFFIX, USAGE_SUFFIX};
use holdtrack::annotation::{serialize_keypoints, serialize_topo, serialize_usage, FORMAT_VERSION};
use holdtrack::sim::synthesize;
use holdtrack::ScenarioSpec;

use super::read_text;
use crate::config::Config;
use crate::output::{comment_header, emit, provenance, with_provenance, write_atomic};
use crate::Format;

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scenario (JSON): topo, moves, noise_sigma, dropouts, empty_frames, seed.
    scenario: PathBuf,
    /// Where `<video>.keypoints.jsonl`, `<video>.usage.csv` and `<video>.topo.json` are written.
    #[arg(long)]
    out_dir: PathBuf,
}

pub fn run(args: &SimulateArgs, config: &Config, format: Format) -> Result<()> {
    let text = read_text(&args.scenario)?;
    let spec: ScenarioSpec =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", args.scenario.display()))?;
    spec.topo.validate().with_context(|| format!("topo in {}", args.scenario.display()))?;
    let (mut stream, truth) = synthesize(&spec)?;
    stream.header.extra.insert("provenance".into(), provenance(config));

    let id = stream.header.video_id.clone();
    let mut topo = spec.topo.clone();
    topo.frame_count = Some(stream.frames.len() as u32);
    let mut usage = comment_header(config);
    usage.push_str(&format!("# format_version: {FORMAT_VERSION}\n# video: {id}\n"));
    usage.push_str(&serialize_usage(&truth));
    write_atomic(&artifact_path(&args.out_dir, &id, KEYPOINTS_SUFFIX), serialize_keypoints(&stream).as_bytes())?;
    write_atomic(&artifact_path(&args.out_dir, &id, USAGE_SUFFIX), usage.as_bytes())?;
    write_atomic(&artifact_path(&args.out_dir, &id, TOPO_SUFFIX), serialize_topo(&topo).as_bytes())?;

    let summary = match format {
        Format::Structured => with_provenance(
            config,
            &serde_json::json!({ "video_id": id, "frames": stream.frames.len(), "usages": truth.len() }),
        )?,
        Format::Csv => format!("video,frames,usages\n{id},{},{}\n", stream.frames.len(), truth.len()),
        Format::Text => format!("{id}: {} frames, {} usages\n", stream.frames.len(), truth.len()),
    };
    emit(None, &summary)
}
