use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use holdtrack::annotation::layout::{artifact_path, scan_dir, RUNSTATS_SUFFIX, USAGE_SUFFIX};
use holdtrack::detector::RunStats;
use holdtrack::eval::{evaluate, render_csv, render_text, VideoEval};
use rayon::prelude::*;

use super::{load_topo, load_usage, read_text, with_pool};
use crate::config::Config;
use crate::exit::Precondition;
use crate::output::{comment_header, emit, with_provenance};
use crate::Format;

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Ground truth: `<video>.usage.csv`, with `<video>.topo.json` for route names.
    #[arg(long)]
    gt_dir: PathBuf,
    /// Predictions: `<video>.usage.csv`, optionally `<video>.runstats.json`.
    #[arg(long)]
    pred_dir: PathBuf,
    /// Report file; stdout when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn load_runstats(path: &std::path::Path) -> Result<Option<RunStats>> {
    if !path.exists() {
        return Ok(None);
    }
    let doc: serde_json::Value =
        serde_json::from_str(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))?;
    let stats = doc.get("stats").cloned().unwrap_or(doc);
    Ok(Some(serde_json::from_value(stats).with_context(|| format!("parsing {}", path.display()))?))
}

pub fn run(args: &EvalArgs, config: &Config, format: Format) -> Result<()> {
    let gt = scan_dir(&args.gt_dir).with_context(|| format!("reading {}", args.gt_dir.display()))?;
    let gt: Vec<_> = gt.into_iter().filter_map(|(id, f)| Some((id, f.usage?, f.topo))).collect();
    if gt.is_empty() {
        return Err(Precondition(format!("no ground-truth usage files in {}", args.gt_dir.display())).into());
    }
    if !args.pred_dir.is_dir() {
        return Err(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("prediction directory {} does not exist", args.pred_dir.display()),
        )
        .into());
    }
    let videos = with_pool(config, || {
        gt.par_iter()
            .map(|(id, usage, topo)| {
                let topo = topo.as_deref().map(|t| load_topo(t, config)).transpose()?;
                let pred_path = artifact_path(&args.pred_dir, id, USAGE_SUFFIX);
                let predictions = if pred_path.exists() { load_usage(&pred_path)? } else { Vec::new() };
                Ok(VideoEval {
                    video_id: id.clone(),
                    route: topo.as_ref().map_or_else(|| "unknown".to_string(), |t| t.route_name.clone()),
                    ground_truth: load_usage(usage)?,
                    predictions,
                    run_stats: load_runstats(&artifact_path(&args.pred_dir, id, RUNSTATS_SUFFIX))?,
                    fps: topo.map(|t| t.fps),
                })
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let report = evaluate(&videos, &config.eval)?;
    let text = match format {
        Format::Text => comment_header(config) + &render_text(&report),
        Format::Csv => comment_header(config) + &render_csv(&report),
        Format::Structured => with_provenance(config, &report)?,
    };
    emit(args.out.as_deref(), &text)
}
