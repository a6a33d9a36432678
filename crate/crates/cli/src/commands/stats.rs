use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use holdtrack::annotation::layout::scan_dir;
use holdtrack::stats::{compute_stats, render_stats_text, GroupStats, VideoAnnotations};
use rayon::prelude::*;

use super::{load_topo, load_usage, with_pool};
use crate::config::Config;
use crate::exit::Precondition;
use crate::output::{comment_header, emit, with_provenance};
use crate::Format;

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Annotation directory with `<video>.usage.csv` and `<video>.topo.json`.
    dir: PathBuf,
    /// Report file; stdout when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn csv_rows(groups: &[&GroupStats]) -> String {
    let opt = |v: Option<f64>| v.map_or_else(String::new, |v| v.to_string());
    let mut s = String::from(
        "group,videos,duration_total,duration_mean,duration_std,duration_std_sample,duration_min,duration_max,\
         usages,hand_usages,foot_usages,usage_seconds,hand_usage_seconds,foot_usage_seconds,\
         occlusion_percent,hand_occlusion_percent,foot_occlusion_percent\n",
    );
    for g in groups {
        let d = g.video_duration;
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            g.name,
            g.videos,
            opt(d.map(|d| d.total)),
            opt(d.map(|d| d.mean)),
            opt(d.map(|d| d.std)),
            opt(d.and_then(|d| d.std_sample)),
            opt(d.map(|d| d.min)),
            opt(d.map(|d| d.max)),
            g.usage_count.total,
            g.usage_count.hands,
            g.usage_count.feet,
            opt(g.usage_seconds.total),
            opt(g.usage_seconds.hands),
            opt(g.usage_seconds.feet),
            opt(g.occlusion_percent.total),
            opt(g.occlusion_percent.hands),
            opt(g.occlusion_percent.feet),
        ));
    }
    s
}

pub fn run(args: &StatsArgs, config: &Config, format: Format) -> Result<()> {
    let found = scan_dir(&args.dir).with_context(|| format!("reading {}", args.dir.display()))?;
    let entries: Vec<_> = found.into_iter().filter_map(|(id, f)| Some((id, f.usage?, f.topo))).collect();
    if entries.is_empty() {
        return Err(Precondition(format!("no usage files in {}", args.dir.display())).into());
    }
    let videos = with_pool(config, || {
        entries
            .par_iter()
            .map(|(id, usage, topo)| {
                let topo = topo.as_deref().map(|t| load_topo(t, config)).transpose()?;
                let fps = topo.as_ref().map(|t| t.fps).or(config.fps_override).ok_or_else(|| {
                    Precondition(format!("video {id} has no topo to take the frame rate from; pass --fps-override"))
                })?;
                Ok(VideoAnnotations {
                    video_id: id.clone(),
                    route: topo.as_ref().map_or_else(|| "unknown".to_string(), |t| t.route_name.clone()),
                    fps,
                    frame_count: topo.and_then(|t| t.frame_count),
                    usages: load_usage(usage)?,
                })
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let report = compute_stats(&videos, &config.stats);
    let text = match format {
        Format::Text => comment_header(config) + &render_stats_text(&report),
        Format::Csv => {
            let groups: Vec<&GroupStats> = report.routes.iter().chain([&report.overall]).collect();
            comment_header(config) + &csv_rows(&groups)
        }
        Format::Structured => with_provenance(config, &report)?,
    };
    emit(args.out.as_deref(), &text)
}
