//! Dataset statistics: video durations and hold usage counts, durations,
//! and occlusion, per route and overall.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::annotation::UsageInterval;
use crate::limb::LimbKind;

/// Annotations and metadata for one video.
#[derive(Debug, Clone, PartialEq)]
pub struct VideoAnnotations {
    pub video_id: String,
    pub route: String,
    pub fps: f64,
    /// Total frames in the video. When absent, the last annotated frame is
    /// taken as the end of the video.
    pub frame_count: Option<u32>,
    pub usages: Vec<UsageInterval>,
}

impl VideoAnnotations {
    pub fn duration_seconds(&self) -> f64 {
        let frames = self
            .frame_count
            .unwrap_or_else(|| self.usages.iter().map(|u| u.end() + 1).max().unwrap_or(0));
        f64::from(frames) / self.fps
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StatsOptions {
    /// Occlusion as total occluded frames over total usage frames instead of
    /// the mean of per-usage percentages.
    pub frame_weighted_occlusion: bool,
    /// Count usages of the bare wall.
    pub include_wall: bool,
    /// Usage duration `(end - start + 1) / fps`; otherwise `(end - start) / fps`.
    pub inclusive_duration: bool,
}

impl Default for StatsOptions {
    fn default() -> Self {
        Self { frame_weighted_occlusion: false, include_wall: true, inclusive_duration: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ByClass<V> {
    pub total: V,
    pub hands: V,
    pub feet: V,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DurationStats {
    pub total: f64,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    /// Sample standard deviation; `None` for fewer than two videos.
    pub std_sample: Option<f64>,
    pub min: f64,
    pub max: f64,
}

impl DurationStats {
    fn from_values(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let total: f64 = values.iter().sum();
        let mean = total / n;
        let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
        Some(Self {
            total,
            mean,
            std: (ss / n).sqrt(),
            std_sample: (values.len() > 1).then(|| (ss / (n - 1.0)).sqrt()),
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupStats {
    pub name: String,
    pub videos: usize,
    pub video_duration: Option<DurationStats>,
    pub usage_count: ByClass<u64>,
    /// Mean usage duration in seconds.
    pub usage_seconds: ByClass<Option<f64>>,
    /// Mean occlusion in percent.
    pub occlusion_percent: ByClass<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub options: StatsOptions,
    pub routes: Vec<GroupStats>,
    pub overall: GroupStats,
}

#[derive(Default)]
struct Acc {
    durations: Vec<f64>,
    // per class: (seconds, occluded frames, frames)
    usages: [Vec<(f64, u32, u32)>; 2],
}

impl Acc {
    fn push_video(&mut self, v: &VideoAnnotations, opts: &StatsOptions) {
        self.durations.push(v.duration_seconds());
        for u in &v.usages {
            if u.hold.is_wall() && !opts.include_wall {
                continue;
            }
            let frames = if opts.inclusive_duration { u.frame_count() } else { u.frame_count() - 1 };
            let class = usize::from(u.extremity.kind == LimbKind::Foot);
            self.usages[class].push((f64::from(frames) / v.fps, u.occluded_frame_count(), u.frame_count()));
        }
    }

    fn finish(self, name: String, videos: usize, opts: &StatsOptions) -> GroupStats {
        let all: Vec<_> = self.usages[0].iter().chain(&self.usages[1]).copied().collect();
        let mean_secs = |u: &[(f64, u32, u32)]| {
            (!u.is_empty()).then(|| u.iter().map(|x| x.0).sum::<f64>() / u.len() as f64)
        };
        let occlusion = |u: &[(f64, u32, u32)]| {
            if u.is_empty() {
                return None;
            }
            Some(if opts.frame_weighted_occlusion {
                let occ: u64 = u.iter().map(|x| u64::from(x.1)).sum();
                let frames: u64 = u.iter().map(|x| u64::from(x.2)).sum();
                occ as f64 / frames as f64 * 100.0
            } else {
                u.iter().map(|x| f64::from(x.1) / f64::from(x.2) * 100.0).sum::<f64>() / u.len() as f64
            })
        };
        GroupStats {
            name,
            videos,
            video_duration: DurationStats::from_values(&self.durations),
            usage_count: ByClass {
                total: all.len() as u64,
                hands: self.usages[0].len() as u64,
                feet: self.usages[1].len() as u64,
            },
            usage_seconds: ByClass {
                total: mean_secs(&all),
                hands: mean_secs(&self.usages[0]),
                feet: mean_secs(&self.usages[1]),
            },
            occlusion_percent: ByClass {
                total: occlusion(&all),
                hands: occlusion(&self.usages[0]),
                feet: occlusion(&self.usages[1]),
            },
        }
    }
}

/// Per-route and overall statistics. Videos are reduced in id order.
pub fn compute_stats(videos: &[VideoAnnotations], opts: &StatsOptions) -> StatsReport {
    let mut sorted: Vec<&VideoAnnotations> = videos.iter().collect();
    sorted.sort_by(|a, b| a.video_id.cmp(&b.video_id).then(a.route.cmp(&b.route)));
    let mut routes: BTreeMap<&str, (Acc, usize)> = BTreeMap::new();
    let mut overall = Acc::default();
    for v in &sorted {
        let entry = routes.entry(v.route.as_str()).or_default();
        entry.0.push_video(v, opts);
        entry.1 += 1;
        overall.push_video(v, opts);
    }
    StatsReport {
        options: *opts,
        routes: routes.into_iter().map(|(name, (acc, n))| acc.finish(name.to_string(), n, opts)).collect(),
        overall: overall.finish("overall".into(), sorted.len(), opts),
    }
}

fn fmt2(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.2}"))
}

/// Two plain-text tables: video durations, then hold usages.
pub fn render_stats_text(report: &StatsReport) -> String {
    let groups: Vec<&GroupStats> = report.routes.iter().chain(std::iter::once(&report.overall)).collect();
    let mut out = String::new();
    let _ = writeln!(out, "video duration (s)");
    let _ = writeln!(out, "{:<12} {:>6} {:>10} {:>8} {:>8} {:>8} {:>8}", "route", "videos", "total", "mean", "std", "min", "max");
    for g in &groups {
        let d = g.video_duration;
        let _ = writeln!(
            out,
            "{:<12} {:>6} {:>10} {:>8} {:>8} {:>8} {:>8}",
            g.name,
            g.videos,
            fmt2(d.map(|d| d.total)),
            fmt2(d.map(|d| d.mean)),
            fmt2(d.map(|d| d.std)),
            fmt2(d.map(|d| d.min)),
            fmt2(d.map(|d| d.max)),
        );
    }
    out.push('\n');
    let _ = writeln!(out, "hold usages");
    let _ = writeln!(
        out,
        "{:<12} {:>6} {:>6} {:>6} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}",
        "route", "count", "hands", "feet", "dur(s)", "hands", "feet", "occl(%)", "hands", "feet"
    );
    for g in &groups {
        let _ = writeln!(
            out,
            "{:<12} {:>6} {:>6} {:>6} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}",
            g.name,
            g.usage_count.total,
            g.usage_count.hands,
            g.usage_count.feet,
            fmt2(g.usage_seconds.total),
            fmt2(g.usage_seconds.hands),
            fmt2(g.usage_seconds.feet),
            fmt2(g.occlusion_percent.total),
            fmt2(g.occlusion_percent.hands),
            fmt2(g.occlusion_percent.feet),
        );
    }
    out
}
