use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::matching::{match_intervals, MatchMode};
use super::metrics::{Counts, Metrics, TiouAveraging};
use crate::annotation::UsageInterval;
use crate::detector::RunStats;
use crate::limb::LimbKind;

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("video id `{0}` appears more than once")]
    DuplicateVideoId(String),
    #[error("threshold {0} is outside [0, 1)")]
    InvalidThreshold(f64),
}

/// Ground truth and predictions for one video.
#[derive(Debug, Clone, PartialEq)]
pub struct VideoEval {
    pub video_id: String,
    pub route: String,
    pub ground_truth: Vec<UsageInterval>,
    pub predictions: Vec<UsageInterval>,
    pub run_stats: Option<RunStats>,
    pub fps: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalOptions {
    pub thresholds: Vec<f64>,
    pub match_mode: MatchMode,
    pub averaging: TiouAveraging,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self { thresholds: vec![0.0, 0.5], match_mode: MatchMode::default(), averaging: TiouAveraging::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LimbScope {
    Overall,
    Hands,
    Feet,
}

impl LimbScope {
    pub const ALL: [LimbScope; 3] = [LimbScope::Overall, LimbScope::Hands, LimbScope::Feet];

    pub fn label(&self) -> &'static str {
        match self {
            LimbScope::Overall => "overall",
            LimbScope::Hands => "hands",
            LimbScope::Feet => "feet",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "name", rename_all = "lowercase")]
pub enum Scope {
    AllVideos,
    Route(String),
    Video(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSlice {
    pub scope: Scope,
    pub limbs: LimbScope,
    pub counts: Counts,
    pub metrics: Metrics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub threshold: f64,
    pub slices: Vec<MetricSlice>,
}

impl ThresholdReport {
    pub fn slice(&self, scope: &Scope, limbs: LimbScope) -> Option<&MetricSlice> {
        self.slices.iter().find(|s| &s.scope == scope && s.limbs == limbs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VideoSummary {
    pub video_id: String,
    pub route: String,
    pub ground_truth: usize,
    pub predictions: usize,
    /// Ground-truth usages of the bare wall, left out of matching.
    pub excluded_wall_ground_truth: usize,
    pub excluded_wall_predictions: usize,
    pub fps: Option<f64>,
    pub run_stats: Option<RunStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub options: EvalOptions,
    pub thresholds: Vec<ThresholdReport>,
    pub videos: Vec<VideoSummary>,
}

impl EvalReport {
    pub fn at(&self, threshold: f64) -> Option<&ThresholdReport> {
        self.thresholds.iter().find(|t| t.threshold == threshold)
    }

    pub fn routes(&self) -> Vec<String> {
        self.videos.iter().map(|v| v.route.clone()).collect::<BTreeSet<_>>().into_iter().collect()
    }
}

fn class_of(kind: LimbKind) -> usize {
    match kind {
        LimbKind::Hand => 0,
        LimbKind::Foot => 1,
    }
}

/// Per-class counts for one video: TP and FN take the ground truth's limb
/// class, FP the prediction's.
fn video_counts(gt: &[UsageInterval], pred: &[UsageInterval], threshold: f64, mode: MatchMode) -> [Counts; 2] {
    let m = match_intervals(gt, pred, threshold, mode);
    let mut out = [Counts::default(); 2];
    for p in &m.pairs {
        let c = &mut out[class_of(gt[p.gt].extremity.kind)];
        c.tp += 1;
        c.tiou_sum += p.tiou_f64();
    }
    for &i in &m.unmatched_gt {
        out[class_of(gt[i].extremity.kind)].fn_ += 1;
    }
    for &i in &m.unmatched_pred {
        out[class_of(pred[i].extremity.kind)].fp += 1;
    }
    out
}

fn slices_for(scope: Scope, classes: &[Counts; 2], averaging: TiouAveraging) -> Vec<MetricSlice> {
    let mut overall = classes[0];
    overall.add(&classes[1]);
    [(LimbScope::Overall, overall), (LimbScope::Hands, classes[0]), (LimbScope::Feet, classes[1])]
        .into_iter()
        .map(|(limbs, counts)| MetricSlice { scope: scope.clone(), limbs, counts, metrics: counts.metrics(averaging) })
        .collect()
}

/// Scores every video at every threshold.
///
/// Videos are processed in id order, so the report does not depend on input order.
pub fn evaluate(videos: &[VideoEval], options: &EvalOptions) -> Result<EvalReport, EvalError> {
    for &t in &options.thresholds {
        if !(0.0..1.0).contains(&t) {
            return Err(EvalError::InvalidThreshold(t));
        }
    }
    let mut sorted: Vec<&VideoEval> = videos.iter().collect();
    sorted.sort_by(|a, b| a.video_id.cmp(&b.video_id));
    for w in sorted.windows(2) {
        if w[0].video_id == w[1].video_id {
            return Err(EvalError::DuplicateVideoId(w[0].video_id.clone()));
        }
    }

    let split = |v: &[UsageInterval]| -> (Vec<UsageInterval>, usize) {
        let kept: Vec<_> = v.iter().filter(|u| !u.hold.is_wall()).cloned().collect();
        let dropped = v.len() - kept.len();
        (kept, dropped)
    };
    let prepared: Vec<_> = sorted
        .iter()
        .map(|v| {
            let (gt, gt_wall) = split(&v.ground_truth);
            let (pred, pred_wall) = split(&v.predictions);
            (v, gt, pred, gt_wall, pred_wall)
        })
        .collect();

    let mut thresholds = Vec::new();
    for &t in &options.thresholds {
        let mut all = [Counts::default(); 2];
        let mut by_route: BTreeMap<&str, [Counts; 2]> = BTreeMap::new();
        let mut per_video = Vec::new();
        for (v, gt, pred, _, _) in &prepared {
            let c = video_counts(gt, pred, t, options.match_mode);
            let route = by_route.entry(v.route.as_str()).or_default();
            for k in 0..2 {
                all[k].add(&c[k]);
                route[k].add(&c[k]);
            }
            per_video.push((v.video_id.clone(), c));
        }
        let mut slices = slices_for(Scope::AllVideos, &all, options.averaging);
        for (route, c) in &by_route {
            slices.extend(slices_for(Scope::Route(route.to_string()), c, options.averaging));
        }
        for (id, c) in &per_video {
            slices.extend(slices_for(Scope::Video(id.clone()), c, options.averaging));
        }
        thresholds.push(ThresholdReport { threshold: t, slices });
    }

    let summaries = prepared
        .iter()
        .map(|(v, gt, pred, gt_wall, pred_wall)| VideoSummary {
            video_id: v.video_id.clone(),
            route: v.route.clone(),
            ground_truth: gt.len(),
            predictions: pred.len(),
            excluded_wall_ground_truth: *gt_wall,
            excluded_wall_predictions: *pred_wall,
            fps: v.fps,
            run_stats: v.run_stats.clone(),
        })
        .collect();
    Ok(EvalReport { options: options.clone(), thresholds, videos: summaries })
}

fn pct(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{:.1}", v * 100.0))
}

fn num(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.digits$}"))
}

fn table(out: &mut String, header: &[String], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect::<Vec<_>>()
            .join("  ")
    };
    let _ = writeln!(out, "{}", line(header));
    let _ = writeln!(out, "{}", widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "));
    for r in rows {
        let _ = writeln!(out, "{}", line(r));
    }
}

/// Plain-text tables: per-route metrics for each threshold, per-video
/// accuracy, and per-video run statistics.
pub fn render_text(report: &EvalReport) -> String {
    let mut out = String::new();
    let routes = report.routes();
    for tr in &report.thresholds {
        let _ = writeln!(out, "tIoU > {} ({} mode)", tr.threshold, mode_label(report.options.match_mode));
        let mut header = vec!["metric (%)".to_string()];
        let mut scopes = Vec::new();
        for r in &routes {
            for l in LimbScope::ALL {
                header.push(format!("{r}/{}", l.label()));
                scopes.push((Scope::Route(r.clone()), l));
            }
        }
        for l in LimbScope::ALL {
            header.push(format!("all/{}", l.label()));
            scopes.push((Scope::AllVideos, l));
        }
        let get = |s: &(Scope, LimbScope)| tr.slice(&s.0, s.1).map(|x| x.metrics);
        let mut rows = Vec::new();
        type Getter = fn(&Metrics) -> String;
        let fields: [(&str, Getter); 7] = [
            ("accuracy", |m| pct(m.accuracy)),
            ("sensitivity", |m| pct(m.sensitivity)),
            ("precision", |m| pct(m.precision)),
            ("mean tIoU", |m| num(m.mean_tiou, 3)),
            ("TP", |m| m.tp.to_string()),
            ("FP", |m| m.fp.to_string()),
            ("FN", |m| m.fn_.to_string()),
        ];
        for (name, f) in fields {
            let mut row = vec![name.to_string()];
            row.extend(scopes.iter().map(|s| get(s).map_or_else(|| "-".to_string(), |m| f(&m))));
            rows.push(row);
        }
        table(&mut out, &header, &rows);
        out.push('\n');
    }

    if let Some(tr) = report.thresholds.first() {
        let _ = writeln!(out, "per-video accuracy (%), tIoU > {}", tr.threshold);
        let header: Vec<String> =
            ["video", "route", "overall", "hands", "feet"].iter().map(|s| s.to_string()).collect();
        let rows: Vec<Vec<String>> = report
            .videos
            .iter()
            .map(|v| {
                let scope = Scope::Video(v.video_id.clone());
                let mut row = vec![v.video_id.clone(), v.route.clone()];
                row.extend(LimbScope::ALL.iter().map(|&l| pct(tr.slice(&scope, l).and_then(|s| s.metrics.accuracy))));
                row
            })
            .collect();
        table(&mut out, &header, &rows);
        out.push('\n');
    }

    if report.videos.iter().any(|v| v.run_stats.is_some()) {
        let _ = writeln!(out, "run statistics");
        let header: Vec<String> = ["video", "frames", "no detection", "no detection (%)", "s/frame", "fps"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let rows: Vec<Vec<String>> = report
            .videos
            .iter()
            .filter_map(|v| {
                let rs = v.run_stats.as_ref()?;
                let missing = (rs.frames_processed > 0)
                    .then(|| rs.missing_detection_frames as f64 / rs.frames_processed as f64);
                let inf = rs.inference.as_ref();
                Some(vec![
                    v.video_id.clone(),
                    rs.frames_processed.to_string(),
                    rs.missing_detection_frames.to_string(),
                    pct(missing),
                    num(inf.map(|i| i.mean_ms / 1000.0), 3),
                    num(inf.map(|i| i.fps), 1),
                ])
            })
            .collect();
        table(&mut out, &header, &rows);
    }
    out
}

fn mode_label(mode: MatchMode) -> &'static str {
    match mode {
        MatchMode::HoldOnly => "hold-only",
        MatchMode::LimbKind => "limb-kind",
        MatchMode::LimbExact => "limb-exact",
    }
}

/// One CSV row per threshold, scope, and limb class.
pub fn render_csv(report: &EvalReport) -> String {
    let mut out = String::from("threshold,scope,name,limbs,tp,fp,fn,accuracy,precision,sensitivity,mean_tiou\n");
    let opt = |v: Option<f64>| v.map_or_else(String::new, |v| v.to_string());
    for tr in &report.thresholds {
        for s in &tr.slices {
            let (kind, name) = match &s.scope {
                Scope::AllVideos => ("all", ""),
                Scope::Route(r) => ("route", r.as_str()),
                Scope::Video(v) => ("video", v.as_str()),
            };
            let m = &s.metrics;
            let _ = writeln!(
                out,
                "{},{kind},{name},{},{},{},{},{},{},{},{}",
                tr.threshold,
                s.limbs.label(),
                m.tp,
                m.fp,
                m.fn_,
                opt(m.accuracy),
                opt(m.precision),
                opt(m.sensitivity),
                opt(m.mean_tiou),
            );
        }
    }
    out
}
