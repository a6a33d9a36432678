//! Scoring detected usages against ground truth with temporal IoU.

mod matching;
mod metrics;
mod report;
mod tiou;

pub use matching::{match_intervals, MatchMode, MatchResult, MatchedPair};
pub use metrics::{metrics, Counts, Metrics, TiouAveraging};
pub use report::{
    evaluate, render_csv, render_text, EvalError, EvalOptions, EvalReport, LimbScope, MetricSlice, Scope,
    ThresholdReport, VideoEval, VideoSummary,
};
pub use tiou::{span_tiou, tiou, tiou_exact};
