//! One-to-one assignment of predicted usages to ground truth.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::tiou::{exceeds, ratio_to_f64, span_tiou};
use crate::annotation::UsageInterval;

/// Which limb attributes a prediction must share with the ground truth it matches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatchMode {
    /// Same hold, any limb.
    HoldOnly,
    /// Same hold and same limb class (hand or foot).
    #[default]
    LimbKind,
    /// Same hold and the same extremity.
    LimbExact,
}

impl MatchMode {
    pub fn compatible(&self, gt: &UsageInterval, pred: &UsageInterval) -> bool {
        if gt.hold != pred.hold {
            return false;
        }
        match self {
            MatchMode::HoldOnly => true,
            MatchMode::LimbKind => gt.extremity.kind == pred.extremity.kind,
            MatchMode::LimbExact => gt.extremity == pred.extremity,
        }
    }
}

impl std::str::FromStr for MatchMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hold-only" => Ok(MatchMode::HoldOnly),
            "limb-kind" => Ok(MatchMode::LimbKind),
            "limb-exact" => Ok(MatchMode::LimbExact),
            other => Err(format!("unknown match mode `{other}` (hold-only, limb-kind, limb-exact)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchedPair {
    /// Index into the ground-truth slice.
    pub gt: usize,
    /// Index into the prediction slice.
    pub pred: usize,
    pub tiou: Ratio<u64>,
}

impl MatchedPair {
    pub fn tiou_f64(&self) -> f64 {
        ratio_to_f64(self.tiou)
    }
}

/// Matched pairs (true positives) plus the leftovers on each side.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MatchResult {
    pub pairs: Vec<MatchedPair>,
    /// Ground truth with no prediction: false negatives.
    pub unmatched_gt: Vec<usize>,
    /// Predictions with no ground truth: false positives.
    pub unmatched_pred: Vec<usize>,
}

impl MatchResult {
    pub fn tp(&self) -> usize {
        self.pairs.len()
    }

    pub fn fp(&self) -> usize {
        self.unmatched_pred.len()
    }

    pub fn fn_count(&self) -> usize {
        self.unmatched_gt.len()
    }
}

/// Greedy matching by descending tIoU.
///
/// Candidates must be compatible under `mode` and have tIoU strictly above
/// `threshold`. Ties go to the earlier ground-truth start, then the earlier
/// predicted start.
pub fn match_intervals(
    gt: &[UsageInterval],
    pred: &[UsageInterval],
    threshold: f64,
    mode: MatchMode,
) -> MatchResult {
    let mut candidates = Vec::new();
    for (gi, g) in gt.iter().enumerate() {
        for (pi, p) in pred.iter().enumerate() {
            if !mode.compatible(g, p) {
                continue;
            }
            let t = span_tiou(&g.span(), &p.span());
            if exceeds(t, threshold) {
                candidates.push(MatchedPair { gt: gi, pred: pi, tiou: t });
            }
        }
    }
    candidates.sort_by(|a, b| {
        b.tiou
            .cmp(&a.tiou)
            .then(gt[a.gt].start().cmp(&gt[b.gt].start()))
            .then(pred[a.pred].start().cmp(&pred[b.pred].start()))
            .then(a.gt.cmp(&b.gt))
            .then(a.pred.cmp(&b.pred))
    });

    let mut gt_used = vec![false; gt.len()];
    let mut pred_used = vec![false; pred.len()];
    let mut pairs = Vec::new();
    for c in candidates {
        if gt_used[c.gt] || pred_used[c.pred] {
            continue;
        }
        gt_used[c.gt] = true;
        pred_used[c.pred] = true;
        pairs.push(c);
    }
    pairs.sort_by_key(|p| p.gt);
    MatchResult {
        pairs,
        unmatched_gt: (0..gt.len()).filter(|&i| !gt_used[i]).collect(),
        unmatched_pred: (0..pred.len()).filter(|&i| !pred_used[i]).collect(),
    }
}
