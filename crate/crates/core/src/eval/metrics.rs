use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::matching::MatchResult;

/// How mean tIoU is averaged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TiouAveraging {
    /// Over matched pairs only.
    #[default]
    MatchedPairs,
    /// Over all ground truth; unmatched ground truth counts as zero.
    AllGroundTruth,
}

/// Additive outcome counts. Summing counts and then deriving rates gives
/// micro-averaged metrics.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Counts {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    /// Sum of tIoU over matched pairs.
    pub tiou_sum: f64,
}

impl Counts {
    pub fn from_match(m: &MatchResult) -> Self {
        Self {
            tp: m.tp() as u64,
            fp: m.fp() as u64,
            fn_: m.fn_count() as u64,
            tiou_sum: m.pairs.iter().map(|p| p.tiou_f64()).sum(),
        }
    }

    pub fn add(&mut self, other: &Counts) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.fn_ += other.fn_;
        self.tiou_sum += other.tiou_sum;
    }

    fn ratio(num: u64, den: u64) -> Option<Ratio<u64>> {
        (den > 0).then(|| Ratio::new(num, den))
    }

    /// `tp / (tp + fp + fn)`; `None` when all three are zero.
    pub fn accuracy_exact(&self) -> Option<Ratio<u64>> {
        Self::ratio(self.tp, self.tp + self.fp + self.fn_)
    }

    /// `tp / (tp + fp)`
    pub fn precision_exact(&self) -> Option<Ratio<u64>> {
        Self::ratio(self.tp, self.tp + self.fp)
    }

    /// `tp / (tp + fn)`
    pub fn sensitivity_exact(&self) -> Option<Ratio<u64>> {
        Self::ratio(self.tp, self.tp + self.fn_)
    }

    pub fn mean_tiou(&self, averaging: TiouAveraging) -> Option<f64> {
        let den = match averaging {
            TiouAveraging::MatchedPairs => self.tp,
            TiouAveraging::AllGroundTruth => self.tp + self.fn_,
        };
        (den > 0).then(|| self.tiou_sum / den as f64)
    }

    pub fn metrics(&self, averaging: TiouAveraging) -> Metrics {
        let f = |r: Option<Ratio<u64>>| r.map(|r| *r.numer() as f64 / *r.denom() as f64);
        Metrics {
            tp: self.tp,
            fp: self.fp,
            fn_: self.fn_,
            accuracy: f(self.accuracy_exact()),
            precision: f(self.precision_exact()),
            sensitivity: f(self.sensitivity_exact()),
            mean_tiou: self.mean_tiou(averaging),
        }
    }
}

/// Derived rates. A rate is `None` when its denominator is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub accuracy: Option<f64>,
    pub precision: Option<f64>,
    pub sensitivity: Option<f64>,
    pub mean_tiou: Option<f64>,
}

/// Metrics for a single match result.
pub fn metrics(m: &MatchResult, averaging: TiouAveraging) -> Metrics {
    Counts::from_match(m).metrics(averaging)
}
