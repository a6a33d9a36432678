use num_rational::Ratio;
use num_traits::ToPrimitive;

use crate::annotation::{FrameSpan, UsageInterval};

/// Temporal IoU of two frame spans as an exact, reduced fraction.
pub fn span_tiou(a: &FrameSpan, b: &FrameSpan) -> Ratio<u64> {
    let inter = u64::from(a.intersection_len(b));
    let union = u64::from(a.union_len(b));
    Ratio::new(inter, union)
}

pub fn tiou_exact(a: &UsageInterval, b: &UsageInterval) -> Ratio<u64> {
    span_tiou(&a.span(), &b.span())
}

/// `|A ∩ B| / |A ∪ B|` over frames, in `[0, 1]`.
pub fn tiou(a: &UsageInterval, b: &UsageInterval) -> f64 {
    ratio_to_f64(tiou_exact(a, b))
}

pub(crate) fn ratio_to_f64(r: Ratio<u64>) -> f64 {
    r.to_f64().unwrap_or(0.0)
}

/// Strict `r > threshold`.
pub(crate) fn exceeds(r: Ratio<u64>, threshold: f64) -> bool {
    (*r.numer() as f64) > threshold * (*r.denom() as f64)
}
