//! Synthetic climbs: keypoint streams generated from a list of planned hold
//! usages, with optional jitter, keypoint dropouts, and empty frames.
//!
//! The body is four independent limb anchors plus a few torso keypoints that
//! keep the person inside the climbing region. During a move the anchor sits
//! at a spot where its area of interest overlaps the target hold and no other
//! hold, with room to spare for the jitter. Between moves each limb waits in
//! a vertical lane beside the route (left limbs on the left, right limbs on
//! the right) and slides along it to the height of its next hold.

use std::collections::BTreeMap;

use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annotation::{FrameRecord, HoldRef, Keypoint, KeypointStream, Person, RouteTopo, StreamHeader, UsageInterval};
use crate::geometry::{limb_aoi, Aabb, AoiConfig, GeometryError, Point2, SkeletonConvention};
use crate::limb::{Extremity, LimbKind, Side};
use crate::scalar::Real;

/// Jitter is truncated at this many standard deviations per axis.
pub const JITTER_TRUNCATION: f64 = 4.0;

const CONFIDENCE: f64 = 0.9;
const GRID_STEPS: usize = 48;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("cannot place {extremity} on hold {hold}: {reason}")]
    InfeasiblePlacement { extremity: Extremity, hold: u32, reason: String },
    #[error("invalid scenario: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// One planned usage; frames are inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Move {
    pub extremity: Extremity,
    pub hold: u32,
    pub start: u32,
    pub end: u32,
}

/// Frames (inclusive) where one limb keypoint is missing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dropout {
    pub extremity: Extremity,
    pub from: u32,
    pub to: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", deny_unknown_fields)]
pub struct ScenarioSpec<T> {
    pub topo: RouteTopo<T>,
    #[serde(default = "default_convention")]
    pub convention: String,
    /// Stream length; defaults to the topo's frame count, then to one past the last move.
    #[serde(default)]
    pub frame_count: Option<u32>,
    pub moves: Vec<Move>,
    /// Standard deviation of the per-frame pixel jitter.
    #[serde(default)]
    pub noise_sigma: T,
    #[serde(default)]
    pub dropouts: Vec<Dropout>,
    /// Inclusive frame ranges with no person at all.
    #[serde(default)]
    pub empty_frames: Vec<(u32, u32)>,
    #[serde(default)]
    pub seed: u64,
}

fn default_convention() -> String {
    "coco17".into()
}

impl<T: Real> ScenarioSpec<T> {
    pub fn new(topo: RouteTopo<T>, moves: Vec<Move>) -> Self {
        Self {
            topo,
            convention: default_convention(),
            frame_count: None,
            moves,
            noise_sigma: T::zero(),
            dropouts: Vec::new(),
            empty_frames: Vec::new(),
            seed: 0,
        }
    }

    pub fn resolved_frame_count(&self) -> u32 {
        self.frame_count
            .or(self.topo.frame_count)
            .unwrap_or_else(|| self.moves.iter().map(|m| m.end + 1).max().unwrap_or(0))
    }

    /// Ground truth: the moves themselves.
    pub fn truth(&self) -> Vec<UsageInterval> {
        self.moves
            .iter()
            .filter_map(|m| UsageInterval::simple(m.extremity, HoldRef::Id(m.hold), m.start, m.end))
            .collect()
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let n = self.resolved_frame_count();
        if !(self.noise_sigma >= T::zero()) || !Float::is_finite(self.noise_sigma) {
            return Err(SimError::InvalidSpec("noise_sigma must be finite and non-negative".into()));
        }
        let mut by_limb: BTreeMap<Extremity, Vec<&Move>> = BTreeMap::new();
        for m in &self.moves {
            if m.start > m.end || m.end >= n {
                return Err(SimError::InvalidSpec(format!(
                    "move {} on hold {} spans {}-{} outside 0-{}",
                    m.extremity,
                    m.hold,
                    m.start,
                    m.end,
                    n.saturating_sub(1)
                )));
            }
            if self.topo.hold(m.hold).is_none() {
                return Err(SimError::InvalidSpec(format!("hold {} is not in the topo", m.hold)));
            }
            by_limb.entry(m.extremity).or_default().push(m);
        }
        for (ext, mut moves) in by_limb {
            moves.sort_by_key(|m| m.start);
            for w in moves.windows(2) {
                if w[1].start <= w[0].end {
                    return Err(SimError::InvalidSpec(format!(
                        "{ext} is on two holds at once around frame {}",
                        w[1].start
                    )));
                }
            }
        }
        for d in &self.dropouts {
            if d.from > d.to {
                return Err(SimError::InvalidSpec(format!("dropout {}-{} is reversed", d.from, d.to)));
            }
        }
        for &(a, b) in &self.empty_frames {
            if a > b {
                return Err(SimError::InvalidSpec(format!("empty range {a}-{b} is reversed")));
            }
        }
        Ok(())
    }
}

/// Anchor offsets of an AOI: `(left/right half width, extent above, extent below)`.
fn aoi_extents<T: Real>(ext: Extremity, conv: &SkeletonConvention, aoi: &AoiConfig<T>) -> (T, T, T) {
    let b = limb_aoi(ext, Point2::new(T::zero(), T::zero()), conv, aoi);
    (b.max.x, -b.min.y, b.max.y)
}

/// How far `a` would have to move before it stops overlapping `b` (negative when disjoint).
fn penetration<T: Real>(a: &Aabb<T>, b: &Aabb<T>) -> T {
    let (ox, oy) = a.overlap_extents(b);
    Float::min(ox, oy)
}

/// How far `a` would have to move before it overlaps `b` (negative when overlapping).
fn clearance<T: Real>(a: &Aabb<T>, b: &Aabb<T>) -> T {
    let gx = Float::max(b.min.x - a.max.x, a.min.x - b.max.x);
    let gy = Float::max(b.min.y - a.max.y, a.min.y - b.max.y);
    Float::max(gx, gy)
}

/// Anchor position for `ext` on hold `hold` that maximises the worst of
/// penetration into the target and clearance from every other hold.
pub fn place_anchor<T: Real>(
    topo: &RouteTopo<T>,
    ext: Extremity,
    hold: u32,
    conv: &SkeletonConvention,
    aoi: &AoiConfig<T>,
    margin: T,
) -> Result<Point2<T>, SimError> {
    let target = topo
        .hold(hold)
        .ok_or_else(|| SimError::InvalidSpec(format!("hold {hold} is not in the topo")))?
        .bbox;
    let (half, up, down) = aoi_extents(ext, conv, aoi);
    let (w, h) = (T::lit(f64::from(topo.resolution.width)), T::lit(f64::from(topo.resolution.height)));
    let x0 = target.min.x - half;
    let x1 = target.max.x + half;
    let y0 = target.min.y - down;
    let y1 = target.max.y + up;
    let steps = T::lit(GRID_STEPS as f64);
    let mut best: Option<(T, Point2<T>)> = None;
    for i in 0..=GRID_STEPS {
        for j in 0..=GRID_STEPS {
            let x = x0 + (x1 - x0) * T::lit(i as f64) / steps;
            let y = y0 + (y1 - y0) * T::lit(j as f64) / steps;
            if x < T::zero() || y < T::zero() || x > w || y > h {
                continue;
            }
            let anchor = Point2::new(x, y);
            let b = limb_aoi(ext, anchor, conv, aoi);
            let pen = penetration(&b, &target);
            if pen <= margin {
                continue;
            }
            let clear = topo
                .holds
                .iter()
                .filter(|o| o.id != hold)
                .map(|o| clearance(&b, &o.bbox))
                .fold(T::infinity(), Float::min);
            if clear < margin {
                continue;
            }
            let score = Float::min(pen, clear);
            if best.is_none_or(|(s, _)| score > s) {
                best = Some((score, anchor));
            }
        }
    }
    best.map(|(_, p)| p).ok_or_else(|| SimError::InfeasiblePlacement {
        extremity: ext,
        hold,
        reason: format!("no anchor keeps a {margin} px margin on the target and from other holds"),
    })
}

/// Lane x coordinate for limbs on `side`, clear of every hold by `margin`.
fn lane_x<T: Real>(
    topo: &RouteTopo<T>,
    side: Side,
    conv: &SkeletonConvention,
    aoi: &AoiConfig<T>,
    margin: T,
) -> Result<T, SimError> {
    let region = topo.hold_region().ok_or_else(|| SimError::InvalidSpec("topo has no holds".into()))?;
    let half = Extremity::ALL
        .iter()
        .map(|&e| aoi_extents(e, conv, aoi).0)
        .fold(T::zero(), Float::max);
    let offset = half + margin + T::one();
    let x = match side {
        Side::Left => region.min.x - offset,
        Side::Right => region.max.x + offset,
    };
    if x < T::zero() || x > T::lit(f64::from(topo.resolution.width)) {
        let ext = match side {
            Side::Left => Extremity::LEFT_HAND,
            Side::Right => Extremity::RIGHT_HAND,
        };
        return Err(SimError::InfeasiblePlacement {
            extremity: ext,
            hold: 0,
            reason: format!("no room beside the route for the {side:?} waiting lane"),
        });
    }
    Ok(x)
}

/// Noise-free anchor position of one limb for every frame.
fn limb_track<T: Real>(moves: &[(Move, Point2<T>)], lane: T, rest_y: T, n: u32) -> Vec<Point2<T>> {
    let mut track = Vec::with_capacity(n as usize);
    for f in 0..n {
        let idx = moves.partition_point(|(m, _)| m.end < f);
        let p = match moves.get(idx) {
            Some((m, p)) if m.start <= f => *p,
            next => {
                let prev = idx.checked_sub(1).map(|i| &moves[i]);
                match (prev, next) {
                    (None, None) => Point2::new(lane, rest_y),
                    (Some((_, p)), None) => Point2::new(lane, p.y),
                    (None, Some((_, q))) => Point2::new(lane, q.y),
                    (Some((a, p)), Some((b, q))) => {
                        // slide along the lane over the gap frames
                        let gap = b.start - a.end - 1;
                        let t = if gap <= 1 {
                            T::lit(0.5)
                        } else {
                            T::lit(f64::from(f - a.end - 1) / f64::from(gap - 1))
                        };
                        Point2::new(lane, p.y + (q.y - p.y) * t)
                    }
                }
            }
        };
        track.push(p);
    }
    track
}

fn in_ranges(f: u32, ranges: impl IntoIterator<Item = (u32, u32)>) -> bool {
    ranges.into_iter().any(|(a, b)| (a..=b).contains(&f))
}

/// Generates the keypoint stream for `spec` and returns it with the ground truth.
pub fn synthesize<T: Real>(spec: &ScenarioSpec<T>) -> Result<(KeypointStream<T>, Vec<UsageInterval>), SimError> {
    spec.validate()?;
    let topo = &spec.topo;
    let conv = SkeletonConvention::by_name(&spec.convention)?;
    let aoi = AoiConfig::<T>::default().for_image_height(topo.resolution.height);
    let n = spec.resolved_frame_count();
    let sigma = spec.noise_sigma;
    let margin = sigma * T::lit(JITTER_TRUNCATION);

    let mut header_extra = BTreeMap::new();
    header_extra.insert("seed".to_string(), serde_json::Value::from(spec.seed));
    header_extra.insert("noise_sigma".to_string(), serde_json::Value::from(sigma.as_f64()));
    let header = StreamHeader {
        format_version: crate::annotation::FORMAT_VERSION,
        video_id: topo.video_id.clone(),
        fps: topo.fps,
        resolution: topo.resolution,
        convention: conv.name.clone(),
        backend: "synthetic".into(),
        model_variant: None,
        extra: header_extra,
    };
    if spec.moves.is_empty() && n == 0 {
        return Ok((KeypointStream { header, frames: Vec::new() }, Vec::new()));
    }

    let region = topo.hold_region().ok_or_else(|| SimError::InvalidSpec("topo has no holds".into()))?;
    let centre = region.center();
    let mut tracks: Vec<Vec<Point2<T>>> = Vec::with_capacity(4);
    for ext in Extremity::ALL {
        let mut moves: Vec<(Move, Point2<T>)> = Vec::new();
        for m in spec.moves.iter().filter(|m| m.extremity == ext) {
            moves.push((*m, place_anchor(topo, ext, m.hold, &conv, &aoi, margin)?));
        }
        moves.sort_by_key(|(m, _)| m.start);
        let lane = lane_x(topo, ext.side, &conv, &aoi, margin)?;
        let rest_y = match ext.kind {
            LimbKind::Hand => centre.y,
            LimbKind::Foot => region.max.y,
        };
        tracks.push(limb_track(&moves, lane, rest_y, n));
    }

    let torso: [(&str, T, T); 5] = [
        ("nose", T::zero(), T::lit(-60.0)),
        ("left_shoulder", T::lit(-25.0), T::lit(-30.0)),
        ("right_shoulder", T::lit(25.0), T::lit(-30.0)),
        ("left_hip", T::lit(-20.0), T::lit(40.0)),
        ("right_hip", T::lit(20.0), T::lit(40.0)),
    ];
    let (w, h) = (T::lit(f64::from(topo.resolution.width)), T::lit(f64::from(topo.resolution.height)));
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let normal = if sigma > T::zero() { Some(Normal::new(0.0, sigma.as_f64()).map_err(|e| SimError::InvalidSpec(e.to_string()))?) } else { None };
    let mut jitter = |p: Point2<T>| -> Point2<T> {
        let Some(normal) = &normal else { return p };
        let bound = JITTER_TRUNCATION * sigma.as_f64();
        let mut draw = || loop {
            let v: f64 = normal.sample(&mut rng);
            if v.abs() <= bound {
                return T::lit(v);
            }
        };
        let (dx, dy) = (draw(), draw());
        Point2::new(Float::min(Float::max(p.x + dx, T::zero()), w), Float::min(Float::max(p.y + dy, T::zero()), h))
    };

    let confidence = T::lit(CONFIDENCE);
    let mut frames = Vec::with_capacity(n as usize);
    for f in 0..n {
        let empty = in_ranges(f, spec.empty_frames.iter().copied());
        let mut keypoints = BTreeMap::new();
        for (name, dx, dy) in torso {
            let p = jitter(Point2::new(centre.x + dx, centre.y + dy));
            keypoints.insert(name.to_string(), Keypoint::new(p.x, p.y, confidence));
        }
        for (i, ext) in Extremity::ALL.into_iter().enumerate() {
            let p = jitter(tracks[i][f as usize]);
            let dropped = in_ranges(f, spec.dropouts.iter().filter(|d| d.extremity == ext).map(|d| (d.from, d.to)));
            if !dropped {
                keypoints.insert(conv.anchor_name(ext).to_string(), Keypoint::new(p.x, p.y, confidence));
            }
        }
        let persons = if empty { Vec::new() } else { vec![Person { id: 0, keypoints }] };
        frames.push(FrameRecord { frame: f, inference_ms: None, persons });
    }
    Ok((KeypointStream { header, frames }, spec.truth()))
}
