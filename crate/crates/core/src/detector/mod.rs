//! Hold-usage detection from a keypoint stream.
//!
//! For every frame the climber's four limb anchors are widened into areas of
//! interest and tested against every hold box. Each `(limb, hold)` pair keeps
//! its own run of overlapping frames:
//!
//! * a run counts as usage once it spans at least the persistence threshold
//!   (0.5 s by default), measured from the run's first overlapping frame;
//! * overlap that reappears after a gap no longer than the memory window
//!   resumes the earlier run and keeps its start frame;
//! * a run ends when the limb leaves the hold for longer than the memory
//!   window, and a confirmed run is then emitted as `[first overlap, last overlap]`.
//!
//! When the climber or a limb keypoint is missing, or below the confidence
//! threshold, the limb's last known anchor is reused.

mod select;
mod state;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use select::{climbing_region, select_climber, select_climber_in};
pub use state::{DetectionState, PairRun};

use crate::annotation::{FrameRecord, HoldRef, KeypointStream, RouteTopo, StreamHeader, UsageInterval};
use crate::geometry::{limb_aoi, Aabb, AoiConfig, GeometryError, SkeletonConvention};
use crate::limb::{Extremity, LimbKind};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DetectError {
    #[error("stream fps {stream} does not match topo fps {topo}")]
    FpsMismatch { stream: f64, topo: f64 },
    #[error("frame {frame} arrived after frame {previous}")]
    OutOfOrderFrame { previous: u32, frame: u32 },
    #[error("invalid detector configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", default, deny_unknown_fields)]
pub struct DetectorConfig<T> {
    /// Minimum overlap duration before contact counts as usage.
    pub persistence_seconds: f64,
    /// Longest overlap gap that still resumes the previous run.
    pub memory_seconds: f64,
    /// Keypoints below this confidence are treated as missing.
    pub confidence_threshold: T,
    /// Extents for a 1280-px-high image; see `scale_aoi_to_resolution`.
    pub aoi: AoiConfig<T>,
    pub scale_aoi_to_resolution: bool,
    /// Overrides the convention named in the stream header.
    pub convention: Option<SkeletonConvention>,
    pub footholds_only_for_feet: bool,
    /// Margin around the hold region, as a fraction of its width, used to pick the climber.
    pub crop_margin_fraction: f64,
}

impl<T: Real> Default for DetectorConfig<T> {
    fn default() -> Self {
        Self {
            persistence_seconds: 0.5,
            memory_seconds: 1.0,
            confidence_threshold: T::lit(0.3),
            aoi: AoiConfig::default(),
            scale_aoi_to_resolution: true,
            convention: None,
            footholds_only_for_feet: false,
            crop_margin_fraction: 0.15,
        }
    }
}

/// Smallest whole number of frames lasting at least `seconds`.
fn frames_for(seconds: f64, fps: f64) -> u32 {
    // 1e-9 absorbs representation error such as 0.2 * 25 = 5.000000000000001
    (seconds * fps - 1e-9).ceil().max(0.0) as u32
}

impl<T: Real> DetectorConfig<T> {
    pub fn persistence_frames(&self, fps: f64) -> u32 {
        frames_for(self.persistence_seconds, fps)
    }

    pub fn memory_frames(&self, fps: f64) -> u32 {
        frames_for(self.memory_seconds, fps)
    }

    /// Area-of-interest extents for an image `height` pixels tall.
    pub fn effective_aoi(&self, height: u32) -> AoiConfig<T> {
        if self.scale_aoi_to_resolution {
            self.aoi.for_image_height(height)
        } else {
            self.aoi
        }
    }

    pub fn validate(&self) -> Result<(), DetectError> {
        let bad = |m: &str| Err(DetectError::InvalidConfig(m.to_string()));
        if !(self.persistence_seconds >= 0.0) || !self.persistence_seconds.is_finite() {
            return bad("persistence_seconds must be a non-negative number");
        }
        if !(self.memory_seconds >= 0.0) || !self.memory_seconds.is_finite() {
            return bad("memory_seconds must be a non-negative number");
        }
        if !(self.confidence_threshold >= T::zero() && self.confidence_threshold <= T::one()) {
            return bad("confidence_threshold must lie in [0, 1]");
        }
        if !(self.crop_margin_fraction >= 0.0) {
            return bad("crop_margin_fraction must be non-negative");
        }
        self.aoi.validate()?;
        if let Some(c) = &self.convention {
            c.validate()?;
        }
        Ok(())
    }
}

pub fn persistence_frames<T: Real>(cfg: &DetectorConfig<T>, fps: f64) -> u32 {
    cfg.persistence_frames(fps)
}

/// A detected usage plus where it came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DetectionEvent {
    pub interval: UsageInterval,
    /// Keypoint name the limb anchor was read from.
    pub anchor: String,
    /// Frame at which the run reached the persistence threshold.
    pub confirmed_at: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InferenceStats {
    pub frames: u64,
    pub total_ms: f64,
    pub mean_ms: f64,
    pub min_ms: f64,
    pub max_ms: f64,
    /// Frames per second implied by the mean inference time.
    pub fps: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub frames_processed: u64,
    /// Frames where the pose backend found nobody.
    pub missing_detection_frames: u64,
    /// Frames with people but none inside the climbing region.
    pub frames_without_climber: u64,
    /// Limb-frames that reused a last known anchor.
    pub fallback_anchor_uses: u64,
    /// Number of frames per detected-person count.
    pub person_count_histogram: BTreeMap<u32, u64>,
    pub inference: Option<InferenceStats>,
}

#[derive(Debug, Default)]
struct StatsAccumulator {
    stats: RunStats,
    inference: Vec<f64>,
}

impl StatsAccumulator {
    fn record<T>(&mut self, frame: &FrameRecord<T>) {
        self.stats.frames_processed += 1;
        if frame.persons.is_empty() {
            self.stats.missing_detection_frames += 1;
        }
        *self.stats.person_count_histogram.entry(frame.persons.len() as u32).or_default() += 1;
        if let Some(ms) = frame.inference_ms {
            self.inference.push(ms);
        }
    }

    fn finish(mut self) -> RunStats {
        if !self.inference.is_empty() {
            let total: f64 = self.inference.iter().sum();
            let mean = total / self.inference.len() as f64;
            self.stats.inference = Some(InferenceStats {
                frames: self.inference.len() as u64,
                total_ms: total,
                mean_ms: mean,
                min_ms: self.inference.iter().copied().fold(f64::INFINITY, f64::min),
                max_ms: self.inference.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                fps: if mean > 0.0 { 1000.0 / mean } else { f64::INFINITY },
            });
        }
        self.stats
    }
}

/// Streaming detector for one video. Feed frames in order with [`Detector::step`],
/// then call [`Detector::finish`] to close runs that are still open.
pub struct Detector<'a, T: Real> {
    topo: &'a RouteTopo<T>,
    cfg: &'a DetectorConfig<T>,
    convention: SkeletonConvention,
    aoi: AoiConfig<T>,
    persistence: u32,
    memory: u32,
    region: Option<Aabb<T>>,
    state: DetectionState<T>,
    stats: StatsAccumulator,
}

fn same_fps(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
}

impl<'a, T: Real> Detector<'a, T> {
    pub fn new(header: &StreamHeader, topo: &'a RouteTopo<T>, cfg: &'a DetectorConfig<T>) -> Result<Self, DetectError> {
        if !same_fps(header.fps, topo.fps) {
            return Err(DetectError::FpsMismatch { stream: header.fps, topo: topo.fps });
        }
        cfg.validate()?;
        let convention = match &cfg.convention {
            Some(c) => c.clone(),
            None => SkeletonConvention::by_name(&header.convention)?,
        };
        Ok(Self {
            topo,
            cfg,
            convention,
            aoi: cfg.effective_aoi(topo.resolution.height),
            persistence: cfg.persistence_frames(topo.fps),
            memory: cfg.memory_frames(topo.fps),
            region: climbing_region(topo, cfg.crop_margin_fraction),
            state: DetectionState::default(),
            stats: StatsAccumulator::default(),
        })
    }

    pub fn state(&self) -> &DetectionState<T> {
        &self.state
    }

    pub fn persistence_frames(&self) -> u32 {
        self.persistence
    }

    pub fn memory_frames(&self) -> u32 {
        self.memory
    }

    pub fn aoi(&self) -> &AoiConfig<T> {
        &self.aoi
    }

    /// Processes one frame and returns the usages that ended because of it.
    pub fn step(&mut self, frame: &FrameRecord<T>) -> Result<Vec<DetectionEvent>, DetectError> {
        if let Some(previous) = self.state.last_frame {
            if frame.frame <= previous {
                return Err(DetectError::OutOfOrderFrame { previous, frame: frame.frame });
            }
        }
        self.state.last_frame = Some(frame.frame);
        self.stats.record(frame);

        let climber = self
            .region
            .as_ref()
            .and_then(|r| select_climber_in(&frame.persons, r, self.cfg.confidence_threshold))
            .and_then(|id| frame.persons.iter().find(|p| p.id == id));
        if climber.is_none() && !frame.persons.is_empty() {
            self.stats.stats.frames_without_climber += 1;
        }

        let mut overlapping = Vec::new();
        for ext in Extremity::ALL {
            let name = self.convention.anchor_name(ext);
            let fresh = climber
                .and_then(|p| p.keypoints.get(name))
                .filter(|k| k.confidence >= self.cfg.confidence_threshold && k.position().is_finite());
            let anchor = match fresh {
                Some(k) => {
                    self.state.last_anchor[ext.index()] = Some((k.position(), frame.frame));
                    k.position()
                }
                None => match self.state.last_anchor[ext.index()] {
                    Some((p, _)) => {
                        self.stats.stats.fallback_anchor_uses += 1;
                        p
                    }
                    None => continue,
                },
            };
            let aoi = limb_aoi(ext, anchor, &self.convention, &self.aoi);
            for hold in &self.topo.holds {
                if ext.kind == LimbKind::Foot && self.cfg.footholds_only_for_feet && !hold.is_foothold {
                    continue;
                }
                if aoi.overlaps(&hold.bbox) {
                    overlapping.push((ext, hold.id));
                }
            }
        }

        let closed = self.state.advance(frame.frame, &overlapping, self.persistence, self.memory);
        Ok(closed.into_iter().filter_map(|(key, run)| self.event(key, run)).collect())
    }

    /// Closes every open run; confirmed ones end at their last overlapping frame.
    pub fn finish(mut self) -> (Vec<DetectionEvent>, RunStats) {
        let closed = self.state.drain();
        let events = closed.into_iter().filter_map(|(key, run)| self.event(key, run)).collect();
        (events, self.stats.finish())
    }

    fn event(&self, (ext, hold): (Extremity, u32), run: PairRun) -> Option<DetectionEvent> {
        let confirmed_at = run.confirmed_at?;
        let interval = UsageInterval::simple(ext, HoldRef::Id(hold), run.start, run.last_overlap)?;
        Some(DetectionEvent { interval, anchor: self.convention.anchor_name(ext).to_string(), confirmed_at })
    }
}

fn event_order(a: &DetectionEvent, b: &DetectionEvent) -> std::cmp::Ordering {
    let key = |e: &DetectionEvent| (e.interval.start(), e.interval.end(), e.interval.extremity, e.interval.hold);
    key(a).cmp(&key(b))
}

/// Runs the detector over a whole stream. Events are sorted by start frame.
pub fn detect<T: Real>(
    stream: &KeypointStream<T>,
    topo: &RouteTopo<T>,
    cfg: &DetectorConfig<T>,
) -> Result<(Vec<DetectionEvent>, RunStats), DetectError> {
    let mut detector = Detector::new(&stream.header, topo, cfg)?;
    let mut events = Vec::new();
    for frame in &stream.frames {
        events.extend(detector.step(frame)?);
    }
    let (tail, stats) = detector.finish();
    events.extend(tail);
    events.sort_by(event_order);
    Ok((events, stats))
}

/// Sorts events the same way [`detect`] does.
pub fn sort_events(events: &mut [DetectionEvent]) {
    events.sort_by(event_order);
}

pub fn events_to_intervals(events: &[DetectionEvent]) -> Vec<UsageInterval> {
    events.iter().map(|e| e.interval.clone()).collect()
}
