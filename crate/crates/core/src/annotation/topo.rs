//! Route topo documents: hold boxes, foothold flags, and calibration points for one video.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{from_json, FormatError, FORMAT_VERSION};
use crate::geometry::{estimate_homography, Aabb, GeometryError, Homography, Point2};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub width: u32,
    pub height: u32,
}

/// An annotated hold. Ids are local to a route; `(route, video, id)` is globally unique.
#[derive(Debug, Clone, PartialEq)]
pub struct Hold<T> {
    pub id: u32,
    pub bbox: Aabb<T>,
    pub is_foothold: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Real", deny_unknown_fields)]
struct RawHold<T> {
    id: u32,
    min_x: T,
    min_y: T,
    max_x: T,
    max_y: T,
    #[serde(default)]
    is_foothold: bool,
}

impl<T: Real> Serialize for Hold<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawHold {
            id: self.id,
            min_x: self.bbox.min.x,
            min_y: self.bbox.min.y,
            max_x: self.bbox.max.x,
            max_y: self.bbox.max.y,
            is_foothold: self.is_foothold,
        }
        .serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for Hold<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawHold::<T>::deserialize(d)?;
        let bbox = Aabb::from_coords(raw.min_x, raw.min_y, raw.max_x, raw.max_y)
            .filter(|b| b.area() > T::zero())
            .ok_or_else(|| serde::de::Error::custom(format!("hold {} has an empty or inverted box", raw.id)))?;
        Ok(Hold { id: raw.id, bbox, is_foothold: raw.is_foothold })
    }
}

/// One image-plane point and its wall-plane counterpart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", deny_unknown_fields)]
pub struct ReferencePair<T> {
    pub image: [T; 2],
    pub wall: [T; 2],
}

fn default_unit() -> String {
    "cm".to_string()
}

fn current_version() -> u32 {
    FORMAT_VERSION
}

/// Holds and calibration for one recorded video.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", deny_unknown_fields)]
pub struct RouteTopo<T> {
    #[serde(default = "current_version")]
    pub format_version: u32,
    pub route_name: String,
    pub video_id: String,
    pub fps: f64,
    pub resolution: Resolution,
    /// Total frames in the video; needed for duration statistics.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame_count: Option<u32>,
    #[serde(default = "default_unit")]
    pub wall_unit: String,
    #[serde(default)]
    pub reference_points: Vec<ReferencePair<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homography: Option<Homography<T>>,
    pub holds: Vec<Hold<T>>,
}

impl<T: Real> RouteTopo<T> {
    pub fn hold(&self, id: u32) -> Option<&Hold<T>> {
        self.holds.iter().find(|h| h.id == id)
    }

    /// Bounding box of every hold, or `None` for an empty topo.
    pub fn hold_region(&self) -> Option<Aabb<T>> {
        let mut it = self.holds.iter().map(|h| h.bbox);
        let first = it.next()?;
        Some(it.fold(first, |acc, b| acc.union(&b)))
    }

    /// The stored homography, or one estimated from the reference points.
    pub fn image_to_wall(&self) -> Option<Result<Homography<T>, GeometryError>> {
        if let Some(h) = self.homography {
            return Some(Ok(h));
        }
        if self.reference_points.is_empty() {
            return None;
        }
        let (src, dst): (Vec<_>, Vec<_>) = self
            .reference_points
            .iter()
            .map(|p| (Point2::from(p.image), Point2::from(p.wall)))
            .unzip();
        Some(estimate_homography(&src, &dst))
    }

    pub fn validate(&self) -> Result<(), FormatError> {
        if self.format_version != FORMAT_VERSION {
            return Err(FormatError::UnsupportedVersion(self.format_version));
        }
        if !(self.fps > 0.0) || !self.fps.is_finite() {
            return Err(FormatError::schema("fps", "must be positive"));
        }
        if self.resolution.width == 0 || self.resolution.height == 0 {
            return Err(FormatError::schema("resolution", "must be non-zero"));
        }
        if self.holds.is_empty() {
            return Err(FormatError::schema("holds", "at least one hold is required"));
        }
        let mut seen = BTreeSet::new();
        for h in &self.holds {
            if !seen.insert(h.id) {
                return Err(FormatError::DuplicateHoldId(h.id));
            }
        }
        if !(self.reference_points.is_empty() || self.reference_points.len() == 4) {
            let msg = format!("expected 4 pairs, found {}", self.reference_points.len());
            return Err(FormatError::schema("reference_points", msg));
        }
        Ok(())
    }
}

pub fn parse_topo<T: Real>(text: &str) -> Result<RouteTopo<T>, FormatError> {
    let topo: RouteTopo<T> = from_json(text, None)?;
    topo.validate()?;
    Ok(topo)
}

pub fn serialize_topo<T: Real>(topo: &RouteTopo<T>) -> String {
    let mut s = serde_json::to_string_pretty(topo).expect("topo serializes");
    s.push('\n');
    s
}

/// Standalone calibration input: any number (≥ 4) of image/wall correspondences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", deny_unknown_fields)]
pub struct ReferencePoints<T> {
    #[serde(default = "current_version")]
    pub format_version: u32,
    #[serde(default = "default_unit")]
    pub unit: String,
    pub pairs: Vec<ReferencePair<T>>,
}

impl<T: Real> ReferencePoints<T> {
    pub fn split(&self) -> (Vec<Point2<T>>, Vec<Point2<T>>) {
        self.pairs.iter().map(|p| (Point2::from(p.image), Point2::from(p.wall))).unzip()
    }
}

pub fn parse_reference_points<T: Real>(text: &str) -> Result<ReferencePoints<T>, FormatError> {
    let doc: ReferencePoints<T> = from_json(text, None)?;
    if doc.format_version != FORMAT_VERSION {
        return Err(FormatError::UnsupportedVersion(doc.format_version));
    }
    Ok(doc)
}
