//! Areas of interest around limb keypoints.
//!
//! Pose models place the hand keypoint at the wrist and the foot keypoint at
//! either the toe or the ankle, while contact happens at fingertips and toe
//! tips. Each anchor is therefore widened into a box before testing it
//! against hold boxes. Ankle-only skeletons get a much larger box that sits
//! entirely at or below the ankle, because toes are never above the ankle.

use serde::{Deserialize, Serialize};

use super::{Aabb, GeometryError, Point2};
use crate::limb::{Extremity, LimbKind, Side};
use crate::scalar::Real;

/// Image height the default extents are calibrated for (720×1280 portrait video).
pub const AOI_REFERENCE_HEIGHT: f64 = 1280.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FootAnchorKind {
    Toe,
    Ankle,
}

/// Keypoint names a pose model uses for the four limb anchors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonConvention {
    pub name: String,
    pub left_hand: String,
    pub right_hand: String,
    pub left_foot: String,
    pub right_foot: String,
    pub foot_anchor_kind: FootAnchorKind,
}

impl SkeletonConvention {
    /// COCO 17-keypoint layout (e.g. YOLOv8-pose): wrists and ankles only.
    pub fn coco17() -> Self {
        Self::build("coco17", "left_wrist", "right_wrist", "left_ankle", "right_ankle", FootAnchorKind::Ankle)
    }

    /// COCO layout extended with foot keypoints (e.g. ViTPose `coco_25`).
    pub fn coco25() -> Self {
        Self::build("coco25", "left_wrist", "right_wrist", "left_big_toe", "right_big_toe", FootAnchorKind::Toe)
    }

    /// MediaPipe pose landmarker, 33 landmarks; `foot_index` is the toe tip.
    pub fn mediapipe33() -> Self {
        Self::build(
            "mediapipe33",
            "left_wrist",
            "right_wrist",
            "left_foot_index",
            "right_foot_index",
            FootAnchorKind::Toe,
        )
    }

    pub fn builtin() -> [Self; 3] {
        [Self::coco17(), Self::coco25(), Self::mediapipe33()]
    }

    pub fn by_name(name: &str) -> Result<Self, GeometryError> {
        Self::builtin()
            .into_iter()
            .find(|c| c.name == name)
            .ok_or_else(|| GeometryError::UnknownConvention(name.to_string()))
    }

    fn build(name: &str, lh: &str, rh: &str, lf: &str, rf: &str, kind: FootAnchorKind) -> Self {
        Self {
            name: name.into(),
            left_hand: lh.into(),
            right_hand: rh.into(),
            left_foot: lf.into(),
            right_foot: rf.into(),
            foot_anchor_kind: kind,
        }
    }

    pub fn anchor_name(&self, ext: Extremity) -> &str {
        match (ext.side, ext.kind) {
            (Side::Left, LimbKind::Hand) => &self.left_hand,
            (Side::Right, LimbKind::Hand) => &self.right_hand,
            (Side::Left, LimbKind::Foot) => &self.left_foot,
            (Side::Right, LimbKind::Foot) => &self.right_foot,
        }
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        let names = [&self.left_hand, &self.right_hand, &self.left_foot, &self.right_foot];
        if names.iter().any(|n| n.trim().is_empty()) {
            return Err(GeometryError::UnknownConvention(format!(
                "{}: every limb anchor needs a keypoint name",
                self.name
            )));
        }
        Ok(())
    }
}

/// Box extents, in pixels, around each kind of limb anchor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", default)]
pub struct AoiConfig<T> {
    pub hand_half_extent: T,
    pub toe_half_extent: T,
    pub toe_down_extension: T,
    pub ankle_half_width: T,
    pub ankle_down_offset: T,
    pub ankle_down_extension: T,
}

impl<T: Real> Default for AoiConfig<T> {
    fn default() -> Self {
        Self {
            hand_half_extent: T::lit(30.0),
            toe_half_extent: T::lit(15.0),
            toe_down_extension: T::lit(25.0),
            ankle_half_width: T::lit(60.0),
            ankle_down_offset: T::lit(0.0),
            ankle_down_extension: T::lit(110.0),
        }
    }
}

impl<T: Real> AoiConfig<T> {
    /// Scales every extent by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        Self {
            hand_half_extent: self.hand_half_extent * factor,
            toe_half_extent: self.toe_half_extent * factor,
            toe_down_extension: self.toe_down_extension * factor,
            ankle_half_width: self.ankle_half_width * factor,
            ankle_down_offset: self.ankle_down_offset * factor,
            ankle_down_extension: self.ankle_down_extension * factor,
        }
    }

    /// Rescales extents given for [`AOI_REFERENCE_HEIGHT`] to an image of `height` pixels.
    pub fn for_image_height(&self, height: u32) -> Self {
        self.scaled(T::lit(f64::from(height) / AOI_REFERENCE_HEIGHT))
    }

    /// Extents must be positive and the ankle box must contain room for the toe box.
    pub fn validate(&self) -> Result<(), GeometryError> {
        let fields = [
            ("hand_half_extent", self.hand_half_extent),
            ("toe_half_extent", self.toe_half_extent),
            ("toe_down_extension", self.toe_down_extension),
            ("ankle_half_width", self.ankle_half_width),
            ("ankle_down_extension", self.ankle_down_extension),
        ];
        for (name, v) in fields {
            if !(v > T::zero()) || !num_traits::Float::is_finite(v) {
                return Err(GeometryError::InvalidAoiConfig(format!("{name} must be positive, got {v}")));
            }
        }
        if !num_traits::Float::is_finite(self.ankle_down_offset) {
            return Err(GeometryError::InvalidAoiConfig("ankle_down_offset must be finite".into()));
        }
        if self.ankle_half_width < self.toe_half_extent {
            return Err(GeometryError::InvalidAoiConfig(
                "ankle_half_width must be at least toe_half_extent".into(),
            ));
        }
        if self.ankle_down_extension < self.toe_half_extent + self.toe_down_extension {
            return Err(GeometryError::InvalidAoiConfig(
                "ankle_down_extension must cover the full toe box height".into(),
            ));
        }
        Ok(())
    }
}

pub fn hand_aoi<T: Real>(anchor: Point2<T>, cfg: &AoiConfig<T>) -> Aabb<T> {
    Aabb::centered(anchor, cfg.hand_half_extent, cfg.hand_half_extent)
}

pub fn foot_aoi<T: Real>(anchor: Point2<T>, kind: FootAnchorKind, cfg: &AoiConfig<T>) -> Aabb<T> {
    match kind {
        FootAnchorKind::Toe => Aabb {
            min: Point2::new(anchor.x - cfg.toe_half_extent, anchor.y - cfg.toe_half_extent),
            max: Point2::new(anchor.x + cfg.toe_half_extent, anchor.y + cfg.toe_down_extension),
        },
        FootAnchorKind::Ankle => {
            let top = anchor.y + cfg.ankle_down_offset;
            Aabb {
                min: Point2::new(anchor.x - cfg.ankle_half_width, top),
                max: Point2::new(anchor.x + cfg.ankle_half_width, top + cfg.ankle_down_extension),
            }
        }
    }
}

/// Area of interest for `ext` given its anchor keypoint under `convention`.
pub fn limb_aoi<T: Real>(
    ext: Extremity,
    anchor: Point2<T>,
    convention: &SkeletonConvention,
    cfg: &AoiConfig<T>,
) -> Aabb<T> {
    match ext.kind {
        LimbKind::Hand => hand_aoi(anchor, cfg),
        LimbKind::Foot => foot_aoi(anchor, convention.foot_anchor_kind, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64) -> Point2<f64> {
        Point2::new(x, y)
    }

    fn bx(a: f64, b: f64, c: f64, d: f64) -> Aabb<f64> {
        Aabb::from_coords(a, b, c, d).unwrap()
    }

    #[test]
    fn hand_box_examples() {
        let cfg = AoiConfig { hand_half_extent: 30.0, ..Default::default() };
        assert_eq!(hand_aoi(pt(100., 200.), &cfg), bx(70., 170., 130., 230.));
        let cfg = AoiConfig { hand_half_extent: 1.0, ..Default::default() };
        assert_eq!(hand_aoi(pt(0., 0.), &cfg), bx(-1., -1., 1., 1.));
        let cfg = AoiConfig { hand_half_extent: 10.0, ..Default::default() };
        assert_eq!(hand_aoi(pt(64.5, 12.25), &cfg), bx(54.5, 2.25, 74.5, 22.25));
    }

    #[test]
    fn foot_box_examples() {
        let cfg = AoiConfig {
            toe_half_extent: 15.0,
            toe_down_extension: 25.0,
            ankle_half_width: 60.0,
            ankle_down_offset: 0.0,
            ankle_down_extension: 90.0,
            ..Default::default()
        };
        assert_eq!(foot_aoi(pt(50., 100.), FootAnchorKind::Toe, &cfg), bx(35., 85., 65., 125.));
        let ankle = foot_aoi(pt(50., 100.), FootAnchorKind::Ankle, &cfg);
        assert_eq!(ankle, bx(-10., 100., 110., 190.));
        assert_eq!(ankle.min.y, 100.0);
    }

    #[test]
    fn defaults_are_valid_and_scale_with_height() {
        let cfg = AoiConfig::<f64>::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.for_image_height(1280), cfg);
        let half = cfg.for_image_height(640);
        assert_eq!(half.hand_half_extent, 15.0);
        assert_eq!(half.ankle_down_extension, 55.0);
    }

    #[test]
    fn validation_rejects_small_ankle_box() {
        let cfg = AoiConfig { ankle_half_width: 10.0, ..AoiConfig::<f64>::default() };
        assert!(cfg.validate().is_err());
        let cfg = AoiConfig { ankle_down_extension: 30.0, ..AoiConfig::<f64>::default() };
        assert!(cfg.validate().is_err());
        let cfg = AoiConfig { hand_half_extent: 0.0, ..AoiConfig::<f64>::default() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn conventions_resolve() {
        let c = SkeletonConvention::by_name("coco17").unwrap();
        assert_eq!(c.anchor_name(Extremity::RIGHT_FOOT), "right_ankle");
        assert_eq!(c.foot_anchor_kind, FootAnchorKind::Ankle);
        let m = SkeletonConvention::by_name("mediapipe33").unwrap();
        assert_eq!(m.anchor_name(Extremity::LEFT_FOOT), "left_foot_index");
        assert!(SkeletonConvention::by_name("openpose").is_err());
    }

    #[test]
    fn works_in_f32() {
        let cfg = AoiConfig::<f32>::default();
        let b = hand_aoi(Point2::new(100f32, 100f32), &cfg);
        assert_eq!(b.width(), 60.0);
    }
}
