//! Image-plane primitives, limb areas of interest, and the image-to-wall homography.

mod aabb;
mod aoi;
mod homography;
mod point;

pub use aabb::{overlaps, Aabb};
pub use aoi::{
    foot_aoi, hand_aoi, limb_aoi, AoiConfig, FootAnchorKind, SkeletonConvention, AOI_REFERENCE_HEIGHT,
};
pub use homography::{
    estimate_homography, project, reprojection_error, wall_distance, Homography,
};
pub use point::Point2;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("need at least 4 correspondences, got {0}")]
    InsufficientPoints(usize),
    #[error("source and destination lists differ in length ({src} vs {dst})")]
    LengthMismatch { src: usize, dst: usize },
    #[error("degenerate point configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("point maps to infinity (w = {0:e})")]
    PointAtInfinity(f64),
    #[error("empty input")]
    EmptyInput,
    #[error("homography is not invertible")]
    Singular,
    #[error("invalid area-of-interest config: {0}")]
    InvalidAoiConfig(String),
    #[error("unknown skeleton convention `{0}`")]
    UnknownConvention(String),
}
