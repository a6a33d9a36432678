//! Detect which climbing holds a climber uses, and when, from 2D pose
//! keypoint streams and per-video hold annotations, and score those
//! detections against ground truth.
//!
//! Geometry, keypoint, and detector types are generic over the coordinate
//! scalar ([`Real`]: `f32` or `f64`). The aliases at the crate root fix the
//! scalar to `f64`, which is what the command-line tool uses.

pub mod annotation;
pub mod detector;
pub mod eval;
pub mod geometry;
pub mod limb;
pub mod scalar;
pub mod sim;
pub mod stats;

pub use limb::{Extremity, LimbKind, Side};
pub use scalar::Real;

pub type Point = geometry::Point2<f64>;
pub type BoundingBox = geometry::Aabb<f64>;
pub type AoiConfig = geometry::AoiConfig<f64>;
pub type Homography = geometry::Homography<f64>;
pub type RouteTopo = annotation::RouteTopo<f64>;
pub type KeypointStream = annotation::KeypointStream<f64>;
pub type FrameRecord = annotation::FrameRecord<f64>;
pub type DetectorConfig = detector::DetectorConfig<f64>;
pub type ScenarioSpec = sim::ScenarioSpec<f64>;

pub type Point32 = geometry::Point2<f32>;
pub type Homography32 = geometry::Homography<f32>;
pub type KeypointStream32 = annotation::KeypointStream<f32>;
