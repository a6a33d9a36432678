use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::Point2;
use crate::scalar::Real;

/// Axis-aligned bounding box with `min` at the top-left corner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Aabb<T> {
    pub min: Point2<T>,
    pub max: Point2<T>,
}

impl<T: Real> Aabb<T> {
    /// Returns `None` unless `min <= max` on both axes and all coordinates are finite.
    pub fn new(min: Point2<T>, max: Point2<T>) -> Option<Self> {
        (min.is_finite() && max.is_finite() && min.x <= max.x && min.y <= max.y)
            .then_some(Self { min, max })
    }

    pub fn from_coords(min_x: T, min_y: T, max_x: T, max_y: T) -> Option<Self> {
        Self::new(Point2::new(min_x, min_y), Point2::new(max_x, max_y))
    }

    pub fn centered(center: Point2<T>, half_x: T, half_y: T) -> Self {
        Self {
            min: Point2::new(center.x - half_x, center.y - half_y),
            max: Point2::new(center.x + half_x, center.y + half_y),
        }
    }

    pub fn width(&self) -> T {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> T {
        self.max.y - self.min.y
    }

    pub fn area(&self) -> T {
        self.width() * self.height()
    }

    pub fn center(&self) -> Point2<T> {
        let two = T::lit(2.0);
        Point2::new((self.min.x + self.max.x) / two, (self.min.y + self.max.y) / two)
    }

    /// Signed overlap lengths along x and y; negative values are separations.
    pub fn overlap_extents(&self, other: &Self) -> (T, T) {
        let ox = Float::min(self.max.x, other.max.x) - Float::max(self.min.x, other.min.x);
        let oy = Float::min(self.max.y, other.max.y) - Float::max(self.min.y, other.min.y);
        (ox, oy)
    }

    pub fn intersection_area(&self, other: &Self) -> T {
        let (ox, oy) = self.overlap_extents(other);
        Float::max(ox, T::zero()) * Float::max(oy, T::zero())
    }

    /// True iff the intersection has positive area. Boxes sharing only an edge do not overlap.
    pub fn overlaps(&self, other: &Self) -> bool {
        let (ox, oy) = self.overlap_extents(other);
        ox > T::zero() && oy > T::zero()
    }

    pub fn contains(&self, p: &Point2<T>) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    /// Smallest box containing both.
    pub fn union(&self, other: &Self) -> Self {
        Self {
            min: Point2::new(Float::min(self.min.x, other.min.x), Float::min(self.min.y, other.min.y)),
            max: Point2::new(Float::max(self.max.x, other.max.x), Float::max(self.max.y, other.max.y)),
        }
    }

    pub fn expanded(&self, margin: T) -> Self {
        Self {
            min: Point2::new(self.min.x - margin, self.min.y - margin),
            max: Point2::new(self.max.x + margin, self.max.y + margin),
        }
    }

    pub fn translated(&self, by: Point2<T>) -> Self {
        Self { min: self.min + by, max: self.max + by }
    }
}

/// Free-function form of [`Aabb::overlaps`].
pub fn overlaps<T: Real>(a: &Aabb<T>, b: &Aabb<T>) -> bool {
    a.overlaps(b)
}
