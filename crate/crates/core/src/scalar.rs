//! Scalar abstraction shared by the geometry, keypoint and detector code.

use std::fmt::{Debug, Display};

use nalgebra::RealField;
use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating-point scalar usable for pixel and wall-plane coordinates: `f32` or `f64`.
///
/// `Float` and `RealField` both define methods such as `abs` and `sqrt`, so
/// generic code calls them through `Float::` to stay unambiguous.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + RealField
    + Copy
    + Default
    + Debug
    + Display
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("f64 is representable in every Real")
    }

    fn as_f64(self) -> f64 {
        <Self as ToPrimitive>::to_f64(&self).expect("Real converts to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}
