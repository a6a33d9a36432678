//! Mapping errors to exit statuses.

use std::fmt;

use holdtrack::annotation::{FormatError, UsageError};
use holdtrack::detector::DetectError;
use holdtrack::eval::EvalError;
use holdtrack::geometry::GeometryError;
use holdtrack::sim::SimError;

pub const SUCCESS: u8 = 0;
pub const INPUT_ERROR: u8 = 2;
pub const PRECONDITION: u8 = 3;
pub const INTERNAL: u8 = 4;

/// A violated precondition found by the tool itself (bad flag values and the like).
#[derive(Debug)]
pub struct Precondition(pub String);

impl fmt::Display for Precondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Precondition {}

fn geometry_code(e: &GeometryError) -> u8 {
    match e {
        GeometryError::UnknownConvention(_) => INPUT_ERROR,
        _ => PRECONDITION,
    }
}

/// First recognised error in the chain decides the status.
pub fn code_for(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<FormatError>()
            || cause.is::<UsageError>()
            || cause.is::<std::io::Error>()
            || cause.is::<serde_json::Error>()
            || cause.is::<toml::de::Error>()
        {
            return INPUT_ERROR;
        }
        if let Some(e) = cause.downcast_ref::<DetectError>() {
            return match e {
                DetectError::OutOfOrderFrame { .. } => INPUT_ERROR,
                DetectError::Geometry(g) => geometry_code(g),
                DetectError::FpsMismatch { .. } | DetectError::InvalidConfig(_) => PRECONDITION,
            };
        }
        if let Some(e) = cause.downcast_ref::<GeometryError>() {
            return geometry_code(e);
        }
        if let Some(e) = cause.downcast_ref::<SimError>() {
            return match e {
                SimError::Geometry(g) => geometry_code(g),
                _ => PRECONDITION,
            };
        }
        if cause.is::<EvalError>() || cause.is::<Precondition>() {
            return PRECONDITION;
        }
    }
    INTERNAL
}
