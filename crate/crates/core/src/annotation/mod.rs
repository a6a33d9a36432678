//! Readers and writers for every on-disk artifact: usage annotations, route
//! topos, calibration points, and keypoint streams. All formats carry
//! `format_version` 1.

mod keypoints;
pub mod layout;
mod topo;
mod usage;

pub use keypoints::{
    parse_keypoints, read_keypoints, serialize_keypoints, FrameRecord, Keypoint, KeypointReader, KeypointStream,
    Person, StreamHeader,
};
pub use topo::{
    parse_reference_points, parse_topo, serialize_topo, Hold, ReferencePair, ReferencePoints, Resolution, RouteTopo,
};
pub use usage::{parse_usage, read_usage, serialize_usage, FrameSpan, HoldRef, UsageInterval, USAGE_HEADER};

pub use crate::limb::{Extremity, LimbKind, Side};

use serde::de::DeserializeOwned;
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

/// Errors from the usage CSV reader. `line` is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UsageError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: u64, column: usize, message: String },
    #[error("line {line}: unknown extremity `{token}`")]
    UnknownExtremity { line: u64, token: String },
    #[error("line {line}: malformed occlusion range `{token}`")]
    MalformedRange { line: u64, token: String },
    #[error("line {line}: start frame {start} is after end frame {end}")]
    StartAfterEnd { line: u64, start: u32, end: u32 },
    #[error("line {line}: occluded range {range} lies outside usage span {span}")]
    OcclusionOutOfBounds { line: u64, range: String, span: String },
    #[error("line {line}: occluded range {range} overlaps or precedes the previous range")]
    OverlappingOcclusion { line: u64, range: String },
    #[error("unexpected header `{0}` (expected ext,hold,start,end,occluded)")]
    BadHeader(String),
    #[error("unsupported usage format version `{0}`")]
    UnsupportedVersion(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl UsageError {
    pub(crate) fn at_line(self, line: u64) -> Self {
        match self {
            UsageError::OcclusionOutOfBounds { range, span, .. } => UsageError::OcclusionOutOfBounds { line, range, span },
            UsageError::OverlappingOcclusion { range, .. } => UsageError::OverlappingOcclusion { line, range },
            other => other,
        }
    }
}

/// Errors from the JSON-based formats (topo, reference points, keypoint streams).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("{}schema error at `{path}`: {message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Schema { line: Option<usize>, path: String, message: String },
    #[error("duplicate hold id {0}")]
    DuplicateHoldId(u32),
    #[error("line {line}: frame {frame} does not follow frame {previous}")]
    NonMonotonicFrames { line: usize, previous: u32, frame: u32 },
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u32),
    #[error("i/o error: {0}")]
    Io(String),
}

impl FormatError {
    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        FormatError::Schema { line: None, path: path.into(), message: message.into() }
    }

    pub(crate) fn at_line(self, at: usize) -> Self {
        match self {
            FormatError::Schema { path, message, .. } => FormatError::Schema { line: Some(at), path, message },
            other => other,
        }
    }
}

/// Deserializes JSON, reporting the field path of the first failure.
pub(crate) fn from_json<T: DeserializeOwned>(text: &str, line: Option<usize>) -> Result<T, FormatError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|err| {
        let path = err.path().to_string();
        let inner = err.into_inner();
        let line = line.or_else(|| (inner.line() > 0).then_some(inner.line()));
        FormatError::Schema { line, path, message: inner.to_string() }
    })
}
