//! Neutral keypoint stream format (JSON lines).
//!
//! The first line is a [`StreamHeader`]; each following line is one
//! [`FrameRecord`]. Keypoints are written as `[x, y, confidence]` in
//! original-image pixel coordinates. A frame with an empty `persons` list is
//! a frame in which the pose backend found nobody.

use std::collections::BTreeMap;
use std::io::BufRead;
use std::marker::PhantomData;

use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::{from_json, FormatError, Resolution, FORMAT_VERSION};
use crate::geometry::Point2;
use crate::scalar::Real;

fn current_version() -> u32 {
    FORMAT_VERSION
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamHeader {
    #[serde(default = "current_version")]
    pub format_version: u32,
    pub video_id: String,
    pub fps: f64,
    pub resolution: Resolution,
    /// Skeleton convention name, e.g. `coco17`.
    pub convention: String,
    pub backend: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_variant: Option<String>,
    /// Producer-specific settings echoed for provenance (crop margin, resize policy, ...).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", from = "[T; 3]", into = "[T; 3]")]
pub struct Keypoint<T> {
    pub x: T,
    pub y: T,
    pub confidence: T,
}

impl<T: Real> Keypoint<T> {
    pub fn new(x: T, y: T, confidence: T) -> Self {
        Self { x, y, confidence }
    }

    pub fn position(&self) -> Point2<T> {
        Point2::new(self.x, self.y)
    }
}

impl<T: Real> From<[T; 3]> for Keypoint<T> {
    fn from([x, y, confidence]: [T; 3]) -> Self {
        Self { x, y, confidence }
    }
}

impl<T: Real> From<Keypoint<T>> for [T; 3] {
    fn from(k: Keypoint<T>) -> Self {
        [k.x, k.y, k.confidence]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", deny_unknown_fields)]
pub struct Person<T> {
    pub id: u32,
    pub keypoints: BTreeMap<String, Keypoint<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", deny_unknown_fields)]
pub struct FrameRecord<T> {
    pub frame: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inference_ms: Option<f64>,
    pub persons: Vec<Person<T>>,
}

impl<T: Real> FrameRecord<T> {
    pub fn empty(frame: u32) -> Self {
        Self { frame, inference_ms: None, persons: Vec::new() }
    }

    pub fn is_missing_detection(&self) -> bool {
        self.persons.is_empty()
    }

    fn validate(&self, line: usize) -> Result<(), FormatError> {
        for (pi, person) in self.persons.iter().enumerate() {
            for (name, kp) in &person.keypoints {
                let path = format!("persons[{pi}].keypoints.{name}");
                if !Float::is_finite(kp.x) || !Float::is_finite(kp.y) {
                    return Err(FormatError::schema(path, "non-finite coordinate").at_line(line));
                }
                if !(kp.confidence >= T::zero() && kp.confidence <= T::one()) {
                    let msg = format!("confidence {} outside [0, 1]", kp.confidence);
                    return Err(FormatError::schema(path, msg).at_line(line));
                }
            }
        }
        if let Some(ms) = self.inference_ms {
            if !(ms >= 0.0) || !ms.is_finite() {
                return Err(FormatError::schema("inference_ms", "must be a non-negative number").at_line(line));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KeypointStream<T> {
    pub header: StreamHeader,
    pub frames: Vec<FrameRecord<T>>,
}

fn validate_header(header: &StreamHeader) -> Result<(), FormatError> {
    if header.format_version != FORMAT_VERSION {
        return Err(FormatError::UnsupportedVersion(header.format_version));
    }
    if !(header.fps > 0.0) || !header.fps.is_finite() {
        return Err(FormatError::schema("fps", "must be positive"));
    }
    Ok(())
}

/// Incremental reader: parses the header eagerly, then yields frames one line at a time.
pub struct KeypointReader<R, T> {
    lines: std::io::Lines<R>,
    header: StreamHeader,
    line_no: usize,
    last_frame: Option<u32>,
    _scalar: PhantomData<T>,
}

impl<R: BufRead, T: Real> KeypointReader<R, T> {
    pub fn new(reader: R) -> Result<Self, FormatError> {
        let mut lines = reader.lines();
        let mut line_no = 0;
        let header = loop {
            line_no += 1;
            match lines.next() {
                None => return Err(FormatError::schema("header", "empty stream")),
                Some(Err(e)) => return Err(FormatError::Io(e.to_string())),
                Some(Ok(l)) if l.trim().is_empty() => continue,
                Some(Ok(l)) => break from_json::<StreamHeader>(l.trim_end_matches('\r'), Some(line_no))?,
            }
        };
        validate_header(&header)?;
        Ok(Self { lines, header, line_no, last_frame: None, _scalar: PhantomData })
    }

    pub fn header(&self) -> &StreamHeader {
        &self.header
    }
}

impl<R: BufRead, T: Real> Iterator for KeypointReader<R, T> {
    type Item = Result<FrameRecord<T>, FormatError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.line_no += 1;
            let line = match self.lines.next()? {
                Ok(l) => l,
                Err(e) => return Some(Err(FormatError::Io(e.to_string()))),
            };
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            let parsed = from_json::<FrameRecord<T>>(line, Some(self.line_no)).and_then(|rec| {
                rec.validate(self.line_no)?;
                if let Some(prev) = self.last_frame {
                    if rec.frame <= prev {
                        return Err(FormatError::NonMonotonicFrames { line: self.line_no, previous: prev, frame: rec.frame });
                    }
                }
                self.last_frame = Some(rec.frame);
                Ok(rec)
            });
            return Some(parsed);
        }
    }
}

pub fn read_keypoints<R: BufRead, T: Real>(reader: R) -> Result<KeypointStream<T>, FormatError> {
    let mut rdr = KeypointReader::new(reader)?;
    let frames = rdr.by_ref().collect::<Result<Vec<_>, _>>()?;
    Ok(KeypointStream { header: rdr.header, frames })
}

pub fn parse_keypoints<T: Real>(text: &str) -> Result<KeypointStream<T>, FormatError> {
    read_keypoints(text.as_bytes())
}

pub fn serialize_keypoints<T: Real>(stream: &KeypointStream<T>) -> String {
    let mut out = serde_json::to_string(&stream.header).expect("header serializes");
    out.push('\n');
    for frame in &stream.frames {
        out.push_str(&serde_json::to_string(frame).expect("frame serializes"));
        out.push('\n');
    }
    out
}
