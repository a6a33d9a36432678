//! Hold-usage records and the `usage.csv` format.
//!
//! ```text
//! ext,hold,start,end,occluded
//! rh,4,0,208,0-47;123-208
//! lf,0,292,465,none
//! ```
//!
//! Frame numbers in the file are inclusive on both ends. In memory every span
//! is half-open. Lines starting with `#` are comments; a leading
//! `# format_version: N` comment pins the format version.

use std::fmt;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{UsageError, FORMAT_VERSION};
use crate::limb::Extremity;

pub const USAGE_HEADER: [&str; 5] = ["ext", "hold", "start", "end", "occluded"];

/// Half-open frame range `[start, end)`, never empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FrameSpan {
    start: u32,
    end: u32,
}

impl FrameSpan {
    /// Half-open constructor; `None` if `start >= end`.
    pub fn new(start: u32, end: u32) -> Option<Self> {
        (start < end).then_some(Self { start, end })
    }

    /// From inclusive frame numbers, as written in annotation files.
    pub fn inclusive(first: u32, last: u32) -> Option<Self> {
        if first > last {
            return None;
        }
        last.checked_add(1).map(|end| Self { start: first, end })
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    /// Exclusive end.
    pub fn end(&self) -> u32 {
        self.end
    }

    /// Last frame that belongs to the span.
    pub fn last(&self) -> u32 {
        self.end - 1
    }

    pub fn len(&self) -> u32 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains_frame(&self, frame: u32) -> bool {
        frame >= self.start && frame < self.end
    }

    pub fn contains(&self, other: &FrameSpan) -> bool {
        other.start >= self.start && other.end <= self.end
    }

    pub fn intersection_len(&self, other: &FrameSpan) -> u32 {
        self.end.min(other.end).saturating_sub(self.start.max(other.start))
    }

    pub fn union_len(&self, other: &FrameSpan) -> u32 {
        self.len() + other.len() - self.intersection_len(other)
    }
}

impl fmt::Display for FrameSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.start, self.last())
    }
}

/// A hold id from the route topo, or the wall itself (`w`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HoldRef {
    Id(u32),
    Wall,
}

impl HoldRef {
    pub fn id(&self) -> Option<u32> {
        match self {
            HoldRef::Id(id) => Some(*id),
            HoldRef::Wall => None,
        }
    }

    pub fn is_wall(&self) -> bool {
        matches!(self, HoldRef::Wall)
    }
}

impl fmt::Display for HoldRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HoldRef::Id(id) => write!(f, "{id}"),
            HoldRef::Wall => f.write_str("w"),
        }
    }
}

impl FromStr for HoldRef {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "w" {
            Ok(HoldRef::Wall)
        } else {
            s.parse().map(HoldRef::Id)
        }
    }
}

impl Serialize for HoldRef {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            HoldRef::Id(id) => s.serialize_u32(*id),
            HoldRef::Wall => s.serialize_str("w"),
        }
    }
}

impl<'de> Deserialize<'de> for HoldRef {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Id(u32),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Id(id) => Ok(HoldRef::Id(id)),
            Raw::Text(t) => t
                .parse()
                .map_err(|_| serde::de::Error::custom(format!("invalid hold reference `{t}`"))),
        }
    }
}

/// One extremity on one hold for a contiguous span of frames.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UsageInterval {
    pub extremity: Extremity,
    pub hold: HoldRef,
    span: FrameSpan,
    occluded: Vec<FrameSpan>,
}

impl UsageInterval {
    /// Occluded ranges must lie inside `span`, sorted and non-overlapping.
    pub fn new(
        extremity: Extremity,
        hold: HoldRef,
        span: FrameSpan,
        occluded: Vec<FrameSpan>,
    ) -> Result<Self, UsageError> {
        for (i, r) in occluded.iter().enumerate() {
            if !span.contains(r) {
                return Err(UsageError::OcclusionOutOfBounds { line: 0, range: r.to_string(), span: span.to_string() });
            }
            if i > 0 && occluded[i - 1].end > r.start {
                return Err(UsageError::OverlappingOcclusion { line: 0, range: r.to_string() });
            }
        }
        Ok(Self { extremity, hold, span, occluded })
    }

    /// Interval without occlusion information, from inclusive frame numbers.
    pub fn simple(extremity: Extremity, hold: HoldRef, first: u32, last: u32) -> Option<Self> {
        FrameSpan::inclusive(first, last).map(|span| Self { extremity, hold, span, occluded: Vec::new() })
    }

    pub fn span(&self) -> FrameSpan {
        self.span
    }

    pub fn occluded(&self) -> &[FrameSpan] {
        &self.occluded
    }

    /// First frame (inclusive).
    pub fn start(&self) -> u32 {
        self.span.start
    }

    /// Last frame (inclusive).
    pub fn end(&self) -> u32 {
        self.span.last()
    }

    pub fn frame_count(&self) -> u32 {
        self.span.len()
    }

    pub fn occluded_frame_count(&self) -> u32 {
        self.occluded.iter().map(FrameSpan::len).sum()
    }
}

fn syntax(line: u64, column: usize, message: impl Into<String>) -> UsageError {
    UsageError::Syntax { line, column, message: message.into() }
}

fn parse_frame(token: &str, line: u64, column: usize) -> Result<u32, UsageError> {
    token
        .parse::<u32>()
        .map_err(|_| syntax(line, column, format!("expected a non-negative frame number, got `{token}`")))
}

fn parse_occlusions(field: &str, line: u64) -> Result<Vec<FrameSpan>, UsageError> {
    if field.eq_ignore_ascii_case("none") || field.is_empty() {
        return Ok(Vec::new());
    }
    let malformed = || UsageError::MalformedRange { line, token: field.to_string() };
    field
        .split(';')
        .map(|part| {
            let part = part.trim();
            let (a, b) = match part.split_once('-') {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (part, part),
            };
            let a = a.parse::<u32>().map_err(|_| malformed())?;
            let b = b.parse::<u32>().map_err(|_| malformed())?;
            FrameSpan::inclusive(a, b).ok_or_else(malformed)
        })
        .collect()
}

/// Reads the optional `# format_version: N` comment ahead of the header.
fn check_version(text: &str) -> Result<(), UsageError> {
    for line in text.lines() {
        let line = line.trim();
        let Some(comment) = line.strip_prefix('#') else {
            break;
        };
        if let Some(v) = comment.trim().strip_prefix("format_version") {
            let v = v.trim_start_matches([':', '=', ' ']).trim();
            match v.parse::<u32>() {
                Ok(FORMAT_VERSION) => {}
                _ => return Err(UsageError::UnsupportedVersion(v.to_string())),
            }
        }
    }
    Ok(())
}

/// Parses a `usage.csv` document. Intervals are returned in file order.
pub fn parse_usage(text: &str) -> Result<Vec<UsageInterval>, UsageError> {
    check_version(text)?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());

    let header = rdr.headers().map_err(|e| syntax(1, 1, e.to_string()))?.clone();
    let header: Vec<&str> = header.iter().collect();
    if header != USAGE_HEADER {
        return Err(UsageError::BadHeader(header.join(",")));
    }

    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            syntax(line, 1, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != USAGE_HEADER.len() {
            return Err(syntax(line, record.len().min(USAGE_HEADER.len()) + 1, format!(
                "expected {} fields, found {}",
                USAGE_HEADER.len(),
                record.len()
            )));
        }
        let extremity: Extremity = record[0]
            .parse()
            .map_err(|_| UsageError::UnknownExtremity { line, token: record[0].to_string() })?;
        let hold: HoldRef = record[1]
            .parse()
            .map_err(|_| syntax(line, 2, format!("expected a hold id or `w`, got `{}`", &record[1])))?;
        let start = parse_frame(&record[2], line, 3)?;
        let end = parse_frame(&record[3], line, 4)?;
        let span = FrameSpan::inclusive(start, end).ok_or(UsageError::StartAfterEnd { line, start, end })?;
        let occluded = parse_occlusions(&record[4], line)?;
        let interval = UsageInterval::new(extremity, hold, span, occluded).map_err(|e| e.at_line(line))?;
        out.push(interval);
    }
    Ok(out)
}

pub fn read_usage<R: Read>(mut reader: R) -> Result<Vec<UsageInterval>, UsageError> {
    let mut text = String::new();
    reader.read_to_string(&mut text).map_err(|e| UsageError::Io(e.to_string()))?;
    parse_usage(&text)
}

/// Canonical `usage.csv` text: header, then one LF-terminated line per interval.
pub fn serialize_usage(intervals: &[UsageInterval]) -> String {
    let mut out = USAGE_HEADER.join(",");
    out.push('\n');
    for iv in intervals {
        let occluded = if iv.occluded.is_empty() {
            "none".to_string()
        } else {
            iv.occluded.iter().map(FrameSpan::to_string).collect::<Vec<_>>().join(";")
        };
        out.push_str(&format!("{},{},{},{},{}\n", iv.extremity, iv.hold, iv.start(), iv.end(), occluded));
    }
    out
}
