//! Extremity codes (`lh`, `lf`, `rh`, `rf`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LimbKind {
    Hand,
    Foot,
}

/// One of the four climbing extremities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Extremity {
    pub side: Side,
    pub kind: LimbKind,
}

impl Extremity {
    pub const LEFT_HAND: Self = Self { side: Side::Left, kind: LimbKind::Hand };
    pub const RIGHT_HAND: Self = Self { side: Side::Right, kind: LimbKind::Hand };
    pub const LEFT_FOOT: Self = Self { side: Side::Left, kind: LimbKind::Foot };
    pub const RIGHT_FOOT: Self = Self { side: Side::Right, kind: LimbKind::Foot };

    /// Fixed iteration order used wherever limbs are processed in sequence.
    pub const ALL: [Self; 4] = [Self::LEFT_HAND, Self::RIGHT_HAND, Self::LEFT_FOOT, Self::RIGHT_FOOT];

    pub const fn new(side: Side, kind: LimbKind) -> Self {
        Self { side, kind }
    }

    pub fn code(&self) -> &'static str {
        match (self.side, self.kind) {
            (Side::Left, LimbKind::Hand) => "lh",
            (Side::Left, LimbKind::Foot) => "lf",
            (Side::Right, LimbKind::Hand) => "rh",
            (Side::Right, LimbKind::Foot) => "rf",
        }
    }

    pub fn is_hand(&self) -> bool {
        self.kind == LimbKind::Hand
    }

    /// Position in [`Extremity::ALL`].
    pub fn index(&self) -> usize {
        match (self.kind, self.side) {
            (LimbKind::Hand, Side::Left) => 0,
            (LimbKind::Hand, Side::Right) => 1,
            (LimbKind::Foot, Side::Left) => 2,
            (LimbKind::Foot, Side::Right) => 3,
        }
    }
}

impl fmt::Display for Extremity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown extremity code `{0}` (expected lh, lf, rh or rf)")]
pub struct UnknownExtremity(pub String);

impl FromStr for Extremity {
    type Err = UnknownExtremity;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lh" => Ok(Self::LEFT_HAND),
            "lf" => Ok(Self::LEFT_FOOT),
            "rh" => Ok(Self::RIGHT_HAND),
            "rf" => Ok(Self::RIGHT_FOOT),
            other => Err(UnknownExtremity(other.to_string())),
        }
    }
}

impl Serialize for Extremity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}

impl<'de> Deserialize<'de> for Extremity {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
