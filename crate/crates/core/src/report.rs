//! Result types shared by the engine, the oracle and the wire formats.

use std::cmp::Ordering;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::geom::Point;
use crate::scene::PolygonId;

/// A clearance value. `Unbounded` when there is no obstacle at all; it
/// serializes as the string `"unbounded"`, finite values as plain numbers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Clearance {
    Finite(f64),
    Unbounded,
}

impl Clearance {
    pub const ZERO: Clearance = Clearance::Finite(0.0);

    pub fn finite(&self) -> Option<f64> {
        match *self {
            Clearance::Finite(d) => Some(d),
            Clearance::Unbounded => None,
        }
    }

    /// `+inf` for `Unbounded`.
    pub fn as_f64(&self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    pub fn at_least(&self, c: f64) -> bool {
        self.as_f64() >= c
    }

    pub fn total_cmp(&self, other: &Clearance) -> Ordering {
        self.as_f64().total_cmp(&other.as_f64())
    }
}

impl fmt::Display for Clearance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Clearance::Finite(d) => write!(f, "{d}"),
            Clearance::Unbounded => f.write_str("unbounded"),
        }
    }
}

impl Serialize for Clearance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Clearance::Finite(d) => s.serialize_f64(*d),
            Clearance::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

impl<'de> Deserialize<'de> for Clearance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct ClearanceVisitor;

        impl Visitor<'_> for ClearanceVisitor {
            type Value = Clearance;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a non-negative number or \"unbounded\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Clearance, E> {
                Ok(Clearance::Finite(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Clearance, E> {
                Ok(Clearance::Finite(v as f64))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Clearance, E> {
                Ok(Clearance::Finite(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Clearance, E> {
                if v == "unbounded" {
                    Ok(Clearance::Unbounded)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }

        d.deserialize_any(ClearanceVisitor)
    }
}

/// The pair of points realizing a reported distance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub path_point: Point,
    pub obstacle_point: Point,
    pub polygon_id: PolygonId,
}

impl Witness {
    pub fn distance(&self) -> f64 {
        self.path_point.distance(self.obstacle_point)
    }
}
