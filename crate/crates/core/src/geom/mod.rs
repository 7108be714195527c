//! Planar primitives shared by every index and by the brute-force oracle.

mod distance;
mod predicates;

pub use distance::{
    dist_point_line, dist_point_segment, dist_segment_segment, project_onto_segment, Closest,
    SegmentDistance,
};
pub use predicates::{orientation, point_on_segment, segments_intersect, Orientation};

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::GeomError;

/// A point in the plane. Serialized as a two-element array `[x, y]`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    /// Counterclockwise perpendicular.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

/// A closed line segment with distinct endpoints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self, GeomError> {
        if !a.is_finite() || !b.is_finite() {
            return Err(GeomError::NonFinite);
        }
        if a == b {
            return Err(GeomError::DegenerateSegment);
        }
        Ok(Segment { a, b })
    }

    /// Caller guarantees finite, distinct endpoints (edges of a validated polygon).
    pub(crate) fn new_unchecked(a: Point, b: Point) -> Self {
        debug_assert!(a != b);
        Segment { a, b }
    }

    pub fn direction(&self) -> Point {
        self.b - self.a
    }

    pub fn length(&self) -> f64 {
        self.direction().norm()
    }

    pub fn bbox(&self) -> BBox {
        BBox::of_points(&[self.a, self.b])
    }
}

/// An infinite line given by an anchor point and a unit direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Line {
    pub anchor: Point,
    pub direction: Point,
}

impl Line {
    /// Normalizes `direction`; rejects zero or non-finite input.
    pub fn new(anchor: Point, direction: Point) -> Result<Self, GeomError> {
        if !anchor.is_finite() || !direction.is_finite() {
            return Err(GeomError::NonFinite);
        }
        let len = direction.norm();
        if len == 0.0 || !len.is_finite() {
            return Err(GeomError::DegenerateLine);
        }
        Ok(Line {
            anchor,
            direction: direction * (1.0 / len),
        })
    }

    pub fn through(a: Point, b: Point) -> Result<Self, GeomError> {
        Line::new(a, b - a)
    }

    /// Signed perpendicular offset; positive on the left of `direction`.
    pub fn signed_offset(&self, p: Point) -> f64 {
        self.direction.cross(p - self.anchor)
    }

    /// Orthogonal projection of `p` onto the line.
    pub fn foot(&self, p: Point) -> Point {
        self.anchor + self.direction * self.direction.dot(p - self.anchor)
    }

    /// A second point on the line, one unit along the direction.
    pub fn second_point(&self) -> Point {
        self.anchor + self.direction
    }
}

/// The closed region between the two lines perpendicular to `base` at its
/// endpoints.
#[derive(Clone, Copy, Debug)]
pub struct Slab {
    pub base: Segment,
    pub l1: Line,
    pub l2: Line,
}

impl Slab {
    /// Projection of `p - base.a` onto the (unnormalized) base direction.
    /// `p` is in the slab iff `0 <= t <= |base|^2`.
    #[inline]
    pub fn projection(&self, p: Point) -> f64 {
        (p - self.base.a).dot(self.base.direction())
    }

    #[inline]
    pub fn contains(&self, p: Point) -> bool {
        let d = self.base.direction();
        let t = (p - self.base.a).dot(d);
        t >= 0.0 && t <= d.norm2()
    }
}

pub fn slab_of(s: &Segment) -> Slab {
    let normal = s.direction().perp();
    Slab {
        base: *s,
        l1: Line::new(s.a, normal).expect("segment endpoints are distinct"),
        l2: Line::new(s.b, normal).expect("segment endpoints are distinct"),
    }
}

/// Axis-aligned bounding box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BBox {
    pub min: Point,
    pub max: Point,
}

impl BBox {
    pub const EMPTY: BBox = BBox {
        min: Point::new(f64::INFINITY, f64::INFINITY),
        max: Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    };

    pub fn of_points(points: &[Point]) -> BBox {
        points.iter().fold(BBox::EMPTY, |b, &p| b.include(p))
    }

    pub fn include(self, p: Point) -> BBox {
        BBox {
            min: Point::new(self.min.x.min(p.x), self.min.y.min(p.y)),
            max: Point::new(self.max.x.max(p.x), self.max.y.max(p.y)),
        }
    }

    pub fn union(self, o: BBox) -> BBox {
        BBox {
            min: Point::new(self.min.x.min(o.min.x), self.min.y.min(o.min.y)),
            max: Point::new(self.max.x.max(o.max.x), self.max.y.max(o.max.y)),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.min.x > self.max.x || self.min.y > self.max.y
    }

    pub fn overlaps(&self, o: &BBox) -> bool {
        self.min.x <= o.max.x
            && o.min.x <= self.max.x
            && self.min.y <= o.max.y
            && o.min.y <= self.max.y
    }

    pub fn contains_box(&self, o: &BBox) -> bool {
        self.min.x <= o.min.x
            && self.min.y <= o.min.y
            && o.max.x <= self.max.x
            && o.max.y <= self.max.y
    }

    pub fn center(&self) -> Point {
        Point::new(
            0.5 * (self.min.x + self.max.x),
            0.5 * (self.min.y + self.max.y),
        )
    }

    pub fn corners(&self) -> [Point; 4] {
        [
            self.min,
            Point::new(self.max.x, self.min.y),
            self.max,
            Point::new(self.min.x, self.max.y),
        ]
    }

    pub fn diagonal(&self) -> f64 {
        (self.max - self.min).norm()
    }

    /// Euclidean distance from `p` to the box (0 inside).
    pub fn distance_to_point(&self, p: Point) -> f64 {
        let dx = (self.min.x - p.x).max(p.x - self.max.x).max(0.0);
        let dy = (self.min.y - p.y).max(p.y - self.max.y).max(0.0);
        dx.hypot(dy)
    }

    /// True unless every corner lies strictly on the same side of the line
    /// through `p` and `q`. Uses exact orientation.
    pub fn straddles_line(&self, p: Point, q: Point) -> bool {
        let mut pos = false;
        let mut neg = false;
        for c in self.corners() {
            match orientation(p, q, c) {
                Orientation::CounterClockwise => pos = true,
                Orientation::Clockwise => neg = true,
                Orientation::Collinear => return true,
            }
        }
        pos && neg
    }

    /// Conservative test: may the closed segment touch this closed box?
    pub fn may_touch_segment(&self, s: &Segment) -> bool {
        self.overlaps(&s.bbox()) && self.straddles_line(s.a, s.b)
    }
}
