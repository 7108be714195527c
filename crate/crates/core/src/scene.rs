//! Obstacle polygons, the validated scene, and query paths.

use std::collections::HashSet;
use std::fmt;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::bvh::{Bvh, DEFAULT_LEAF_SIZE};
use crate::error::{GeomError, SceneError};
use crate::geom::{orientation, segments_intersect, BBox, Orientation, Point, Segment};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolygonId(pub u32);

impl fmt::Display for PolygonId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A simple polygon with counterclockwise vertex order.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplePolygon {
    id: PolygonId,
    vertices: Vec<Point>,
}

impl SimplePolygon {
    /// Validates simplicity and normalizes the orientation to counterclockwise.
    pub fn new(id: PolygonId, mut vertices: Vec<Point>) -> Result<Self, SceneError> {
        let h = vertices.len();
        if h < 3 {
            return Err(SceneError::TooFewVertices(id));
        }
        if !vertices.iter().all(Point::is_finite) {
            return Err(SceneError::NonFinite(id));
        }
        if (0..h).any(|i| vertices[i] == vertices[(i + 1) % h]) {
            return Err(SceneError::DegenerateVertexRun(id));
        }
        // The lexicographically smallest vertex is convex in any simple polygon.
        let lo = (0..h)
            .min_by(|&i, &j| {
                let (p, q) = (vertices[i], vertices[j]);
                p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y))
            })
            .unwrap();
        match orientation(
            vertices[(lo + h - 1) % h],
            vertices[lo],
            vertices[(lo + 1) % h],
        ) {
            Orientation::CounterClockwise => {}
            Orientation::Clockwise => vertices.reverse(),
            Orientation::Collinear => return Err(SceneError::NonSimplePolygon(id)),
        }
        let poly = SimplePolygon { id, vertices };
        if !poly.is_simple() {
            return Err(SceneError::NonSimplePolygon(id));
        }
        Ok(poly)
    }

    pub fn id(&self) -> PolygonId {
        self.id
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1` (cyclically).
    pub fn edge(&self, i: usize) -> Segment {
        let h = self.vertices.len();
        Segment::new_unchecked(self.vertices[i], self.vertices[(i + 1) % h])
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        (0..self.vertices.len()).map(move |i| self.edge(i))
    }

    pub fn bbox(&self) -> BBox {
        BBox::of_points(&self.vertices)
    }

    pub fn signed_area(&self) -> f64 {
        let h = self.vertices.len();
        0.5 * (0..h)
            .map(|i| self.vertices[i].cross(self.vertices[(i + 1) % h]))
            .sum::<f64>()
    }

    /// Crossing-number containment test. Points on the boundary may go
    /// either way.
    pub fn contains(&self, p: Point) -> bool {
        let mut inside = false;
        for e in self.edges() {
            if crosses_rightward_ray(&e, p) {
                inside = !inside;
            }
        }
        inside
    }

    fn is_simple(&self) -> bool {
        let h = self.vertices.len();
        let boxes: Vec<BBox> = self.edges().map(|e| e.bbox()).collect();
        let bvh = Bvh::build(&boxes, DEFAULT_LEAF_SIZE);
        for (i, bi) in boxes.iter().enumerate() {
            let e = self.edge(i);
            let bad = bvh.traverse(
                |b| b.overlaps(bi),
                |j| {
                    let j = j as usize;
                    if j <= i {
                        return ControlFlow::Continue(());
                    }
                    let clash = if j == i + 1 {
                        self.folds_at(i + 1)
                    } else if i == 0 && j == h - 1 {
                        self.folds_at(0)
                    } else {
                        let f = self.edge(j);
                        segments_intersect(e.a, e.b, f.a, f.b)
                    };
                    if clash {
                        ControlFlow::Break(())
                    } else {
                        ControlFlow::Continue(())
                    }
                },
            );
            if bad.is_some() {
                return false;
            }
        }
        true
    }

    /// The two edges meeting at vertex `v` overlap beyond `v`.
    fn folds_at(&self, v: usize) -> bool {
        let h = self.vertices.len();
        let a = self.vertices[(v + h - 1) % h];
        let b = self.vertices[v % h];
        let c = self.vertices[(v + 1) % h];
        orientation(a, b, c) == Orientation::Collinear && (b - a).dot(c - b) < 0.0
    }
}

/// Half-open rule for the ray from `p` towards +x; exact via orientation.
pub(crate) fn crosses_rightward_ray(e: &Segment, p: Point) -> bool {
    let (a, b) = (e.a, e.b);
    if a.y <= p.y && p.y < b.y {
        orientation(a, b, p) == Orientation::CounterClockwise
    } else if b.y <= p.y && p.y < a.y {
        orientation(a, b, p) == Orientation::Clockwise
    } else {
        false
    }
}

/// A validated set of pairwise disjoint simple polygons.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Scene {
    polygons: Vec<SimplePolygon>,
    n: usize,
}

impl Scene {
    pub fn empty() -> Scene {
        Scene::default()
    }

    pub fn polygons(&self) -> &[SimplePolygon] {
        &self.polygons
    }

    pub fn polygon(&self, index: usize) -> &SimplePolygon {
        &self.polygons[index]
    }

    /// Total vertex count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Polygon count.
    pub fn m(&self) -> usize {
        self.polygons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polygons.is_empty()
    }

    pub fn bbox(&self) -> BBox {
        self.polygons
            .iter()
            .fold(BBox::EMPTY, |b, p| b.union(p.bbox()))
    }

    /// All edges tagged with `(polygon index, edge index)`, in scene order.
    pub fn edges(&self) -> impl Iterator<Item = EdgeRef> + '_ {
        self.polygons.iter().enumerate().flat_map(|(pi, poly)| {
            poly.edges().enumerate().map(move |(ei, segment)| EdgeRef {
                polygon: pi as u32,
                edge: ei as u32,
                segment,
            })
        })
    }

    /// This scene plus `poly`, re-validated.
    pub fn with_polygon(&self, poly: SimplePolygon) -> Result<Scene, SceneError> {
        let mut polys = self.polygons.clone();
        polys.push(poly);
        validate_scene(polys)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeRef {
    pub polygon: u32,
    pub edge: u32,
    pub segment: Segment,
}

/// Checks that ids are unique and that no two polygons touch, cross, or nest.
pub fn validate_scene(polygons: Vec<SimplePolygon>) -> Result<Scene, SceneError> {
    let mut ids = HashSet::with_capacity(polygons.len());
    for p in &polygons {
        if !ids.insert(p.id) {
            return Err(SceneError::DuplicateId(p.id));
        }
    }
    let n = polygons.iter().map(SimplePolygon::len).sum();
    let scene = Scene { polygons, n };

    let edges: Vec<EdgeRef> = scene.edges().collect();
    let boxes: Vec<BBox> = edges.iter().map(|e| e.segment.bbox()).collect();
    let bvh = Bvh::build(&boxes, DEFAULT_LEAF_SIZE);
    for (i, e) in edges.iter().enumerate() {
        let clash = bvh.traverse(
            |b| b.overlaps(&boxes[i]),
            |j| {
                let f = &edges[j as usize];
                if f.polygon > e.polygon
                    && segments_intersect(e.segment.a, e.segment.b, f.segment.a, f.segment.b)
                {
                    ControlFlow::Break(f.polygon)
                } else {
                    ControlFlow::Continue(())
                }
            },
        );
        if let Some(q) = clash {
            return Err(SceneError::PolygonsIntersect(
                scene.polygons[e.polygon as usize].id,
                scene.polygons[q as usize].id,
            ));
        }
    }

    // no boundary contact, so nesting is the only remaining overlap
    let poly_boxes: Vec<BBox> = scene.polygons.iter().map(SimplePolygon::bbox).collect();
    let poly_bvh = Bvh::build(&poly_boxes, DEFAULT_LEAF_SIZE);
    for (i, inner) in scene.polygons.iter().enumerate() {
        let probe = inner.vertices[0];
        let host = poly_bvh.traverse(
            |b| b.contains_box(&poly_boxes[i]),
            |j| {
                let j = j as usize;
                if j != i && scene.polygons[j].contains(probe) {
                    ControlFlow::Break(j)
                } else {
                    ControlFlow::Continue(())
                }
            },
        );
        if let Some(j) = host {
            let (a, b) = (i.min(j), i.max(j));
            return Err(SceneError::PolygonsIntersect(
                scene.polygons[a].id,
                scene.polygons[b].id,
            ));
        }
    }
    Ok(scene)
}

/// A polygonal query path with at least one segment. Self-intersections are
/// allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyPath {
    vertices: Vec<Point>,
}

impl PolyPath {
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeomError> {
        if vertices.len() < 2 {
            return Err(GeomError::PathTooShort(vertices.len()));
        }
        if !vertices.iter().all(Point::is_finite) {
            return Err(GeomError::NonFinite);
        }
        if let Some(i) = (0..vertices.len() - 1).find(|&i| vertices[i] == vertices[i + 1]) {
            return Err(GeomError::RepeatedPathVertex(i, i + 1));
        }
        Ok(PolyPath { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Vertex count `k`.
    pub fn k(&self) -> usize {
        self.vertices.len()
    }

    pub fn segment(&self, i: usize) -> Segment {
        Segment::new_unchecked(self.vertices[i], self.vertices[i + 1])
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        (0..self.vertices.len() - 1).map(move |i| self.segment(i))
    }

    pub fn segment_count(&self) -> usize {
        self.vertices.len() - 1
    }
}
