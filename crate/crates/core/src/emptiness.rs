//! Point location (is a point inside an obstacle?) and intersection
//! emptiness (does a segment or line meet any obstacle?).

use std::ops::ControlFlow;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::edges::SceneEdges;
use crate::geom::{
    dist_segment_segment, orientation, project_onto_segment, segments_intersect, Line, Orientation,
    Point, Segment, SegmentDistance,
};
use crate::scene::{crosses_rightward_ray, PolygonId, Scene};

/// Points within this distance of an obstacle edge are `OnBoundary`.
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "polygon_id")]
pub enum Location {
    FreeSpace,
    Inside(PolygonId),
    OnBoundary(PolygonId),
}

impl Location {
    pub fn polygon(&self) -> Option<PolygonId> {
        match *self {
            Location::FreeSpace => None,
            Location::Inside(id) | Location::OnBoundary(id) => Some(id),
        }
    }
}

/// Classifies a point by its nearest boundary feature: the side of the
/// nearest edge, or the interior cone of the nearest vertex. The segment
/// from the query point to its nearest boundary point cannot cross the
/// boundary, so the local answer is the global one.
#[derive(Clone, Debug)]
pub struct PointLocationIndex {
    edges: Arc<SceneEdges>,
}

pub fn build_point_location(scene: &Scene) -> PointLocationIndex {
    PointLocationIndex::from_edges(Arc::new(SceneEdges::build(scene)))
}

impl PointLocationIndex {
    pub fn from_edges(edges: Arc<SceneEdges>) -> Self {
        PointLocationIndex { edges }
    }

    pub fn locate(&self, p: Point) -> Location {
        let Some(near) = self.edges.nearest(p) else {
            return Location::FreeSpace;
        };
        let id = self.edges.edge_polygon_id(near.edge);
        if near.distance <= BOUNDARY_TOLERANCE {
            return Location::OnBoundary(id);
        }
        let seg = self.edges.segment(near.edge);
        let t = project_onto_segment(p, seg);
        let inside = if t > 0.0 && t < 1.0 {
            orientation(seg.a, seg.b, p) == Orientation::CounterClockwise
        } else {
            // nearest feature is a vertex; test the interior angle there
            let (prev, v, next) = if t == 0.0 {
                (
                    self.edges.segment(self.edges.previous_edge(near.edge)).a,
                    seg.a,
                    seg.b,
                )
            } else {
                (
                    seg.a,
                    seg.b,
                    self.edges.segment(self.edges.next_edge(near.edge)).b,
                )
            };
            let left_of_in = orientation(prev, v, p) == Orientation::CounterClockwise;
            let left_of_out = orientation(v, next, p) == Orientation::CounterClockwise;
            if orientation(prev, v, next) == Orientation::Clockwise {
                left_of_in || left_of_out
            } else {
                left_of_in && left_of_out
            }
        };
        if inside {
            Location::Inside(id)
        } else {
            Location::FreeSpace
        }
    }
}

/// Which obstacle edge a query touched.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeHit {
    pub polygon_id: PolygonId,
    /// Global edge index.
    pub edge: u32,
}

#[derive(Clone, Debug)]
pub struct SegmentEmptinessIndex {
    edges: Arc<SceneEdges>,
}

pub fn build_segment_emptiness(scene: &Scene) -> SegmentEmptinessIndex {
    SegmentEmptinessIndex::from_edges(Arc::new(SceneEdges::build(scene)))
}

impl SegmentEmptinessIndex {
    pub fn from_edges(edges: Arc<SceneEdges>) -> Self {
        SegmentEmptinessIndex { edges }
    }

    pub fn edges(&self) -> &SceneEdges {
        &self.edges
    }

    /// First obstacle edge (in traversal order) that the closed segment
    /// crosses or touches.
    pub fn segment_hits_edge(&self, s: &Segment) -> Option<EdgeHit> {
        let bbox = s.bbox();
        self.edges.bvh().traverse(
            |b| b.overlaps(&bbox) && b.straddles_line(s.a, s.b),
            |i| {
                let e = self.edges.segment(i);
                if segments_intersect(s.a, s.b, e.a, e.b) {
                    ControlFlow::Break(EdgeHit {
                        polygon_id: self.edges.edge_polygon_id(i),
                        edge: i,
                    })
                } else {
                    ControlFlow::Continue(())
                }
            },
        )
    }

    /// Earliest contact along `s` from `s.a`: the intersected edge whose
    /// contact point is nearest `s.a`, ties to the lower global edge index.
    pub fn first_contact(&self, s: &Segment) -> Option<(EdgeHit, SegmentDistance)> {
        let bbox = s.bbox();
        let mut best: Option<(f64, EdgeHit, SegmentDistance)> = None;
        self.edges.bvh().traverse::<()>(
            |b| b.overlaps(&bbox) && b.straddles_line(s.a, s.b),
            |i| {
                let e = self.edges.segment(i);
                if segments_intersect(s.a, s.b, e.a, e.b) {
                    let at = dist_segment_segment(s, e);
                    let d = (at.on_first - s.a).norm();
                    let better = match &best {
                        None => true,
                        Some((bd, h, _)) => d < *bd || (d == *bd && i < h.edge),
                    };
                    if better {
                        let hit = EdgeHit {
                            polygon_id: self.edges.edge_polygon_id(i),
                            edge: i,
                        };
                        best = Some((d, hit, at));
                    }
                }
                ControlFlow::Continue(())
            },
        );
        best.map(|(_, h, at)| (h, at))
    }

    /// Polygon whose closed region `s` meets: a boundary contact, or `s`
    /// lying entirely inside.
    pub fn segment_intersects(&self, s: &Segment) -> Option<PolygonId> {
        self.segment_hits_edge(s)
            .map(|h| h.polygon_id)
            .or_else(|| self.containing_polygon(s.a))
    }

    /// Obstacle met by the line through `l.anchor` and `l.anchor + l.direction`.
    pub fn line_intersects(&self, l: &Line) -> Option<PolygonId> {
        let (p, q) = (l.anchor, l.second_point());
        self.edges.bvh().traverse(
            |b| b.straddles_line(p, q),
            |i| {
                let e = self.edges.segment(i);
                let oa = orientation(p, q, e.a);
                let ob = orientation(p, q, e.b);
                if oa != ob || oa == Orientation::Collinear {
                    ControlFlow::Break(self.edges.edge_polygon_id(i))
                } else {
                    ControlFlow::Continue(())
                }
            },
        )
    }

    /// Ray-casting containment through the hierarchy. Only meaningful for
    /// points off every boundary.
    pub fn containing_polygon(&self, p: Point) -> Option<PolygonId> {
        let mut crossed: Vec<u32> = Vec::new();
        self.edges.bvh().traverse::<()>(
            |b| b.max.x >= p.x && b.min.y <= p.y && p.y <= b.max.y,
            |i| {
                if crosses_rightward_ray(self.edges.segment(i), p) {
                    crossed.push(self.edges.edge(i).polygon);
                }
                ControlFlow::Continue(())
            },
        );
        crossed.sort_unstable();
        crossed
            .chunk_by(|a, b| a == b)
            .find(|run| run.len() % 2 == 1)
            .map(|run| self.edges.polygon_id(run[0]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{validate_scene, SimplePolygon};

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn unit_square_scene() -> Scene {
        validate_scene(vec![SimplePolygon::new(
            PolygonId(0),
            vec![p(0., 0.), p(1., 0.), p(1., 1.), p(0., 1.)],
        )
        .unwrap()])
        .unwrap()
    }

    #[test]
    fn locate_examples() {
        let idx = build_point_location(&unit_square_scene());
        assert_eq!(idx.locate(p(0.5, 0.5)), Location::Inside(PolygonId(0)));
        assert_eq!(idx.locate(p(2.0, 2.0)), Location::FreeSpace);
        assert_eq!(idx.locate(p(1.0, 0.5)), Location::OnBoundary(PolygonId(0)));
        assert_eq!(idx.locate(p(1.0, 1.0)), Location::OnBoundary(PolygonId(0)));
    }

    #[test]
    fn locate_empty_scene() {
        let idx = build_point_location(&Scene::empty());
        assert_eq!(idx.locate(p(0.0, 0.0)), Location::FreeSpace);
    }

    #[test]
    fn locate_near_reflex_vertex() {
        // L-shape with reflex vertex at (1,1)
        let scene = validate_scene(vec![SimplePolygon::new(
            PolygonId(2),
            vec![
                p(0., 0.),
                p(2., 0.),
                p(2., 1.),
                p(1., 1.),
                p(1., 2.),
                p(0., 2.),
            ],
        )
        .unwrap()])
        .unwrap();
        let idx = build_point_location(&scene);
        assert_eq!(idx.locate(p(0.9, 0.9)), Location::Inside(PolygonId(2)));
        assert_eq!(idx.locate(p(1.1, 1.1)), Location::FreeSpace);
        assert_eq!(idx.locate(p(1.5, 0.5)), Location::Inside(PolygonId(2)));
        assert_eq!(idx.locate(p(2.5, 1.5)), Location::FreeSpace);
        assert_eq!(idx.locate(p(-0.1, 2.1)), Location::FreeSpace);
    }

    #[test]
    fn segment_queries() {
        let idx = build_segment_emptiness(&unit_square_scene());
        let through = Segment::new(p(-1.0, 0.5), p(2.0, 0.5)).unwrap();
        assert_eq!(idx.segment_intersects(&through), Some(PolygonId(0)));
        let far = Segment::new(p(5.0, 5.0), p(6.0, 7.0)).unwrap();
        assert_eq!(idx.segment_intersects(&far), None);
        let inner = Segment::new(p(0.2, 0.5), p(0.8, 0.5)).unwrap();
        assert_eq!(idx.segment_hits_edge(&inner), None);
        assert_eq!(idx.segment_intersects(&inner), Some(PolygonId(0)));
        let touch = Segment::new(p(1.0, 1.0), p(2.0, 2.0)).unwrap();
        assert_eq!(idx.segment_intersects(&touch), Some(PolygonId(0)));
    }

    #[test]
    fn line_queries() {
        let idx = build_segment_emptiness(&unit_square_scene());
        let through = Line::new(p(-5.0, 0.5), p(1.0, 0.0)).unwrap();
        assert_eq!(idx.line_intersects(&through), Some(PolygonId(0)));
        let above = Line::new(p(-5.0, 3.0), p(1.0, 0.0)).unwrap();
        assert_eq!(idx.line_intersects(&above), None);
        let tangent = Line::new(p(3.0, -2.0), p(-1.0, 1.0)).unwrap();
        assert_eq!(idx.line_intersects(&tangent), Some(PolygonId(0)));
    }
}
