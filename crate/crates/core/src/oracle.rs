//! Brute-force ground truth: every path segment against every obstacle
//! edge, `O(nk)` per path and no preprocessing. Kept deliberately naive.

use crate::geom::{dist_point_segment, dist_segment_segment, slab_of, Point, Segment};
use crate::report::{Clearance, Witness};
use crate::scene::{PolyPath, PolygonId, Scene, SimplePolygon};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleNearest {
    pub polygon_id: PolygonId,
    pub distance: f64,
    pub witness: Witness,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleSegment {
    pub segment: usize,
    pub clearance: Clearance,
    pub polygon_id: Option<PolygonId>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub min_clearance: Clearance,
    pub witness: Option<Witness>,
    pub per_segment: Vec<OracleSegment>,
}

/// Distance from `s` to the region bounded by `poly`; zero if `s` starts
/// inside it or meets its boundary.
pub fn segment_polygon_distance(poly: &SimplePolygon, s: &Segment) -> (f64, Witness) {
    if poly.contains(s.a) {
        return (
            0.0,
            Witness {
                path_point: s.a,
                obstacle_point: s.a,
                polygon_id: poly.id(),
            },
        );
    }
    let mut best = f64::INFINITY;
    let mut witness = Witness {
        path_point: s.a,
        obstacle_point: poly.vertices()[0],
        polygon_id: poly.id(),
    };
    for e in poly.edges() {
        let d = dist_segment_segment(s, &e);
        if d.distance < best {
            best = d.distance;
            witness.path_point = d.on_first;
            witness.obstacle_point = d.on_second;
        }
    }
    (best, witness)
}

/// Linear scan for the obstacle closest to `s`; equal distances go to the
/// smaller polygon id. `None` for an empty scene.
pub fn oracle_nearest_polygon_to_segment(scene: &Scene, s: &Segment) -> Option<OracleNearest> {
    let mut best: Option<OracleNearest> = None;
    for poly in scene.polygons() {
        let (d, witness) = segment_polygon_distance(poly, s);
        let better = match &best {
            None => true,
            Some(b) => d < b.distance || (d == b.distance && poly.id() < b.polygon_id),
        };
        if better {
            best = Some(OracleNearest {
                polygon_id: poly.id(),
                distance: d,
                witness,
            });
        }
    }
    best
}

pub fn oracle_clearance(scene: &Scene, path: &PolyPath) -> OracleReport {
    let mut per_segment = Vec::with_capacity(path.segment_count());
    let mut min_clearance = Clearance::Unbounded;
    let mut witness = None;
    for (i, s) in path.segments().enumerate() {
        let nearest = oracle_nearest_polygon_to_segment(scene, &s);
        let clearance = nearest.map_or(Clearance::Unbounded, |n| Clearance::Finite(n.distance));
        if let Some(n) = nearest {
            if clearance.as_f64() < min_clearance.as_f64() {
                min_clearance = clearance;
                witness = Some(n.witness);
            }
        }
        per_segment.push(OracleSegment {
            segment: i,
            clearance,
            polygon_id: nearest.map(|n| n.polygon_id),
        });
    }
    OracleReport {
        min_clearance,
        witness,
        per_segment,
    }
}

/// Filter-then-min reference for slab queries: the closest of `points`
/// lying in the closed slab of `s`, as `(index, distance)`. Ties go to the
/// lower index.
pub fn oracle_closest_in_slab(points: &[Point], s: &Segment) -> Option<(usize, f64)> {
    let slab = slab_of(s);
    let mut best: Option<(usize, f64)> = None;
    for (i, &p) in points.iter().enumerate() {
        if !slab.contains(p) {
            continue;
        }
        let d = dist_point_segment(p, s).distance;
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;
    use crate::scene::validate_scene;

    fn square(id: u32, x: f64, y: f64, side: f64) -> SimplePolygon {
        SimplePolygon::new(
            PolygonId(id),
            vec![
                Point::new(x, y),
                Point::new(x + side, y),
                Point::new(x + side, y + side),
                Point::new(x, y + side),
            ],
        )
        .unwrap()
    }

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Segment {
        Segment::new(Point::new(ax, ay), Point::new(bx, by)).unwrap()
    }

    #[test]
    fn corner_is_nearest() {
        let scene = validate_scene(vec![square(0, 2.0, 2.0, 1.0)]).unwrap();
        let path = PolyPath::new(vec![Point::new(0.0, 0.0), Point::new(5.0, 0.0)]).unwrap();
        let r = oracle_clearance(&scene, &path);
        assert_eq!(r.min_clearance, Clearance::Finite(2.0));
        let w = r.witness.unwrap();
        assert_eq!(w.obstacle_point, Point::new(2.0, 2.0));
        assert_eq!(w.path_point, Point::new(2.0, 0.0));
    }

    #[test]
    fn crossing_path_has_zero_clearance() {
        let scene = validate_scene(vec![square(0, 2.0, 2.0, 1.0)]).unwrap();
        let path = PolyPath::new(vec![Point::new(0.0, 2.5), Point::new(5.0, 2.5)]).unwrap();
        assert_eq!(
            oracle_clearance(&scene, &path).min_clearance,
            Clearance::ZERO
        );
        // entirely inside
        let path = PolyPath::new(vec![Point::new(2.2, 2.5), Point::new(2.8, 2.5)]).unwrap();
        assert_eq!(
            oracle_clearance(&scene, &path).min_clearance,
            Clearance::ZERO
        );
    }

    #[test]
    fn nearest_of_two_squares() {
        // unit squares centered at (0,0) and (10,0)
        let scene =
            validate_scene(vec![square(0, -0.5, -0.5, 1.0), square(1, 9.5, -0.5, 1.0)]).unwrap();
        let n = oracle_nearest_polygon_to_segment(&scene, &seg(4.0, -5.0, 4.0, 5.0)).unwrap();
        assert_eq!(n.polygon_id, PolygonId(0));
        assert_eq!(n.distance, 3.5);
    }

    #[test]
    fn ties_go_to_lower_id() {
        let scene =
            validate_scene(vec![square(5, 3.0, -0.5, 1.0), square(2, -4.0, -0.5, 1.0)]).unwrap();
        let n = oracle_nearest_polygon_to_segment(&scene, &seg(0.0, -5.0, 0.0, 5.0)).unwrap();
        assert_eq!(n.distance, 3.0);
        assert_eq!(n.polygon_id, PolygonId(2));
    }

    #[test]
    fn intersecting_segment() {
        let scene = validate_scene(vec![square(3, 0.0, 0.0, 1.0)]).unwrap();
        let n = oracle_nearest_polygon_to_segment(&scene, &seg(-1.0, 0.5, 2.0, 0.5)).unwrap();
        assert_eq!((n.polygon_id, n.distance), (PolygonId(3), 0.0));
    }

    #[test]
    fn empty_scene_is_unbounded() {
        let path = PolyPath::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)]).unwrap();
        let r = oracle_clearance(&Scene::empty(), &path);
        assert_eq!(r.min_clearance, Clearance::Unbounded);
        assert!(r.witness.is_none());
    }
}
