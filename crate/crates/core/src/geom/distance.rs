use super::{orientation, segments_intersect, Line, Orientation, Point, Segment};

/// A distance together with the point that realizes it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Closest {
    pub distance: f64,
    pub point: Point,
}

/// Distance between two segments with a realizing pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SegmentDistance {
    pub distance: f64,
    pub on_first: Point,
    pub on_second: Point,
}

/// Parameter in `[0, 1]` of the point of `s` closest to `p`.
#[inline]
pub fn project_onto_segment(p: Point, s: &Segment) -> f64 {
    let d = s.direction();
    let t = (p - s.a).dot(d) / d.norm2();
    t.clamp(0.0, 1.0)
}

#[inline]
pub fn dist_point_segment(p: Point, s: &Segment) -> Closest {
    let t = project_onto_segment(p, s);
    let foot = if t == 0.0 {
        s.a
    } else if t == 1.0 {
        s.b
    } else {
        s.a + s.direction() * t
    };
    Closest {
        distance: p.distance(foot),
        point: foot,
    }
}

pub fn dist_point_line(p: Point, l: &Line) -> f64 {
    l.signed_offset(p).abs()
}

/// Exact-topology segment distance: zero iff the closed segments meet,
/// otherwise the smallest of the four endpoint-to-segment distances.
pub fn dist_segment_segment(s1: &Segment, s2: &Segment) -> SegmentDistance {
    if segments_intersect(s1.a, s1.b, s2.a, s2.b) {
        let x = intersection_point(s1, s2);
        return SegmentDistance {
            distance: 0.0,
            on_first: x,
            on_second: x,
        };
    }
    let mut best = {
        let c = dist_point_segment(s1.a, s2);
        SegmentDistance {
            distance: c.distance,
            on_first: s1.a,
            on_second: c.point,
        }
    };
    let c = dist_point_segment(s1.b, s2);
    if c.distance < best.distance {
        best = SegmentDistance {
            distance: c.distance,
            on_first: s1.b,
            on_second: c.point,
        };
    }
    for q in [s2.a, s2.b] {
        let c = dist_point_segment(q, s1);
        if c.distance < best.distance {
            best = SegmentDistance {
                distance: c.distance,
                on_first: c.point,
                on_second: q,
            };
        }
    }
    best
}

/// A common point of two segments already known to intersect.
fn intersection_point(s1: &Segment, s2: &Segment) -> Point {
    let o1 = orientation(s1.a, s1.b, s2.a);
    let o2 = orientation(s1.a, s1.b, s2.b);
    let o3 = orientation(s2.a, s2.b, s1.a);
    let o4 = orientation(s2.a, s2.b, s1.b);
    use Orientation::Collinear;
    if o3 == Collinear && super::point_on_segment(s1.a, s2.a, s2.b) {
        return s1.a;
    }
    if o4 == Collinear && super::point_on_segment(s1.b, s2.a, s2.b) {
        return s1.b;
    }
    if o1 == Collinear && super::point_on_segment(s2.a, s1.a, s1.b) {
        return s2.a;
    }
    if o2 == Collinear && super::point_on_segment(s2.b, s1.a, s1.b) {
        return s2.b;
    }
    let d1 = s1.direction();
    let d2 = s2.direction();
    let t = (s2.a - s1.a).cross(d2) / d1.cross(d2);
    s1.a + d1 * t.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Segment {
        Segment::new(p(ax, ay), p(bx, by)).unwrap()
    }

    #[test]
    fn point_segment_examples() {
        let c = dist_point_segment(p(0., 2.), &seg(-1., 0., 1., 0.));
        assert_eq!(c.distance, 2.0);
        assert_eq!(c.point, p(0., 0.));

        let c = dist_point_segment(p(3., 1.), &seg(0., 0., 1., 0.));
        assert_eq!(c.distance, 5f64.sqrt());
        assert_eq!(c.point, p(1., 0.));

        assert_eq!(
            dist_point_segment(p(0.5, 0.), &seg(0., 0., 1., 0.)).distance,
            0.0
        );
    }

    #[test]
    fn segment_segment_examples() {
        assert_eq!(
            dist_segment_segment(&seg(0., 0., 1., 0.), &seg(0., 1., 1., 1.)).distance,
            1.0
        );
        let x = dist_segment_segment(&seg(0., 0., 2., 2.), &seg(0., 2., 2., 0.));
        assert_eq!(x.distance, 0.0);
        assert_eq!(x.on_first, p(1., 1.));

        let d = dist_segment_segment(&seg(0., 0., 1., 0.), &seg(2., 1., 3., 1.));
        assert_eq!(d.distance, 2f64.sqrt());
        assert_eq!(d.on_first, p(1., 0.));
        assert_eq!(d.on_second, p(2., 1.));
    }

    #[test]
    fn point_line_examples() {
        let x_axis = Line::new(p(0., 0.), p(1., 0.)).unwrap();
        assert_eq!(dist_point_line(p(0., 1.), &x_axis), 1.0);
        assert_eq!(dist_point_line(p(-3., 0.), &x_axis), 0.0);
        assert_eq!(dist_point_line(p(3., 4.), &x_axis), 4.0);
    }

    #[test]
    fn touching_witness_is_the_touch_point() {
        let d = dist_segment_segment(&seg(0., 0., 2., 0.), &seg(1., 0., 1., 5.));
        assert_eq!(d.distance, 0.0);
        assert_eq!(d.on_first, p(1., 0.));
        assert_eq!(d.on_second, p(1., 0.));
    }
}
