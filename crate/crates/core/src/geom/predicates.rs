use super::Point;

/// Turn direction of an ordered point triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Clockwise,
    Collinear,
    CounterClockwise,
}

impl Orientation {
    pub fn sign(self) -> i8 {
        match self {
            Orientation::Clockwise => -1,
            Orientation::Collinear => 0,
            Orientation::CounterClockwise => 1,
        }
    }
}

/// Sign of twice the signed area of `(p, q, r)`, exact for all finite
/// double inputs (adaptive-precision evaluation).
#[inline]
pub fn orientation(p: Point, q: Point, r: Point) -> Orientation {
    let det = robust::orient2d(
        robust::Coord { x: p.x, y: p.y },
        robust::Coord { x: q.x, y: q.y },
        robust::Coord { x: r.x, y: r.y },
    );
    if det > 0.0 {
        Orientation::CounterClockwise
    } else if det < 0.0 {
        Orientation::Clockwise
    } else {
        Orientation::Collinear
    }
}

/// `p` lies on the closed segment `ab`.
pub fn point_on_segment(p: Point, a: Point, b: Point) -> bool {
    orientation(a, b, p) == Orientation::Collinear && within_box(p, a, b)
}

#[inline]
fn within_box(p: Point, a: Point, b: Point) -> bool {
    a.x.min(b.x) <= p.x && p.x <= a.x.max(b.x) && a.y.min(b.y) <= p.y && p.y <= a.y.max(b.y)
}

/// Closed segments `ab` and `cd` share at least one point. Touching counts.
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);
    if o1 != o2 && o3 != o4 {
        return true;
    }
    (o1 == Orientation::Collinear && within_box(c, a, b))
        || (o2 == Orientation::Collinear && within_box(d, a, b))
        || (o3 == Orientation::Collinear && within_box(a, c, d))
        || (o4 == Orientation::Collinear && within_box(b, c, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn orientation_signs() {
        assert_eq!(orientation(p(0., 0.), p(1., 0.), p(0., 1.)).sign(), 1);
        assert_eq!(orientation(p(0., 0.), p(1., 0.), p(2., 0.)).sign(), 0);
        assert_eq!(orientation(p(0., 0.), p(0., 1.), p(1., 0.)).sign(), -1);
    }

    #[test]
    fn orientation_is_exact_near_degeneracy() {
        // Naive evaluation gets these wrong; the adaptive predicate must not.
        let a = p(0.5, 0.5);
        let b = p(12.0, 12.0);
        let c = p(24.0, 24.0);
        assert_eq!(orientation(a, b, c), Orientation::Collinear);
        let tiny = p(0.5 + f64::EPSILON, 0.5);
        assert_eq!(orientation(tiny, b, c), Orientation::Clockwise);
    }

    #[test]
    fn intersection_cases() {
        assert!(segments_intersect(
            p(0., 0.),
            p(2., 2.),
            p(0., 2.),
            p(2., 0.)
        ));
        assert!(!segments_intersect(
            p(0., 0.),
            p(1., 0.),
            p(0., 1.),
            p(1., 1.)
        ));
        // endpoint touch
        assert!(segments_intersect(
            p(0., 0.),
            p(1., 0.),
            p(1., 0.),
            p(1., 1.)
        ));
        // T junction
        assert!(segments_intersect(
            p(0., 0.),
            p(2., 0.),
            p(1., 0.),
            p(1., 3.)
        ));
        // collinear overlap and collinear disjoint
        assert!(segments_intersect(
            p(0., 0.),
            p(2., 0.),
            p(1., 0.),
            p(3., 0.)
        ));
        assert!(!segments_intersect(
            p(0., 0.),
            p(1., 0.),
            p(2., 0.),
            p(3., 0.)
        ));
    }
}
