//! Convex hulls and logarithmic extreme-vertex search.

use std::cmp::Ordering;

use crate::geom::{orientation, Orientation, Point};

/// Indices of the strictly convex hull of `points`, counterclockwise,
/// starting from the lexicographically smallest point. Collinear boundary
/// points are dropped; duplicates collapse.
pub fn convex_hull(points: &[Point]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&i, &j| lex(points[i], points[j]));
    idx.dedup_by(|i, j| points[*i] == points[*j]);
    if idx.len() <= 2 {
        return idx;
    }
    let mut hull: Vec<usize> = Vec::with_capacity(idx.len() + 1);
    for pass in 0..2 {
        let floor = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(idx.iter())
        } else {
            Box::new(idx.iter().rev())
        };
        for &i in iter {
            while hull.len() >= floor + 2 {
                let a = points[hull[hull.len() - 2]];
                let b = points[hull[hull.len() - 1]];
                if orientation(a, b, points[i]) == Orientation::CounterClockwise {
                    break;
                }
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull
}

fn lex(p: Point, q: Point) -> Ordering {
    p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y))
}

/// Index of the hull vertex maximizing `<v, dir>`, by binary search over the
/// cyclic vertex sequence. `hull` must be strictly convex and
/// counterclockwise. Ties go to the lower index.
pub fn hull_extreme_point(hull: &[Point], dir: Point) -> usize {
    let n = hull.len();
    assert!(n > 0, "empty hull");
    if n < 3 {
        return scan_extreme(hull, dir);
    }
    let f = |i: usize| hull[i % n].dot(dir);
    let cmp = |i: usize, j: usize| -> i8 {
        match f(i).total_cmp(&f(j)) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    };
    // vertex i is a local maximum reached by a strict rise
    let is_top = |i: usize| cmp(i + 1, i) <= 0 && cmp(i, i + n - 1) > 0;

    let found = if is_top(0) {
        0
    } else {
        let (mut lo, mut hi) = (0usize, n);
        loop {
            if lo + 1 >= hi {
                break lo;
            }
            let mid = (lo + hi) / 2;
            if is_top(mid) {
                break mid;
            }
            let rise_lo = cmp(lo + 1, lo);
            let rise_mid = cmp(mid + 1, mid);
            if rise_lo > rise_mid || (rise_lo == rise_mid && rise_lo == cmp(lo, mid)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    };
    // settle ties with the neighbours (a hull edge perpendicular to dir)
    let mut best = found % n;
    for cand in [(found + n - 1) % n, (found + 1) % n] {
        let c = f(cand).total_cmp(&f(best));
        if c == Ordering::Greater || (c == Ordering::Equal && cand < best) {
            best = cand;
        }
    }
    best
}

/// Linear-scan reference for [`hull_extreme_point`].
pub fn scan_extreme(points: &[Point], dir: Point) -> usize {
    let mut best = 0;
    for (i, p) in points.iter().enumerate().skip(1) {
        if p.dot(dir) > points[best].dot(dir) {
            best = i;
        }
    }
    best
}
