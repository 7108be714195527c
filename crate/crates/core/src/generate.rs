//! Seeded random scenes and paths for tests and benchmarks.
//!
//! Polygons are star-shaped around their centre: vertex angles are jittered
//! around an even spacing (so consecutive gaps stay below pi) and radii are
//! drawn from `[0.4 r, r]`. Placement rejects any candidate whose bounding
//! circle comes near an earlier one, so the polygons are disjoint by
//! construction.

use std::collections::HashMap;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::emptiness::SegmentEmptinessIndex;
use crate::geom::{BBox, Point, Segment};
use crate::scene::{validate_scene, PolyPath, PolygonId, Scene, SimplePolygon};

/// Candidate positions tried per polygon before giving up.
pub const PLACEMENT_ATTEMPTS: usize = 2_000;
/// Fraction of the box area covered by bounding discs, at the largest radius.
const FILL: f64 = 0.3;
const ANGLE_JITTER: f64 = 0.4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerateError {
    #[error("placed only {placed} of {m} polygons; the box is too small")]
    PlacementFailure { placed: usize, m: usize },
    #[error("need target_n >= 3 m (m = {m}, target_n = {target_n})")]
    TooFewVertices { m: usize, target_n: usize },
    #[error("bounding box is empty or not finite")]
    BadBox,
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Square box whose area grows linearly with `n`, keeping obstacle density
/// constant as scenes scale.
pub fn box_for(n: usize) -> BBox {
    let half = 5.0 * (n.max(16) as f64 / 16.0).sqrt();
    BBox {
        min: Point::new(-half, -half),
        max: Point::new(half, half),
    }
}

/// `m` pairwise-disjoint simple polygons with `target_n` vertices in total
/// (spread as evenly as possible), all inside `bbox`.
pub fn generate_scene(
    seed: u64,
    m: usize,
    target_n: usize,
    bbox: BBox,
) -> Result<Scene, GenerateError> {
    if m == 0 {
        return Ok(Scene::empty());
    }
    if target_n < 3 * m {
        return Err(GenerateError::TooFewVertices { m, target_n });
    }
    let (w, h) = (bbox.max.x - bbox.min.x, bbox.max.y - bbox.min.y);
    if !(w > 0.0 && h > 0.0 && w.is_finite() && h.is_finite()) {
        return Err(GenerateError::BadBox);
    }
    let mut rng = rng_for(seed);
    let r_max = (FILL * w * h / (m as f64 * std::f64::consts::PI))
        .sqrt()
        .min(w.min(h) / 2.0);
    let mut grid = DiscGrid::new(2.0 * r_max);
    let mut polygons = Vec::with_capacity(m);

    for i in 0..m {
        let k = target_n / m + usize::from(i < target_n % m);
        let r = rng.random_range(0.6 * r_max..=r_max);
        let placed = (0..PLACEMENT_ATTEMPTS).find_map(|_| {
            let c = Point::new(
                rng.random_range(bbox.min.x + r..=bbox.max.x - r),
                rng.random_range(bbox.min.y + r..=bbox.max.y - r),
            );
            grid.is_clear(c, r).then_some(c)
        });
        let Some(center) = placed else {
            return Err(GenerateError::PlacementFailure { placed: i, m });
        };
        grid.insert(center, r);
        polygons.push(star_polygon(&mut rng, PolygonId(i as u32), center, r, k));
    }
    Ok(validate_scene(polygons).expect("separated star polygons form a valid scene"))
}

/// A random star-shaped simple polygon with `k` vertices within radius `r`.
pub fn star_polygon(
    rng: &mut impl Rng,
    id: PolygonId,
    center: Point,
    r: f64,
    k: usize,
) -> SimplePolygon {
    let phase = rng.random::<f64>() * TAU;
    loop {
        let vertices = (0..k)
            .map(|j| {
                let a = phase + (j as f64 + ANGLE_JITTER * rng.random::<f64>()) * TAU / k as f64;
                let rho = r * rng.random_range(0.4..=1.0);
                Point::new(center.x + rho * a.cos(), center.y + rho * a.sin())
            })
            .collect();
        // collinear triples are possible in principle; redraw
        if let Ok(p) = SimplePolygon::new(id, vertices) {
            return p;
        }
    }
}

/// Uniform hash grid over disc centres, for rejection placement.
struct DiscGrid {
    cell: f64,
    cells: HashMap<(i64, i64), Vec<(Point, f64)>>,
}

impl DiscGrid {
    fn new(cell: f64) -> Self {
        DiscGrid {
            cell,
            cells: HashMap::new(),
        }
    }

    fn key(&self, p: Point) -> (i64, i64) {
        (
            (p.x / self.cell).floor() as i64,
            (p.y / self.cell).floor() as i64,
        )
    }

    /// No disc within `r + r'` plus a small gap. Radii never exceed half a
    /// cell, so the 3x3 neighbourhood suffices.
    fn is_clear(&self, c: Point, r: f64) -> bool {
        let (cx, cy) = self.key(c);
        (-1..=1).all(|dx| {
            (-1..=1).all(|dy| {
                self.cells
                    .get(&(cx + dx, cy + dy))
                    .is_none_or(|v| v.iter().all(|&(q, rq)| c.distance(q) > (r + rq) * 1.02))
            })
        })
    }

    fn insert(&mut self, c: Point, r: f64) {
        let key = self.key(c);
        self.cells.entry(key).or_default().push((c, r));
    }
}

/// A random point of `bbox` outside every obstacle, by rejection.
pub fn free_point(
    rng: &mut impl Rng,
    emptiness: &SegmentEmptinessIndex,
    bbox: BBox,
) -> Option<Point> {
    (0..10_000).find_map(|_| {
        let p = uniform_point(rng, bbox);
        emptiness.containing_polygon(p).is_none().then_some(p)
    })
}

pub fn uniform_point(rng: &mut impl Rng, bbox: BBox) -> Point {
    Point::new(
        rng.random_range(bbox.min.x..=bbox.max.x),
        rng.random_range(bbox.min.y..=bbox.max.y),
    )
}

/// A `k`-segment random walk through free space: each step has a random
/// heading and a length up to `step`, and is redrawn until it meets no
/// obstacle. `None` if the walk gets stuck.
pub fn free_path(
    rng: &mut impl Rng,
    emptiness: &SegmentEmptinessIndex,
    bbox: BBox,
    k: usize,
    step: f64,
) -> Option<PolyPath> {
    let mut vertices = vec![free_point(rng, emptiness, bbox)?];
    while vertices.len() <= k {
        let from = *vertices.last().unwrap();
        let next = (0..1_000).find_map(|_| {
            let a = rng.random::<f64>() * TAU;
            let len = step * rng.random_range(0.2..=1.0);
            let to = Point::new(
                (from.x + len * a.cos()).clamp(bbox.min.x, bbox.max.x),
                (from.y + len * a.sin()).clamp(bbox.min.y, bbox.max.y),
            );
            let s = Segment::new(from, to).ok()?;
            emptiness.segment_intersects(&s).is_none().then_some(to)
        })?;
        vertices.push(next);
    }
    PolyPath::new(vertices).ok()
}

/// A `k`-segment path with uniformly random vertices; usually crosses
/// obstacles.
pub fn random_path(rng: &mut impl Rng, bbox: BBox, k: usize) -> PolyPath {
    loop {
        let vertices = (0..=k).map(|_| uniform_point(rng, bbox)).collect();
        if let Ok(p) = PolyPath::new(vertices) {
            return p;
        }
    }
}
