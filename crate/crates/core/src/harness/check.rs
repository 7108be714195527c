//! Oracle-equivalence suites. Every trial draws its own instance from a
//! generator seeded by `(seed, suite, trial)`, so results do not depend on
//! thread scheduling and any failure can be replayed alone.

use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::rel_eq;
use crate::emptiness::build_segment_emptiness;
use crate::engine::{EngineConfig, Execution, Fault, QueryMode, SceneIndex, Verdict};
use crate::generate::{
    box_for, free_path, generate_scene, random_path, rng_for, star_polygon, uniform_point,
};
use crate::geom::{
    dist_point_line, dist_point_segment, dist_segment_segment, segments_intersect, BBox, Line,
    Point, Segment,
};
use crate::hull::{convex_hull, hull_extreme_point, scan_extreme};
use crate::oracle::{
    oracle_clearance, oracle_closest_in_slab, oracle_nearest_polygon_to_segment,
    segment_polygon_distance,
};
use crate::scene::{PolyPath, PolygonId, Scene};
use crate::slab::{PartitionTree, VertexSet};
use crate::TPolicy;

pub const TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug)]
pub struct CheckConfig {
    pub seed: u64,
    /// Trials per suite.
    pub trials: usize,
    pub fault: Option<Fault>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            seed: 1,
            trials: 100,
            fault: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    /// Lowest failing trial and what went wrong.
    pub first_failure: Option<(usize, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.suites.iter().all(|s| s.failed == 0)
    }

    pub fn failed(&self) -> usize {
        self.suites.iter().map(|s| s.failed).sum()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            write!(
                f,
                "{:<12} {:>6} passed {:>6} failed",
                s.name, s.passed, s.failed
            )?;
            if let Some((trial, why)) = &s.first_failure {
                write!(f, "   first: trial {trial}: {why}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

type Trial = fn(&mut ChaCha8Rng, &CheckConfig) -> Result<(), String>;

pub const SUITES: &[(&str, Trial)] = &[
    ("path", path_trial),
    ("segment", segment_trial),
    ("slab", slab_trial),
    ("emptiness", emptiness_trial),
    ("hull", hull_trial),
    ("line", line_trial),
    ("segment-pair", segment_pair_trial),
    ("parallel", parallel_trial),
];

pub fn run_checks(config: &CheckConfig) -> CheckReport {
    let suites = SUITES
        .iter()
        .enumerate()
        .map(|(si, &(name, trial))| run_suite(name, si as u64, trial, config))
        .collect();
    CheckReport {
        seed: config.seed,
        suites,
    }
}

pub fn run_suite(
    name: &'static str,
    suite: u64,
    trial: Trial,
    config: &CheckConfig,
) -> SuiteReport {
    let failures: Vec<(usize, String)> = (0..config.trials)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = trial_rng(config.seed, suite, i as u64);
            trial(&mut rng, config).err().map(|why| (i, why))
        })
        .collect();
    SuiteReport {
        name,
        passed: config.trials - failures.len(),
        failed: failures.len(),
        first_failure: failures.into_iter().min_by_key(|f| f.0),
    }
}

pub fn trial_rng(seed: u64, suite: u64, trial: u64) -> ChaCha8Rng {
    rng_for(
        seed ^ suite.wrapping_mul(0x9E37_79B9_7F4A_7C15)
            ^ trial.wrapping_mul(0xD6E8_FEB8_6659_FD93),
    )
}

/// A random scene with at most 50 polygons and 2000 vertices, and its box.
pub fn random_scene(rng: &mut impl Rng) -> (Scene, BBox) {
    let m = rng.random_range(1..=50);
    let n = rng.random_range(3 * m..=2000);
    let bbox = box_for(n);
    let scene = generate_scene(rng.random(), m, n, bbox).expect("density leaves room");
    (scene, bbox)
}

fn index(scene: &Scene, config: &CheckConfig) -> SceneIndex {
    let cfg = EngineConfig {
        fault: config.fault,
        ..EngineConfig::default()
    };
    SceneIndex::build(scene.clone(), cfg).expect("default budget is valid")
}

/// Half free-space walks, half uniformly random vertices.
pub fn random_test_path(rng: &mut impl Rng, scene: &Scene, bbox: BBox) -> PolyPath {
    let k = rng.random_range(1..=50);
    if rng.random_bool(0.5) {
        let emptiness = build_segment_emptiness(scene);
        let step = bbox.diagonal() * rng.random_range(0.02..0.3);
        if let Some(p) = free_path(rng, &emptiness, bbox, k, step) {
            return p;
        }
    }
    random_path(rng, bbox, k)
}

/// Log-uniform in `[1e-4 diameter, diameter)`, so that both verdicts are
/// common.
pub fn random_clearance(rng: &mut impl Rng, diameter: f64) -> f64 {
    diameter * 10f64.powf(rng.random_range(-4.0..0.0))
}

/// Random direction and a length that is a random fraction of the diameter,
/// from a uniform start point.
pub fn random_short_segment(rng: &mut impl Rng, bbox: BBox) -> Segment {
    loop {
        let a = uniform_point(rng, bbox);
        let r = bbox.diagonal() * 10f64.powf(rng.random_range(-3.0..-0.5));
        let th = rng.random_range(0.0..std::f64::consts::TAU);
        if let Ok(s) = Segment::new(a, Point::new(a.x + r * th.cos(), a.y + r * th.sin())) {
            return s;
        }
    }
}

fn random_segment(rng: &mut impl Rng, bbox: BBox) -> Segment {
    loop {
        if let Ok(s) = Segment::new(uniform_point(rng, bbox), uniform_point(rng, bbox)) {
            return s;
        }
    }
}

fn path_trial(rng: &mut ChaCha8Rng, config: &CheckConfig) -> Result<(), String> {
    let (scene, bbox) = random_scene(rng);
    let path = random_test_path(rng, &scene, bbox);
    let c = random_clearance(rng, bbox.diagonal());
    let report = index(&scene, config)
        .path_clearance(&path, c)
        .map_err(|e| e.to_string())?;
    let expected = oracle_clearance(&scene, &path).min_clearance.as_f64();
    let got = report.min_clearance.as_f64();
    if !rel_eq(got, expected, TOLERANCE) {
        return Err(format!("min clearance {got} != oracle {expected}"));
    }
    let verdict = if expected >= c {
        Verdict::HasClearance
    } else {
        Verdict::Violated
    };
    if report.verdict != verdict && !rel_eq(expected, c, TOLERANCE) {
        return Err(format!(
            "verdict {:?} at c = {c}, oracle {expected}",
            report.verdict
        ));
    }
    Ok(())
}

fn segment_trial(rng: &mut ChaCha8Rng, config: &CheckConfig) -> Result<(), String> {
    let (scene, bbox) = random_scene(rng);
    let idx = index(&scene, config);
    for _ in 0..4 {
        let s = random_short_segment(rng, bbox);
        let got = idx
            .nearest_polygon_to_segment(&s)
            .map_err(|e| e.to_string())?;
        let want = oracle_nearest_polygon_to_segment(&scene, &s).expect("scene is not empty");
        if !rel_eq(got.distance(), want.distance, TOLERANCE) {
            return Err(format!(
                "distance {} != oracle {}",
                got.distance(),
                want.distance
            ));
        }
        let poly = polygon(&scene, got.polygon_id());
        let attained = segment_polygon_distance(poly, &s).0;
        if !rel_eq(attained, want.distance, TOLERANCE) {
            return Err(format!(
                "polygon {} is at {attained}, not {}",
                got.polygon_id(),
                want.distance
            ));
        }
    }
    Ok(())
}

fn polygon(scene: &Scene, id: PolygonId) -> &crate::scene::SimplePolygon {
    scene
        .polygons()
        .iter()
        .find(|p| p.id() == id)
        .expect("reported id exists")
}

fn slab_trial(rng: &mut ChaCha8Rng, _: &CheckConfig) -> Result<(), String> {
    let n = rng.random_range(1..=3000);
    let bbox = box_for(n);
    let points: Vec<Point> = (0..n).map(|_| uniform_point(rng, bbox)).collect();
    let e = rng.random_range(1.0..=2.0);
    let t = TPolicy::Power(e).resolve(n).map_err(|e| e.to_string())?;
    let tree = PartitionTree::build(&VertexSet::from_points(points.clone()), t)
        .map_err(|e| e.to_string())?;
    for _ in 0..4 {
        let s = random_segment(rng, bbox);
        let got = tree.closest_in_slab(&s);
        let want = oracle_closest_in_slab(&points, &s);
        match (got, want) {
            (None, None) => {}
            (Some(g), Some((_, d))) => {
                if !rel_eq(g.distance, d, TOLERANCE) {
                    return Err(format!("slab distance {} != scan {d}", g.distance));
                }
                let exact = dist_point_segment(points[g.index], &s).distance;
                if !rel_eq(exact, d, TOLERANCE)
                    || !crate::geom::slab_of(&s).contains(points[g.index])
                {
                    return Err(format!("reported vertex {} does not attain {d}", g.index));
                }
            }
            (g, w) => {
                return Err(format!(
                    "found mismatch: tree {:?}, scan {:?}",
                    g.map(|h| h.index),
                    w
                ))
            }
        }
    }
    Ok(())
}

fn emptiness_trial(rng: &mut ChaCha8Rng, _: &CheckConfig) -> Result<(), String> {
    let (scene, bbox) = random_scene(rng);
    let emptiness = build_segment_emptiness(&scene);
    for _ in 0..4 {
        let s = random_short_segment(rng, bbox);
        let hit = emptiness.segment_intersects(&s).is_some();
        let zero = oracle_nearest_polygon_to_segment(&scene, &s)
            .expect("not empty")
            .distance
            == 0.0;
        if hit != zero {
            return Err(format!(
                "segment_intersects = {hit}, oracle distance zero = {zero}"
            ));
        }
    }
    Ok(())
}

/// Random strictly convex polygon with `k` vertices, counterclockwise.
pub fn random_hull(rng: &mut impl Rng, k: usize) -> Vec<Point> {
    loop {
        let mut angles: Vec<f64> = (0..k)
            .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
            .collect();
        angles.sort_by(f64::total_cmp);
        let (rx, ry) = (rng.random_range(0.5..2.0), rng.random_range(0.5..2.0));
        let pts: Vec<Point> = angles
            .iter()
            .map(|a| Point::new(rx * a.cos(), ry * a.sin()))
            .collect();
        let hull: Vec<Point> = convex_hull(&pts).into_iter().map(|i| pts[i]).collect();
        if hull.len() >= 3 {
            return hull;
        }
    }
}

fn hull_trial(rng: &mut ChaCha8Rng, _: &CheckConfig) -> Result<(), String> {
    let k = rng.random_range(3..=1000);
    let hull = random_hull(rng, k);
    for _ in 0..10 {
        let a = rng.random_range(0.0..std::f64::consts::TAU);
        let dir = Point::new(a.cos(), a.sin());
        let (got, want) = (hull_extreme_point(&hull, dir), scan_extreme(&hull, dir));
        if hull[got].dot(dir) != hull[want].dot(dir) {
            return Err(format!(
                "hull of {}: binary search picked {got}, scan {want}",
                hull.len()
            ));
        }
    }
    Ok(())
}

/// Vertex minimum versus edge minimum for a line missing a polygon. The
/// edge side treats the line as a segment long enough to cover the polygon.
fn line_trial(rng: &mut ChaCha8Rng, _: &CheckConfig) -> Result<(), String> {
    let k = rng.random_range(3..=60);
    let poly = star_polygon(rng, PolygonId(0), Point::new(0.0, 0.0), 1.0, k);
    let line = loop {
        let th = rng.random_range(0.0..std::f64::consts::TAU);
        let dir = Point::new(th.cos(), th.sin());
        let offset = rng.random_range(-3.0..3.0);
        let l = Line::new(dir.perp() * offset, dir).expect("unit direction");
        let sides: Vec<f64> = poly
            .vertices()
            .iter()
            .map(|&v| l.signed_offset(v))
            .collect();
        if sides.iter().all(|&s| s > 0.0) || sides.iter().all(|&s| s < 0.0) {
            break l;
        }
    };
    let vertex_min = poly
        .vertices()
        .iter()
        .map(|&v| dist_point_line(v, &line))
        .fold(f64::INFINITY, f64::min);
    let far = line.direction * 10.0;
    let long = Segment::new(line.anchor - far, line.anchor + far).expect("long segment");
    let edge_min = poly
        .edges()
        .map(|e| dist_segment_segment(&e, &long).distance)
        .fold(f64::INFINITY, f64::min);
    if !rel_eq(vertex_min, edge_min, TOLERANCE) {
        return Err(format!(
            "vertex minimum {vertex_min} != edge minimum {edge_min}"
        ));
    }
    Ok(())
}

fn segment_pair_trial(rng: &mut ChaCha8Rng, _: &CheckConfig) -> Result<(), String> {
    let bbox = box_for(16);
    let (s1, s2) = loop {
        let (s1, s2) = (random_segment(rng, bbox), random_segment(rng, bbox));
        if !segments_intersect(s1.a, s1.b, s2.a, s2.b) {
            break (s1, s2);
        }
    };
    let d = dist_segment_segment(&s1, &s2).distance;
    let four = [
        dist_point_segment(s1.a, &s2).distance,
        dist_point_segment(s1.b, &s2).distance,
        dist_point_segment(s2.a, &s1).distance,
        dist_point_segment(s2.b, &s1).distance,
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min);
    if d != four {
        return Err(format!("{d} != {four}"));
    }
    Ok(())
}

fn parallel_trial(rng: &mut ChaCha8Rng, config: &CheckConfig) -> Result<(), String> {
    let (scene, bbox) = random_scene(rng);
    let path = random_test_path(rng, &scene, bbox);
    let c = random_clearance(rng, bbox.diagonal());
    let idx = index(&scene, config);
    let seq = idx.path_clearance(&path, c).map_err(|e| e.to_string())?;
    let par = idx
        .with_execution(Execution::Parallel, QueryMode::Full)
        .path_clearance(&path, c)
        .map_err(|e| e.to_string())?;
    if seq != par {
        return Err("parallel report differs from sequential".into());
    }
    Ok(())
}
