//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

use std::time::Instant;

use clearance_core::emptiness::build_segment_emptiness;
use clearance_core::engine::{EngineConfig, Execution, QueryMode, SceneIndex, Verdict};
use clearance_core::generate::{box_for, star_polygon, uniform_point};
use clearance_core::geom::{
    dist_point_line, dist_point_segment, dist_segment_segment, segments_intersect, Line, Point,
    Segment,
};
use clearance_core::harness::bench::{
    bench_brute, bench_index, bench_paths, bench_scene, loglog_slope,
};
use clearance_core::harness::check::{
    random_clearance, random_hull, random_scene, random_short_segment, random_test_path, trial_rng,
};
use clearance_core::harness::rel_eq;
use clearance_core::hull::{hull_extreme_point, scan_extreme};
use clearance_core::oracle::{
    oracle_clearance, oracle_nearest_polygon_to_segment, segment_polygon_distance,
};
use clearance_core::scene::PolygonId;
use clearance_core::slab::{PartitionTree, VertexSet, HULL_BUDGET_FACTOR};
use clearance_core::TPolicy;
use rand::Rng;

const TOL: f64 = 1e-9;
const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: usize, total: usize, extra: String) -> Outcome {
    Outcome {
        pass: failures == 0,
        detail: format!("{}/{} ok{}", total - failures, total, extra),
    }
}

fn random_segment(rng: &mut impl Rng, bbox: clearance_core::geom::BBox) -> Segment {
    loop {
        if let Ok(s) = Segment::new(uniform_point(rng, bbox), uniform_point(rng, bbox)) {
            return s;
        }
    }
}

fn path_level() -> Outcome {
    let mut failures = 0;
    let (mut violated, mut clear) = (0, 0);
    for trial in 0..1000 {
        let mut rng = trial_rng(SEED, 1, trial);
        let (scene, bbox) = random_scene(&mut rng);
        let path = random_test_path(&mut rng, &scene, bbox);
        let c = random_clearance(&mut rng, bbox.diagonal());
        let idx = SceneIndex::build(scene.clone(), EngineConfig::default()).unwrap();
        let got = idx.path_clearance(&path, c).unwrap();
        let want = oracle_clearance(&scene, &path).min_clearance.as_f64();
        let want_verdict = if want >= c {
            Verdict::HasClearance
        } else {
            Verdict::Violated
        };
        violated += usize::from(want_verdict == Verdict::Violated);
        clear += usize::from(want > 0.0);
        if !rel_eq(got.min_clearance.as_f64(), want, TOL) || got.verdict != want_verdict {
            failures += 1;
            eprintln!(
                "  path trial {trial}: got {:?} {:?}, oracle {want}",
                got.verdict, got.min_clearance
            );
        }
    }
    outcome(
        failures,
        1000,
        format!(", {violated} violated, {clear} with positive clearance"),
    )
}

fn segment_level() -> Outcome {
    let (mut failures, mut total, mut hits) = (0, 0, 0);
    for scene_no in 0..200 {
        let mut rng = trial_rng(SEED, 2, scene_no);
        let (scene, bbox) = random_scene(&mut rng);
        let idx = SceneIndex::build(scene.clone(), EngineConfig::default()).unwrap();
        for _ in 0..50 {
            let s = random_short_segment(&mut rng, bbox);
            let got = idx.nearest_polygon_to_segment(&s).unwrap();
            let want = oracle_nearest_polygon_to_segment(&scene, &s).unwrap();
            let poly = scene
                .polygons()
                .iter()
                .find(|p| p.id() == got.polygon_id())
                .unwrap();
            let attained = segment_polygon_distance(poly, &s).0;
            total += 1;
            hits += usize::from(want.distance == 0.0);
            if !rel_eq(got.distance(), want.distance, TOL) || !rel_eq(attained, want.distance, TOL)
            {
                failures += 1;
            }
        }
    }
    outcome(failures, total, format!(", {hits} touching"))
}

/// Independent filter-then-min: slab membership by projection onto the
/// segment direction.
fn scan_slab(points: &[Point], s: &Segment) -> Option<f64> {
    let d = s.b - s.a;
    points
        .iter()
        .filter(|&&p| {
            let t = (p - s.a).dot(d);
            (0.0..=d.dot(d)).contains(&t)
        })
        .map(|&p| dist_point_segment(p, s).distance)
        .min_by(f64::total_cmp)
}

fn slab_exactness() -> Outcome {
    let (mut failures, mut total, mut empty) = (0, 0, 0);
    for set_no in 0..100 {
        let mut rng = trial_rng(SEED, 3, set_no);
        let n = rng.random_range(1..=5000);
        let bbox = box_for(n);
        let points: Vec<Point> = (0..n).map(|_| uniform_point(&mut rng, bbox)).collect();
        let t = TPolicy::Power(rng.random_range(1.0..=2.0))
            .resolve(n)
            .unwrap();
        let tree = PartitionTree::build(&VertexSet::from_points(points.clone()), t).unwrap();
        let wide = clearance_core::geom::BBox {
            min: bbox.min * 2.0,
            max: bbox.max * 2.0,
        };
        for q in 0..100 {
            // a third of the queries are short, so that empty slabs occur
            let s = if q % 3 == 0 {
                let a = uniform_point(&mut rng, wide);
                let th = rng.random_range(0.0..std::f64::consts::TAU);
                let r = rng.random_range(1e-3..0.5);
                Segment::new(a, Point::new(a.x + r * th.cos(), a.y + r * th.sin())).unwrap()
            } else {
                random_segment(&mut rng, wide)
            };
            total += 1;
            let want = scan_slab(&points, &s);
            empty += usize::from(want.is_none());
            let ok = match (tree.closest_in_slab(&s), want) {
                (None, None) => true,
                (Some(h), Some(d)) => {
                    h.distance == d && dist_point_segment(points[h.index], &s).distance == d
                }
                _ => false,
            };
            failures += usize::from(!ok);
        }
    }
    outcome(failures, total, format!(", {empty} empty slabs"))
}

fn line_reduction() -> Outcome {
    let mut failures = 0;
    for trial in 0..1000 {
        let mut rng = trial_rng(SEED, 4, trial);
        let k = rng.random_range(3..=100);
        let poly = star_polygon(&mut rng, PolygonId(0), Point::new(0.0, 0.0), 1.0, k);
        let line = loop {
            let th = rng.random_range(0.0..std::f64::consts::TAU);
            let dir = Point::new(th.cos(), th.sin());
            let l = Line::new(dir.perp() * rng.random_range(-3.0..3.0), dir).unwrap();
            let side: Vec<bool> = poly
                .vertices()
                .iter()
                .map(|&v| l.signed_offset(v) > 0.0)
                .collect();
            let clear = poly.vertices().iter().all(|&v| l.signed_offset(v) != 0.0);
            if clear && (side.iter().all(|&s| s) || side.iter().all(|&s| !s)) {
                break l;
            }
        };
        let vertex_min = poly
            .vertices()
            .iter()
            .map(|&v| dist_point_line(v, &line))
            .fold(f64::INFINITY, f64::min);
        // edge-to-line distance as the distance to a segment covering the polygon
        let far = line.direction * 10.0;
        let long = Segment::new(line.anchor - far, line.anchor + far).unwrap();
        let edge_min = poly
            .edges()
            .map(|e| dist_segment_segment(&e, &long).distance)
            .fold(f64::INFINITY, f64::min);
        failures += usize::from(!rel_eq(vertex_min, edge_min, TOL));
    }
    outcome(failures, 1000, String::new())
}

fn endpoint_terms() -> Outcome {
    let mut failures = 0;
    let bbox = box_for(100);
    for trial in 0..10_000 {
        let mut rng = trial_rng(SEED, 5, trial);
        let (s1, s2) = loop {
            let (s1, s2) = (
                random_segment(&mut rng, bbox),
                random_segment(&mut rng, bbox),
            );
            if !segments_intersect(s1.a, s1.b, s2.a, s2.b) {
                break (s1, s2);
            }
        };
        let four = [
            dist_point_segment(s1.a, &s2).distance,
            dist_point_segment(s1.b, &s2).distance,
            dist_point_segment(s2.a, &s1).distance,
            dist_point_segment(s2.b, &s1).distance,
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min);
        failures += usize::from(dist_segment_segment(&s1, &s2).distance != four);
    }
    outcome(failures, 10_000, String::new())
}

fn hull_search() -> Outcome {
    let mut failures = 0;
    for trial in 0..1000u64 {
        let mut rng = trial_rng(SEED, 6, trial);
        let size = 3 + (trial as usize * 997 / 999);
        let hull = random_hull(&mut rng, size);
        for _ in 0..10 {
            let th = rng.random_range(0.0..std::f64::consts::TAU);
            let dir = Point::new(th.cos(), th.sin());
            let (got, want) = (hull_extreme_point(&hull, dir), scan_extreme(&hull, dir));
            failures += usize::from(hull[got].dot(dir) != hull[want].dot(dir));
        }
    }
    outcome(failures, 10_000, ", sizes 3..=1000".into())
}

fn emptiness() -> Outcome {
    let (mut failures, mut total, mut hits) = (0, 0, 0);
    for scene_no in 0..200 {
        let mut rng = trial_rng(SEED, 7, scene_no);
        let (scene, bbox) = random_scene(&mut rng);
        let index = build_segment_emptiness(&scene);
        for _ in 0..50 {
            let s = random_short_segment(&mut rng, bbox);
            let hit = index.segment_intersects(&s).is_some();
            let zero = oracle_nearest_polygon_to_segment(&scene, &s)
                .unwrap()
                .distance
                == 0.0;
            total += 1;
            hits += usize::from(zero);
            failures += usize::from(hit != zero);
        }
    }
    outcome(failures, total, format!(", {hits} hits"))
}

fn sublinearity() -> Outcome {
    let ns = [1_000usize, 10_000, 100_000];
    let mut pass = true;
    let mut detail = Vec::new();
    for seed in 1..=3u64 {
        let mut index_pts = Vec::new();
        let mut brute_pts = Vec::new();
        for &n in &ns {
            let scene = bench_scene(seed, n).unwrap();
            let paths = bench_paths(seed, &scene, n, 16, 200).unwrap();
            let idx = bench_index(seed, &scene, TPolicy::Power(1.5), &paths, 16).unwrap();
            let brute = bench_brute(seed, &scene, &paths[..50], 16);
            index_pts.push((n as f64, idx.mean_query_us));
            brute_pts.push((n as f64, brute.mean_query_us));
        }
        let (si, sb) = (loglog_slope(&index_pts), loglog_slope(&brute_pts));
        pass &= si < 0.8 && sb >= 0.9;
        detail.push(format!("seed {seed}: index {si:.3}, brute {sb:.3}"));
    }
    Outcome {
        pass,
        detail: detail.join("; "),
    }
}

fn budget_law() -> Outcome {
    let scene = bench_scene(11, 10_000).unwrap();
    let set = VertexSet::from_scene(&scene);
    let mut pass = true;
    let mut detail = Vec::new();
    for policy in [TPolicy::Linear, TPolicy::Power(1.25), TPolicy::Power(1.5)] {
        let t = policy.resolve(scene.n()).unwrap();
        let tree = PartitionTree::build(&set, t).unwrap();
        let stored = tree.stored_hull_vertices();
        pass &= stored <= HULL_BUDGET_FACTOR * t;
        detail.push(format!("{policy}: {stored} <= {}", HULL_BUDGET_FACTOR * t));
    }
    Outcome {
        pass,
        detail: format!("C = {HULL_BUDGET_FACTOR}; {}", detail.join("; ")),
    }
}

fn concurrent_equality() -> Outcome {
    let mut failures = 0;
    for trial in 0..100 {
        let mut rng = trial_rng(SEED, 10, trial);
        let (scene, bbox) = random_scene(&mut rng);
        let path = random_test_path(&mut rng, &scene, bbox);
        let c = random_clearance(&mut rng, bbox.diagonal());
        let idx = SceneIndex::build(scene, EngineConfig::default()).unwrap();
        let seq = idx.path_clearance(&path, c).unwrap();
        let par = idx
            .with_execution(Execution::Parallel, QueryMode::Full)
            .path_clearance(&path, c)
            .unwrap();
        failures += usize::from(seq != par);
    }
    outcome(failures, 100, String::new())
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence, path level", path_level),
        ("oracle equivalence, segment level", segment_level),
        ("slab structure exactness", slab_exactness),
        (
            "line reduction: vertex minimum equals edge minimum",
            line_reduction,
        ),
        ("segment distance from endpoint terms", endpoint_terms),
        ("hull extreme point", hull_search),
        ("emptiness soundness and completeness", emptiness),
        ("empirical sublinearity", sublinearity),
        ("budget law", budget_law),
        ("concurrent-query equality", concurrent_equality),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let o = run();
        let secs = start.elapsed().as_secs_f64();
        println!(
            "{} {name}: {} ({secs:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
