//! Query-time sweep over scene size and space budget, with the brute-force
//! oracle as baseline.
//!
//! CSV columns, in order (the header row is always written):
//!
//! | column          | meaning                                                |
//! |-----------------|--------------------------------------------------------|
//! | seed            | scene and path seed                                    |
//! | structure       | `index` or `brute`                                     |
//! | n, m, k         | scene vertices, polygons, path segments                |
//! | t_policy, t     | budget policy and resolved `t` (`-` and 0 for brute)   |
//! | build_ms        | index build wall time (0 for brute)                    |
//! | paths           | number of timed path queries                           |
//! | mean_query_us   | mean wall time per path query                          |
//! | p95_query_us    | 95th percentile of the same                            |
//! | violations      | paths whose verdict was `Violated` (deterministic)      |
//! | hull_vertices   | stored hull vertices in the slab structure             |
//! | tree_nodes      | partition-tree nodes                                   |
//! | bvh_nodes       | edge-hierarchy nodes                                   |
//! | memory_bytes    | index memory estimate                                  |
//!
//! Queries run one at a time on the calling thread; trials are never
//! overlapped, so timings are not disturbed by one another.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::emptiness::build_segment_emptiness;
use crate::engine::{EngineConfig, SceneIndex, Verdict};
use crate::error::BudgetError;
use crate::generate::{box_for, free_path, generate_scene, rng_for, GenerateError};
use crate::oracle::oracle_clearance;
use crate::scene::{PolyPath, Scene};
use crate::TPolicy;

/// Average vertices per generated polygon.
pub const VERTICES_PER_POLYGON: usize = 16;
/// Clearance threshold used for every timed query.
pub const BENCH_CLEARANCE: f64 = 0.5;
/// Random-walk step length; comparable to an obstacle's diameter.
pub const BENCH_STEP: f64 = 4.0;

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub seeds: Vec<u64>,
    pub ns: Vec<usize>,
    pub policies: Vec<TPolicy>,
    pub k: usize,
    /// Timed paths per index configuration.
    pub paths: usize,
    /// Timed paths for the brute baseline (it is slow).
    pub brute_paths: usize,
}

impl BenchConfig {
    pub fn full() -> BenchConfig {
        BenchConfig {
            seeds: vec![1, 2, 3],
            ns: vec![1_000, 10_000, 100_000],
            policies: default_policies(),
            k: 16,
            paths: 200,
            brute_paths: 50,
        }
    }

    pub fn smoke() -> BenchConfig {
        BenchConfig {
            seeds: vec![1],
            ns: vec![1_000],
            policies: default_policies(),
            k: 16,
            paths: 20,
            brute_paths: 5,
        }
    }
}

pub fn default_policies() -> Vec<TPolicy> {
    vec![
        TPolicy::Linear,
        TPolicy::Power(1.25),
        TPolicy::Power(1.5),
        TPolicy::N2Cap(64 << 20),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub seed: u64,
    pub structure: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub t_policy: String,
    pub t: usize,
    pub build_ms: f64,
    pub paths: usize,
    pub mean_query_us: f64,
    pub p95_query_us: f64,
    pub violations: usize,
    pub hull_vertices: usize,
    pub tree_nodes: usize,
    pub bvh_nodes: usize,
    pub memory_bytes: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error(transparent)]
    Budget(#[from] BudgetError),
    #[error("could not route a free path through the scene")]
    NoFreePath,
}

/// The benchmark scene for `(seed, n)`: `n / 16` polygons in a box whose
/// area grows with `n`.
pub fn bench_scene(seed: u64, n: usize) -> Result<Scene, GenerateError> {
    generate_scene(seed, (n / VERTICES_PER_POLYGON).max(1), n, box_for(n))
}

/// Free-space `k`-segment paths for `scene`, deterministic in `seed`.
pub fn bench_paths(
    seed: u64,
    scene: &Scene,
    n: usize,
    k: usize,
    count: usize,
) -> Result<Vec<PolyPath>, BenchError> {
    let mut rng = rng_for(seed.wrapping_add(0x5EED));
    let emptiness = build_segment_emptiness(scene);
    let bbox = box_for(n);
    (0..count)
        .map(|_| {
            let step = BENCH_STEP * rng.random_range(0.5..=1.0);
            free_path(&mut rng, &emptiness, bbox, k, step).ok_or(BenchError::NoFreePath)
        })
        .collect()
}

/// Runs the sweep, handing each record to `emit` as soon as it is ready.
pub fn run_bench(
    config: &BenchConfig,
    mut emit: impl FnMut(&BenchRecord),
) -> Result<Vec<BenchRecord>, BenchError> {
    let mut out = Vec::new();
    for &seed in &config.seeds {
        for &n in &config.ns {
            let scene = bench_scene(seed, n)?;
            let paths = bench_paths(
                seed,
                &scene,
                n,
                config.k,
                config.paths.max(config.brute_paths),
            )?;
            for &policy in &config.policies {
                let rec = bench_index(seed, &scene, policy, &paths[..config.paths], config.k)?;
                emit(&rec);
                out.push(rec);
            }
            let rec = bench_brute(seed, &scene, &paths[..config.brute_paths], config.k);
            emit(&rec);
            out.push(rec);
        }
    }
    Ok(out)
}

pub fn bench_index(
    seed: u64,
    scene: &Scene,
    policy: TPolicy,
    paths: &[PolyPath],
    k: usize,
) -> Result<BenchRecord, BenchError> {
    let idx = SceneIndex::build(
        scene.clone(),
        EngineConfig {
            t_policy: policy,
            ..EngineConfig::default()
        },
    )?;
    let (times, violations) = time_each(paths, |p| {
        let r = idx
            .path_clearance(p, BENCH_CLEARANCE)
            .expect("positive clearance");
        r.verdict == Verdict::Violated
    });
    let st = idx.stats();
    Ok(BenchRecord {
        seed,
        structure: "index".into(),
        n: st.n,
        m: st.m,
        k,
        t_policy: policy.to_string(),
        t: st.t,
        build_ms: st.build_ms,
        paths: paths.len(),
        mean_query_us: mean(&times),
        p95_query_us: percentile(&times, 0.95),
        violations,
        hull_vertices: st.hull_vertices,
        tree_nodes: st.tree_nodes,
        bvh_nodes: st.bvh_nodes,
        memory_bytes: st.memory_bytes,
    })
}

pub fn bench_brute(seed: u64, scene: &Scene, paths: &[PolyPath], k: usize) -> BenchRecord {
    let (times, violations) = time_each(paths, |p| {
        !oracle_clearance(scene, p)
            .min_clearance
            .at_least(BENCH_CLEARANCE)
    });
    BenchRecord {
        seed,
        structure: "brute".into(),
        n: scene.n(),
        m: scene.m(),
        k,
        t_policy: "-".into(),
        t: 0,
        build_ms: 0.0,
        paths: paths.len(),
        mean_query_us: mean(&times),
        p95_query_us: percentile(&times, 0.95),
        violations,
        hull_vertices: 0,
        tree_nodes: 0,
        bvh_nodes: 0,
        memory_bytes: 0,
    }
}

/// Microseconds per call (after one untimed warm-up call) and the number of
/// calls returning `true`.
fn time_each(paths: &[PolyPath], f: impl Fn(&PolyPath) -> bool) -> (Vec<f64>, usize) {
    if let Some(p) = paths.first() {
        std::hint::black_box(f(p));
    }
    let mut hits = 0;
    let times = paths
        .iter()
        .map(|p| {
            let start = Instant::now();
            hits += usize::from(f(p));
            start.elapsed().as_secs_f64() * 1e6
        })
        .collect();
    (times, hits)
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn percentile(xs: &[f64], q: f64) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let rank = ((q * v.len() as f64).ceil() as usize).clamp(1, v.len());
    v[rank - 1]
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

pub fn write_csv<W: std::io::Write>(records: &[BenchRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if records.is_empty() {
        w.write_record(CSV_HEADER)?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub const CSV_HEADER: [&str; 16] = [
    "seed",
    "structure",
    "n",
    "m",
    "k",
    "t_policy",
    "t",
    "build_ms",
    "paths",
    "mean_query_us",
    "p95_query_us",
    "violations",
    "hull_vertices",
    "tree_nodes",
    "bvh_nodes",
    "memory_bytes",
];
