//! The composed query engine: point location, segment emptiness, nearest
//! site and slab structures built over one scene, and the path clearance
//! pipeline on top of them.
//!
//! A path query runs four steps in order: locate every path vertex, test
//! every path segment for intersection, find the nearest obstacle to every
//! path vertex, and find the nearest obstacle vertex in the slab of every
//! path segment. The first two stop at the first contact. A segment's
//! clearance is the minimum of its two endpoint terms and its slab term.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::TPolicy;
use crate::edges::SceneEdges;
use crate::emptiness::{Location, PointLocationIndex, SegmentEmptinessIndex};
use crate::error::{BudgetError, QueryError};
use crate::geom::{Line, Point, Segment};
use crate::nearest_site::{NearestSite, NearestSiteIndex};
use crate::report::{Clearance, Witness};
use crate::scene::{PolyPath, PolygonId, Scene};
use crate::slab::{PartitionTree, SlabHit, TreeStats, VertexSet};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum QueryMode {
    /// Evaluate every segment.
    #[default]
    Full,
    /// Stop as soon as the running minimum drops below `c`. The reported
    /// `min_clearance` of a violated path is then only an upper bound.
    VerdictOnly,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Execution {
    #[default]
    Sequential,
    /// Per-vertex and per-segment queries on the rayon pool. Always runs
    /// every query; the report equals the sequential `Full` report.
    Parallel,
}

/// Deliberate defects for exercising the oracle-equivalence harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Drop the slab term from segment clearances.
    SkipSlabTerm,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EngineConfig {
    pub t_policy: TPolicy,
    pub mode: QueryMode,
    pub execution: Execution,
    pub fault: Option<Fault>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BuildStats {
    pub n: usize,
    pub m: usize,
    pub t: usize,
    pub build_ms: f64,
    pub bvh_nodes: usize,
    pub tree_nodes: usize,
    pub tree_leaves: usize,
    pub hull_vertices: usize,
    /// `HULL_BUDGET_FACTOR * t`.
    pub hull_budget: usize,
    pub memory_bytes: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    HasClearance,
    Violated,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentClearance {
    pub segment: usize,
    pub clearance: Clearance,
    pub polygon_id: Option<PolygonId>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClearanceReport {
    pub verdict: Verdict,
    pub min_clearance: Clearance,
    pub clearance_param: f64,
    /// Set when the path touches or enters an obstacle.
    pub intersection: bool,
    pub witness: Option<Witness>,
    /// Empty when the query stopped at an intersection.
    pub per_segment: Vec<SegmentClearance>,
}

/// Closest obstacle to a query segment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum SegmentProximity {
    /// The segment meets the obstacle; distance zero.
    Hit {
        polygon_id: PolygonId,
        witness: Witness,
    },
    Nearest {
        polygon_id: PolygonId,
        distance: f64,
        witness: Witness,
    },
}

impl SegmentProximity {
    pub fn polygon_id(&self) -> PolygonId {
        match *self {
            SegmentProximity::Hit { polygon_id, .. }
            | SegmentProximity::Nearest { polygon_id, .. } => polygon_id,
        }
    }

    pub fn distance(&self) -> f64 {
        match *self {
            SegmentProximity::Hit { .. } => 0.0,
            SegmentProximity::Nearest { distance, .. } => distance,
        }
    }

    pub fn witness(&self) -> Witness {
        match *self {
            SegmentProximity::Hit { witness, .. } | SegmentProximity::Nearest { witness, .. } => {
                witness
            }
        }
    }
}

/// Closest obstacle to a query line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum LineProximity {
    Hit {
        polygon_id: PolygonId,
    },
    Nearest {
        polygon_id: PolygonId,
        distance: f64,
        vertex: Point,
        foot: Point,
    },
}

impl LineProximity {
    pub fn distance(&self) -> f64 {
        match *self {
            LineProximity::Hit { .. } => 0.0,
            LineProximity::Nearest { distance, .. } => distance,
        }
    }
}

/// One evaluated term of a segment's clearance.
#[derive(Clone, Copy, Debug)]
struct Term {
    distance: f64,
    witness: Witness,
}

/// All four query structures over one immutable scene.
#[derive(Clone, Debug)]
pub struct SceneIndex {
    scene: Arc<Scene>,
    point_location: PointLocationIndex,
    emptiness: SegmentEmptinessIndex,
    nearest_site: NearestSiteIndex,
    slab: PartitionTree,
    config: EngineConfig,
    stats: BuildStats,
}

pub fn build_scene_index(scene: Scene, config: EngineConfig) -> Result<SceneIndex, BudgetError> {
    SceneIndex::build(scene, config)
}

impl SceneIndex {
    pub fn build(scene: Scene, config: EngineConfig) -> Result<SceneIndex, BudgetError> {
        let started = Instant::now();
        let t = config.t_policy.resolve(scene.n())?;
        let edges = Arc::new(SceneEdges::build(&scene));
        let slab = PartitionTree::build(&VertexSet::from_scene(&scene), t)?;
        let tree: TreeStats = slab.stats();
        let bvh_nodes = edges.bvh().node_count();
        let build_ms = started.elapsed().as_secs_f64() * 1e3;
        let memory_bytes = slab.memory_bytes()
            + edges.len() * std::mem::size_of::<crate::scene::EdgeRef>()
            + bvh_nodes * 48;
        let stats = BuildStats {
            n: scene.n(),
            m: scene.m(),
            t,
            build_ms,
            bvh_nodes,
            tree_nodes: tree.nodes,
            tree_leaves: tree.leaves,
            hull_vertices: tree.hull_vertices,
            hull_budget: crate::slab::HULL_BUDGET_FACTOR * t,
            memory_bytes,
        };
        tracing::debug!(?stats, "scene index built");
        Ok(SceneIndex {
            scene: Arc::new(scene),
            point_location: PointLocationIndex::from_edges(edges.clone()),
            emptiness: SegmentEmptinessIndex::from_edges(edges.clone()),
            nearest_site: NearestSiteIndex::from_edges(edges),
            slab,
            config,
            stats,
        })
    }

    pub fn scene(&self) -> &Scene {
        &self.scene
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn stats(&self) -> &BuildStats {
        &self.stats
    }

    pub fn point_location(&self) -> &PointLocationIndex {
        &self.point_location
    }

    pub fn emptiness(&self) -> &SegmentEmptinessIndex {
        &self.emptiness
    }

    pub fn nearest_site(&self) -> &NearestSiteIndex {
        &self.nearest_site
    }

    pub fn slab_index(&self) -> &PartitionTree {
        &self.slab
    }

    /// Same structures, different query-time settings.
    pub fn with_execution(&self, execution: Execution, mode: QueryMode) -> SceneIndex {
        let mut idx = self.clone();
        idx.config.execution = execution;
        idx.config.mode = mode;
        idx
    }

    pub fn nearest_polygon_to_line(&self, l: &Line) -> Result<LineProximity, QueryError> {
        if self.scene.is_empty() {
            return Err(QueryError::EmptyScene);
        }
        if let Some(polygon_id) = self.emptiness.line_intersects(l) {
            return Ok(LineProximity::Hit { polygon_id });
        }
        let hit = self.slab.closest_to_line(l).ok_or(QueryError::EmptyScene)?;
        Ok(LineProximity::Nearest {
            polygon_id: hit.tag.polygon_id,
            distance: hit.distance,
            vertex: hit.point,
            foot: hit.foot,
        })
    }

    pub fn nearest_polygon_to_segment(&self, s: &Segment) -> Result<SegmentProximity, QueryError> {
        if self.scene.is_empty() {
            return Err(QueryError::EmptyScene);
        }
        for p in [s.a, s.b] {
            if let Some(polygon_id) = self.point_location.locate(p).polygon() {
                return Ok(SegmentProximity::Hit {
                    polygon_id,
                    witness: Witness {
                        path_point: p,
                        obstacle_point: p,
                        polygon_id,
                    },
                });
            }
        }
        if let Some(w) = self.contact(s) {
            return Ok(SegmentProximity::Hit {
                polygon_id: w.polygon_id,
                witness: w,
            });
        }
        let a = self.site(s.a)?;
        let b = self.site(s.b)?;
        let term = self.segment_term(s, &a, &b);
        Ok(SegmentProximity::Nearest {
            polygon_id: term.witness.polygon_id,
            distance: term.distance,
            witness: term.witness,
        })
    }

    /// Full evaluation without a threshold.
    pub fn min_clearance(&self, path: &PolyPath) -> Clearance {
        self.run(
            path,
            f64::MIN_POSITIVE,
            QueryMode::Full,
            self.config.execution,
        )
        .min_clearance
    }

    /// Decides whether `path` keeps distance at least `c` from every obstacle.
    pub fn path_clearance(&self, path: &PolyPath, c: f64) -> Result<ClearanceReport, QueryError> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(QueryError::InvalidClearance(c));
        }
        Ok(self.run(path, c, self.config.mode, self.config.execution))
    }

    fn run(
        &self,
        path: &PolyPath,
        c: f64,
        mode: QueryMode,
        execution: Execution,
    ) -> ClearanceReport {
        let vertices = path.vertices();
        let k = path.segment_count();
        let parallel = execution == Execution::Parallel;

        if self.scene.is_empty() {
            return ClearanceReport {
                verdict: Verdict::HasClearance,
                min_clearance: Clearance::Unbounded,
                clearance_param: c,
                intersection: false,
                witness: None,
                per_segment: (0..k)
                    .map(|segment| SegmentClearance {
                        segment,
                        clearance: Clearance::Unbounded,
                        polygon_id: None,
                    })
                    .collect(),
            };
        }

        // step 1: path vertices inside or on an obstacle
        let located: Option<(usize, PolygonId)> = if parallel {
            vertices
                .par_iter()
                .enumerate()
                .filter_map(|(i, &p)| self.point_location.locate(p).polygon().map(|id| (i, id)))
                .min_by_key(|&(i, _)| i)
        } else {
            vertices
                .iter()
                .enumerate()
                .find_map(|(i, &p)| self.point_location.locate(p).polygon().map(|id| (i, id)))
        };
        if let Some((i, polygon_id)) = located {
            return contact_report(
                c,
                Witness {
                    path_point: vertices[i],
                    obstacle_point: vertices[i],
                    polygon_id,
                },
            );
        }

        // step 2: path segments meeting an obstacle boundary
        let contact: Option<(usize, Witness)> = if parallel {
            (0..k)
                .into_par_iter()
                .filter_map(|i| self.contact(&path.segment(i)).map(|w| (i, w)))
                .min_by_key(|&(i, _)| i)
        } else {
            (0..k).find_map(|i| self.contact(&path.segment(i)).map(|w| (i, w)))
        };
        if let Some((_, w)) = contact {
            return contact_report(c, w);
        }

        // steps 3 and 4
        let (per_segment, terms): (Vec<SegmentClearance>, Vec<Term>) = if parallel {
            let sites: Vec<NearestSite> = vertices
                .par_iter()
                .map(|&p| self.site(p).expect("scene is not empty"))
                .collect();
            (0..k)
                .into_par_iter()
                .map(|i| self.segment_entry(path, i, &sites))
                .unzip()
        } else {
            let mut sites: Vec<NearestSite> = Vec::with_capacity(vertices.len());
            let mut stopped = false;
            for &p in vertices {
                let site = self.site(p).expect("scene is not empty");
                sites.push(site);
                if mode == QueryMode::VerdictOnly && site.distance < c {
                    stopped = true;
                    break;
                }
            }
            if stopped {
                let site = *sites.last().unwrap();
                let i = sites.len() - 1;
                let term = Term {
                    distance: site.distance,
                    witness: Witness {
                        path_point: vertices[i],
                        obstacle_point: site.witness,
                        polygon_id: site.polygon_id,
                    },
                };
                (Vec::new(), vec![term])
            } else {
                let mut entries = Vec::with_capacity(k);
                let mut terms = Vec::with_capacity(k);
                for i in 0..k {
                    let (entry, term) = self.segment_entry(path, i, &sites);
                    entries.push(entry);
                    terms.push(term);
                    if mode == QueryMode::VerdictOnly && term.distance < c {
                        break;
                    }
                }
                (entries, terms)
            }
        };

        // first segment attaining the minimum supplies the witness
        let best = terms
            .iter()
            .enumerate()
            .fold(None::<(usize, f64)>, |acc, (i, t)| match acc {
                Some((_, d)) if d <= t.distance => acc,
                _ => Some((i, t.distance)),
            })
            .map(|(i, _)| terms[i])
            .expect("at least one segment");
        let min_clearance = Clearance::Finite(best.distance);
        ClearanceReport {
            verdict: if min_clearance.at_least(c) {
                Verdict::HasClearance
            } else {
                Verdict::Violated
            },
            min_clearance,
            clearance_param: c,
            intersection: best.distance == 0.0,
            witness: Some(best.witness),
            per_segment,
        }
    }

    fn segment_entry(
        &self,
        path: &PolyPath,
        i: usize,
        sites: &[NearestSite],
    ) -> (SegmentClearance, Term) {
        let term = self.segment_term(&path.segment(i), &sites[i], &sites[i + 1]);
        (
            SegmentClearance {
                segment: i,
                clearance: Clearance::Finite(term.distance),
                polygon_id: Some(term.witness.polygon_id),
            },
            term,
        )
    }

    /// Minimum of the endpoint terms and the slab term of a segment known to
    /// be clear of every obstacle. Ties keep the earlier term.
    fn segment_term(&self, s: &Segment, a: &NearestSite, b: &NearestSite) -> Term {
        let mut best = Term {
            distance: a.distance,
            witness: Witness {
                path_point: s.a,
                obstacle_point: a.witness,
                polygon_id: a.polygon_id,
            },
        };
        if b.distance < best.distance {
            best = Term {
                distance: b.distance,
                witness: Witness {
                    path_point: s.b,
                    obstacle_point: b.witness,
                    polygon_id: b.polygon_id,
                },
            };
        }
        if self.config.fault != Some(Fault::SkipSlabTerm) {
            if let Some(hit) = self.slab.closest_in_slab(s) {
                if hit.distance < best.distance {
                    best = slab_term(&hit);
                }
            }
        }
        best
    }

    fn site(&self, p: Point) -> Result<NearestSite, QueryError> {
        self.nearest_site.nearest_polygon_to_point(p)
    }

    /// Witness of a boundary contact of `s`, if any.
    fn contact(&self, s: &Segment) -> Option<Witness> {
        let (hit, at) = self.emptiness.first_contact(s)?;
        Some(Witness {
            path_point: at.on_first,
            obstacle_point: at.on_second,
            polygon_id: hit.polygon_id,
        })
    }

    /// Segment-level terms exposed for decomposition checks: the two
    /// endpoint distances and the slab distance (if the slab holds a vertex).
    pub fn segment_terms(&self, s: &Segment) -> Result<(f64, f64, Option<f64>), QueryError> {
        let a = self.site(s.a)?;
        let b = self.site(s.b)?;
        Ok((
            a.distance,
            b.distance,
            self.slab.closest_in_slab(s).map(|h| h.distance),
        ))
    }

    /// Step-1 classification of every path vertex.
    pub fn locate_vertices(&self, path: &PolyPath) -> Vec<Location> {
        path.vertices()
            .iter()
            .map(|&p| self.point_location.locate(p))
            .collect()
    }
}

fn slab_term(hit: &SlabHit) -> Term {
    Term {
        distance: hit.distance,
        witness: Witness {
            path_point: hit.foot,
            obstacle_point: hit.point,
            polygon_id: hit.tag.polygon_id,
        },
    }
}

fn contact_report(c: f64, witness: Witness) -> ClearanceReport {
    ClearanceReport {
        verdict: Verdict::Violated,
        min_clearance: Clearance::ZERO,
        clearance_param: c,
        intersection: true,
        witness: Some(witness),
        per_segment: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{validate_scene, SimplePolygon};

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn square(id: u32, x: f64, y: f64, side: f64) -> SimplePolygon {
        SimplePolygon::new(
            PolygonId(id),
            vec![
                p(x, y),
                p(x + side, y),
                p(x + side, y + side),
                p(x, y + side),
            ],
        )
        .unwrap()
    }

    fn square_index() -> SceneIndex {
        let scene = validate_scene(vec![square(0, 2.0, 2.0, 1.0)]).unwrap();
        SceneIndex::build(scene, EngineConfig::default()).unwrap()
    }

    #[test]
    fn demo_path_verdicts() {
        let idx = square_index();
        let path = PolyPath::new(vec![p(0., 0.), p(5., 0.), p(5., 5.)]).unwrap();
        let r = idx.path_clearance(&path, 1.0).unwrap();
        assert_eq!(r.verdict, Verdict::HasClearance);
        assert_eq!(r.min_clearance, Clearance::Finite(2.0));
        assert!(!r.intersection);
        assert_eq!(r.per_segment.len(), 2);
        assert_eq!(r.per_segment[0].clearance, Clearance::Finite(2.0));
        assert_eq!(r.per_segment[1].clearance, Clearance::Finite(2.0));
        let w = r.witness.unwrap();
        assert_eq!(w.obstacle_point, p(2., 2.));
        assert_eq!(w.path_point, p(2., 0.));

        let r = idx.path_clearance(&path, 2.5).unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        assert_eq!(r.min_clearance, Clearance::Finite(2.0));
        // threshold is inclusive
        assert_eq!(
            idx.path_clearance(&path, 2.0).unwrap().verdict,
            Verdict::HasClearance
        );
    }

    #[test]
    fn crossing_path_is_flagged() {
        let idx = square_index();
        let path = PolyPath::new(vec![p(0., 2.5), p(5., 2.5)]).unwrap();
        let r = idx.path_clearance(&path, 0.1).unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        assert_eq!(r.min_clearance, Clearance::ZERO);
        assert!(r.intersection);
        assert_eq!(r.witness.unwrap().path_point, p(2., 2.5));
        assert!(r.per_segment.is_empty());
    }

    #[test]
    fn vertex_inside_is_flagged() {
        let idx = square_index();
        let path = PolyPath::new(vec![p(0., 0.), p(2.5, 2.5)]).unwrap();
        let r = idx.path_clearance(&path, 0.1).unwrap();
        assert!(r.intersection);
        assert_eq!(r.witness.unwrap().path_point, p(2.5, 2.5));
    }

    #[test]
    fn invalid_clearance() {
        let idx = square_index();
        let path = PolyPath::new(vec![p(0., 0.), p(1., 0.)]).unwrap();
        for c in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(
                idx.path_clearance(&path, c),
                Err(QueryError::InvalidClearance(_))
            ));
        }
    }

    #[test]
    fn segment_examples() {
        let idx = square_index();
        let s = Segment::new(p(0., 0.), p(5., 0.)).unwrap();
        let r = idx.nearest_polygon_to_segment(&s).unwrap();
        assert_eq!(r.distance(), 2.0);
        assert_eq!(r.witness().obstacle_point, p(2., 2.));

        let s = Segment::new(p(0., 4.), p(1., 4.)).unwrap();
        let r = idx.nearest_polygon_to_segment(&s).unwrap();
        assert!((r.distance() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(r.witness().obstacle_point, p(2., 3.));

        let s = Segment::new(p(0., 2.5), p(5., 2.5)).unwrap();
        assert!(matches!(
            idx.nearest_polygon_to_segment(&s).unwrap(),
            SegmentProximity::Hit {
                polygon_id: PolygonId(0),
                ..
            }
        ));
    }

    #[test]
    fn line_examples() {
        let scene =
            validate_scene(vec![square(0, 0.0, 0.0, 1.0), square(1, 0.0, 3.0, 1.0)]).unwrap();
        let idx = SceneIndex::build(scene, EngineConfig::default()).unwrap();
        // y = 2 separates the squares; nearer at distance 1
        let l = Line::new(p(0., 2.), p(1., 0.)).unwrap();
        assert_eq!(idx.nearest_polygon_to_line(&l).unwrap().distance(), 1.0);
        let through = Line::new(p(0., 0.5), p(1., 0.)).unwrap();
        assert!(matches!(
            idx.nearest_polygon_to_line(&through).unwrap(),
            LineProximity::Hit {
                polygon_id: PolygonId(0)
            }
        ));
        let tangent = Line::new(p(1., 1.), p(1., -1.)).unwrap();
        assert_eq!(
            idx.nearest_polygon_to_line(&tangent).unwrap().distance(),
            0.0
        );
    }

    #[test]
    fn empty_scene_is_unbounded() {
        let idx = SceneIndex::build(Scene::empty(), EngineConfig::default()).unwrap();
        let path = PolyPath::new(vec![p(0., 0.), p(1., 0.)]).unwrap();
        let r = idx.path_clearance(&path, 5.0).unwrap();
        assert_eq!(r.verdict, Verdict::HasClearance);
        assert_eq!(r.min_clearance, Clearance::Unbounded);
        assert!(r.witness.is_none());
        let s = Segment::new(p(0., 0.), p(1., 0.)).unwrap();
        assert_eq!(
            idx.nearest_polygon_to_segment(&s),
            Err(QueryError::EmptyScene)
        );
        let l = Line::new(p(0., 0.), p(1., 0.)).unwrap();
        assert_eq!(idx.nearest_polygon_to_line(&l), Err(QueryError::EmptyScene));
    }

    #[test]
    fn verdict_only_stops_early() {
        let idx = square_index().with_execution(Execution::Sequential, QueryMode::VerdictOnly);
        let path = PolyPath::new(vec![p(0., 0.), p(5., 0.), p(5., 5.)]).unwrap();
        let r = idx.path_clearance(&path, 2.5).unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        assert!(r.min_clearance.as_f64() < 2.5);
        assert!(r.per_segment.len() < 2);
    }

    #[test]
    fn self_intersecting_path_equals_simple_part() {
        let idx = square_index();
        let simple = PolyPath::new(vec![p(0., 0.), p(5., 0.)]).unwrap();
        let back_and_forth =
            PolyPath::new(vec![p(0., 0.), p(5., 0.), p(0., 0.), p(5., 0.)]).unwrap();
        assert_eq!(
            idx.min_clearance(&simple),
            idx.min_clearance(&back_and_forth)
        );
    }

    #[test]
    fn fault_injection_changes_answer() {
        let scene = validate_scene(vec![square(0, 2.0, 2.0, 1.0)]).unwrap();
        let idx = SceneIndex::build(
            scene,
            EngineConfig {
                fault: Some(Fault::SkipSlabTerm),
                ..EngineConfig::default()
            },
        )
        .unwrap();
        let path = PolyPath::new(vec![p(0., 0.), p(5., 0.)]).unwrap();
        assert!(idx.min_clearance(&path).as_f64() > 2.0);
    }
}
