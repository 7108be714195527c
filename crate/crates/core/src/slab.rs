//! Closest obstacle vertex inside `slab(s)` to a query segment `s`, and
//! closest vertex to a query line.
//!
//! The vertex set is organized as a partition tree: median splits
//! alternating between x and y, each node storing the convex hull of its
//! canonical subset. One traversal applies the three halfplane filters (the
//! two slab boundaries and the supporting line of `s`) at once:
//!
//! * a node whose hull lies outside the slab is pruned;
//! * a node entirely inside the slab and strictly on one side of the
//!   supporting line is answered by one extreme-vertex search on its hull,
//!   because inside the slab the distance to `s` is the distance to its line;
//! * anything else recurses, down to leaves that are scanned.
//!
//! Hull-based decisions carry a small relative margin so that borderline
//! points always reach the per-point test used by the linear scan.
//!
//! Hull storage is charged against the budget `HULL_BUDGET_FACTOR * t`;
//! nodes are refined breadth first until a split no longer fits.

use std::collections::VecDeque;

use crate::budget::check_budget;
use crate::error::BudgetError;
use crate::geom::{dist_point_line, dist_point_segment, slab_of, BBox, Line, Point, Segment};
use crate::hull::{convex_hull, hull_extreme_point};
use crate::scene::{PolygonId, Scene};

/// `C` in the budget law: stored hull vertices never exceed `C * t`.
pub const HULL_BUDGET_FACTOR: usize = 1;

/// Nodes with at most this many points are never split.
pub const LEAF_SIZE: usize = 4;

const MARGIN: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VertexTag {
    pub polygon_id: PolygonId,
    /// Index of the polygon in the scene.
    pub polygon: u32,
    /// Vertex index within the polygon.
    pub vertex: u32,
}

/// The obstacle vertices `P`, in scene order.
#[derive(Clone, Debug, Default)]
pub struct VertexSet {
    points: Vec<Point>,
    tags: Vec<VertexTag>,
}

impl VertexSet {
    pub fn from_scene(scene: &Scene) -> VertexSet {
        let mut set = VertexSet::default();
        for (pi, poly) in scene.polygons().iter().enumerate() {
            for (vi, &p) in poly.vertices().iter().enumerate() {
                set.points.push(p);
                set.tags.push(VertexTag {
                    polygon_id: poly.id(),
                    polygon: pi as u32,
                    vertex: vi as u32,
                });
            }
        }
        set
    }

    /// Untagged points (polygon 0, vertex = position).
    pub fn from_points(points: Vec<Point>) -> VertexSet {
        let tags = (0..points.len())
            .map(|i| VertexTag {
                polygon_id: PolygonId(0),
                polygon: 0,
                vertex: i as u32,
            })
            .collect();
        VertexSet { points, tags }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn tags(&self) -> &[VertexTag] {
        &self.tags
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Closest vertex found by a slab or line query.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlabHit {
    pub point: Point,
    pub tag: VertexTag,
    /// Position of the vertex in the [`VertexSet`].
    pub index: usize,
    pub distance: f64,
    /// Closest point on the query segment (or line).
    pub foot: Point,
}

/// `None` when no vertex lies in the slab.
pub type SlabQueryResult = Option<SlabHit>;

#[derive(Clone, Debug)]
struct Node {
    start: u32,
    end: u32,
    hull_start: u32,
    hull_end: u32,
    bbox: BBox,
    children: Option<[u32; 2]>,
}

#[derive(Clone, Debug)]
pub struct PartitionTree {
    points: Vec<Point>,
    /// Position in the original vertex set of each entry of `points`.
    order: Vec<u32>,
    tags: Vec<VertexTag>,
    nodes: Vec<Node>,
    hull_points: Vec<Point>,
    /// Original vertex-set index of each entry of `hull_points`.
    hull_index: Vec<u32>,
    t: usize,
}

/// Read-only view of one tree node, for inspection and tests.
pub struct NodeView<'a> {
    pub points: &'a [Point],
    pub hull: &'a [Point],
    pub is_leaf: bool,
    pub depth: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeStats {
    pub n: usize,
    pub t: usize,
    pub nodes: usize,
    pub leaves: usize,
    pub max_leaf: usize,
    pub hull_vertices: usize,
}

pub fn build_partition_tree(set: &VertexSet, t: usize) -> Result<PartitionTree, BudgetError> {
    PartitionTree::build(set, t)
}

impl PartitionTree {
    pub fn build(set: &VertexSet, t: usize) -> Result<PartitionTree, BudgetError> {
        let n = set.len();
        check_budget(t as u128, n)?;
        let budget = HULL_BUDGET_FACTOR.saturating_mul(t);
        let mut items: Vec<(Point, u32)> = set
            .points
            .iter()
            .enumerate()
            .map(|(i, &p)| (p, i as u32))
            .collect();
        let mut nodes: Vec<Node> = Vec::new();
        let mut hull_points: Vec<Point> = Vec::new();
        let mut hull_index: Vec<u32> = Vec::new();

        if n > 0 {
            let root_hull = hull_of(&items);
            nodes.push(Node {
                start: 0,
                end: n as u32,
                hull_start: 0,
                hull_end: root_hull.len() as u32,
                bbox: bbox_of(&items),
                children: None,
            });
            push_hull(&mut hull_points, &mut hull_index, root_hull);
        }

        let mut queue: VecDeque<(u32, usize)> = VecDeque::new();
        if n > LEAF_SIZE {
            queue.push_back((0, 0));
        }
        while let Some((ni, depth)) = queue.pop_front() {
            let (start, end) = (
                nodes[ni as usize].start as usize,
                nodes[ni as usize].end as usize,
            );
            let slice = &mut items[start..end];
            let mid = slice.len() / 2;
            if depth % 2 == 0 {
                slice.select_nth_unstable_by(mid, |a, b| {
                    a.0.x.total_cmp(&b.0.x).then(a.0.y.total_cmp(&b.0.y))
                });
            } else {
                slice.select_nth_unstable_by(mid, |a, b| {
                    a.0.y.total_cmp(&b.0.y).then(a.0.x.total_cmp(&b.0.x))
                });
            }
            let (lo, hi) = slice.split_at(mid);
            let lo_hull = hull_of(lo);
            let hi_hull = hull_of(hi);
            if hull_points.len() + lo_hull.len() + hi_hull.len() > budget {
                continue;
            }
            let mut kids = [0u32; 2];
            for (k, (part, hull, offset)) in [(lo, lo_hull, start), (hi, hi_hull, start + mid)]
                .into_iter()
                .enumerate()
            {
                let idx = nodes.len() as u32;
                nodes.push(Node {
                    start: offset as u32,
                    end: (offset + part.len()) as u32,
                    hull_start: hull_points.len() as u32,
                    hull_end: (hull_points.len() + hull.len()) as u32,
                    bbox: bbox_of(part),
                    children: None,
                });
                push_hull(&mut hull_points, &mut hull_index, hull);
                if part.len() > LEAF_SIZE {
                    queue.push_back((idx, depth + 1));
                }
                kids[k] = idx;
            }
            nodes[ni as usize].children = Some(kids);
        }

        let (points, order) = items.into_iter().unzip();
        Ok(PartitionTree {
            points,
            order,
            tags: set.tags.clone(),
            nodes,
            hull_points,
            hull_index,
            t,
        })
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Total number of hull vertices stored over all nodes.
    pub fn stored_hull_vertices(&self) -> usize {
        self.hull_points.len()
    }

    pub fn stats(&self) -> TreeStats {
        let leaves = self.nodes.iter().filter(|n| n.children.is_none());
        TreeStats {
            n: self.n(),
            t: self.t,
            nodes: self.nodes.len(),
            leaves: leaves.clone().count(),
            max_leaf: leaves
                .map(|n| (n.end - n.start) as usize)
                .max()
                .unwrap_or(0),
            hull_vertices: self.hull_points.len(),
        }
    }

    /// Approximate heap footprint in bytes.
    pub fn memory_bytes(&self) -> usize {
        use std::mem::size_of;
        self.points.len() * (size_of::<Point>() + size_of::<u32>() + size_of::<VertexTag>())
            + self.nodes.len() * size_of::<Node>()
            + self.hull_points.len() * (size_of::<Point>() + size_of::<u32>())
    }

    pub fn nodes(&self) -> Vec<NodeView<'_>> {
        let mut depth = vec![0usize; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            if let Some(kids) = node.children {
                for k in kids {
                    depth[k as usize] = depth[i] + 1;
                }
            }
        }
        self.nodes
            .iter()
            .zip(depth)
            .map(|(node, depth)| NodeView {
                points: &self.points[node.start as usize..node.end as usize],
                hull: &self.hull_points[node.hull_start as usize..node.hull_end as usize],
                is_leaf: node.children.is_none(),
                depth,
            })
            .collect()
    }

    fn hull(&self, node: &Node) -> &[Point] {
        &self.hull_points[node.hull_start as usize..node.hull_end as usize]
    }

    fn finish(&self, best: Best) -> SlabQueryResult {
        (best.index != u32::MAX).then(|| SlabHit {
            point: best.point,
            tag: self.tags[best.index as usize],
            index: best.index as usize,
            distance: best.distance,
            foot: best.foot,
        })
    }

    fn hull_original(&self, node: &Node, i: usize) -> u32 {
        self.hull_index[node.hull_start as usize + i]
    }

    /// Exact closest vertex to `s` among those in the closed slab of `s`.
    pub fn closest_in_slab(&self, s: &Segment) -> SlabQueryResult {
        if self.nodes.is_empty() {
            return None;
        }
        let slab = slab_of(s);
        let a = s.a;
        let d = s.direction();
        let len2 = d.norm2();
        let len = len2.sqrt();
        let normal = d.perp();
        let mut best = Best::default();

        let mut stack = vec![0u32];
        while let Some(ni) = stack.pop() {
            let node = &self.nodes[ni as usize];
            let hull = self.hull(node);
            let tol = MARGIN * len * (scale_of(&node.bbox, a) + len);

            let u_hi = (hull[hull_extreme_point(hull, d)] - a).dot(d);
            let u_lo = (hull[hull_extreme_point(hull, d * -1.0)] - a).dot(d);
            if u_hi < -tol || u_lo > len2 + tol {
                continue;
            }
            let inside = u_lo >= tol && u_hi <= len2 - tol;

            let v_hi_i = hull_extreme_point(hull, normal);
            let v_lo_i = hull_extreme_point(hull, normal * -1.0);
            let v_hi = d.cross(hull[v_hi_i] - a);
            let v_lo = d.cross(hull[v_lo_i] - a);
            let (bound, toward) = if v_lo > tol {
                (v_lo / len, Some(v_lo_i))
            } else if v_hi < -tol {
                (-v_hi / len, Some(v_hi_i))
            } else {
                (0.0, None)
            };
            if bound * (1.0 - MARGIN) > best.distance {
                continue;
            }

            if let (true, Some(i)) = (inside, toward) {
                let p = hull[i];
                let c = dist_point_segment(p, s);
                best.offer(self.hull_original(node, i), p, c.distance, c.point);
                continue;
            }

            match node.children {
                None => {
                    for pos in node.start as usize..node.end as usize {
                        let p = self.points[pos];
                        if slab.contains(p) {
                            let c = dist_point_segment(p, s);
                            best.offer(self.order[pos], p, c.distance, c.point);
                        }
                    }
                }
                Some([l, r]) => {
                    let bl = line_gap(&self.nodes[l as usize].bbox, a, d, len);
                    let br = line_gap(&self.nodes[r as usize].bbox, a, d, len);
                    if bl <= br {
                        stack.push(r);
                        stack.push(l);
                    } else {
                        stack.push(l);
                        stack.push(r);
                    }
                }
            }
        }
        self.finish(best)
    }

    /// Exact closest vertex to the line `l` (perpendicular distance).
    pub fn closest_to_line(&self, l: &Line) -> SlabQueryResult {
        if self.nodes.is_empty() {
            return None;
        }
        let a = l.anchor;
        let d = l.direction;
        let normal = d.perp();
        let mut best = Best::default();

        let mut stack = vec![0u32];
        while let Some(ni) = stack.pop() {
            let node = &self.nodes[ni as usize];
            let hull = self.hull(node);
            let tol = MARGIN * (scale_of(&node.bbox, a) + 1.0);

            let v_hi_i = hull_extreme_point(hull, normal);
            let v_lo_i = hull_extreme_point(hull, normal * -1.0);
            let v_hi = d.cross(hull[v_hi_i] - a);
            let v_lo = d.cross(hull[v_lo_i] - a);
            let (bound, toward) = if v_lo > tol {
                (v_lo, Some(v_lo_i))
            } else if v_hi < -tol {
                (-v_hi, Some(v_hi_i))
            } else {
                (0.0, None)
            };
            if bound * (1.0 - MARGIN) > best.distance {
                continue;
            }
            if let Some(i) = toward {
                let p = hull[i];
                best.offer(
                    self.hull_original(node, i),
                    p,
                    dist_point_line(p, l),
                    l.foot(p),
                );
                continue;
            }
            match node.children {
                None => {
                    for pos in node.start as usize..node.end as usize {
                        let p = self.points[pos];
                        best.offer(self.order[pos], p, dist_point_line(p, l), l.foot(p));
                    }
                }
                Some([left, right]) => {
                    let bl = line_gap(&self.nodes[left as usize].bbox, a, d, 1.0);
                    let br = line_gap(&self.nodes[right as usize].bbox, a, d, 1.0);
                    if bl <= br {
                        stack.push(right);
                        stack.push(left);
                    } else {
                        stack.push(left);
                        stack.push(right);
                    }
                }
            }
        }
        self.finish(best)
    }
}

#[derive(Clone, Copy, Debug)]
struct Best {
    distance: f64,
    index: u32,
    point: Point,
    foot: Point,
}

impl Default for Best {
    fn default() -> Self {
        Best {
            distance: f64::INFINITY,
            index: u32::MAX,
            point: Point::default(),
            foot: Point::default(),
        }
    }
}

impl Best {
    /// Ties go to the vertex earlier in the vertex set.
    fn offer(&mut self, index: u32, point: Point, distance: f64, foot: Point) {
        if distance < self.distance || (distance == self.distance && index < self.index) {
            *self = Best {
                distance,
                index,
                point,
                foot,
            };
        }
    }
}

fn hull_of(items: &[(Point, u32)]) -> Vec<(Point, u32)> {
    let pts: Vec<Point> = items.iter().map(|it| it.0).collect();
    convex_hull(&pts).into_iter().map(|i| items[i]).collect()
}

fn push_hull(points: &mut Vec<Point>, index: &mut Vec<u32>, hull: Vec<(Point, u32)>) {
    for (p, i) in hull {
        points.push(p);
        index.push(i);
    }
}

fn bbox_of(items: &[(Point, u32)]) -> BBox {
    items.iter().fold(BBox::EMPTY, |b, it| b.include(it.0))
}

/// Magnitude of the coordinates involved, for rounding margins.
fn scale_of(b: &BBox, a: Point) -> f64 {
    let m = |p: Point| p.x.abs().max(p.y.abs());
    m(b.min).max(m(b.max)).max(m(a)) + b.diagonal()
}

/// Perpendicular gap between a box and the line through `a` along `d`
/// (0 when the line crosses the box). `len = |d|`.
fn line_gap(b: &BBox, a: Point, d: Point, len: f64) -> f64 {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for c in b.corners() {
        let v = d.cross(c - a);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo > 0.0 {
        lo / len
    } else if hi < 0.0 {
        -hi / len
    } else {
        0.0
    }
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
    fn three_points_single_root() {
        let set = VertexSet::from_points(vec![p(0., 2.), p(3., 5.), p(-1., 1.)]);
        let tree = PartitionTree::build(&set, 3).unwrap();
        assert_eq!(tree.stats().nodes, 1);
        // the three points are collinear: the hull keeps the two ends
        assert_eq!(tree.stored_hull_vertices(), 2);
        let hit = tree.closest_in_slab(&seg(0., 0., 2., 0.)).unwrap();
        assert_eq!(hit.point, p(0., 2.));
        assert_eq!(hit.distance, 2.0);
        assert_eq!(hit.index, 0);
        assert_eq!(hit.foot, p(0., 0.));
    }

    #[test]
    fn empty_slab() {
        let pts = (0..50)
            .map(|i| p(6.0 + i as f64 * 0.1, (i % 7) as f64))
            .collect();
        let tree = PartitionTree::build(&VertexSet::from_points(pts), 2500).unwrap();
        assert_eq!(tree.closest_in_slab(&seg(0., 0., 2., 0.)), None);
    }

    #[test]
    fn budget_range_enforced() {
        let set = VertexSet::from_points(vec![p(0., 0.), p(1., 0.), p(0., 1.)]);
        assert!(PartitionTree::build(&set, 2).is_err());
        assert!(PartitionTree::build(&set, 10).is_err());
        assert!(PartitionTree::build(&set, 9).is_ok());
    }

    #[test]
    fn quadratic_budget_gives_constant_leaves() {
        let pts: Vec<Point> = (0..500)
            .map(|i| {
                let a = i as f64 * 0.618;
                p(a.sin() * i as f64, a.cos() * (500 - i) as f64)
            })
            .collect();
        let tree = PartitionTree::build(&VertexSet::from_points(pts), 500 * 500).unwrap();
        assert!(tree.stats().max_leaf <= LEAF_SIZE);
    }

    #[test]
    fn line_query() {
        // two squares below y = 10, topmost vertex (1,3)
        let pts = vec![
            p(0., 0.),
            p(1., 0.),
            p(1., 3.),
            p(0., 1.),
            p(4., 0.),
            p(5., 0.),
            p(5., 1.),
            p(4., 1.),
        ];
        let tree = PartitionTree::build(&VertexSet::from_points(pts), 8).unwrap();
        let line = Line::new(p(0., 10.), p(1., 0.)).unwrap();
        let hit = tree.closest_to_line(&line).unwrap();
        assert_eq!(hit.point, p(1., 3.));
        assert_eq!(hit.distance, 7.0);
        let through = Line::new(p(5., 1.), p(1., 1.)).unwrap();
        assert_eq!(tree.closest_to_line(&through).unwrap().distance, 0.0);
    }

    #[test]
    fn empty_tree() {
        let tree = PartitionTree::build(&VertexSet::default(), 0).unwrap();
        assert_eq!(tree.closest_in_slab(&seg(0., 0., 1., 0.)), None);
    }
}
