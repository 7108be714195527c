//! All obstacle edges of a scene in one bounding-volume hierarchy. Shared by
//! the point-location, emptiness and nearest-site layers.

use crate::bvh::{Bvh, DEFAULT_LEAF_SIZE};
use crate::geom::{dist_point_segment, BBox, Point, Segment};
use crate::scene::{EdgeRef, PolygonId, Scene};

#[derive(Clone, Debug)]
pub struct SceneEdges {
    edges: Vec<EdgeRef>,
    ids: Vec<PolygonId>,
    offsets: Vec<u32>,
    bvh: Bvh,
}

/// Closest edge to a query point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NearestEdge {
    /// Global edge index.
    pub edge: u32,
    pub distance: f64,
    pub foot: Point,
}

impl SceneEdges {
    pub fn build(scene: &Scene) -> SceneEdges {
        Self::build_with_leaf_size(scene, DEFAULT_LEAF_SIZE)
    }

    pub fn build_with_leaf_size(scene: &Scene, leaf_size: usize) -> SceneEdges {
        let edges: Vec<EdgeRef> = scene.edges().collect();
        let boxes: Vec<BBox> = edges.iter().map(|e| e.segment.bbox()).collect();
        let mut offsets = Vec::with_capacity(scene.m() + 1);
        let mut acc = 0u32;
        for p in scene.polygons() {
            offsets.push(acc);
            acc += p.len() as u32;
        }
        offsets.push(acc);
        SceneEdges {
            bvh: Bvh::build(&boxes, leaf_size),
            ids: scene.polygons().iter().map(|p| p.id()).collect(),
            offsets,
            edges,
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn bvh(&self) -> &Bvh {
        &self.bvh
    }

    pub fn edge(&self, global: u32) -> &EdgeRef {
        &self.edges[global as usize]
    }

    pub fn segment(&self, global: u32) -> &Segment {
        &self.edges[global as usize].segment
    }

    pub fn polygon_id(&self, polygon_index: u32) -> PolygonId {
        self.ids[polygon_index as usize]
    }

    pub fn edge_polygon_id(&self, global: u32) -> PolygonId {
        self.ids[self.edges[global as usize].polygon as usize]
    }

    /// Global index of the edge preceding `global` on its polygon.
    pub fn previous_edge(&self, global: u32) -> u32 {
        let e = &self.edges[global as usize];
        let start = self.offsets[e.polygon as usize];
        let end = self.offsets[e.polygon as usize + 1];
        if global == start {
            end - 1
        } else {
            global - 1
        }
    }

    /// Global index of the edge following `global` on its polygon.
    pub fn next_edge(&self, global: u32) -> u32 {
        let e = &self.edges[global as usize];
        let start = self.offsets[e.polygon as usize];
        let end = self.offsets[e.polygon as usize + 1];
        if global + 1 == end {
            start
        } else {
            global + 1
        }
    }

    /// Exact nearest edge by best-first search. Ties go to the smaller
    /// polygon id, then to the smaller edge index.
    pub fn nearest(&self, p: Point) -> Option<NearestEdge> {
        let mut best: Option<NearestEdge> = None;
        self.bvh.best_first(
            |b| b.distance_to_point(p),
            |i| {
                let c = dist_point_segment(p, &self.edges[i as usize].segment);
                let better = match &best {
                    None => true,
                    Some(b) => {
                        c.distance < b.distance
                            || (c.distance == b.distance && self.tie_key(i) < self.tie_key(b.edge))
                    }
                };
                if better {
                    best = Some(NearestEdge {
                        edge: i,
                        distance: c.distance,
                        foot: c.point,
                    });
                }
                c.distance
            },
        );
        best
    }

    fn tie_key(&self, global: u32) -> (PolygonId, u32) {
        let e = &self.edges[global as usize];
        (self.ids[e.polygon as usize], e.edge)
    }
}
