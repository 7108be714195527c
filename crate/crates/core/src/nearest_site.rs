//! Nearest obstacle to a query point, answered by best-first search over
//! the edge hierarchy with exact point-to-segment refinement.

use std::sync::Arc;

use crate::edges::SceneEdges;
use crate::error::QueryError;
use crate::geom::Point;
use crate::scene::{PolygonId, Scene};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NearestSite {
    pub polygon_id: PolygonId,
    /// Edge index within its polygon.
    pub edge: usize,
    pub distance: f64,
    /// Closest point on that edge.
    pub witness: Point,
}

#[derive(Clone, Debug)]
pub struct NearestSiteIndex {
    edges: Arc<SceneEdges>,
}

pub fn build_nearest_site(scene: &Scene) -> NearestSiteIndex {
    NearestSiteIndex::from_edges(Arc::new(SceneEdges::build(scene)))
}

impl NearestSiteIndex {
    pub fn from_edges(edges: Arc<SceneEdges>) -> Self {
        NearestSiteIndex { edges }
    }

    pub fn nearest_polygon_to_point(&self, q: Point) -> Result<NearestSite, QueryError> {
        let near = self.edges.nearest(q).ok_or(QueryError::EmptyScene)?;
        let e = self.edges.edge(near.edge);
        Ok(NearestSite {
            polygon_id: self.edges.polygon_id(e.polygon),
            edge: e.edge as usize,
            distance: near.distance,
            witness: near.foot,
        })
    }
}
