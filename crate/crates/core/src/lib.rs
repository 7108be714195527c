//! Path clearance queries among disjoint simple polygonal obstacles.
//!
//! A [`Scene`] of obstacles is preprocessed once into a [`SceneIndex`]; each
//! query path is then checked against a clearance `c` with work sublinear in
//! the total obstacle complexity per path segment. The [`oracle`] module
//! holds the quadratic reference used to validate every index.

pub mod budget;
pub mod bvh;
pub mod edges;
pub mod emptiness;
pub mod engine;
pub mod error;
pub mod generate;
pub mod geom;
pub mod harness;
pub mod hull;
pub mod io;
pub mod nearest_site;
pub mod oracle;
pub mod report;
pub mod scene;
pub mod slab;

pub use budget::TPolicy;
pub use engine::{
    build_scene_index, BuildStats, ClearanceReport, EngineConfig, Execution, Fault, LineProximity,
    QueryMode, SceneIndex, SegmentClearance, SegmentProximity, Verdict,
};
pub use error::{BudgetError, GeomError, QueryError, SceneError};
pub use geom::{Line, Point, Segment};
pub use report::{Clearance, Witness};
pub use scene::{validate_scene, PolyPath, PolygonId, Scene, SimplePolygon};
