use thiserror::Error;

use crate::scene::PolygonId;

/// Rejected primitive input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("coordinate is not finite")]
    NonFinite,
    #[error("segment endpoints coincide")]
    DegenerateSegment,
    #[error("line direction has zero length")]
    DegenerateLine,
    #[error("path needs at least 2 vertices, got {0}")]
    PathTooShort(usize),
    #[error("path vertices {0} and {1} coincide")]
    RepeatedPathVertex(usize, usize),
}

/// Why a set of polygons is not a valid obstacle scene.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SceneError {
    #[error("polygon {0} has fewer than 3 vertices")]
    TooFewVertices(PolygonId),
    #[error("polygon {0} has a non-finite coordinate")]
    NonFinite(PolygonId),
    #[error("polygon {0} repeats a vertex consecutively")]
    DegenerateVertexRun(PolygonId),
    #[error("polygon {0} is not simple")]
    NonSimplePolygon(PolygonId),
    #[error("polygons {0} and {1} intersect")]
    PolygonsIntersect(PolygonId, PolygonId),
    #[error("polygon id {0} is used more than once")]
    DuplicateId(PolygonId),
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum QueryError {
    #[error("scene has no obstacles")]
    EmptyScene,
    #[error("clearance must be a positive finite number, got {0}")]
    InvalidClearance(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BudgetError {
    #[error("space budget t = {t} outside [{min}, {max}] for n = {n}")]
    InvalidBudget {
        t: u128,
        n: usize,
        min: u128,
        max: u128,
    },
    #[error("unrecognized t policy {0:?}")]
    UnknownPolicy(String),
}
