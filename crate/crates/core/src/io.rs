//! JSON interchange formats: scene files, path files and the request bodies
//! of the query service.
//!
//! ```text
//! scene: {"version": 1, "polygons": [{"id": 0, "vertices": [[x, y], ...]}, ...]}
//! path:  {"vertices": [[x, y], ...], "c": 1.5}        ("c" optional)
//! ```
//!
//! Polygons are stored counterclockwise; a clockwise polygon is reversed on
//! load, so only counterclockwise files round-trip unchanged.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{GeomError, SceneError};
use crate::geom::{Point, Segment};
use crate::scene::{validate_scene, PolyPath, PolygonId, Scene, SimplePolygon};

pub const SCENE_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub version: u32,
    pub polygons: Vec<PolygonRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonRecord {
    pub id: PolygonId,
    pub vertices: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathFile {
    pub vertices: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
}

/// Body of `POST /query`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryRequest {
    pub path: Vec<Point>,
    pub c: f64,
}

/// Body of `POST /nearest`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NearestRequest {
    pub segment: [Point; 2],
}

/// Body of every non-2xx service response.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    /// Short machine-readable kind, e.g. `invalid_path`.
    pub error: String,
    pub reason: String,
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported scene version {0} (expected {SCENE_FORMAT_VERSION})")]
    Version(u32),
    #[error("invalid scene: {0}")]
    Scene(#[from] SceneError),
    #[error("invalid path: {0}")]
    Path(#[from] GeomError),
}

impl SceneFile {
    pub fn from_scene(scene: &Scene) -> SceneFile {
        SceneFile {
            version: SCENE_FORMAT_VERSION,
            polygons: scene
                .polygons()
                .iter()
                .map(|p| PolygonRecord {
                    id: p.id(),
                    vertices: p.vertices().to_vec(),
                })
                .collect(),
        }
    }

    pub fn into_scene(self) -> Result<Scene, FormatError> {
        if self.version != SCENE_FORMAT_VERSION {
            return Err(FormatError::Version(self.version));
        }
        let polygons = self
            .polygons
            .into_iter()
            .map(|r| SimplePolygon::new(r.id, r.vertices))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(validate_scene(polygons)?)
    }
}

impl PathFile {
    pub fn to_path(&self) -> Result<PolyPath, GeomError> {
        PolyPath::new(self.vertices.clone())
    }
}

impl NearestRequest {
    pub fn to_segment(&self) -> Result<Segment, GeomError> {
        Segment::new(self.segment[0], self.segment[1])
    }
}

pub fn parse_scene(json: &str) -> Result<Scene, FormatError> {
    serde_json::from_str::<SceneFile>(json)?.into_scene()
}

pub fn parse_path(json: &str) -> Result<PathFile, FormatError> {
    let file: PathFile = serde_json::from_str(json)?;
    file.to_path()?;
    Ok(file)
}

pub fn scene_to_json(scene: &Scene) -> String {
    serde_json::to_string_pretty(&SceneFile::from_scene(scene)).expect("scene serializes")
}

pub fn read_scene(path: impl AsRef<Path>) -> Result<Scene, FormatError> {
    parse_scene(&read(path.as_ref())?)
}

pub fn read_path(path: impl AsRef<Path>) -> Result<PathFile, FormatError> {
    parse_path(&read(path.as_ref())?)
}

fn read(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Read {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARES: &str = r#"{"version": 1, "polygons": [
        {"id": 0, "vertices": [[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]]},
        {"id": 1, "vertices": [[9.5, -0.5], [10.5, -0.5], [10.5, 0.5], [9.5, 0.5]]}
    ]}"#;

    #[test]
    fn scene_round_trip() {
        let scene = parse_scene(SQUARES).unwrap();
        assert_eq!(scene.m(), 2);
        let again = parse_scene(&scene_to_json(&scene)).unwrap();
        assert_eq!(again, scene);
        let file: SceneFile = serde_json::from_str(SQUARES).unwrap();
        assert_eq!(SceneFile::from_scene(&scene), file);
    }

    #[test]
    fn awkward_coordinates_round_trip() {
        let v = vec![
            Point::new(0.1, 0.2),
            Point::new(1.0 / 3.0, 1e-300),
            Point::new(2.0f64.sqrt(), 1e17 + 3.0),
        ];
        let file = PathFile {
            vertices: v.clone(),
            c: Some(std::f64::consts::PI),
        };
        let back: PathFile = serde_json::from_str(&serde_json::to_string(&file).unwrap()).unwrap();
        assert_eq!(back, file);
    }

    #[test]
    fn clockwise_input_is_reoriented() {
        let cw = r#"{"version": 1, "polygons": [
            {"id": 4, "vertices": [[0, 0], [0, 1], [1, 1], [1, 0]]}]}"#;
        let scene = parse_scene(cw).unwrap();
        assert!(scene.polygon(0).signed_area() > 0.0);
    }

    #[test]
    fn errors_name_the_problem() {
        let overlap = r#"{"version": 1, "polygons": [
            {"id": 0, "vertices": [[0, 0], [2, 0], [2, 2], [0, 2]]},
            {"id": 7, "vertices": [[1, 1], [3, 1], [3, 3], [1, 3]]}]}"#;
        let err = parse_scene(overlap).unwrap_err();
        assert!(matches!(
            err,
            FormatError::Scene(SceneError::PolygonsIntersect(PolygonId(0), PolygonId(7)))
        ));

        let err = parse_path(r#"{"vertex": [[0, 0], [1, 1]]}"#).unwrap_err();
        assert!(err.to_string().contains("vertex"), "{err}");

        let err = parse_path(r#"{"vertices": [[0, 0]]}"#).unwrap_err();
        assert!(matches!(err, FormatError::Path(GeomError::PathTooShort(1))));

        let err = parse_scene(r#"{"version": 2, "polygons": []}"#).unwrap_err();
        assert!(matches!(err, FormatError::Version(2)));
    }

    #[test]
    fn request_bodies() {
        let q: QueryRequest =
            serde_json::from_str(r#"{"path": [[0, 0], [5, 0]], "c": 1}"#).unwrap();
        assert_eq!(q.c, 1.0);
        let n: NearestRequest = serde_json::from_str(r#"{"segment": [[0, 4], [1, 4]]}"#).unwrap();
        assert_eq!(n.to_segment().unwrap().b, Point::new(1.0, 4.0));
        let bad: NearestRequest = serde_json::from_str(r#"{"segment": [[0, 4], [0, 4]]}"#).unwrap();
        assert_eq!(bad.to_segment(), Err(GeomError::DegenerateSegment));
    }
}
