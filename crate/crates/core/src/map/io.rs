use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{MapSpec, PlanarMap};
use crate::error::{Error, Result};

pub const FORMAT_TAG: &str = "planar-map-v1";

#[derive(Serialize, Deserialize)]
struct MapFile {
    format: String,
    vertices: Vec<VertexEntry>,
    #[serde(default)]
    rim: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    outer_face_dart: Option<[i64; 2]>,
    #[serde(default)]
    meta: Value,
}

#[derive(Serialize, Deserialize)]
struct VertexEntry {
    id: i64,
    nbrs: Vec<i64>,
}

/// Serializes a map as `planar-map-v1`. The output always names an outer
/// dart, so reloading it reproduces the same face designation.
pub fn to_json(map: &PlanarMap) -> String {
    let spec = map.to_spec();
    let file = MapFile {
        format: FORMAT_TAG.to_string(),
        vertices: spec
            .vertices
            .into_iter()
            .map(|(id, nbrs)| VertexEntry { id, nbrs })
            .collect(),
        rim: spec.rim,
        outer_face_dart: spec.outer_face_dart.map(|(u, v)| [u, v]),
        meta: spec.meta,
    };
    let mut s = serde_json::to_string(&file).expect("map serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<PlanarMap> {
    let file: MapFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    if file.format != FORMAT_TAG {
        return Err(Error::Format(format!(
            "expected format {FORMAT_TAG:?}, found {:?}",
            file.format
        )));
    }
    PlanarMap::build(MapSpec {
        vertices: file.vertices.into_iter().map(|e| (e.id, e.nbrs)).collect(),
        rim: file.rim,
        outer_face_dart: file.outer_face_dart.map(|[u, v]| (u, v)),
        meta: file.meta,
    })
}

pub fn load(path: impl AsRef<Path>) -> Result<PlanarMap> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    from_json(&text)
}

pub fn save(map: &PlanarMap, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path.as_ref(), to_json(map))
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))
}
