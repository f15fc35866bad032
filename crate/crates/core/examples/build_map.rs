//! Build a map from rotation lists, trace its faces and round-trip it
//! through planar-map-v1.

use coarseplane::map::{from_json, to_json};
use coarseplane::{MapSpec, PlanarMap};
use serde_json::json;

pub fn run() -> coarseplane::Result<()> {
    // a square with one diagonal; neighbor lists are counterclockwise
    let spec = MapSpec {
        vertices: vec![
            (0, vec![1, 2, 3]),
            (1, vec![2, 0]),
            (2, vec![3, 0, 1]),
            (3, vec![0, 2]),
        ],
        rim: vec![],
        outer_face_dart: None,
        meta: json!({"family": "hand"}),
    };
    let map = PlanarMap::build(spec)?;
    println!(
        "V={} E={} F={}",
        map.num_vertices(),
        map.num_edges(),
        map.num_faces()
    );
    for face in map.faces() {
        let labels: Vec<i64> = map
            .face_vertices(face.id)
            .iter()
            .map(|&v| map.label(v))
            .collect();
        let kind = if face.bounded { "bounded" } else { "outer" };
        println!("face {} ({kind}): {labels:?}", face.id.idx());
    }

    let text = to_json(&map);
    let again = from_json(&text)?;
    assert_eq!(to_json(&again), text);
    println!("{}", text.trim_end());
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}
