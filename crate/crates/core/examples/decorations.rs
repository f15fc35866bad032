//! Find and eliminate decorations on a grid with a pendant and a
//! subdivided chord, then check the distance distortion.

use coarseplane::generators::{attach_path, grid, grid_vertex};
use coarseplane::iso::{cheeger_lower, SearchConfig};
use coarseplane::lii::{eliminate_decorations, find_decorations, quasi_isometry_check};

pub fn run() -> coarseplane::Result<()> {
    let g = grid(10)?;
    let (v, w) = (grid_vertex(10, 4, 4), grid_vertex(10, 5, 5));
    let face = g
        .core_faces()
        .into_iter()
        .find(|&f| g.face_vertices(f).contains(&v) && g.face_vertices(f).contains(&w))
        .unwrap();
    let g = attach_path(&g, face, v, Some(w), 3)?;
    let u = grid_vertex(10, 2, 6);
    let face = g
        .core_faces()
        .into_iter()
        .find(|&f| g.face_vertices(f).contains(&u))
        .unwrap();
    let g = attach_path(&g, face, u, None, 2)?;

    let labels = |vs: &[coarseplane::VertexId]| vs.iter().map(|&x| g.label(x)).collect::<Vec<_>>();
    for d in find_decorations(&g).decorations {
        println!(
            "decoration {:?} with boundary {:?}",
            labels(&d.vertices),
            labels(&d.boundary)
        );
    }
    let elim = eliminate_decorations(&g)?;
    println!(
        "after {} round(s): V {} -> {}, added edges {}",
        elim.rounds,
        g.num_vertices(),
        elim.map.num_vertices(),
        elim.added_edges.len()
    );
    let c = cheeger_lower(
        &g,
        SearchConfig {
            size_cap: 5,
            ..SearchConfig::default()
        },
    )?;
    let qi = quasi_isometry_check(&g, &elim, c.ratio)?;
    println!(
        "c = {}: {} certified pairs, max stretch {}, largest decoration {}",
        c.ratio, qi.pairs, qi.max_stretch, qi.max_decoration
    );
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}
