//! Walk around a connected set and count how often the walk touches the
//! set's boundary.

use coarseplane::generators::{grid, grid_vertex, tessellation};
use coarseplane::iso::{boundary_walk, core_vertices};

pub fn run() -> coarseplane::Result<()> {
    let g = grid(10)?;
    let block: Vec<_> = (3..6)
        .flat_map(|r| (3..6).map(move |c| grid_vertex(10, r, c)))
        .collect();
    let w = boundary_walk(&g, &block)?;
    println!(
        "grid 3x3 block: |C| = {}, boundary hits = {}, subwalks shorter than 4: {}",
        w.len(),
        w.distinct_hits,
        w.subwalks_shorter_than(4)
    );

    let t = tessellation(3, 7, 4)?;
    let v = core_vertices(&t)[0];
    let w = boundary_walk(&t, &[v])?;
    let codegree = t.max_codegree().unwrap();
    println!(
        "{{3,7}} single vertex: |C| = {}, hits = {}, |C|/Δ* = {}/{}",
        w.len(),
        w.distinct_hits,
        w.len(),
        codegree
    );
    for s in &w.subwalks {
        println!(
            "  subwalk of length {} inside face {} (length {})",
            s.length, s.face, s.face_length
        );
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}
