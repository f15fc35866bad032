//! Side classes and the closest geodesic around a square hole in a grid.

use coarseplane::generators::{grid, grid_vertex};
use coarseplane::hull::{closest_geodesic, ArcFrame, Side, SideChoice};
use coarseplane::metric::Metric;
use coarseplane::{Cycle, VertexId};

pub fn run() -> coarseplane::Result<()> {
    let g = grid(11)?;
    let hole: Vec<VertexId> = (4..7)
        .flat_map(|r| (4..7).map(move |c| grid_vertex(11, r, c)))
        .collect();
    let (map, _) = g.without_vertices(&hole)?;
    let face = map.bounded_faces().max_by_key(|f| f.len()).unwrap().id;
    let cycle = Cycle::of_face(&map, face)?;
    let metric = Metric::new(&map);
    let labels = |vs: &[VertexId]| vs.iter().map(|&v| map.label(v)).collect::<Vec<_>>();
    println!(
        "hole boundary ({}): {:?}",
        cycle.len(),
        labels(cycle.vertices())
    );

    let (i, j) = (0, 4);
    let frame = ArcFrame::new(&map, &cycle, i, j);
    let all = metric.geodesics(frame.x(), frame.y(), 1000)?;
    let mut counts = [0usize; 3];
    for g in all.iter().filter(|g| frame.is_outside(&map, &g.vertices)) {
        match frame.classify(&map, &g.vertices)? {
            Side::S1 => counts[0] += 1,
            Side::S2 => counts[1] += 1,
            Side::Neither => counts[2] += 1,
        }
    }
    println!(
        "{} geodesics between {} and {}: S1={} S2={} neither={}",
        all.len(),
        map.label(frame.x()),
        map.label(frame.y()),
        counts[0],
        counts[1],
        counts[2]
    );
    for side in [SideChoice::S1, SideChoice::S2] {
        match closest_geodesic(&metric, &cycle, i, j, side, 1000) {
            Ok(g) => println!("closest in {side:?}: {:?}", labels(&g.vertices)),
            Err(e) => println!("closest in {side:?}: {e}"),
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}
