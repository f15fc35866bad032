//! Shrink a long face of the open spoke construction to its geodetic hull.

use coarseplane::generators::{spoke_faces, tessellation};
use coarseplane::hull::geodetic_hull;
use coarseplane::metric::{is_geodetic_cycle, Metric};

pub fn run() -> coarseplane::Result<()> {
    let base = tessellation(4, 5, 4)?;
    let face = base.core_faces()[0];
    let map = spoke_faces(&base, &[(face, 4)], false)?;
    let long = map.bounded_faces().max_by_key(|f| f.len()).unwrap().id;
    let metric = Metric::new(&map);
    let trace = geodetic_hull(&metric, long, 1_000_000)?;
    println!("face {} lengths {:?}", long.idx(), trace.lengths());
    for step in &trace.steps {
        println!(
            "  {} -> {}: {} vertices replaced by {}",
            map.label(step.x),
            map.label(step.y),
            step.discarded.len(),
            step.inserted.len()
        );
    }
    let terminal = trace.terminal_cycle(&map)?;
    println!(
        "terminal geodetic: {}, certified: {}",
        is_geodetic_cycle(&metric, &terminal).geodetic,
        trace.certified
    );
    println!("{}", serde_json::to_string(&trace.to_json(&map)).unwrap());
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(if e.is_budget() { 3 } else { 2 });
    }
}
