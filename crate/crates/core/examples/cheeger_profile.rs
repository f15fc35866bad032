//! Cheeger ratios and isoperimetric profiles: grid blocks against a
//! hyperbolic window.

use coarseplane::generators::{grid, grid_vertex, tessellation};
use coarseplane::iso::{cheeger_lower, iso_profile, vertex_boundary, SearchConfig};

pub fn run() -> coarseplane::Result<()> {
    let g = grid(12)?;
    for k in 1..=6 {
        let block: Vec<_> = (3..3 + k)
            .flat_map(|r| (3..3 + k).map(move |c| grid_vertex(12, r, c)))
            .collect();
        println!(
            "grid {k}x{k} block: |∂S|/|S| = {}/{}",
            vertex_boundary(&g, &block).len(),
            block.len()
        );
    }
    let cfg = SearchConfig {
        size_cap: 6,
        ..SearchConfig::default()
    };
    for (name, map) in [
        ("grid 12", g.clone()),
        ("{4,5} r=4", tessellation(4, 5, 4)?),
    ] {
        let c = cheeger_lower(&map, cfg)?;
        let p = iso_profile(&map, cfg);
        println!(
            "{name}: min ratio {} (witness of {} vertices, {} states), lower bound for all sets {}",
            c.ratio,
            c.witness.len(),
            c.states,
            c.disconnected_bound
        );
        let points: Vec<String> = p
            .points
            .iter()
            .map(|w| format!("{}→{}", w.boundary, w.size))
            .collect();
        println!("  profile: {}", points.join(" "));
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(if e.is_budget() { 3 } else { 2 });
    }
}
