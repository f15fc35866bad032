//! Exact and sampled δ on a hyperbolic window and on a grid.

use coarseplane::generators::{grid, tessellation};
use coarseplane::metric::{DeltaMode, Metric, Scope};

pub fn run() -> coarseplane::Result<()> {
    let windows = [("{3,7} r=4", tessellation(3, 7, 4)?), ("grid 9", grid(9)?)];
    for (name, map) in &windows {
        let metric = Metric::new(map);
        let exact = metric.thin_triangle_delta(Scope::Certified, DeltaMode::Exact, 1_000_000)?;
        let sampled = metric.thin_triangle_delta(
            Scope::Advisory,
            DeltaMode::Sampled {
                seed: 0,
                trials: 500,
            },
            1_000_000,
        )?;
        println!(
            "{name}: certified δ = {} over {} triangles; sampled window δ ≥ {}",
            exact.delta, exact.triangles, sampled.delta
        );
        if let Some(w) = &exact.witness {
            println!(
                "  witness corners {:?}, side {:?}, point {}",
                w.corners, w.side, w.point
            );
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(if e.is_budget() { 3 } else { 2 });
    }
}
