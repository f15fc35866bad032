//! Disks cut out by cycles, the linear isoperimetric check, faces per
//! cycle length, and the counting certificate.

use coarseplane::generators::{grid, grid_vertex, tessellation};
use coarseplane::iso::SearchConfig;
use coarseplane::lii::{disk_from_cycle, faces_inside_ratio, hyperbolicity_certificate, lii_check};
use coarseplane::{Cycle, Rational, Result};

fn block_cycle(map: &coarseplane::PlanarMap, n: usize, r0: usize, m: usize) -> Result<Cycle> {
    let v = |r, c| grid_vertex(n, r, c);
    let mut vs = Vec::new();
    vs.extend((r0..r0 + m).map(|c| v(r0, c)));
    vs.extend((r0..r0 + m).map(|r| v(r, r0 + m)));
    vs.extend((r0 + 1..=r0 + m).rev().map(|c| v(r0 + m, c)));
    vs.extend((r0 + 1..=r0 + m).rev().map(|r| v(r, r0)));
    Cycle::new(map, vs)
}

pub fn run() -> Result<()> {
    let g = grid(14)?;
    let disk = disk_from_cycle(&g, &block_cycle(&g, 14, 3, 4)?)?;
    for k in [Rational::new(1, 1), Rational::new(9, 10)] {
        let c = lii_check(&disk, k, 4);
        println!(
            "4x4 block disk, k={k}, D=4: holds={} ({} faces, perimeter {})",
            c.holds, c.bounded_faces, c.perimeter
        );
    }
    let cycles = (2..=8)
        .map(|m| block_cycle(&g, 14, 3, m))
        .collect::<Result<Vec<_>>>()?;
    let table = faces_inside_ratio(&g, &cycles)?;
    for row in &table.table {
        println!(
            "  |C|={:<3} F={:<3} F/|C|={}",
            row.len,
            row.faces,
            row.ratio()
        );
    }

    let cfg = SearchConfig {
        size_cap: 8,
        ..SearchConfig::default()
    };
    for (name, map) in [
        ("{4,5} r=3", tessellation(4, 5, 3)?),
        ("grid 10", grid(10)?),
    ] {
        let cert = hyperbolicity_certificate(&map, cfg, 1_000_000, None)?;
        println!(
            "{name}: c' = {}, bound (1+c')Δ/c' = {}, k̂ = {}, {} cycles, verdict {}",
            cert.c_prime(),
            cert.bound,
            cert.k_hat,
            cert.per_cycle.len(),
            cert.verdict.as_str()
        );
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(if e.is_budget() { 3 } else { 2 });
    }
}
