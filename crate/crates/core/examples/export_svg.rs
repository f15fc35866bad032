//! Render a window as DOT and SVG into the system temp directory.

use coarseplane::export::{to_dot, to_svg};
use coarseplane::generators::tessellation;

pub fn run() -> coarseplane::Result<()> {
    let map = tessellation(3, 7, 3)?;
    let dir = std::env::temp_dir();
    let io = |e: std::io::Error| coarseplane::Error::Io(e.to_string());
    let dot = dir.join("coarseplane-37.dot");
    let svg = dir.join("coarseplane-37.svg");
    std::fs::write(&dot, to_dot(&map)).map_err(io)?;
    std::fs::write(&svg, to_svg(&map)).map_err(io)?;
    println!("wrote {} and {}", dot.display(), svg.display());
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
