//! Full report on a window, with the three implication verdicts.

use coarseplane::generators::tessellation;
use coarseplane::pipeline::{analyze, Caps};

pub fn run() -> coarseplane::Result<()> {
    let map = tessellation(4, 5, 3)?;
    let report = analyze(
        &map,
        Caps {
            size_cap: 8,
            ..Caps::default()
        },
    )?;
    let i = &report.implications;
    for (name, imp) in [
        (
            "non-amenable + bounded codegree => hyperbolic",
            &i.hyperbolic,
        ),
        (
            "hyperbolic + weakly non-amenable => bounded codegree",
            &i.bounded_codegree,
        ),
        (
            "hyperbolic + weakly non-amenable => non-amenable",
            &i.nonamenable,
        ),
    ] {
        println!("{name}: {:?} {:?}", imp.verdict, imp.reasons);
    }
    print!("{}", report.to_json());
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(if e.is_budget() { 3 } else { 2 });
    }
}
