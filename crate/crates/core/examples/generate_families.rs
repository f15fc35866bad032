//! Generate one window per family and print its size and codegree.

use coarseplane::generators::{GeneratorSpec, Schedule};

pub fn run() -> coarseplane::Result<()> {
    let base = || Box::new(GeneratorSpec::Tessellation { p: 4, q: 5, r: 3 });
    let specs = [
        GeneratorSpec::Grid { n: 6 },
        GeneratorSpec::Tessellation { p: 3, q: 7, r: 3 },
        GeneratorSpec::Tessellation { p: 4, q: 5, r: 3 },
        GeneratorSpec::Tree {
            degree: 3,
            radius: 4,
        },
        GeneratorSpec::G1 {
            base: base(),
            schedule: Schedule::Seeded {
                ns: vec![2, 4],
                seed: 0,
            },
        },
        GeneratorSpec::G2 {
            base: base(),
            schedule: Schedule::Seeded {
                ns: vec![2, 4],
                seed: 0,
            },
        },
        GeneratorSpec::Dyadic {
            levels: 3,
            width: 4,
        },
        GeneratorSpec::DyadicSquare { a: 2 },
        GeneratorSpec::Composite { n: 2, levels: 3 },
    ];
    for spec in &specs {
        let map = spec.generate()?;
        let lengths: usize = map.faces().iter().map(|f| f.len()).sum();
        assert_eq!(lengths, 2 * map.num_edges());
        println!(
            "{:<60} V={:<4} E={:<4} F={:<4} rim={:<4} codegree={:?}",
            serde_json::to_string(spec).unwrap(),
            map.num_vertices(),
            map.num_edges(),
            map.num_faces(),
            map.rim_vertices().count(),
            map.max_codegree()
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
