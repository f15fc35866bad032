//! DOT and SVG renderings. Coordinates come from a barycentric (Tutte)
//! layout with the outer face pinned to a circle; they are for viewing only.

use std::fmt::Write;

use crate::map::{PlanarMap, VertexId};

const LAYOUT_ROUNDS: usize = 400;
const SIZE: f64 = 800.0;

pub fn to_dot(map: &PlanarMap) -> String {
    let mut s =
        String::from("graph G {\n  node [shape=circle, width=0.2, fixedsize=true, fontsize=8];\n");
    for v in map.vertices() {
        let style = if map.is_rim(v) {
            ", style=filled, fillcolor=lightgray"
        } else {
            ""
        };
        writeln!(s, "  {} [label=\"{}\"{style}];", map.label(v), map.label(v)).unwrap();
    }
    for v in map.vertices() {
        for w in map.neighbors(v).filter(|&w| w > v) {
            writeln!(s, "  {} -- {};", map.label(v), map.label(w)).unwrap();
        }
    }
    s.push_str("}\n");
    s
}

/// Outer-face vertices evenly on the unit circle, every other vertex moved
/// to the average of its neighbors for a fixed number of rounds.
pub fn tutte_layout(map: &PlanarMap) -> Vec<(f64, f64)> {
    let n = map.num_vertices();
    let mut pos = vec![(0.0, 0.0); n];
    let mut pinned = vec![false; n];
    let mut ring: Vec<VertexId> = Vec::new();
    for &d in &map.face(map.outer_face()).walk {
        let v = map.origin(d);
        if !pinned[v.idx()] {
            pinned[v.idx()] = true;
            ring.push(v);
        }
    }
    let k = ring.len() as f64;
    for (i, v) in ring.iter().enumerate() {
        // clockwise walk, so negate the angle to draw it counterclockwise
        let a = -2.0 * std::f64::consts::PI * i as f64 / k;
        pos[v.idx()] = (a.cos(), a.sin());
    }
    for _ in 0..LAYOUT_ROUNDS {
        for v in map.vertices() {
            if pinned[v.idx()] || map.degree(v) == 0 {
                continue;
            }
            let (mut x, mut y) = (0.0, 0.0);
            for w in map.neighbors(v) {
                x += pos[w.idx()].0;
                y += pos[w.idx()].1;
            }
            let d = map.degree(v) as f64;
            pos[v.idx()] = (x / d, y / d);
        }
    }
    pos
}

pub fn to_svg(map: &PlanarMap) -> String {
    let pos = tutte_layout(map);
    let margin = 20.0;
    let scale = (SIZE - 2.0 * margin) / 2.0;
    let at = |v: VertexId| {
        let (x, y) = pos[v.idx()];
        (margin + (x + 1.0) * scale, margin + (1.0 - y) * scale)
    };
    let mut s = String::new();
    writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
    )
    .unwrap();
    s.push_str("<g stroke=\"#444\" stroke-width=\"1\">\n");
    for v in map.vertices() {
        for w in map.neighbors(v).filter(|&w| w > v) {
            let ((x1, y1), (x2, y2)) = (at(v), at(w));
            writeln!(
                s,
                "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\"/>"
            )
            .unwrap();
        }
    }
    s.push_str("</g>\n<g stroke=\"#000\" stroke-width=\"0.5\">\n");
    for v in map.vertices() {
        let (x, y) = at(v);
        let fill = if map.is_rim(v) { "#bbb" } else { "#fff" };
        writeln!(
            s,
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"{fill}\"><title>{}</title></circle>",
            map.label(v)
        )
        .unwrap();
    }
    s.push_str("</g>\n</svg>\n");
    s
}
