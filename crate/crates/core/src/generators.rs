//! Deterministic windows of the example graphs.
//!
//! Every generator returns a validated [`PlanarMap`] whose vertex labels are
//! its dense indices, whose rotations start at the smallest neighbor, and
//! whose `meta` block names the family, its parameters and any witness sets.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::map::{FaceId, PlanarMap, VertexId};

/// Which window to build. Same spec, same bytes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GeneratorSpec {
    Grid {
        n: usize,
    },
    Tessellation {
        p: usize,
        q: usize,
        r: usize,
    },
    Tree {
        degree: usize,
        radius: usize,
    },
    G1 {
        base: Box<GeneratorSpec>,
        schedule: Schedule,
    },
    G2 {
        base: Box<GeneratorSpec>,
        schedule: Schedule,
    },
    Dyadic {
        levels: usize,
        width: usize,
    },
    DyadicSquare {
        a: usize,
    },
    Composite {
        n: usize,
        levels: usize,
    },
}

/// Faces decorated by the spoke construction, with the spoke length for each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    /// `(face id, n)` pairs on the base map.
    Explicit(Vec<(usize, usize)>),
    /// One distinct core face per entry of `ns`, drawn with a seeded shuffle.
    Seeded { ns: Vec<usize>, seed: u64 },
}

impl Schedule {
    pub fn resolve(&self, base: &PlanarMap) -> Result<Vec<(FaceId, usize)>> {
        match self {
            Schedule::Explicit(v) => Ok(v.iter().map(|&(f, n)| (FaceId::from(f), n)).collect()),
            Schedule::Seeded { ns, seed } => {
                let mut faces = base.core_faces();
                if faces.len() < ns.len() {
                    return Err(Error::InvalidParameter(format!(
                        "schedule needs {} core faces, base has {}",
                        ns.len(),
                        faces.len()
                    )));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                faces.shuffle(&mut rng);
                Ok(faces.into_iter().zip(ns.iter().copied()).collect())
            }
        }
    }
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<PlanarMap> {
        match self {
            GeneratorSpec::Grid { n } => grid(*n),
            GeneratorSpec::Tessellation { p, q, r } => tessellation(*p, *q, *r),
            GeneratorSpec::Tree { degree, radius } => tree(*degree, *radius),
            GeneratorSpec::G1 { base, schedule } | GeneratorSpec::G2 { base, schedule } => {
                let base = base.generate()?;
                let resolved = schedule.resolve(&base)?;
                let closed = matches!(self, GeneratorSpec::G2 { .. });
                spoke_faces(&base, &resolved, closed)
            }
            GeneratorSpec::Dyadic { levels, width } => dyadic(*levels, *width),
            GeneratorSpec::DyadicSquare { a } => dyadic_square(*a),
            GeneratorSpec::Composite { n, levels } => composite(*n, *levels),
        }
    }
}

/// Straight-line drawing to rotation system: neighbors sorted by angle,
/// each list rotated to start at its smallest neighbor.
fn from_coordinates(
    points: &[(f64, f64)],
    edges: &[(usize, usize)],
    rim: Vec<bool>,
    meta: Value,
) -> Result<PlanarMap> {
    let n = points.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let rotations = adj
        .into_iter()
        .enumerate()
        .map(|(v, mut nbrs)| {
            let (x0, y0) = points[v];
            let angle = |w: &usize| {
                let (x, y) = points[*w];
                let a = (y - y0).atan2(x - x0);
                if a < 0.0 {
                    a + 2.0 * PI
                } else {
                    a
                }
            };
            nbrs.sort_by(|a, b| angle(a).total_cmp(&angle(b)));
            canonical_start(nbrs.into_iter().map(VertexId::from).collect())
        })
        .collect();
    PlanarMap::from_rotations((0..n as i64).collect(), rotations, rim, None, meta)
}

fn canonical_start(mut rot: Vec<VertexId>) -> Vec<VertexId> {
    if let Some(k) = rot
        .iter()
        .enumerate()
        .min_by_key(|(_, v)| **v)
        .map(|(k, _)| k)
    {
        rot.rotate_left(k);
    }
    rot
}

/// `n × n` piece of the square grid; rim is the outermost ring.
pub fn grid(n: usize) -> Result<PlanarMap> {
    if n < 2 {
        return Err(Error::InvalidParameter("grid needs n >= 2".into()));
    }
    let id = |r: usize, c: usize| r * n + c;
    let mut points = Vec::with_capacity(n * n);
    let mut rim = Vec::with_capacity(n * n);
    let mut edges = Vec::new();
    for r in 0..n {
        for c in 0..n {
            points.push((c as f64, r as f64));
            rim.push(r == 0 || c == 0 || r == n - 1 || c == n - 1);
            if c + 1 < n {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < n {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    from_coordinates(&points, &edges, rim, json!({"family": "grid", "n": n}))
}

/// Vertex id of grid cell `(row, col)` in [`grid`]`(n)`.
pub fn grid_vertex(n: usize, row: usize, col: usize) -> VertexId {
    VertexId::from(row * n + col)
}

/// Combinatorial ball of radius `r` about a vertex of the `{p,q}` tiling
/// (`p`-gon faces, `q` per vertex); rim is the sphere of radius `r`.
pub fn tessellation(p: usize, q: usize, r: usize) -> Result<PlanarMap> {
    if p < 3 || q < 3 || (p - 2) * (q - 2) <= 4 {
        return Err(Error::NotHyperbolicParameters { p, q });
    }
    // edge length from cosh(l/2) = cos(pi/p) / sin(pi/q); disk radius tanh(l/2)
    let half = ((PI / p as f64).cos() / (PI / q as f64).sin()).acosh();
    let step = half.tanh();

    let mobius_to_origin =
        |z: Complex64, w: Complex64| (w - z) / (Complex64::new(1.0, 0.0) - z.conj() * w);
    let mobius_from_origin =
        |z: Complex64, w: Complex64| (w + z) / (Complex64::new(1.0, 0.0) + z.conj() * w);

    let key = |z: Complex64| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64);
    let mut pos: Vec<Complex64> = vec![Complex64::new(0.0, 0.0)];
    let mut dist = vec![0usize];
    let mut parent: Vec<Option<usize>> = vec![None];
    let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    cells.entry(key(pos[0])).or_default().push(0);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new()];

    let find = |cells: &HashMap<(i64, i64), Vec<usize>>, pos: &[Complex64], z: Complex64| {
        let (kx, ky) = key(z);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(list) = cells.get(&(kx + dx, ky + dy)) {
                    for &i in list {
                        if (pos[i] - z).norm() < 1e-7 {
                            return Some(i);
                        }
                    }
                }
            }
        }
        None
    };

    let mut k = 0;
    while k < pos.len() {
        let z = pos[k];
        let reference = match parent[k] {
            Some(par) => mobius_to_origin(z, pos[par]),
            None => Complex64::new(step, 0.0),
        };
        for j in 0..q {
            let rot = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / q as f64);
            let w = mobius_from_origin(z, rot * reference);
            let existing = find(&cells, &pos, w);
            let target = match existing {
                Some(i) => i,
                None if dist[k] < r => {
                    let i = pos.len();
                    pos.push(w);
                    dist.push(dist[k] + 1);
                    parent.push(Some(k));
                    adj.push(Vec::new());
                    cells.entry(key(w)).or_default().push(i);
                    i
                }
                None => continue,
            };
            if !adj[k].contains(&target) {
                adj[k].push(target);
            }
            if !adj[target].contains(&k) {
                adj[target].push(k);
            }
        }
        k += 1;
    }

    let rotations = adj
        .iter()
        .enumerate()
        .map(|(v, nbrs)| {
            let mut nbrs = nbrs.clone();
            let z = pos[v];
            let angle = |w: &usize| {
                let a = mobius_to_origin(z, pos[*w]).arg();
                if a < 0.0 {
                    a + 2.0 * PI
                } else {
                    a
                }
            };
            nbrs.sort_by(|a, b| angle(a).total_cmp(&angle(b)));
            canonical_start(nbrs.into_iter().map(VertexId::from).collect())
        })
        .collect();
    let rim = dist.iter().map(|&d| d == r).collect();
    PlanarMap::from_rotations(
        (0..pos.len() as i64).collect(),
        rotations,
        rim,
        None,
        json!({"family": "tessellation", "p": p, "q": q, "r": r}),
    )
}

/// Ball of radius `radius` in the `degree`-regular tree; leaves are rim.
pub fn tree(degree: usize, radius: usize) -> Result<PlanarMap> {
    if degree < 2 || radius < 1 {
        return Err(Error::InvalidParameter(
            "tree needs degree >= 2 and radius >= 1".into(),
        ));
    }
    let mut adj: Vec<Vec<VertexId>> = vec![Vec::new()];
    let mut depth = vec![0usize];
    let mut frontier = vec![0usize];
    for d in 1..=radius {
        let mut next = Vec::new();
        for &v in &frontier {
            let children = if d == 1 { degree } else { degree - 1 };
            for _ in 0..children {
                let c = adj.len();
                adj.push(vec![VertexId::from(v)]);
                depth.push(d);
                adj[v].push(VertexId::from(c));
                next.push(c);
            }
        }
        frontier = next;
    }
    let rim = depth.iter().map(|&d| d == radius).collect();
    PlanarMap::from_rotations(
        (0..adj.len() as i64).collect(),
        adj,
        rim,
        None,
        json!({"family": "tree", "degree": degree, "radius": radius}),
    )
}

/// Spoke construction on the scheduled faces: a hub inside each face joined
/// to its `k` corners by paths of length `n`, consecutive paths joined by
/// rungs at every depth `1..n`. With `closed` the last and first paths are
/// joined as well (the bounded-codegree variant).
pub fn spoke_faces(
    base: &PlanarMap,
    schedule: &[(FaceId, usize)],
    closed: bool,
) -> Result<PlanarMap> {
    let mut rot = base.rotations();
    let mut labels: Vec<i64> = base.labels().to_vec();
    let mut rim: Vec<bool> = base.rim_flags().to_vec();
    let mut next_label = labels.iter().copied().max().unwrap_or(-1) + 1;
    let mut witnesses = Vec::new();
    let mut closing_darts = Vec::new();
    let mut seen = Vec::new();

    for &(face, n) in schedule {
        if face.idx() >= base.num_faces() || !base.is_core_face(face) || seen.contains(&face) {
            return Err(Error::FaceNotInCore(face.idx()));
        }
        if n == 0 {
            return Err(Error::InvalidParameter("spoke length must be >= 1".into()));
        }
        seen.push(face);
        let mut corners = base.face_vertices(face);
        let start = corners
            .iter()
            .enumerate()
            .min_by_key(|(_, v)| **v)
            .map(|(i, _)| i)
            .unwrap();
        corners.rotate_left(start);
        let k = corners.len();

        let mut fresh = |rot: &mut Vec<Vec<VertexId>>| {
            let v = VertexId::from(rot.len());
            rot.push(Vec::new());
            labels.push(next_label);
            rim.push(false);
            next_label += 1;
            v
        };
        let hub = fresh(&mut rot);
        // path[i][j] is the j-th vertex of the spoke to corner i (j = 0 is the hub)
        let mut path: Vec<Vec<VertexId>> = Vec::with_capacity(k);
        for &corner in &corners {
            let mut p = vec![hub];
            for _ in 1..n {
                p.push(fresh(&mut rot));
            }
            p.push(corner);
            path.push(p);
        }
        let interior: Vec<VertexId> = std::iter::once(hub)
            .chain(path.iter().flat_map(|p| p[1..n].iter().copied()))
            .collect();

        // hub: spokes in counterclockwise order, i.e. reversed walk order
        rot[hub.idx()] = std::iter::once(path[0][1])
            .chain((1..k).rev().map(|i| path[i][1]))
            .collect();
        for i in 0..k {
            let prev = if i > 0 {
                Some(i - 1)
            } else if closed {
                Some(k - 1)
            } else {
                None
            };
            let next = if i + 1 < k {
                Some(i + 1)
            } else if closed {
                Some(0)
            } else {
                None
            };
            for j in 1..n {
                let v = path[i][j];
                let mut r = vec![path[i][j + 1]];
                if let Some(pi) = prev {
                    r.push(path[pi][j]);
                }
                r.push(path[i][j - 1]);
                if let Some(ni) = next {
                    r.push(path[ni][j]);
                }
                rot[v.idx()] = r;
            }
            // corner: spoke goes into the face corner right after the previous corner
            let corner = corners[i];
            let before = corners[(i + k - 1) % k];
            let at = rot[corner.idx()].iter().position(|&w| w == before).unwrap();
            rot[corner.idx()].insert(at + 1, path[i][n - 1]);
        }
        closing_darts.push((corners[k - 1], corners[0], face, n, k));
        witnesses.push((face, n, hub, interior, corners));
    }

    let rot: Vec<Vec<VertexId>> = rot.into_iter().map(canonical_start).collect();
    let family = if closed { "g2" } else { "g1" };
    let map = PlanarMap::from_rotations(labels, rot, rim, None, Value::Null)?;
    let lab = |v: VertexId| map.label(v);
    let witness_json: Vec<Value> = witnesses
        .iter()
        .map(|(face, n, hub, interior, corners)| {
            json!({
                "face": face.idx(),
                "n": n,
                "hub": lab(*hub),
                "interior": interior.iter().map(|&v| lab(v)).collect::<Vec<_>>(),
                "boundary": corners.iter().map(|&v| lab(v)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let closing_json: Vec<Value> = closing_darts
        .iter()
        .map(|&(a, b, face, n, k)| {
            let d = map.dart_between(a, b).expect("face edge survives");
            let f = map.face_of(d);
            json!({"face": face.idx(), "n": n, "k": k, "new_face": f.idx(), "len": map.face(f).len()})
        })
        .collect();
    let meta = json!({
        "family": family,
        "base": base.meta().clone(),
        "witnesses": witness_json,
        "closing_faces": closing_json,
    });
    Ok(map.with_meta(meta))
}

/// Window of the dyadic graph: levels `0..=levels`, abscissae in `[0, width]`.
/// Level `m` has spacing `2^-m`; the rim is the left, right and top sides.
pub fn dyadic(levels: usize, width: usize) -> Result<PlanarMap> {
    if levels < 1 || width < 1 {
        return Err(Error::InvalidParameter(
            "dyadic needs levels >= 1 and width >= 1".into(),
        ));
    }
    let (points, edges, rim, _) = dyadic_parts(levels, width, true);
    from_coordinates(
        &points,
        &edges,
        rim,
        json!({"family": "dyadic", "levels": levels, "width": width}),
    )
}

type DyadicParts = (
    Vec<(f64, f64)>,
    Vec<(usize, usize)>,
    Vec<bool>,
    Vec<Vec<usize>>,
);

fn dyadic_parts(levels: usize, width: usize, with_rim: bool) -> DyadicParts {
    let mut points = Vec::new();
    let mut rim = Vec::new();
    let mut edges = Vec::new();
    let mut ids: Vec<Vec<usize>> = Vec::new();
    for m in 0..=levels {
        let count = width << m;
        let mut row = Vec::with_capacity(count + 1);
        for i in 0..=count {
            let v = points.len();
            points.push((i as f64 / (1u64 << m) as f64, m as f64));
            rim.push(with_rim && (i == 0 || i == count || m == levels));
            if i > 0 {
                edges.push((v - 1, v));
            }
            if m > 0 && i % 2 == 0 {
                edges.push((ids[m - 1][i / 2], v));
            }
            row.push(v);
        }
        ids.push(row);
    }
    (points, edges, rim, ids)
}

/// Id of vertex `(i / 2^level, level)` in [`dyadic`]`(_, width)`.
pub fn dyadic_vertex(width: usize, level: usize, i: usize) -> VertexId {
    let before: usize = (0..level).map(|m| (width << m) + 1).sum();
    VertexId::from(before + i)
}

/// The finite square piece `H(a)`: levels `0..=a`, abscissae in `[0, a]`, no rim.
pub fn dyadic_square(a: usize) -> Result<PlanarMap> {
    if a < 1 {
        return Err(Error::InvalidParameter("H(a) needs a >= 1".into()));
    }
    let (points, edges, rim, _) = dyadic_parts(a, a, false);
    from_coordinates(
        &points,
        &edges,
        rim,
        json!({"family": "dyadic_square", "a": a}),
    )
}

/// Dyadic window with a mirrored copy of `H(k)` hung below the baseline
/// along `[k^2, k^2 + k]` for every `k = 1..=n`.
pub fn composite(n: usize, levels: usize) -> Result<PlanarMap> {
    if n < 1 || levels < 1 {
        return Err(Error::InvalidParameter(
            "composite needs n >= 1 and levels >= 1".into(),
        ));
    }
    let width = n * n + n + 1;
    let (mut points, mut edges, mut rim, ids) = dyadic_parts(levels, width, true);
    let mut copies = Vec::new();
    for k in 1..=n {
        let base = k * k;
        let attachment: Vec<usize> = (0..=k).map(|t| ids[0][base + t]).collect();
        let mut members = attachment.clone();
        let mut prev_row: Vec<usize> = attachment.clone();
        for m in 1..=k {
            let count = k << m;
            let mut row = Vec::with_capacity(count + 1);
            for i in 0..=count {
                let v = points.len();
                points.push((base as f64 + i as f64 / (1u64 << m) as f64, -(m as f64)));
                rim.push(false);
                if i > 0 {
                    edges.push((v - 1, v));
                }
                if i % 2 == 0 {
                    edges.push((prev_row[i / 2], v));
                }
                row.push(v);
                members.push(v);
            }
            prev_row = row;
        }
        members.sort_unstable();
        copies.push(json!({"n": k, "vertices": members, "attachment": attachment}));
    }
    let meta =
        json!({"family": "composite", "n": n, "levels": levels, "width": width, "copies": copies});
    from_coordinates(&points, &edges, rim, meta)
}

/// Adds a path of `interior` new vertices inside `face`, starting at corner
/// `from` and ending at corner `to` (a chord) or hanging free (a pendant
/// path) when `to` is `None`.
pub fn attach_path(
    map: &PlanarMap,
    face: FaceId,
    from: VertexId,
    to: Option<VertexId>,
    interior: usize,
) -> Result<PlanarMap> {
    if face.idx() >= map.num_faces() {
        return Err(Error::FaceNotBounded(face.idx()));
    }
    let walk = &map.face(face).walk;
    // the corner of the face at v sits right after the walk's previous vertex
    let corner = |v: VertexId| {
        walk.iter()
            .find(|&&d| map.head(d) == v)
            .map(|&d| map.origin(d))
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "vertex {} is not on face {}",
                    map.label(v),
                    face.idx()
                ))
            })
    };
    let before_from = corner(from)?;
    let before_to = to.map(corner).transpose()?;
    if to.is_some() && interior == 0 && map.adjacent(from, to.unwrap()) {
        return Err(Error::InvalidParameter(
            "chord would duplicate an edge".into(),
        ));
    }
    if to.is_none() && interior == 0 {
        return Err(Error::InvalidParameter(
            "pendant path needs at least one vertex".into(),
        ));
    }

    let mut rot = map.rotations();
    let mut labels = map.labels().to_vec();
    let mut rim = map.rim_flags().to_vec();
    let first_label = labels.iter().copied().max().unwrap_or(-1) + 1;
    let mut path = vec![from];
    for label in (first_label..).take(interior) {
        path.push(VertexId::from(rot.len()));
        rot.push(Vec::new());
        labels.push(label);
        rim.push(false);
    }
    if let Some(t) = to {
        path.push(t);
    }
    for k in 1..path.len() {
        let (a, b) = (path[k - 1], path[k]);
        if a.idx() >= map.num_vertices() {
            rot[a.idx()].push(b);
        }
        if b.idx() >= map.num_vertices() {
            rot[b.idx()].push(a);
        }
    }
    let insert_after =
        |rot: &mut Vec<Vec<VertexId>>, v: VertexId, after: VertexId, new: VertexId| {
            let at = rot[v.idx()].iter().position(|&w| w == after).unwrap();
            rot[v.idx()].insert(at + 1, new);
        };
    insert_after(&mut rot, from, before_from, path[1]);
    if let (Some(t), Some(bt)) = (to, before_to) {
        insert_after(&mut rot, t, bt, path[path.len() - 2]);
    }
    let rot = rot.into_iter().map(canonical_start).collect();
    let outer = map.face(map.outer_face()).walk[0];
    PlanarMap::from_rotations(
        labels,
        rot,
        rim,
        Some((map.origin(outer), map.head(outer))),
        map.meta().clone(),
    )
}

/// Interior witness sets recorded by [`spoke_faces`], as `(face, n, vertices, boundary)`.
pub fn spoke_witnesses(map: &PlanarMap) -> Vec<(usize, usize, Vec<VertexId>, Vec<VertexId>)> {
    let ids = |v: &Value| -> Vec<VertexId> {
        v.as_array()
            .map(|a| {
                a.iter()
                    .filter_map(|x| x.as_i64())
                    .filter_map(|l| map.vertex(l))
                    .collect()
            })
            .unwrap_or_default()
    };
    map.meta()["witnesses"]
        .as_array()
        .map(|ws| {
            ws.iter()
                .map(|w| {
                    (
                        w["face"].as_u64().unwrap_or(0) as usize,
                        w["n"].as_u64().unwrap_or(0) as usize,
                        ids(&w["interior"]),
                        ids(&w["boundary"]),
                    )
                })
                .collect()
        })
        .unwrap_or_default()
}

/// Attached copies recorded by [`composite`], as `(n, vertices)`.
pub fn composite_copies(map: &PlanarMap) -> Vec<(usize, Vec<VertexId>)> {
    map.meta()["copies"]
        .as_array()
        .map(|cs| {
            cs.iter()
                .map(|c| {
                    let vs = c["vertices"]
                        .as_array()
                        .map(|a| {
                            a.iter()
                                .filter_map(|x| x.as_i64())
                                .filter_map(|l| map.vertex(l))
                                .collect()
                        })
                        .unwrap_or_default();
                    (c["n"].as_u64().unwrap_or(0) as usize, vs)
                })
                .collect()
        })
        .unwrap_or_default()
}
