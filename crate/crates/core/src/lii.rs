//! Decorations and their elimination, combinatorial disks cut out by cycles,
//! linear isoperimetric checks, faces-inside-cycle ratios, and the counting
//! certificate for hyperbolicity.
//!
//! A decoration is a maximal connected rim-free induced subgraph with one or
//! two boundary vertices. Subgraphs containing rim vertices are attached to
//! the rest of the infinite graph and are never decorations.

use std::collections::{BTreeSet, HashSet};

use num_rational::Ratio;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fraction::{ratio, Fraction, Rational};
use crate::hull::geodetic_hull;
use crate::iso::{cheeger_lower, vertex_boundary, Cheeger, SearchConfig};
use crate::map::{cycle_interior, outer_walk_of, Cycle, PlanarMap, VertexId};
use crate::metric::Metric;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoration {
    pub vertices: Vec<VertexId>,
    pub boundary: Vec<VertexId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecorationScan {
    pub decorations: Vec<Decoration>,
    /// Index pairs of maximal decorations that share vertices.
    pub overlaps: Vec<(usize, usize)>,
}

/// Connected components of the map with the `removed` vertices taken out.
fn components_without(map: &PlanarMap, removed: &[bool]) -> Vec<Vec<VertexId>> {
    let n = map.num_vertices();
    let mut seen = removed.to_vec();
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![VertexId::from(s)];
        let mut k = 0;
        while k < comp.len() {
            let v = comp[k];
            k += 1;
            for w in map.neighbors(v) {
                if !seen[w.idx()] {
                    seen[w.idx()] = true;
                    comp.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Articulation points of the map with the `removed` vertices taken out.
fn articulation_points(map: &PlanarMap, removed: &[bool]) -> Vec<VertexId> {
    let n = map.num_vertices();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut is_art = vec![false; n];
    let mut timer = 0;
    for root in 0..n {
        if removed[root] || disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        let mut root_children = 0;
        // (vertex, parent, neighbor list, next index)
        let mut stack: Vec<(usize, usize, Vec<usize>, usize)> = vec![(
            root,
            usize::MAX,
            map.neighbors(VertexId::from(root))
                .map(|w| w.idx())
                .collect(),
            0,
        )];
        while let Some(top) = stack.last_mut() {
            let (v, parent) = (top.0, top.1);
            if top.3 < top.2.len() {
                let w = top.2[top.3];
                top.3 += 1;
                if removed[w] || w == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    if v == root {
                        root_children += 1;
                    }
                    let nbrs = map.neighbors(VertexId::from(w)).map(|u| u.idx()).collect();
                    stack.push((w, v, nbrs, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if parent != root && low[v] >= disc[parent] {
                        is_art[parent] = true;
                    }
                }
            }
        }
        if root_children > 1 {
            is_art[root] = true;
        }
    }
    (0..n).filter(|&v| is_art[v]).map(VertexId::from).collect()
}

/// All maximal decorations. Every connected `H` with `|∂H| ≤ 2` is a
/// component of `G − ∂H`, so candidates come from removing one vertex, or a
/// vertex and a second vertex that further splits what is left.
pub fn find_decorations(map: &PlanarMap) -> DecorationScan {
    let n = map.num_vertices();
    let mut candidates: BTreeSet<Vec<VertexId>> = BTreeSet::new();
    let mut removed = vec![false; n];
    let rim_free = |c: &[VertexId]| c.iter().all(|&v| !map.is_rim(v));
    for v in map.vertices() {
        removed[v.idx()] = true;
        let comps = components_without(map, &removed);
        let mut second: Vec<VertexId> = articulation_points(map, &removed);
        for comp in &comps {
            if rim_free(comp) {
                candidates.insert(comp.clone());
            }
            let rims: Vec<VertexId> = comp.iter().copied().filter(|&u| map.is_rim(u)).collect();
            if rims.len() == 1 {
                second.push(rims[0]);
            }
        }
        second.sort_unstable();
        second.dedup();
        for w in second {
            removed[w.idx()] = true;
            for comp in components_without(map, &removed) {
                if rim_free(&comp) {
                    candidates.insert(comp);
                }
            }
            removed[w.idx()] = false;
        }
        removed[v.idx()] = false;
    }

    let mut found: Vec<Decoration> = candidates
        .into_iter()
        .filter_map(|vertices| {
            let boundary = vertex_boundary(map, &vertices);
            (1..=2)
                .contains(&boundary.len())
                .then_some(Decoration { vertices, boundary })
        })
        .collect();
    found.sort_by(|a, b| {
        b.vertices
            .len()
            .cmp(&a.vertices.len())
            .then(a.vertices.cmp(&b.vertices))
    });
    let mut maximal: Vec<Decoration> = Vec::new();
    for d in found {
        let inside_other = maximal.iter().any(|m| {
            m.vertices.len() > d.vertices.len()
                && d.vertices
                    .iter()
                    .all(|v| m.vertices.binary_search(v).is_ok())
        });
        if !inside_other {
            maximal.push(d);
        }
    }
    maximal.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    let mut overlaps = Vec::new();
    for i in 0..maximal.len() {
        for j in i + 1..maximal.len() {
            if maximal[i]
                .vertices
                .iter()
                .any(|v| maximal[j].vertices.binary_search(v).is_ok())
            {
                overlaps.push((i, j));
            }
        }
    }
    DecorationScan {
        decorations: maximal,
        overlaps,
    }
}

/// Result of removing decorations until none are left.
#[derive(Clone, Debug)]
pub struct Elimination {
    pub map: PlanarMap,
    /// Original vertex to its image, `None` for deleted vertices.
    pub correspondence: Vec<Option<VertexId>>,
    /// Removed decorations in original vertex ids, in removal order.
    pub removed: Vec<Decoration>,
    /// Replacement edges as original vertex pairs.
    pub added_edges: Vec<(VertexId, VertexId)>,
    pub rounds: usize,
}

impl Elimination {
    pub fn max_decoration_size(&self) -> usize {
        self.removed
            .iter()
            .map(|d| d.vertices.len())
            .max()
            .unwrap_or(0)
    }
}

/// Positions in `rot` where a maximal run of decoration neighbors starts.
fn block_starts(rot: &[VertexId], in_h: &[bool]) -> Vec<usize> {
    let n = rot.len();
    let starts: Vec<usize> = (0..n)
        .filter(|&k| in_h[rot[k].idx()] && !in_h[rot[(k + n - 1) % n].idx()])
        .collect();
    if starts.is_empty() && rot.iter().any(|w| in_h[w.idx()]) {
        vec![0]
    } else {
        starts
    }
}

struct Applied {
    map: PlanarMap,
    new_id: Vec<Option<VertexId>>,
    added: Vec<(VertexId, VertexId)>,
}

/// Deletes the decorations and inserts the replacement edges into the
/// rotation slots where each decoration was attached. `slots` picks which
/// attachment block to use at the two boundary vertices of each decoration.
fn apply(map: &PlanarMap, decs: &[&Decoration], slots: &[(usize, usize)]) -> Result<Applied> {
    let n = map.num_vertices();
    let mut rot = map.rotations();
    let mut deleted = vec![false; n];
    let mut added = Vec::new();
    let mut edges: HashSet<(VertexId, VertexId)> = HashSet::new();
    for (dec, &(sv, sw)) in decs.iter().zip(slots) {
        let mut in_h = vec![false; n];
        for &u in &dec.vertices {
            in_h[u.idx()] = true;
            deleted[u.idx()] = true;
        }
        if let [v, w] = dec.boundary[..] {
            let key = (v.min(w), v.max(w));
            if map.adjacent(v, w) || !edges.insert(key) {
                continue;
            }
            for (a, b, slot) in [(v, w, sv), (w, v, sw)] {
                let starts = block_starts(&rot[a.idx()], &in_h);
                let at = starts[slot % starts.len()];
                rot[a.idx()].insert(at, b);
            }
            added.push(key);
        }
    }
    let mut new_id = vec![None; n];
    let mut labels = Vec::new();
    let mut rim = Vec::new();
    for v in map.vertices().filter(|v| !deleted[v.idx()]) {
        new_id[v.idx()] = Some(VertexId::from(labels.len()));
        labels.push(map.label(v));
        rim.push(map.is_rim(v));
    }
    if labels.is_empty() {
        return Err(Error::EverythingIsADecoration);
    }
    let rotations: Vec<Vec<VertexId>> = map
        .vertices()
        .filter(|v| !deleted[v.idx()])
        .map(|v| {
            rot[v.idx()]
                .iter()
                .filter_map(|w| new_id[w.idx()])
                .collect()
        })
        .collect();
    let hint = map
        .face(map.outer_face())
        .walk
        .iter()
        .find(|&&d| !deleted[map.origin(d).idx()] && !deleted[map.head(d).idx()])
        .map(|&d| {
            (
                new_id[map.origin(d).idx()].unwrap(),
                new_id[map.head(d).idx()].unwrap(),
            )
        });
    let built = PlanarMap::from_rotations(labels, rotations, rim, hint, map.meta().clone());
    let map = match built {
        Err(Error::NoEdges) => return Err(Error::EverythingIsADecoration),
        other => other?,
    };
    Ok(Applied { map, new_id, added })
}

/// Removes decorations round by round until none remain. Within a round,
/// pairwise disjoint decorations are removed together; decorations touching
/// one already scheduled wait for the next round.
pub fn eliminate_decorations(map: &PlanarMap) -> Result<Elimination> {
    let mut current = map.clone();
    let mut correspondence: Vec<Option<VertexId>> = map.vertices().map(Some).collect();
    let mut removed = Vec::new();
    let mut added_edges = Vec::new();
    let mut rounds = 0;
    let to_original = |cur: &PlanarMap, vs: &[VertexId]| -> Vec<VertexId> {
        let mut out: Vec<VertexId> = vs
            .iter()
            .map(|&v| map.vertex(cur.label(v)).unwrap())
            .collect();
        out.sort_unstable();
        out
    };
    loop {
        let scan = find_decorations(&current);
        if scan.decorations.is_empty() {
            break;
        }
        rounds += 1;
        let mut touched = vec![false; current.num_vertices()];
        let mut batch: Vec<&Decoration> = Vec::new();
        for d in &scan.decorations {
            if d.vertices
                .iter()
                .chain(&d.boundary)
                .any(|v| touched[v.idx()])
            {
                continue;
            }
            for v in d.vertices.iter().chain(&d.boundary) {
                touched[v.idx()] = true;
            }
            batch.push(d);
        }
        let applied = match apply(&current, &batch, &vec![(0, 0); batch.len()]) {
            Ok(a) => a,
            Err(Error::NonPlanarTrace { .. }) => {
                // one decoration at a time, trying every pair of attachment slots
                let d = batch[0];
                let mut found = None;
                'slots: for sv in 0..current.degree(d.boundary[0]) {
                    for sw in 0..current.degree(*d.boundary.last().unwrap()) {
                        if let Ok(a) = apply(&current, &[d], &[(sv, sw)]) {
                            found = Some(a);
                            break 'slots;
                        }
                    }
                }
                batch.truncate(1);
                found.ok_or_else(|| {
                    Error::Postcondition("no planar slot for a replacement edge".into())
                })?
            }
            Err(e) => return Err(e),
        };
        for d in &batch {
            removed.push(Decoration {
                vertices: to_original(&current, &d.vertices),
                boundary: to_original(&current, &d.boundary),
            });
        }
        for &(a, b) in &applied.added {
            let (a, b) = (
                map.vertex(current.label(a)).unwrap(),
                map.vertex(current.label(b)).unwrap(),
            );
            added_edges.push((a.min(b), a.max(b)));
        }
        for c in correspondence.iter_mut() {
            *c = c.and_then(|v| applied.new_id[v.idx()]);
        }
        current = applied.map;
    }
    if let Some(v) = current
        .vertices()
        .find(|&v| !current.is_rim(v) && current.degree(v) < 3)
    {
        return Err(Error::Postcondition(format!(
            "vertex {} keeps degree {} after elimination",
            current.label(v),
            current.degree(v)
        )));
    }
    Ok(Elimination {
        map: current,
        correspondence,
        removed,
        added_edges,
        rounds,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QiReport {
    pub pairs: usize,
    /// Largest `d_G / d_G'` over the checked pairs.
    pub max_stretch: Rational,
    pub max_decoration: usize,
}

/// Checks `d_G' ≤ d_G ≤ (2/c)·d_G'` on every certified pair of surviving
/// vertices, and that every removed decoration has at most `2/c` vertices.
pub fn quasi_isometry_check(g: &PlanarMap, elim: &Elimination, c: Rational) -> Result<QiReport> {
    if *c.numer() == 0 {
        return Err(Error::CheegerNonpositive);
    }
    let (cn, cd) = (*c.numer(), *c.denom());
    for d in &elim.removed {
        if d.vertices.len() as u64 * cn > 2 * cd {
            return Err(Error::ViolationFound(format!(
                "decoration of {} vertices exceeds 2/c = {}",
                d.vertices.len(),
                Ratio::new(2 * cd, cn)
            )));
        }
    }
    let mg = Metric::new(g);
    let mh = Metric::new(&elim.map);
    let survivors: Vec<(VertexId, VertexId)> = g
        .vertices()
        .filter_map(|v| elim.correspondence[v.idx()].map(|w| (v, w)))
        .collect();
    let mut pairs = 0;
    let mut max_stretch = Ratio::from_integer(0);
    for (a, &(x, x2)) in survivors.iter().enumerate() {
        for &(y, y2) in &survivors[a + 1..] {
            if !mg.certified(x, y) {
                continue;
            }
            let (Some(d), Some(d2)) = (mg.dist(x, y), mh.dist(x2, y2)) else {
                continue;
            };
            pairs += 1;
            if d2 > d || d as u64 * cn > 2 * d2 as u64 * cd {
                return Err(Error::ViolationFound(format!(
                    "pair ({}, {}): d_G = {d}, d_G' = {d2}",
                    g.label(x),
                    g.label(y)
                )));
            }
            max_stretch = max_stretch.max(ratio(d, d2));
        }
    }
    Ok(QiReport {
        pairs,
        max_stretch,
        max_decoration: elim.max_decoration_size(),
    })
}

/// A finite plane graph with minimum degree two whose outer face is bounded
/// by `boundary`.
#[derive(Clone, Debug)]
pub struct Disk {
    pub map: PlanarMap,
    pub boundary: Cycle,
    /// Vertex of the source map to its disk vertex.
    pub correspondence: Vec<Option<VertexId>>,
}

/// The disk made of a cycle and everything it encloses. Edges outside the
/// cycle joining two of its vertices are left out.
pub fn disk_from_cycle(map: &PlanarMap, cycle: &Cycle) -> Result<Disk> {
    let reg = cycle_interior(map, cycle)?;
    if cycle
        .vertices()
        .iter()
        .chain(&reg.interior_vertices)
        .any(|&v| map.is_rim(v))
    {
        return Err(Error::TouchesRim);
    }
    let mut keep = vec![false; map.num_vertices()];
    for &v in cycle.vertices().iter().chain(&reg.interior_vertices) {
        keep[v.idx()] = true;
    }
    let outside_dart = cycle
        .darts()
        .iter()
        .map(|&d| {
            if reg.contains_face(map.face_of(d)) {
                map.twin(d)
            } else {
                d
            }
        })
        .next()
        .unwrap();
    let hint = Some((map.origin(outside_dart), map.head(outside_dart)));
    let region = &reg.region;
    let (disk, correspondence) = map.restrict(
        &keep,
        |d| region.is_boundary_edge(map, d) || region.edge_strictly_inside(map, d),
        hint,
    )?;
    if let Some(v) = disk.vertices().find(|&v| disk.degree(v) < 2) {
        return Err(Error::DegreeBelowTwo(disk.label(v)));
    }
    if let Some(f) = disk.bounded_faces().find(|f| !disk.face_is_simple(f.id)) {
        return Err(Error::FaceNotACycle(f.id.idx()));
    }
    let boundary = Cycle::new(
        &disk,
        cycle
            .vertices()
            .iter()
            .map(|v| correspondence[v.idx()].unwrap())
            .collect(),
    )?;
    Ok(Disk {
        map: disk,
        boundary,
        correspondence,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LiiCheck {
    pub holds: bool,
    pub bounded_faces: usize,
    pub max_face: usize,
    pub perimeter: usize,
}

/// Every bounded face has length at most `d` and there are at most
/// `k·|∂|` bounded faces.
pub fn lii_check(disk: &Disk, k: Rational, d: usize) -> LiiCheck {
    let bounded_faces = disk.map.bounded_faces().count();
    let max_face = disk.map.bounded_faces().map(|f| f.len()).max().unwrap_or(0);
    let perimeter = disk.map.face(disk.map.outer_face()).len();
    let holds = max_face <= d
        && Ratio::from_integer(bounded_faces as u64) <= k * Ratio::from_integer(perimeter as u64);
    LiiCheck {
        holds,
        bounded_faces,
        max_face,
        perimeter,
    }
}

/// Counts for one cycle: `faces` enclosed, `interior` vertices strictly
/// inside, and the vertex boundary size of the interior.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleCount {
    pub len: usize,
    pub faces: usize,
    pub interior: usize,
    pub boundary: usize,
}

impl CycleCount {
    pub fn ratio(&self) -> Rational {
        ratio(self.faces, self.len)
    }
}

pub fn cycle_counts(map: &PlanarMap, cycle: &Cycle) -> Result<CycleCount> {
    let reg = cycle_interior(map, cycle)?;
    if cycle
        .vertices()
        .iter()
        .chain(&reg.interior_vertices)
        .any(|&v| map.is_rim(v))
    {
        return Err(Error::TouchesRim);
    }
    Ok(CycleCount {
        len: cycle.len(),
        faces: reg.region.faces().count(),
        interior: reg.interior_vertices.len(),
        boundary: vertex_boundary(map, &reg.interior_vertices).len(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacesInside {
    pub max: Rational,
    pub table: Vec<CycleCount>,
}

/// Faces enclosed per cycle length, and the largest such ratio.
pub fn faces_inside_ratio(map: &PlanarMap, cycles: &[Cycle]) -> Result<FacesInside> {
    let table = cycles
        .iter()
        .map(|c| cycle_counts(map, c))
        .collect::<Result<Vec<_>>>()?;
    let max = table
        .iter()
        .map(CycleCount::ratio)
        .max()
        .unwrap_or(Ratio::from_integer(0));
    Ok(FacesInside { max, table })
}

/// Outer walks of the sets `{v : rim distance ≥ k}`, kept when they are
/// simple cycles.
pub fn level_cycles(map: &PlanarMap) -> Vec<Cycle> {
    let metric = Metric::new(map);
    let rd = metric.rim_distances();
    let Some(top) = rd.iter().flatten().max().copied() else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for k in 1..=top {
        let inside = |v: VertexId| rd[v.idx()].is_none_or(|r| r >= k);
        let Some(walk) = outer_walk_of(map, |d| inside(map.origin(d)) && inside(map.head(d)))
        else {
            continue;
        };
        let vs: Vec<VertexId> = walk.iter().map(|&d| map.origin(d)).collect();
        if let Ok(c) = Cycle::new(map, vs) {
            out.push(c);
        }
    }
    out
}

/// Canonical key for a cycle: smallest rotation over both directions.
fn cycle_key(c: &Cycle) -> Vec<VertexId> {
    let mut best: Option<Vec<VertexId>> = None;
    let fwd = c.vertices().to_vec();
    let mut bwd = fwd.clone();
    bwd.reverse();
    for seq in [fwd, bwd] {
        let k = (0..seq.len()).min_by_key(|&i| seq[i]).unwrap();
        let mut r = seq.clone();
        r.rotate_left(k);
        if best.as_ref().is_none_or(|b| r < *b) {
            best = Some(r);
        }
    }
    best.unwrap()
}

/// Rim-free cycles with rim-free interiors used by default: geodetic hulls
/// and boundaries of core faces, plus level cycles. Hull failures other than
/// an exceeded cap skip that face; the count is returned alongside.
pub fn sample_cycles(map: &PlanarMap, geodesic_cap: u64) -> Result<(Vec<Cycle>, usize)> {
    let metric = Metric::new(map);
    let mut out = Vec::new();
    let mut keys = HashSet::new();
    let mut skipped = 0;
    let mut push = |c: Cycle, out: &mut Vec<Cycle>| {
        if cycle_counts(map, &c).is_ok() && keys.insert(cycle_key(&c)) {
            out.push(c);
        }
    };
    for f in map.core_faces() {
        push(Cycle::of_face(map, f)?, &mut out);
        match geodetic_hull(&metric, f, geodesic_cap) {
            Ok(t) => push(t.terminal_cycle(map)?, &mut out),
            Err(e) if e.is_budget() => return Err(e),
            Err(_) => skipped += 1,
        }
    }
    for c in level_cycles(map) {
        push(c, &mut out);
    }
    Ok((out, skipped))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    Refused,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Certified => "certified",
            Verdict::Refused => "refused",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertificateLine {
    pub count: CycleCount,
    /// `|∂S| ≥ c'·|S|` for the interior `S`.
    pub premise: bool,
    /// `F ≤ Δ(G)·(|C| + |S|)` and `F ≤ ((1+c')Δ(G)/c')·|C|`.
    pub counting: bool,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub cheeger: Cheeger,
    pub max_degree: usize,
    pub codegree: Option<usize>,
    /// `(1+c')·Δ(G)/c'`.
    pub bound: Rational,
    pub k_hat: Rational,
    pub per_cycle: Vec<CertificateLine>,
    pub skipped_hulls: usize,
    pub decorations_removed: usize,
    pub verdict: Verdict,
}

impl Certificate {
    pub fn c_prime(&self) -> Rational {
        self.cheeger.ratio
    }

    pub fn to_json(&self) -> Value {
        json!({
            "c_prime": Fraction::from(self.c_prime()),
            "k_hat": Fraction::from(self.k_hat),
            "per_cycle": self.per_cycle.iter().map(|l| json!({
                "len": l.count.len,
                "faces": l.count.faces,
            })).collect::<Vec<_>>(),
            "verdict": self.verdict.as_str(),
        })
    }
}

/// Eliminates decorations, measures `c'` on what is left, and checks the
/// counting chain on every sampled cycle of the reduced map. `cycles`, given
/// as label sequences, replace the default sample.
pub fn hyperbolicity_certificate(
    map: &PlanarMap,
    cfg: SearchConfig,
    geodesic_cap: u64,
    cycles: Option<&[Vec<i64>]>,
) -> Result<Certificate> {
    let elim = eliminate_decorations(map)?;
    let reduced = &elim.map;
    let cheeger = cheeger_lower(reduced, cfg)?;
    let c = cheeger.ratio;
    if *c.numer() == 0 {
        return Err(Error::CheegerNonpositive);
    }
    let max_degree = map.max_degree();
    let delta = Ratio::from_integer(max_degree as u64);
    let bound = (Ratio::from_integer(1) + c) * delta / c;

    let (sample, skipped_hulls) = match cycles {
        Some(list) => {
            let mut out = Vec::with_capacity(list.len());
            for labels in list {
                let vs = labels
                    .iter()
                    .map(|&l| reduced.vertex(l).ok_or(Error::UnknownVertex(l)))
                    .collect::<Result<Vec<_>>>()?;
                out.push(Cycle::new(reduced, vs)?);
            }
            (out, 0)
        }
        None => sample_cycles(reduced, geodesic_cap)?,
    };
    let mut per_cycle = Vec::with_capacity(sample.len());
    let mut k_hat = Ratio::from_integer(0);
    for cyc in &sample {
        let count = cycle_counts(reduced, cyc)?;
        let int = |x: usize| Ratio::from_integer(x as u64);
        let premise = int(count.boundary) >= c * int(count.interior);
        let counting = count.faces <= max_degree * (count.len + count.interior)
            && int(count.faces) <= bound * int(count.len);
        k_hat = k_hat.max(count.ratio());
        per_cycle.push(CertificateLine {
            count,
            premise,
            counting,
        });
    }
    let verdict = if per_cycle.iter().all(|l| l.premise && l.counting) {
        Verdict::Certified
    } else {
        Verdict::Refused
    };
    Ok(Certificate {
        cheeger,
        max_degree,
        codegree: reduced.max_codegree(),
        bound,
        k_hat,
        per_cycle,
        skipped_hulls,
        decorations_removed: elim.removed.len(),
        verdict,
    })
}

/// Vertices reachable from `start` without passing through `blocked`.
#[cfg(test)]
fn reach(map: &PlanarMap, start: VertexId, blocked: &[VertexId]) -> Vec<VertexId> {
    let mut seen = vec![false; map.num_vertices()];
    for b in blocked {
        seen[b.idx()] = true;
    }
    seen[start.idx()] = true;
    let mut q = std::collections::VecDeque::from([start]);
    let mut out = vec![start];
    while let Some(v) = q.pop_front() {
        for w in map.neighbors(v) {
            if !seen[w.idx()] {
                seen[w.idx()] = true;
                out.push(w);
                q.push_back(w);
            }
        }
    }
    out.sort_unstable();
    out
}
