//! Jordan-curve bookkeeping done combinatorially.
//!
//! A closed walk blocks the dual edges that cross its edges; the faces that
//! can no longer be reached from the outer face are the ones it encloses.
//! Everything here works on edge sets, so closed walks that touch or retrace
//! themselves (composites of a cycle arc and a geodesic) are handled the
//! same way as simple cycles.

use std::collections::VecDeque;

use super::{DartId, FaceId, PlanarMap, VertexId};
use crate::error::{Error, Result};

/// Fixed-size set of faces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FaceSet {
    bits: Vec<u64>,
    len: usize,
}

impl FaceSet {
    pub fn new(len: usize) -> Self {
        FaceSet {
            bits: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn insert(&mut self, f: FaceId) {
        self.bits[f.idx() / 64] |= 1 << (f.idx() % 64);
    }

    pub fn contains(&self, f: FaceId) -> bool {
        self.bits[f.idx() / 64] >> (f.idx() % 64) & 1 == 1
    }

    pub fn is_subset(&self, other: &FaceSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = FaceId> + '_ {
        (0..self.len)
            .map(FaceId::from)
            .filter(|&f| self.contains(f))
    }
}

/// The part of the plane enclosed by a set of boundary edges.
#[derive(Clone, Debug)]
pub struct Region {
    faces: FaceSet,
    boundary_edge: Vec<bool>,
    boundary_vertex: Vec<bool>,
}

impl Region {
    /// Region enclosed by the edges of the given darts (orientation ignored).
    pub fn enclosed_by(map: &PlanarMap, darts: impl IntoIterator<Item = DartId>) -> Region {
        let mut boundary_edge = vec![false; map.num_darts()];
        let mut boundary_vertex = vec![false; map.num_vertices()];
        for d in darts {
            boundary_edge[map.edge(d)] = true;
            boundary_vertex[map.origin(d).idx()] = true;
            boundary_vertex[map.head(d).idx()] = true;
        }
        let nf = map.num_faces();
        let mut reached = vec![false; nf];
        let mut queue = VecDeque::new();
        reached[map.outer_face().idx()] = true;
        queue.push_back(map.outer_face());
        while let Some(f) = queue.pop_front() {
            for &d in &map.face(f).walk {
                if boundary_edge[map.edge(d)] {
                    continue;
                }
                let g = map.face_of(map.twin(d));
                if !reached[g.idx()] {
                    reached[g.idx()] = true;
                    queue.push_back(g);
                }
            }
        }
        let mut faces = FaceSet::new(nf);
        for (i, r) in reached.iter().enumerate() {
            if !r {
                faces.insert(FaceId::from(i));
            }
        }
        Region {
            faces,
            boundary_edge,
            boundary_vertex,
        }
    }

    /// Region enclosed by the closed walk through `vertices` (consecutive
    /// entries, including last-to-first, must be adjacent).
    pub fn enclosed_by_walk(map: &PlanarMap, vertices: &[VertexId]) -> Result<Region> {
        Ok(Region::enclosed_by(map, walk_darts(map, vertices, true)?))
    }

    /// Region enclosed by the union of several open paths.
    pub fn enclosed_by_paths(map: &PlanarMap, paths: &[&[VertexId]]) -> Result<Region> {
        let mut darts = Vec::new();
        for p in paths {
            darts.extend(walk_darts(map, p, false)?);
        }
        Ok(Region::enclosed_by(map, darts))
    }

    pub fn faces(&self) -> &FaceSet {
        &self.faces
    }

    pub fn contains_face(&self, f: FaceId) -> bool {
        self.faces.contains(f)
    }

    pub fn is_boundary_edge(&self, map: &PlanarMap, d: DartId) -> bool {
        self.boundary_edge[map.edge(d)]
    }

    pub fn is_boundary_vertex(&self, v: VertexId) -> bool {
        self.boundary_vertex[v.idx()]
    }

    /// Edge not on the boundary with both sides enclosed.
    pub fn edge_strictly_inside(&self, map: &PlanarMap, d: DartId) -> bool {
        !self.is_boundary_edge(map, d)
            && self.contains_face(map.face_of(d))
            && self.contains_face(map.face_of(map.twin(d)))
    }

    /// Edge on the boundary or with at least one enclosed side.
    pub fn edge_inside(&self, map: &PlanarMap, d: DartId) -> bool {
        self.is_boundary_edge(map, d)
            || self.contains_face(map.face_of(d))
            || self.contains_face(map.face_of(map.twin(d)))
    }

    /// Vertex off the boundary whose incident faces are all enclosed.
    pub fn vertex_strictly_inside(&self, map: &PlanarMap, v: VertexId) -> bool {
        !self.boundary_vertex[v.idx()]
            && map.degree(v) > 0
            && map.darts(v).all(|d| self.contains_face(map.face_of(d)))
    }

    pub fn strictly_inside_vertices(&self, map: &PlanarMap) -> Vec<VertexId> {
        map.vertices()
            .filter(|&v| self.vertex_strictly_inside(map, v))
            .collect()
    }

    /// Every edge of the path lies inside (on the boundary or enclosed).
    pub fn path_inside(&self, map: &PlanarMap, path: &[VertexId]) -> bool {
        path.windows(2).all(|w| match map.dart_between(w[0], w[1]) {
            Some(d) => self.edge_inside(map, d),
            None => false,
        })
    }

    /// A path crosses the region when its endpoints are not strictly inside
    /// but one of its edges is.
    pub fn crossed_by(&self, map: &PlanarMap, path: &[VertexId]) -> bool {
        let (Some(&a), Some(&b)) = (path.first(), path.last()) else {
            return false;
        };
        if self.vertex_strictly_inside(map, a) || self.vertex_strictly_inside(map, b) {
            return false;
        }
        path.windows(2).any(|w| match map.dart_between(w[0], w[1]) {
            Some(d) => self.edge_strictly_inside(map, d),
            None => false,
        })
    }
}

/// Walk around the unbounded face of the subgraph made of the edges whose
/// darts satisfy `in_sub`, started from the smallest qualifying dart. `None`
/// when the subgraph has no edge next to the outer face of the map.
pub fn outer_walk_of(map: &PlanarMap, in_sub: impl Fn(DartId) -> bool) -> Option<Vec<DartId>> {
    let mut reached = vec![false; map.num_faces()];
    let mut queue = VecDeque::from([map.outer_face()]);
    reached[map.outer_face().idx()] = true;
    while let Some(f) = queue.pop_front() {
        for &d in &map.face(f).walk {
            if in_sub(d) {
                continue;
            }
            let g = map.face_of(map.twin(d));
            if !reached[g.idx()] {
                reached[g.idx()] = true;
                queue.push_back(g);
            }
        }
    }
    let start = (0..map.num_darts())
        .map(DartId::from)
        .find(|&d| in_sub(d) && reached[map.face_of(d).idx()])?;
    let rot_next_sub = |d: DartId| {
        let mut e = map.rot_next(d);
        while !in_sub(e) {
            e = map.rot_next(e);
        }
        e
    };
    let mut walk = vec![start];
    let mut d = rot_next_sub(map.twin(start));
    while d != start {
        walk.push(d);
        d = rot_next_sub(map.twin(d));
    }
    Some(walk)
}

/// Darts along a vertex sequence; `closed` adds the last-to-first dart.
pub fn walk_darts(map: &PlanarMap, vertices: &[VertexId], closed: bool) -> Result<Vec<DartId>> {
    let n = vertices.len();
    let steps = if closed { n } else { n.saturating_sub(1) };
    (0..steps)
        .map(|i| {
            let (u, v) = (vertices[i], vertices[(i + 1) % n]);
            map.dart_between(u, v).ok_or_else(|| {
                Error::NotACycle(format!(
                    "{} and {} are not adjacent",
                    map.label(u),
                    map.label(v)
                ))
            })
        })
        .collect()
}

/// A validated simple cycle, as a vertex sequence and its darts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    vertices: Vec<VertexId>,
    darts: Vec<DartId>,
}

impl Cycle {
    pub fn new(map: &PlanarMap, vertices: Vec<VertexId>) -> Result<Cycle> {
        if vertices.len() < 3 {
            return Err(Error::NotACycle(format!("length {} < 3", vertices.len())));
        }
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotACycle("repeated vertex".into()));
        }
        let darts = walk_darts(map, &vertices, true)?;
        Ok(Cycle { vertices, darts })
    }

    /// Boundary cycle of a bounded face with a simple walk.
    pub fn of_face(map: &PlanarMap, f: FaceId) -> Result<Cycle> {
        if !map.face_is_simple(f) {
            return Err(Error::FaceNotACycle(f.idx()));
        }
        Cycle::new(map, map.face_vertices(f))
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn darts(&self) -> &[DartId] {
        &self.darts
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.vertices.iter().position(|&w| w == v)
    }

    /// Vertices from position `i` forward to position `j`, both included.
    pub fn arc(&self, i: usize, j: usize) -> Vec<VertexId> {
        let n = self.len();
        let mut out = vec![self.vertices[i]];
        let mut k = i;
        while k != j {
            k = (k + 1) % n;
            out.push(self.vertices[k]);
        }
        out
    }
}

/// Faces and vertices enclosed by a simple cycle.
#[derive(Clone, Debug)]
pub struct CycleRegion {
    pub cycle: Cycle,
    pub region: Region,
    pub interior_vertices: Vec<VertexId>,
}

impl CycleRegion {
    pub fn interior_faces(&self) -> impl Iterator<Item = FaceId> + '_ {
        self.region.faces().iter()
    }

    pub fn boundary_vertices(&self) -> &[VertexId] {
        self.cycle.vertices()
    }

    pub fn contains_face(&self, f: FaceId) -> bool {
        self.region.contains_face(f)
    }
}

/// Interior of a simple cycle. Fails with `CycleTouchesOuterFace` when the
/// cycle is the whole component, so neither side is distinguished.
pub fn cycle_interior(map: &PlanarMap, cycle: &Cycle) -> Result<CycleRegion> {
    let region = Region::enclosed_by(map, cycle.darts().iter().copied());
    let comp = map.components();
    let c = comp[cycle.vertices()[0].idx()];
    let component_edges: usize = map
        .vertices()
        .filter(|v| comp[v.idx()] == c)
        .map(|v| map.degree(v))
        .sum::<usize>()
        / 2;
    if component_edges == cycle.len() {
        return Err(Error::CycleTouchesOuterFace);
    }
    let interior_vertices = region.strictly_inside_vertices(map);
    Ok(CycleRegion {
        cycle: cycle.clone(),
        region,
        interior_vertices,
    })
}

/// Whether `path` crosses the cycle bounding `region`.
pub fn path_crosses_cycle(map: &PlanarMap, path: &[VertexId], region: &CycleRegion) -> bool {
    region.region.crossed_by(map, path)
}
