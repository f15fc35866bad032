//! Combinatorial plane graphs.
//!
//! A [`PlanarMap`] stores an embedding as a rotation system: every vertex
//! owns a counterclockwise cyclic sequence of darts (directed half-edges),
//! and each dart knows its twin. Faces are traced with the rule
//! `next(d) = rotation_successor(twin(d))`, so every face lies to the right
//! of the darts on its walk and bounded faces are traced clockwise.
//!
//! Windows of infinite graphs mark their *rim*: vertices that stand in for
//! the part of the graph outside the window. One face is designated as the
//! unbounded (outer) face; codegree statistics ignore it.

mod io;
mod region;

pub use io::{from_json, load, save, to_json, FORMAT_TAG};
pub use region::{
    cycle_interior, outer_walk_of, path_crosses_cycle, Cycle, CycleRegion, FaceSet, Region,
};

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

macro_rules! id_type {
    ($(#[$m:meta])* $name:ident) => {
        $(#[$m])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn idx(self) -> usize {
                self.0 as usize
            }
        }

        impl From<usize> for $name {
            #[inline]
            fn from(i: usize) -> Self {
                $name(i as u32)
            }
        }
    };
}

id_type!(
    /// Dense vertex index (`0..num_vertices`).
    VertexId
);
id_type!(
    /// Dense dart index; darts of one vertex are contiguous in rotation order.
    DartId
);
id_type!(
    /// Face index in trace order.
    FaceId
);

/// Input to [`PlanarMap::build`]: labelled vertices with counterclockwise
/// neighbor lists, rim marks and an optional outer-face hint.
#[derive(Clone, Debug, Default)]
pub struct MapSpec {
    pub vertices: Vec<(i64, Vec<i64>)>,
    pub rim: Vec<i64>,
    pub outer_face_dart: Option<(i64, i64)>,
    pub meta: Value,
}

/// A traced face: its dart walk and whether it is bounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub id: FaceId,
    pub walk: Vec<DartId>,
    pub bounded: bool,
}

impl Face {
    /// Number of edge-sides on the walk.
    pub fn len(&self) -> usize {
        self.walk.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walk.is_empty()
    }
}

/// Degree and codegree summary. `max_codegree` is `None` for forests.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeStats {
    pub max_degree: usize,
    pub max_codegree: Option<usize>,
    pub degree_histogram: BTreeMap<usize, usize>,
    pub codegree_histogram: BTreeMap<usize, usize>,
}

impl DegreeStats {
    pub fn codegree(&self) -> Result<usize> {
        self.max_codegree.ok_or(Error::NoBoundedFace)
    }
}

/// An immutable plane graph given by a rotation system.
#[derive(Clone, Debug)]
pub struct PlanarMap {
    labels: Vec<i64>,
    index: HashMap<i64, VertexId>,
    first_dart: Vec<u32>,
    origin: Vec<VertexId>,
    head: Vec<VertexId>,
    twin: Vec<DartId>,
    rim: Vec<bool>,
    faces: Vec<Face>,
    dart_face: Vec<FaceId>,
    outer: FaceId,
    meta: Value,
}

impl PlanarMap {
    /// Validates a labelled specification and traces its faces.
    pub fn build(spec: MapSpec) -> Result<PlanarMap> {
        let mut index = HashMap::with_capacity(spec.vertices.len());
        for (i, (label, _)) in spec.vertices.iter().enumerate() {
            if index.insert(*label, VertexId::from(i)).is_some() {
                return Err(Error::DuplicateVertex(*label));
            }
        }
        let lookup = |l: i64| index.get(&l).copied().ok_or(Error::UnknownVertex(l));
        let mut rotations = Vec::with_capacity(spec.vertices.len());
        for (_, nbrs) in &spec.vertices {
            rotations.push(
                nbrs.iter()
                    .map(|&l| lookup(l))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let mut rim = vec![false; spec.vertices.len()];
        for l in &spec.rim {
            rim[lookup(*l)?.idx()] = true;
        }
        let hint = match spec.outer_face_dart {
            Some((u, v)) => Some((lookup(u)?, lookup(v)?)),
            None => None,
        };
        let labels = spec.vertices.iter().map(|(l, _)| *l).collect();
        Self::from_rotations(labels, rotations, rim, hint, spec.meta)
    }

    /// Builds a map from dense rotation lists. Labels are carried through
    /// unchanged; `hint` names a dart on the outer face.
    pub fn from_rotations(
        labels: Vec<i64>,
        rotations: Vec<Vec<VertexId>>,
        rim: Vec<bool>,
        hint: Option<(VertexId, VertexId)>,
        meta: Value,
    ) -> Result<PlanarMap> {
        let n = rotations.len();
        assert_eq!(labels.len(), n);
        assert_eq!(rim.len(), n);
        let mut index = HashMap::with_capacity(n);
        for (i, &l) in labels.iter().enumerate() {
            if index.insert(l, VertexId::from(i)).is_some() {
                return Err(Error::DuplicateVertex(l));
            }
        }

        let mut first_dart = Vec::with_capacity(n + 1);
        let mut origin = Vec::new();
        let mut head = Vec::new();
        first_dart.push(0u32);
        for (v, rot) in rotations.iter().enumerate() {
            for (k, &w) in rot.iter().enumerate() {
                if w.idx() >= n {
                    return Err(Error::UnknownVertex(w.0 as i64));
                }
                if w.idx() == v || rot[..k].contains(&w) {
                    return Err(Error::LoopOrMultiEdge(labels[v], labels[w.idx()]));
                }
                origin.push(VertexId::from(v));
                head.push(w);
            }
            first_dart.push(origin.len() as u32);
        }
        if origin.is_empty() {
            return Err(Error::NoEdges);
        }

        let mut twin = vec![DartId(u32::MAX); origin.len()];
        for d in 0..origin.len() {
            let (u, w) = (origin[d], head[d]);
            let range = first_dart[w.idx()] as usize..first_dart[w.idx() + 1] as usize;
            match range.clone().find(|&e| head[e] == u) {
                Some(e) => twin[d] = DartId::from(e),
                None => return Err(Error::AsymmetricAdjacency(labels[u.idx()], labels[w.idx()])),
            }
        }

        let mut map = PlanarMap {
            labels,
            index,
            first_dart,
            origin,
            head,
            twin,
            rim,
            faces: Vec::new(),
            dart_face: Vec::new(),
            outer: FaceId(0),
            meta: if meta.is_null() {
                Value::Object(Default::default())
            } else {
                meta
            },
        };
        map.trace();
        map.check_euler()?;
        map.outer = match hint {
            Some((u, v)) => {
                let d = map
                    .dart_between(u, v)
                    .ok_or(Error::BadOuterDart(map.label(u), map.label(v)))?;
                map.dart_face[d.idx()]
            }
            None => map.pick_outer(),
        };
        let outer = map.outer;
        for f in &mut map.faces {
            f.bounded = f.id != outer;
        }
        Ok(map)
    }

    fn trace(&mut self) {
        let nd = self.origin.len();
        let mut dart_face = vec![FaceId(u32::MAX); nd];
        let mut faces = Vec::new();
        for start in 0..nd {
            if dart_face[start].0 != u32::MAX {
                continue;
            }
            let id = FaceId::from(faces.len());
            let mut walk = Vec::new();
            let mut d = DartId::from(start);
            loop {
                dart_face[d.idx()] = id;
                walk.push(d);
                d = self.face_next(d);
                if d.idx() == start {
                    break;
                }
            }
            faces.push(Face {
                id,
                walk,
                bounded: true,
            });
        }
        self.faces = faces;
        self.dart_face = dart_face;
    }

    fn check_euler(&self) -> Result<()> {
        let comp = self.components();
        let ncomp_with_edges = {
            let mut seen = vec![false; self.num_vertices()];
            let mut c = 0;
            for v in self.vertices() {
                if self.degree(v) > 0 && !seen[comp[v.idx()]] {
                    seen[comp[v.idx()]] = true;
                    c += 1;
                }
            }
            c
        };
        let v = self.vertices().filter(|&v| self.degree(v) > 0).count();
        let e = self.num_edges();
        let f = self.faces.len();
        if v + f != e + 2 * ncomp_with_edges {
            return Err(Error::NonPlanarTrace {
                vertices: v,
                edges: e,
                faces: f,
                components: ncomp_with_edges,
            });
        }
        // each component must satisfy Euler on its own
        let mut per = vec![(0usize, 0usize, 0usize); self.num_vertices()];
        for x in self.vertices() {
            if self.degree(x) > 0 {
                per[comp[x.idx()]].0 += 1;
                per[comp[x.idx()]].1 += self.degree(x);
            }
        }
        for f in &self.faces {
            per[comp[self.origin(f.walk[0]).idx()]].2 += 1;
        }
        for &(cv, cd, cf) in &per {
            if cv > 0 && cv + cf != cd / 2 + 2 {
                return Err(Error::NonPlanarTrace {
                    vertices: v,
                    edges: e,
                    faces: f,
                    components: ncomp_with_edges,
                });
            }
        }
        Ok(())
    }

    fn pick_outer(&self) -> FaceId {
        let mut best: Option<(usize, usize, FaceId)> = None;
        for f in &self.faces {
            let mut rims: Vec<VertexId> = f
                .walk
                .iter()
                .map(|&d| self.origin(d))
                .filter(|&v| self.is_rim(v))
                .collect();
            rims.sort_unstable();
            rims.dedup();
            let key = (rims.len(), f.len());
            match best {
                Some((r, l, _)) if (r, l) >= key => {}
                _ => best = Some((key.0, key.1, f.id)),
            }
        }
        best.map(|b| b.2).unwrap_or(FaceId(0))
    }

    /// Component index of every vertex.
    pub fn components(&self) -> Vec<usize> {
        let n = self.num_vertices();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            stack.push(VertexId::from(s));
            while let Some(v) = stack.pop() {
                for w in self.neighbors(v) {
                    if comp[w.idx()] == usize::MAX {
                        comp[w.idx()] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn num_darts(&self) -> usize {
        self.origin.len()
    }

    pub fn num_edges(&self) -> usize {
        self.origin.len() / 2
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.labels.len()).map(VertexId::from)
    }

    pub fn label(&self, v: VertexId) -> i64 {
        self.labels[v.idx()]
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn vertex(&self, label: i64) -> Option<VertexId> {
        self.index.get(&label).copied()
    }

    pub fn is_rim(&self, v: VertexId) -> bool {
        self.rim[v.idx()]
    }

    pub fn rim_flags(&self) -> &[bool] {
        &self.rim
    }

    pub fn rim_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices().filter(|&v| self.is_rim(v))
    }

    pub fn degree(&self, v: VertexId) -> usize {
        (self.first_dart[v.idx() + 1] - self.first_dart[v.idx()]) as usize
    }

    /// Outgoing darts of `v` in counterclockwise order.
    pub fn darts(&self, v: VertexId) -> impl Iterator<Item = DartId> + Clone {
        (self.first_dart[v.idx()]..self.first_dart[v.idx() + 1]).map(DartId)
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + Clone + '_ {
        self.darts(v).map(move |d| self.head[d.idx()])
    }

    pub fn origin(&self, d: DartId) -> VertexId {
        self.origin[d.idx()]
    }

    pub fn head(&self, d: DartId) -> VertexId {
        self.head[d.idx()]
    }

    pub fn twin(&self, d: DartId) -> DartId {
        self.twin[d.idx()]
    }

    /// Canonical edge index: the smaller of the two dart indices.
    pub fn edge(&self, d: DartId) -> usize {
        d.idx().min(self.twin[d.idx()].idx())
    }

    pub fn rot_next(&self, d: DartId) -> DartId {
        let v = self.origin(d).idx();
        let (lo, hi) = (self.first_dart[v], self.first_dart[v + 1]);
        if d.0 + 1 == hi {
            DartId(lo)
        } else {
            DartId(d.0 + 1)
        }
    }

    pub fn rot_prev(&self, d: DartId) -> DartId {
        let v = self.origin(d).idx();
        let (lo, hi) = (self.first_dart[v], self.first_dart[v + 1]);
        if d.0 == lo {
            DartId(hi - 1)
        } else {
            DartId(d.0 - 1)
        }
    }

    /// Successor of `d` along its face.
    pub fn face_next(&self, d: DartId) -> DartId {
        self.rot_next(self.twin(d))
    }

    pub fn dart_between(&self, u: VertexId, v: VertexId) -> Option<DartId> {
        self.darts(u).find(|&d| self.head(d) == v)
    }

    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.dart_between(u, v).is_some()
    }

    pub fn face_of(&self, d: DartId) -> FaceId {
        self.dart_face[d.idx()]
    }

    /// Traced faces, i.e. the face records of the map.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, f: FaceId) -> &Face {
        &self.faces[f.idx()]
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn outer_face(&self) -> FaceId {
        self.outer
    }

    pub fn bounded_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(|f| f.bounded)
    }

    /// Origins of the face walk, in walk order.
    pub fn face_vertices(&self, f: FaceId) -> Vec<VertexId> {
        self.face(f).walk.iter().map(|&d| self.origin(d)).collect()
    }

    /// True when the face walk visits no vertex twice.
    pub fn face_is_simple(&self, f: FaceId) -> bool {
        let mut vs = self.face_vertices(f);
        let n = vs.len();
        vs.sort_unstable();
        vs.dedup();
        vs.len() == n && n >= 3
    }

    /// A bounded face with a simple boundary that avoids the rim.
    pub fn is_core_face(&self, f: FaceId) -> bool {
        self.face(f).bounded
            && self.face_is_simple(f)
            && self.face_vertices(f).iter().all(|&v| !self.is_rim(v))
    }

    pub fn core_faces(&self) -> Vec<FaceId> {
        self.faces
            .iter()
            .map(|f| f.id)
            .filter(|&f| self.is_core_face(f))
            .collect()
    }

    pub fn meta(&self) -> &Value {
        &self.meta
    }

    pub fn with_meta(mut self, meta: Value) -> Self {
        self.meta = meta;
        self
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Maximum length over bounded faces, `None` when there is none.
    pub fn max_codegree(&self) -> Option<usize> {
        self.bounded_faces().map(Face::len).max()
    }

    pub fn degree_stats(&self) -> DegreeStats {
        let mut degree_histogram = BTreeMap::new();
        for v in self.vertices() {
            *degree_histogram.entry(self.degree(v)).or_insert(0) += 1;
        }
        let mut codegree_histogram = BTreeMap::new();
        for f in self.bounded_faces() {
            *codegree_histogram.entry(f.len()).or_insert(0) += 1;
        }
        DegreeStats {
            max_degree: self.max_degree(),
            max_codegree: self.max_codegree(),
            degree_histogram,
            codegree_histogram,
        }
    }

    /// Dense rotation lists, e.g. as a starting point for a transformed map.
    pub fn rotations(&self) -> Vec<Vec<VertexId>> {
        self.vertices()
            .map(|v| self.neighbors(v).collect())
            .collect()
    }

    /// The submap on the kept vertices and kept edges (an edge needs both
    /// endpoints kept). Returns the new map and the old-to-new vertex index.
    pub fn restrict(
        &self,
        keep_vertex: &[bool],
        keep_edge: impl Fn(DartId) -> bool,
        hint: Option<(VertexId, VertexId)>,
    ) -> Result<(PlanarMap, Vec<Option<VertexId>>)> {
        let mut new_id = vec![None; self.num_vertices()];
        let mut labels = Vec::new();
        let mut rim = Vec::new();
        for v in self.vertices() {
            if keep_vertex[v.idx()] {
                new_id[v.idx()] = Some(VertexId::from(labels.len()));
                labels.push(self.label(v));
                rim.push(self.is_rim(v));
            }
        }
        let mut rotations = Vec::with_capacity(labels.len());
        for v in self.vertices().filter(|v| keep_vertex[v.idx()]) {
            rotations.push(
                self.darts(v)
                    .filter(|&d| {
                        keep_vertex[self.head(d).idx()] && keep_edge(d) && keep_edge(self.twin(d))
                    })
                    .map(|d| new_id[self.head(d).idx()].unwrap())
                    .collect(),
            );
        }
        let hint = hint.map(|(u, v)| (new_id[u.idx()].unwrap(), new_id[v.idx()].unwrap()));
        let map = PlanarMap::from_rotations(labels, rotations, rim, hint, Value::Null)?;
        Ok((map, new_id))
    }

    /// Induced submap after deleting the given vertices.
    pub fn without_vertices(
        &self,
        removed: &[VertexId],
    ) -> Result<(PlanarMap, Vec<Option<VertexId>>)> {
        let mut keep = vec![true; self.num_vertices()];
        for v in removed {
            keep[v.idx()] = false;
        }
        self.restrict(&keep, |_| true, None)
    }

    /// Labelled specification of this map; `build(to_spec())` reproduces it.
    pub fn to_spec(&self) -> MapSpec {
        let outer = self.face(self.outer);
        let d = outer.walk[0];
        MapSpec {
            vertices: self
                .vertices()
                .map(|v| {
                    (
                        self.label(v),
                        self.neighbors(v).map(|w| self.label(w)).collect(),
                    )
                })
                .collect(),
            rim: self.rim_vertices().map(|v| self.label(v)).collect(),
            outer_face_dart: Some((self.label(self.origin(d)), self.label(self.head(d)))),
            meta: self.meta.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(adj: &[(i64, &[i64])], rim: &[i64]) -> MapSpec {
        MapSpec {
            vertices: adj.iter().map(|(v, n)| (*v, n.to_vec())).collect(),
            rim: rim.to_vec(),
            outer_face_dart: None,
            meta: Value::Null,
        }
    }

    fn square() -> PlanarMap {
        // 0=(0,0) 1=(1,0) 2=(1,1) 3=(0,1), ccw orders
        PlanarMap::build(spec(
            &[(0, &[1, 3]), (1, &[2, 0]), (2, &[3, 1]), (3, &[0, 2])],
            &[],
        ))
        .unwrap()
    }

    #[test]
    fn four_cycle_has_two_faces_of_length_four() {
        let m = square();
        assert_eq!(m.num_faces(), 2);
        assert!(m.faces().iter().all(|f| f.len() == 4));
        assert_eq!(m.bounded_faces().count(), 1);
    }

    #[test]
    fn single_edge_traces_one_face_of_length_two() {
        let m = PlanarMap::build(spec(&[(0, &[1]), (1, &[0])], &[])).unwrap();
        assert_eq!(m.num_faces(), 1);
        assert_eq!(m.faces()[0].len(), 2);
        assert_eq!(m.max_codegree(), None);
        assert_eq!(m.degree_stats().codegree(), Err(Error::NoBoundedFace));
    }

    #[test]
    fn star_has_one_face_of_length_eight() {
        let m = PlanarMap::build(spec(
            &[
                (0, &[1, 2, 3, 4]),
                (1, &[0]),
                (2, &[0]),
                (3, &[0]),
                (4, &[0]),
            ],
            &[],
        ))
        .unwrap();
        assert_eq!(m.num_faces(), 1);
        assert_eq!(m.faces()[0].len(), 8);
    }

    #[test]
    fn hexagon_has_two_faces_of_length_six() {
        let adj: Vec<(i64, Vec<i64>)> = (0..6)
            .map(|i| (i, vec![(i + 1) % 6, (i + 5) % 6]))
            .collect();
        let m = PlanarMap::build(MapSpec {
            vertices: adj,
            ..Default::default()
        })
        .unwrap();
        assert_eq!(
            m.faces().iter().map(Face::len).collect::<Vec<_>>(),
            vec![6, 6]
        );
    }

    #[test]
    fn rejects_asymmetric_and_multi_edges() {
        let e = PlanarMap::build(spec(&[(0, &[1]), (1, &[])], &[])).unwrap_err();
        assert_eq!(e, Error::AsymmetricAdjacency(0, 1));
        let e = PlanarMap::build(spec(&[(0, &[1, 1]), (1, &[0, 0])], &[])).unwrap_err();
        assert_eq!(e, Error::LoopOrMultiEdge(0, 1));
        let e = PlanarMap::build(spec(&[(0, &[0])], &[])).unwrap_err();
        assert_eq!(e, Error::LoopOrMultiEdge(0, 0));
    }

    #[test]
    fn rejects_non_planar_rotation() {
        // K4 with a rotation that is not an embedding of genus 0
        let e = PlanarMap::build(spec(
            &[
                (0, &[1, 2, 3]),
                (1, &[0, 2, 3]),
                (2, &[0, 1, 3]),
                (3, &[0, 1, 2]),
            ],
            &[],
        ))
        .unwrap_err();
        assert!(matches!(e, Error::NonPlanarTrace { .. }), "{e:?}");
    }

    #[test]
    fn outer_face_prefers_rim_vertices() {
        // square with a pendant rim vertex hanging outside at 0
        let m = PlanarMap::build(spec(
            &[
                (0, &[1, 3, 4]),
                (1, &[2, 0]),
                (2, &[3, 1]),
                (3, &[0, 2]),
                (4, &[0]),
            ],
            &[4],
        ))
        .unwrap();
        let outer = m.face(m.outer_face());
        assert_eq!(outer.len(), 6);
        assert_eq!(m.max_codegree(), Some(4));
    }

    #[test]
    fn outer_hint_is_respected() {
        let mut s = spec(
            &[(0, &[1, 3]), (1, &[2, 0]), (2, &[3, 1]), (3, &[0, 2])],
            &[],
        );
        s.outer_face_dart = Some((1, 0));
        let m = PlanarMap::build(s).unwrap();
        let d = m.dart_between(VertexId(1), VertexId(0)).unwrap();
        assert_eq!(m.face_of(d), m.outer_face());
        let mut s = spec(&[(0, &[1]), (1, &[0])], &[]);
        s.outer_face_dart = Some((0, 7));
        assert!(PlanarMap::build(s).is_err());
    }

    #[test]
    fn spec_round_trip_preserves_faces() {
        let m = square();
        let again = PlanarMap::build(m.to_spec()).unwrap();
        assert_eq!(m.faces(), again.faces());
        assert_eq!(m.outer_face(), again.outer_face());
    }
}
