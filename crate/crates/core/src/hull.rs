//! Side classes of outside geodesics, their meet, closest geodesics, and the
//! geodetic hull of a face.
//!
//! For a cycle `C` and positions `i < j`, the *near* arc runs forward along
//! `C` from `x = C[i]` to `y = C[j]` and the *far* arc forward from `y` back
//! to `x`. An `x`–`y` geodesic `Γ` is in `S1` when the near arc lies between
//! the far arc and `Γ`, and in `S2` when the far arc lies between the near arc
//! and `Γ`. "Between" is read through enclosed face sets of the composite
//! closed walks, which also covers geodesics that share edges with `C`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::map::{Cycle, FaceId, PlanarMap, Region, VertexId};
use crate::metric::{is_geodetic_cycle, GeodesicPath, Metric};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    S1,
    S2,
    Neither,
}

/// A cycle with a chosen pair of positions, ready for side computations.
#[derive(Clone, Debug)]
pub struct ArcFrame {
    near: Vec<VertexId>,
    far: Vec<VertexId>,
    inside: Region,
}

impl ArcFrame {
    pub fn new(map: &PlanarMap, cycle: &Cycle, i: usize, j: usize) -> ArcFrame {
        ArcFrame {
            near: cycle.arc(i, j),
            far: cycle.arc(j, i),
            inside: Region::enclosed_by(map, cycle.darts().iter().copied()),
        }
    }

    /// The same cycle with the roles of the two arcs exchanged; `S2` of
    /// `self` is `S1` of the swap, with geodesics reversed.
    pub fn swapped(&self) -> ArcFrame {
        ArcFrame {
            near: self.far.clone(),
            far: self.near.clone(),
            inside: self.inside.clone(),
        }
    }

    pub fn x(&self) -> VertexId {
        self.near[0]
    }

    pub fn y(&self) -> VertexId {
        *self.near.last().unwrap()
    }

    pub fn near(&self) -> &[VertexId] {
        &self.near
    }

    pub fn far(&self) -> &[VertexId] {
        &self.far
    }

    /// No edge of the path is strictly inside the cycle.
    pub fn is_outside(&self, map: &PlanarMap, path: &[VertexId]) -> bool {
        path.windows(2).all(|w| match map.dart_between(w[0], w[1]) {
            Some(d) => !self.inside.edge_strictly_inside(map, d),
            None => false,
        })
    }

    fn composite(&self, map: &PlanarMap, arc: &[VertexId], gamma: &[VertexId]) -> Result<Region> {
        Region::enclosed_by_paths(map, &[arc, gamma])
    }

    pub fn classify(&self, map: &PlanarMap, gamma: &[VertexId]) -> Result<Side> {
        if gamma.first() != Some(&self.x()) || gamma.last() != Some(&self.y()) {
            return Err(Error::InvalidParameter(
                "geodesic does not join the chosen pair".into(),
            ));
        }
        if !self.is_outside(map, gamma) {
            return Err(Error::GeodesicEntersCycle);
        }
        if self
            .inside
            .faces()
            .is_subset(self.composite(map, &self.far, gamma)?.faces())
        {
            return Ok(Side::S1);
        }
        if self
            .inside
            .faces()
            .is_subset(self.composite(map, &self.near, gamma)?.faces())
        {
            return Ok(Side::S2);
        }
        Ok(Side::Neither)
    }

    /// `a ⪯ b`: `a` lies between the near arc and `b`.
    pub fn precedes(&self, map: &PlanarMap, a: &[VertexId], b: &[VertexId]) -> Result<bool> {
        let ra = self.composite(map, &self.near, a)?;
        let rb = self.composite(map, &self.near, b)?;
        Ok(ra.faces().is_subset(rb.faces()))
    }

    /// Greatest lower bound of two `S1` geodesics: between consecutive common
    /// vertices keep whichever segment lies inside the other's composite.
    pub fn meet(&self, map: &PlanarMap, a: &[VertexId], b: &[VertexId]) -> Result<Vec<VertexId>> {
        if self.classify(map, a)? != Side::S1 || self.classify(map, b)? != Side::S1 {
            return Err(Error::NotInS1);
        }
        if a.len() != b.len() {
            return Err(Error::Postcondition(
                "meet of geodesics of different lengths".into(),
            ));
        }
        let ra = self.composite(map, &self.near, a)?;
        let rb = self.composite(map, &self.near, b)?;
        let common: Vec<usize> = (0..a.len()).filter(|&k| a[k] == b[k]).collect();
        let mut out = vec![a[0]];
        for w in common.windows(2) {
            let (s, t) = (w[0], w[1]);
            let seg = if t == s + 1 || rb.path_inside(map, &a[s..=t]) {
                &a[s..=t]
            } else if ra.path_inside(map, &b[s..=t]) {
                &b[s..=t]
            } else {
                return Err(Error::Postcondition(format!(
                    "neither segment between {} and {} is inside the other composite",
                    map.label(a[s]),
                    map.label(a[t])
                )));
            };
            out.extend_from_slice(&seg[1..]);
        }
        Ok(out)
    }
}

/// Which class [`closest_geodesic`] should search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideChoice {
    S1,
    S2,
}

/// The `⪯`-least member of the chosen side class for the pair at cycle
/// positions `(i, j)`, found by folding `meet` over every enumerated member.
/// The result is checked for membership and for not being crossed by any
/// enumerated outside geodesic.
pub fn closest_geodesic(
    metric: &Metric,
    cycle: &Cycle,
    i: usize,
    j: usize,
    side: SideChoice,
    cap: u64,
) -> Result<GeodesicPath> {
    let map = metric.map();
    let base = ArcFrame::new(map, cycle, i, j);
    let frame = match side {
        SideChoice::S1 => base,
        SideChoice::S2 => base.swapped(),
    };
    let found = closest_in_frame(metric, &frame, cap)?;
    let mut vertices = found.vertices;
    if side == SideChoice::S2 {
        vertices.reverse();
    }
    Ok(GeodesicPath {
        vertices,
        certified: found.certified,
    })
}

/// Least element of `S1` of `frame`, oriented from `frame.x()` to `frame.y()`.
pub fn closest_in_frame(metric: &Metric, frame: &ArcFrame, cap: u64) -> Result<GeodesicPath> {
    let map = metric.map();
    let (x, y) = (frame.x(), frame.y());
    let all = metric.geodesics(x, y, cap)?;
    let outside: Vec<&GeodesicPath> = all
        .iter()
        .filter(|g| frame.is_outside(map, &g.vertices))
        .collect();
    let mut members = Vec::new();
    for g in &outside {
        if frame.classify(map, &g.vertices)? == Side::S1 {
            members.push(*g);
        }
    }
    let Some(first) = members.first() else {
        return Err(Error::EmptySideClass(map.label(x), map.label(y)));
    };
    let mut best = first.vertices.clone();
    for g in &members[1..] {
        best = frame.meet(map, &best, &g.vertices)?;
    }
    if frame.classify(map, &best)? != Side::S1 {
        return Err(Error::Postcondition(
            "closest geodesic left its side class".into(),
        ));
    }
    let composite = Region::enclosed_by_paths(map, &[frame.near(), &best])?;
    if let Some(g) = outside
        .iter()
        .find(|g| composite.crossed_by(map, &g.vertices))
    {
        return Err(Error::Postcondition(format!(
            "geodesic {:?} crosses the composite cycle",
            g.vertices.iter().map(|&v| map.label(v)).collect::<Vec<_>>()
        )));
    }
    Ok(GeodesicPath {
        certified: metric.certified(x, y),
        vertices: best,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullStep {
    pub x: VertexId,
    pub y: VertexId,
    pub discarded: Vec<VertexId>,
    pub inserted: Vec<VertexId>,
}

/// The shrinking cycles produced from a face boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullTrace {
    pub face: FaceId,
    pub cycles: Vec<Vec<VertexId>>,
    pub steps: Vec<HullStep>,
    pub geodetic: bool,
    /// No inserted geodesic touched the rim and every pair on the terminal
    /// cycle is certified.
    pub certified: bool,
}

impl HullTrace {
    pub fn terminal(&self) -> &[VertexId] {
        self.cycles.last().unwrap()
    }

    pub fn terminal_cycle(&self, map: &PlanarMap) -> Result<Cycle> {
        Cycle::new(map, self.terminal().to_vec())
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.cycles.iter().map(Vec::len).collect()
    }

    pub fn to_json(&self, map: &PlanarMap) -> Value {
        let labels = |vs: &[VertexId]| vs.iter().map(|&v| map.label(v)).collect::<Vec<_>>();
        json!({
            "face": self.face.idx(),
            "cycles": self.cycles.iter().map(|c| labels(c)).collect::<Vec<_>>(),
            "steps": self.steps.iter().map(|s| json!({
                "x": map.label(s.x),
                "y": map.label(s.y),
                "inserted": labels(&s.inserted),
            })).collect::<Vec<_>>(),
            "geodetic": self.geodetic,
            "certified": self.certified,
        })
    }
}

/// Splits a closed walk into its simple loops of length at least three.
fn simple_loops(walk: &[VertexId]) -> Vec<Vec<VertexId>> {
    let mut loops = Vec::new();
    let mut stack: Vec<VertexId> = Vec::new();
    for &v in walk.iter().chain(walk.first()) {
        if let Some(pos) = stack.iter().position(|&w| w == v) {
            let lp: Vec<VertexId> = stack.drain(pos + 1..).collect();
            if lp.len() >= 2 {
                let mut cyc = vec![v];
                cyc.extend(lp);
                loops.push(cyc);
            }
        } else {
            stack.push(v);
        }
    }
    loops.retain(|c| c.len() >= 3);
    loops
}

fn normalized(mut cycle: Vec<VertexId>) -> Vec<VertexId> {
    if let Some(k) = cycle
        .iter()
        .enumerate()
        .min_by_key(|(_, v)| **v)
        .map(|(k, _)| k)
    {
        cycle.rotate_left(k);
    }
    cycle
}

/// Repeatedly replaces a non-geodesic arc of the current cycle by the
/// closest geodesic on a side that keeps `face` inside, until the cycle is
/// geodetic. The first violating pair in scan order is used at every step.
pub fn geodetic_hull(metric: &Metric, face: FaceId, cap: u64) -> Result<HullTrace> {
    let map = metric.map();
    if face.idx() >= map.num_faces() || !map.face(face).bounded {
        return Err(Error::FaceNotBounded(face.idx()));
    }
    let mut cycle = Cycle::of_face(map, face)?;
    let start_len = cycle.len();
    let mut trace = HullTrace {
        face,
        cycles: vec![cycle.vertices().to_vec()],
        steps: Vec::new(),
        geodetic: false,
        certified: true,
    };
    loop {
        let check = is_geodetic_cycle(metric, &cycle);
        let Some((i, j)) = check.witness else {
            trace.geodetic = true;
            break;
        };
        if trace.steps.len() >= start_len {
            return Err(Error::Postcondition(
                "hull did not terminate within |C0| steps".into(),
            ));
        }
        let frame = ArcFrame::new(map, &cycle, i, j);
        let (kept, gamma, discarded) = match closest_in_frame(metric, &frame, cap) {
            Ok(g) => (frame.far().to_vec(), g.vertices, frame.near().to_vec()),
            Err(Error::EmptySideClass(..)) => {
                let swapped = frame.swapped();
                let g = closest_in_frame(metric, &swapped, cap)?;
                (swapped.far().to_vec(), g.vertices, swapped.near().to_vec())
            }
            Err(e) => return Err(e),
        };
        // kept runs from the end of gamma back to its start
        let mut walk = kept.clone();
        walk.extend_from_slice(&gamma[1..gamma.len() - 1]);
        let mut candidates: Vec<Vec<VertexId>> = Vec::new();
        for lp in simple_loops(&walk) {
            let c = Cycle::new(map, lp.clone())?;
            if Region::enclosed_by(map, c.darts().iter().copied()).contains_face(face) {
                candidates.push(lp);
            }
        }
        candidates.sort_by_key(|c| c.len());
        let Some(next) = candidates.into_iter().next() else {
            return Err(Error::Postcondition(
                "replacement cycle lost the face".into(),
            ));
        };
        if next.len() >= cycle.len() {
            return Err(Error::Postcondition(
                "replacement cycle is not shorter".into(),
            ));
        }
        if gamma.iter().any(|&v| map.is_rim(v)) {
            trace.certified = false;
        }
        trace.steps.push(HullStep {
            x: gamma[0],
            y: *gamma.last().unwrap(),
            discarded,
            inserted: gamma,
        });
        let next = normalized(next);
        trace.cycles.push(next.clone());
        cycle = Cycle::new(map, next)?;
    }
    let vs = cycle.vertices();
    let all_certified = vs
        .iter()
        .enumerate()
        .all(|(k, &a)| vs[k + 1..].iter().all(|&b| metric.certified(a, b)));
    trace.certified &= all_certified;
    Ok(trace)
}
