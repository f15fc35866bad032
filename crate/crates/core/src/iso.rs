//! Vertex boundaries, exact Cheeger ratios over connected subsets, the
//! isoperimetric profile, and boundary walks around a vertex set.

use std::collections::VecDeque;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fraction::{ratio, Rational};
use crate::map::{outer_walk_of, DartId, FaceId, PlanarMap, VertexId};
use crate::metric::core_radius;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Outside neighbors of `s`, sorted.
pub fn vertex_boundary(map: &PlanarMap, s: &[VertexId]) -> Vec<VertexId> {
    let mut inside = vec![false; map.num_vertices()];
    for &v in s {
        inside[v.idx()] = true;
    }
    let mut seen = vec![false; map.num_vertices()];
    let mut out = Vec::new();
    for &v in s {
        for w in map.neighbors(v) {
            if !inside[w.idx()] && !seen[w.idx()] {
                seen[w.idx()] = true;
                out.push(w);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Vertices at rim distance at least two (all vertices of a rimless map);
/// sets drawn from them have rim-free boundaries.
pub fn core_vertices(map: &PlanarMap) -> Vec<VertexId> {
    core_radius(map)
        .iter()
        .enumerate()
        .filter(|(_, r)| r.is_none_or(|r| r >= 2))
        .map(|(v, _)| VertexId::from(v))
        .collect()
}

/// Connected components of the subgraph induced by `s`, each sorted.
pub fn induced_components(map: &PlanarMap, s: &[VertexId]) -> Vec<Vec<VertexId>> {
    let mut inside = vec![false; map.num_vertices()];
    for &v in s {
        inside[v.idx()] = true;
    }
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    let mut done = vec![false; map.num_vertices()];
    let mut comps = Vec::new();
    for &v in &sorted {
        if done[v.idx()] {
            continue;
        }
        done[v.idx()] = true;
        let mut comp = vec![v];
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for w in map.neighbors(u) {
                if inside[w.idx()] && !done[w.idx()] {
                    done[w.idx()] = true;
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

pub fn is_connected_set(map: &PlanarMap, s: &[VertexId]) -> bool {
    !s.is_empty() && induced_components(map, s).len() == 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub size_cap: usize,
    pub budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            size_cap: 6,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// A subset found by the search, with its boundary size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub boundary: usize,
    pub size: usize,
    pub vertices: Vec<VertexId>,
}

impl Witness {
    pub fn ratio(&self) -> Rational {
        ratio(self.boundary, self.size)
    }
}

#[derive(Default)]
struct RootResult {
    states: u64,
    complete: bool,
    best: Option<Witness>,
    // per boundary size, the largest subset seen
    by_boundary: Vec<Option<Witness>>,
    error: Option<Error>,
}

impl RootResult {
    fn record(&mut self, set: &[VertexId], boundary: usize) {
        let size = set.len();
        let better = match &self.best {
            None => true,
            Some(w) => ratio(boundary, size) < w.ratio(),
        };
        let witness = || {
            let mut vs = set.to_vec();
            vs.sort_unstable();
            Witness {
                boundary,
                size,
                vertices: vs,
            }
        };
        if better {
            self.best = Some(witness());
        }
        if self.by_boundary.len() <= boundary {
            self.by_boundary.resize(boundary + 1, None);
        }
        if self.by_boundary[boundary]
            .as_ref()
            .is_none_or(|w| w.size < size)
        {
            self.by_boundary[boundary] = Some(witness());
        }
    }
}

type Visitor<'a> = &'a (dyn Fn(&[VertexId], usize) -> Result<()> + Sync);

struct Search<'a> {
    map: &'a PlanarMap,
    visit: Option<Visitor<'a>>,
    allowed: &'a [bool],
    cap: usize,
    limit: u64,
    in_set: Vec<bool>,
    // number of set members adjacent to each vertex
    touch: Vec<u32>,
    boundary: usize,
    set: Vec<VertexId>,
    out: RootResult,
}

impl Search<'_> {
    fn add(&mut self, w: VertexId) {
        if self.touch[w.idx()] > 0 {
            self.boundary -= 1;
        }
        self.in_set[w.idx()] = true;
        self.set.push(w);
        for u in self.map.neighbors(w) {
            if !self.in_set[u.idx()] && self.touch[u.idx()] == 0 {
                self.boundary += 1;
            }
            self.touch[u.idx()] += 1;
        }
    }

    fn remove(&mut self, w: VertexId) {
        for u in self.map.neighbors(w) {
            self.touch[u.idx()] -= 1;
            if !self.in_set[u.idx()] && self.touch[u.idx()] == 0 {
                self.boundary -= 1;
            }
        }
        self.set.pop();
        self.in_set[w.idx()] = false;
        if self.touch[w.idx()] > 0 {
            self.boundary += 1;
        }
    }

    /// Visits the current set, then every connected extension whose new
    /// vertices come from `ext` or are exclusive neighbors of later picks.
    fn extend(&mut self, root: VertexId, mut ext: Vec<VertexId>) -> bool {
        self.out.states += 1;
        if self.out.states > self.limit {
            return false;
        }
        let boundary = self.boundary;
        let set = std::mem::take(&mut self.set);
        self.out.record(&set, boundary);
        if let Some(visit) = self.visit {
            if let Err(e) = visit(&set, boundary) {
                self.out.error = Some(e);
                self.set = set;
                return false;
            }
        }
        self.set = set;
        if self.set.len() == self.cap {
            return true;
        }
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            for u in self.map.neighbors(w) {
                if u > root
                    && self.allowed[u.idx()]
                    && !self.in_set[u.idx()]
                    && self.touch[u.idx()] == 0
                    && !next.contains(&u)
                    && u != w
                {
                    next.push(u);
                }
            }
            self.add(w);
            let ok = self.extend(root, next);
            self.remove(w);
            if !ok {
                return false;
            }
        }
        true
    }
}

fn search_root(
    map: &PlanarMap,
    allowed: &[bool],
    cap: usize,
    limit: u64,
    root: VertexId,
    visit: Option<Visitor>,
) -> RootResult {
    let mut s = Search {
        map,
        visit,
        allowed,
        cap,
        limit,
        in_set: vec![false; map.num_vertices()],
        touch: vec![0; map.num_vertices()],
        boundary: 0,
        set: Vec::new(),
        out: RootResult::default(),
    };
    s.add(root);
    let mut ext: Vec<VertexId> = map
        .neighbors(root)
        .filter(|&u| u > root && allowed[u.idx()])
        .collect();
    ext.sort_unstable_by(|a, b| b.cmp(a));
    s.out.complete = s.extend(root, ext);
    s.out
}

/// Every connected core subset up to the size cap, summarized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Survey {
    pub size_cap: usize,
    pub states: u64,
    pub exhaustive: bool,
    /// Roots (in increasing order) whose subsets were fully enumerated.
    pub roots_done: usize,
    pub best: Option<Witness>,
    pub by_boundary: Vec<Option<Witness>>,
}

const ROOT_CHUNK: usize = 64;

/// Enumerates connected subsets of `vertices` with at most `size_cap`
/// members, rooted at their smallest vertex. Roots run in parallel in fixed
/// chunks; a chunk only starts while budget remains, so the result does not
/// depend on the thread count.
pub fn survey_subsets(map: &PlanarMap, vertices: &[VertexId], cfg: SearchConfig) -> Survey {
    let mut allowed = vec![false; map.num_vertices()];
    for &v in vertices {
        allowed[v.idx()] = true;
    }
    let mut roots = vertices.to_vec();
    roots.sort_unstable();
    roots.dedup();
    let mut survey = Survey {
        size_cap: cfg.size_cap,
        states: 0,
        exhaustive: true,
        roots_done: 0,
        best: None,
        by_boundary: Vec::new(),
    };
    if cfg.size_cap == 0 {
        return survey;
    }
    'chunks: for chunk in roots.chunks(ROOT_CHUNK) {
        let remaining = cfg.budget - survey.states;
        let results: Vec<RootResult> = chunk
            .par_iter()
            .map(|&r| search_root(map, &allowed, cfg.size_cap, remaining, r, None))
            .collect();
        for res in results {
            if !res.complete || survey.states + res.states > cfg.budget {
                survey.exhaustive = false;
                break 'chunks;
            }
            survey.states += res.states;
            survey.roots_done += 1;
            if let Some(w) = res.best {
                if survey.best.as_ref().is_none_or(|b| w.ratio() < b.ratio()) {
                    survey.best = Some(w);
                }
            }
            if survey.by_boundary.len() < res.by_boundary.len() {
                survey.by_boundary.resize(res.by_boundary.len(), None);
            }
            for (b, w) in res.by_boundary.into_iter().enumerate() {
                if let Some(w) = w {
                    if survey.by_boundary[b]
                        .as_ref()
                        .is_none_or(|o| o.size < w.size)
                    {
                        survey.by_boundary[b] = Some(w);
                    }
                }
            }
        }
    }
    survey
}

/// Calls `visit` with every connected subset of `vertices` up to the size
/// cap and its boundary size. The first error in root order is returned, so
/// the outcome does not depend on the thread count. Returns the number of
/// states visited.
pub fn visit_subsets<F>(
    map: &PlanarMap,
    vertices: &[VertexId],
    cfg: SearchConfig,
    visit: F,
) -> Result<u64>
where
    F: Fn(&[VertexId], usize) -> Result<()> + Sync,
{
    let mut allowed = vec![false; map.num_vertices()];
    for &v in vertices {
        allowed[v.idx()] = true;
    }
    let mut roots = vertices.to_vec();
    roots.sort_unstable();
    roots.dedup();
    let mut states = 0;
    if cfg.size_cap == 0 {
        return Ok(0);
    }
    for chunk in roots.chunks(ROOT_CHUNK) {
        let remaining = cfg.budget - states;
        let results: Vec<RootResult> = chunk
            .par_iter()
            .map(|&r| search_root(map, &allowed, cfg.size_cap, remaining, r, Some(&visit)))
            .collect();
        for res in results {
            if let Some(e) = res.error {
                return Err(e);
            }
            if !res.complete || states + res.states > cfg.budget {
                return Err(Error::SearchBudgetExceeded { budget: cfg.budget });
            }
            states += res.states;
        }
    }
    Ok(states)
}

/// Exact minimum of `|∂S|/|S|` over connected core subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cheeger {
    pub ratio: Rational,
    pub witness: Vec<VertexId>,
    pub size_cap: usize,
    pub states: u64,
    /// The bound `c/Δ(G)` that the connected value implies for all subsets.
    pub disconnected_bound: Rational,
}

pub fn cheeger_lower(map: &PlanarMap, cfg: SearchConfig) -> Result<Cheeger> {
    if cfg.size_cap == 0 {
        return Err(Error::InvalidParameter(
            "size cap must be at least 1".into(),
        ));
    }
    let core = core_vertices(map);
    let survey = survey_subsets(map, &core, cfg);
    cheeger_from_survey(map, &survey, cfg)
}

pub fn cheeger_from_survey(map: &PlanarMap, survey: &Survey, cfg: SearchConfig) -> Result<Cheeger> {
    if !survey.exhaustive {
        return Err(Error::SearchBudgetExceeded { budget: cfg.budget });
    }
    let best = survey.best.as_ref().ok_or(Error::CheegerNonpositive)?;
    let delta = map.max_degree().max(1) as u64;
    Ok(Cheeger {
        ratio: best.ratio(),
        witness: best.vertices.clone(),
        size_cap: survey.size_cap,
        states: survey.states,
        disconnected_bound: best.ratio() / Ratio::from_integer(delta),
    })
}

/// Largest connected core subset seen for each boundary size, thinned to the
/// points where the size strictly increases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoProfile {
    pub points: Vec<Witness>,
    pub size_cap: usize,
    pub exhaustive: bool,
    pub states: u64,
}

impl IsoProfile {
    pub fn from_survey(survey: &Survey) -> IsoProfile {
        let mut points: Vec<Witness> = Vec::new();
        for w in survey.by_boundary.iter().flatten() {
            if points.last().is_none_or(|p| w.size > p.size) {
                points.push(w.clone());
            }
        }
        IsoProfile {
            points,
            size_cap: survey.size_cap,
            exhaustive: survey.exhaustive,
            states: survey.states,
        }
    }

    /// Largest recorded `|S|` with `|∂S| ≤ b`.
    pub fn bound(&self, b: usize) -> Option<usize> {
        self.points
            .iter()
            .filter(|p| p.boundary <= b)
            .map(|p| p.size)
            .max()
    }
}

pub fn iso_profile(map: &PlanarMap, cfg: SearchConfig) -> IsoProfile {
    IsoProfile::from_survey(&survey_subsets(map, &core_vertices(map), cfg))
}

/// One stretch of the boundary walk between consecutive boundary hits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subwalk {
    pub length: usize,
    pub face: usize,
    pub face_length: usize,
}

/// The closed walk around `S` plus its incident edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryWalk {
    pub walk: Vec<DartId>,
    /// Walk positions whose vertex lies in `∂S`.
    pub boundary_hits: usize,
    pub distinct_hits: usize,
    pub subwalks: Vec<Subwalk>,
    pub subset: Vec<VertexId>,
}

impl BoundaryWalk {
    pub fn len(&self) -> usize {
        self.walk.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walk.is_empty()
    }

    /// Every stretch between hits is shorter than `codegree`.
    pub fn subwalks_shorter_than(&self, codegree: usize) -> bool {
        self.subwalks.iter().all(|s| s.length < codegree)
    }
}

/// Traces the outer boundary walk of `H = S ∪ ∂S` with the edges that touch
/// `S` and splits it at the visits to `∂S`. Each stretch in between must be
/// part of a single bounded face of the map.
pub fn boundary_walk(map: &PlanarMap, s: &[VertexId]) -> Result<BoundaryWalk> {
    if s.iter().any(|&v| map.is_rim(v)) {
        return Err(Error::TouchesRim);
    }
    if !is_connected_set(map, s) {
        return Err(Error::NotConnected);
    }
    let mut in_s = vec![false; map.num_vertices()];
    for &v in s {
        in_s[v.idx()] = true;
    }
    let boundary = vertex_boundary(map, s);
    let mut in_b = vec![false; map.num_vertices()];
    for &v in &boundary {
        in_b[v.idx()] = true;
    }
    let in_h = |d: DartId| in_s[map.origin(d).idx()] || in_s[map.head(d).idx()];

    let walk = outer_walk_of(map, in_h).ok_or(Error::MeetsUnboundedFace)?;

    let hits: Vec<usize> = (0..walk.len())
        .filter(|&k| in_b[map.origin(walk[k]).idx()])
        .collect();
    let mut distinct: Vec<VertexId> = hits.iter().map(|&k| map.origin(walk[k])).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if hits.is_empty() {
        return Err(Error::Postcondition(
            "boundary walk never meets the vertex boundary".into(),
        ));
    }
    let n = walk.len();
    let mut subwalks = Vec::with_capacity(hits.len());
    for (t, &a) in hits.iter().enumerate() {
        let b = hits[(t + 1) % hits.len()];
        let length = if b > a { b - a } else { b + n - a };
        let darts: Vec<DartId> = (0..length).map(|k| walk[(a + k) % n]).collect();
        let face: FaceId = map.face_of(darts[0]);
        if darts.windows(2).any(|w| map.face_next(w[0]) != w[1]) {
            return Err(Error::Postcondition(
                "stretch of the boundary walk is not facial".into(),
            ));
        }
        if !map.face(face).bounded {
            return Err(Error::MeetsUnboundedFace);
        }
        subwalks.push(Subwalk {
            length,
            face: face.idx(),
            face_length: map.face(face).len(),
        });
    }
    let mut subset = s.to_vec();
    subset.sort_unstable();
    Ok(BoundaryWalk {
        walk,
        boundary_hits: hits.len(),
        distinct_hits: distinct.len(),
        subwalks,
        subset,
    })
}

/// The chain `Δ|∂S| ≥ Σ|∂S_i| ≥ c Σ|S_i|` for a possibly disconnected `S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionLine {
    pub size: usize,
    pub components: usize,
    pub boundary: usize,
    pub component_boundaries: usize,
    pub max_degree: usize,
    /// `Δ(G)·|∂S| ≥ Σ|∂S_i|`
    pub union_step: bool,
    /// `Σ|∂S_i| ≥ c·Σ|S_i|`
    pub connected_step: bool,
    /// `|∂S| ≥ (c/Δ(G))·|S|`
    pub holds: bool,
}

pub fn reduction_check(
    map: &PlanarMap,
    samples: &[Vec<VertexId>],
    c: Rational,
) -> Vec<ReductionLine> {
    let delta = map.max_degree();
    samples
        .iter()
        .map(|s| {
            let comps = induced_components(map, s);
            let boundary = vertex_boundary(map, s).len();
            let component_boundaries: usize =
                comps.iter().map(|cm| vertex_boundary(map, cm).len()).sum();
            let size: usize = comps.iter().map(Vec::len).sum();
            let lhs = |x: usize| Ratio::from_integer(x as u64);
            ReductionLine {
                size,
                components: comps.len(),
                boundary,
                component_boundaries,
                max_degree: delta,
                union_step: delta * boundary >= component_boundaries,
                connected_step: lhs(component_boundaries) >= c * lhs(size),
                holds: lhs(boundary) * lhs(delta) >= c * lhs(size),
            }
        })
        .collect()
}
