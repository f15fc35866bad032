// Acceptance suite. Each test prints one PASS/FAIL line for its criterion and
// then asserts it. Expected values come from the small oracles below (BFS,
// dual-graph flood fill, brute-force subset enumeration), not from the
// library routines under test.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::process::Command;
use std::time::{Duration, Instant};

use coarseplane::generators::{
    attach_path, composite, composite_copies, grid, grid_vertex, spoke_faces, spoke_witnesses,
    tessellation, GeneratorSpec, Schedule,
};
use coarseplane::hull::{closest_in_frame, geodetic_hull, ArcFrame, Side};
use coarseplane::iso::{boundary_walk, cheeger_lower, visit_subsets, SearchConfig};
use coarseplane::lii::{
    eliminate_decorations, faces_inside_ratio, find_decorations, hyperbolicity_certificate,
    quasi_isometry_check, Verdict,
};
use coarseplane::metric::{DeltaMode, Metric, Scope};
use coarseplane::{Cycle, FaceId, PlanarMap, Rational, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAP: u64 = 1_000_000;

fn verdict(id: u32, name: &str, ok: bool, start: Instant, limit_secs: u64, detail: String) {
    let took = start.elapsed();
    let in_time = took <= Duration::from_secs(limit_secs);
    let pass = ok && in_time;
    println!(
        "criterion {id} [{}] {name}: {detail}; {:.2}s (limit {limit_secs}s)",
        if pass { "PASS" } else { "FAIL" },
        took.as_secs_f64()
    );
    assert!(ok, "criterion {id} failed: {detail}");
    assert!(in_time, "criterion {id} exceeded {limit_secs}s");
}

fn q(n: usize, d: usize) -> Rational {
    Rational::new(n as u64, d as u64)
}

// ---- oracles ----

fn bfs(map: &PlanarMap, src: VertexId) -> Vec<Option<usize>> {
    let mut dist = vec![None; map.num_vertices()];
    dist[src.idx()] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v.idx()].unwrap();
        for w in map.neighbors(v) {
            if dist[w.idx()].is_none() {
                dist[w.idx()] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

fn rim_distance(map: &PlanarMap) -> Vec<Option<usize>> {
    let mut dist = vec![None; map.num_vertices()];
    let mut queue = VecDeque::new();
    for v in map.vertices().filter(|&v| map.is_rim(v)) {
        dist[v.idx()] = Some(0);
        queue.push_back(v);
    }
    while let Some(v) = queue.pop_front() {
        let d = dist[v.idx()].unwrap();
        for w in map.neighbors(v) {
            if dist[w.idx()].is_none() {
                dist[w.idx()] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

fn core(map: &PlanarMap) -> Vec<VertexId> {
    let rd = rim_distance(map);
    map.vertices()
        .filter(|v| rd[v.idx()].is_none_or(|d| d >= 2))
        .collect()
}

fn boundary(map: &PlanarMap, s: &[VertexId]) -> BTreeSet<VertexId> {
    let set: HashSet<VertexId> = s.iter().copied().collect();
    s.iter()
        .flat_map(|&v| map.neighbors(v))
        .filter(|w| !set.contains(w))
        .collect()
}

fn connected(map: &PlanarMap, s: &[VertexId]) -> bool {
    let set: HashSet<VertexId> = s.iter().copied().collect();
    let mut seen = HashSet::from([s[0]]);
    let mut stack = vec![s[0]];
    while let Some(v) = stack.pop() {
        for w in map.neighbors(v) {
            if set.contains(&w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == set.len()
}

/// Connected subsets of `allowed` with at most `cap` vertices, grown one
/// neighbor at a time and deduplicated as sorted vectors.
fn connected_subsets(map: &PlanarMap, allowed: &[VertexId], cap: usize) -> Vec<Vec<VertexId>> {
    let ok: HashSet<VertexId> = allowed.iter().copied().collect();
    let mut all: HashSet<Vec<VertexId>> = HashSet::new();
    let mut layer: Vec<Vec<VertexId>> = allowed.iter().map(|&v| vec![v]).collect();
    while !layer.is_empty() {
        let mut next = HashSet::new();
        for s in &layer {
            all.insert(s.clone());
            if s.len() == cap {
                continue;
            }
            for w in boundary(map, s) {
                if ok.contains(&w) {
                    let mut t = s.clone();
                    t.push(w);
                    t.sort();
                    if !all.contains(&t) {
                        next.insert(t);
                    }
                }
            }
        }
        layer = next.into_iter().collect();
    }
    let mut out: Vec<_> = all.into_iter().collect();
    out.sort();
    out
}

/// Faces cut off from the outer face once the edges of `paths` are removed
/// from the dual graph.
fn enclosed(map: &PlanarMap, paths: &[&[VertexId]]) -> Vec<bool> {
    let mut blocked = HashSet::new();
    for p in paths {
        for w in p.windows(2) {
            blocked.insert(map.edge(map.dart_between(w[0], w[1]).expect("path edge")));
        }
    }
    let mut reached = vec![false; map.num_faces()];
    let outer = map.outer_face();
    reached[outer.idx()] = true;
    let mut queue = VecDeque::from([outer]);
    while let Some(f) = queue.pop_front() {
        for &d in &map.face(f).walk {
            if blocked.contains(&map.edge(d)) {
                continue;
            }
            let g = map.face_of(map.twin(d));
            if !reached[g.idx()] {
                reached[g.idx()] = true;
                queue.push_back(g);
            }
        }
    }
    reached.into_iter().map(|r| !r).collect()
}

fn closed(cycle: &[VertexId]) -> Vec<VertexId> {
    let mut c = cycle.to_vec();
    c.push(cycle[0]);
    c
}

fn subset(a: &[bool], b: &[bool]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| !x || y)
}

/// Edge with both sides in `region` that is not one of the blocking edges.
fn strictly_inside(
    map: &PlanarMap,
    region: &[bool],
    paths: &[&[VertexId]],
    u: VertexId,
    v: VertexId,
) -> bool {
    let on_walk = paths.iter().any(|p| {
        p.windows(2)
            .any(|w| (w[0] == u && w[1] == v) || (w[0] == v && w[1] == u))
    });
    let d = map.dart_between(u, v).unwrap();
    !on_walk && region[map.face_of(d).idx()] && region[map.face_of(map.twin(d)).idx()]
}

fn is_geodetic(map: &PlanarMap, cycle: &[VertexId]) -> bool {
    let n = cycle.len();
    (0..n).all(|a| {
        let dist = bfs(map, cycle[a]);
        (a + 1..n).all(|b| dist[cycle[b].idx()] == Some((b - a).min(n - b + a)))
    })
}

fn bounded_faces_inside(map: &PlanarMap, cycle: &[VertexId]) -> usize {
    enclosed(map, &[&closed(cycle)])
        .iter()
        .filter(|&&x| x)
        .count()
}

fn labels(map: &PlanarMap, vs: &[VertexId]) -> Vec<i64> {
    vs.iter().map(|&v| map.label(v)).collect()
}

// ---- 1 ----

fn family_points() -> Vec<GeneratorSpec> {
    use GeneratorSpec::*;
    let mut out = Vec::new();
    out.extend((2..22).map(|n| Grid { n }));
    for (p, q) in [(3, 7), (3, 8), (4, 5), (4, 6), (5, 4), (5, 5), (6, 4)] {
        out.extend((1..4).map(|r| Tessellation { p, q, r }));
    }
    for degree in 2..6 {
        out.extend((1..6).map(|radius| Tree { degree, radius }));
    }
    for seed in 0..10 {
        for (k, closed) in [(0, false), (1, true)] {
            let base = Box::new(Tessellation { p: 4, q: 5, r: 3 });
            let schedule = Schedule::Seeded {
                ns: vec![1 + (seed as usize + k) % 4, 2],
                seed,
            };
            out.push(if closed {
                G2 { base, schedule }
            } else {
                G1 { base, schedule }
            });
        }
    }
    for seed in 10..20 {
        let base = Box::new(Tessellation { p: 3, q: 7, r: 2 });
        let schedule = Schedule::Seeded { ns: vec![3], seed };
        out.push(G1 {
            base: base.clone(),
            schedule: schedule.clone(),
        });
        out.push(G2 { base, schedule });
    }
    for levels in 1..5 {
        out.extend((1..6).map(|width| Dyadic { levels, width }));
    }
    // H(a) has about a·2^(a+1) vertices; a <= 12 is every feasible point
    out.extend((1..13).map(|a| DyadicSquare { a }));
    for n in 1..6 {
        out.extend((1..5).map(|levels| Composite { n, levels }));
    }
    out
}

#[test]
fn criterion_01_map_validity() {
    let start = Instant::now();
    let specs = family_points();
    let mut per_family: std::collections::BTreeMap<String, usize> = Default::default();
    let mut bad = Vec::new();
    for spec in &specs {
        let family = serde_json::to_value(spec).unwrap()["family"]
            .as_str()
            .unwrap()
            .to_string();
        *per_family.entry(family).or_default() += 1;
        let map = spec.generate().unwrap();
        let lengths: usize = map.faces().iter().map(|f| f.walk.len()).sum();
        let euler = map.num_vertices() + map.num_faces() == map.num_edges() + 2;
        if lengths != 2 * map.num_edges() || !euler || !map.is_connected() {
            bad.push(format!("{spec:?}"));
        }
    }
    let enough = per_family.len() == 8
        && per_family
            .iter()
            .all(|(f, &c)| c >= 20 || (f == "dyadic_square" && c == 12));
    verdict(
        1,
        "face lengths sum to 2E and V-E+F=2",
        bad.is_empty() && enough,
        start,
        10,
        format!(
            "{} maps, points per family {per_family:?}, failures {bad:?}",
            specs.len()
        ),
    );
}

// ---- 2 and 3 ----

struct Instance {
    map: PlanarMap,
    cycle: Cycle,
}

fn meet_instances() -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut out = Vec::new();
    // random polyomino holes; their notches give side classes with several members
    let g = grid(12).unwrap();
    while out.len() < 10 {
        let mut hole = vec![(6usize, 6usize)];
        let size = rng.gen_range(4..10);
        while hole.len() < size {
            let (r, c) = hole[rng.gen_range(0..hole.len())];
            let (dr, dc) = [(0, 1), (1, 0), (0, -1), (-1, 0)][rng.gen_range(0..4)];
            let next = ((r as i64 + dr) as usize, (c as i64 + dc) as usize);
            if (3..=8).contains(&next.0) && (3..=8).contains(&next.1) && !hole.contains(&next) {
                hole.push(next);
            }
        }
        let removed: Vec<VertexId> = hole.iter().map(|&(r, c)| grid_vertex(12, r, c)).collect();
        let Ok((map, _)) = g.without_vertices(&removed) else {
            continue;
        };
        if !map.is_connected() {
            continue;
        }
        let face = map.bounded_faces().max_by_key(|f| f.len()).unwrap().id;
        let Ok(cycle) = Cycle::of_face(&map, face) else {
            continue;
        };
        out.push(Instance { map, cycle });
    }
    for r in [3, 4] {
        let t = tessellation(4, 5, r).unwrap();
        let core = core(&t);
        for _ in 0..3 {
            let v = core[rng.gen_range(0..core.len())];
            let mut removed = vec![v];
            if rng.gen_bool(0.5) {
                let nbrs: Vec<VertexId> = t.neighbors(v).filter(|w| core.contains(w)).collect();
                if !nbrs.is_empty() {
                    removed.push(nbrs[rng.gen_range(0..nbrs.len())]);
                }
            }
            let (map, _) = t.without_vertices(&removed).unwrap();
            let face = map.bounded_faces().max_by_key(|f| f.len()).unwrap().id;
            let cycle = Cycle::of_face(&map, face).unwrap();
            out.push(Instance { map, cycle });
        }
        for f in t.core_faces().into_iter().take(3) {
            let cycle = Cycle::of_face(&t, f).unwrap();
            out.push(Instance {
                map: t.clone(),
                cycle,
            });
        }
    }
    out
}

/// Outside geodesics between the frame's ends and the S1 members among them,
/// both decided by flood fill.
fn side_classes(
    map: &PlanarMap,
    metric: &Metric,
    cycle: &Cycle,
    frame: &ArcFrame,
) -> (Vec<Vec<VertexId>>, Vec<Vec<VertexId>>) {
    let c = closed(cycle.vertices());
    let inside_c = enclosed(map, &[&c]);
    let mut outside = Vec::new();
    let mut s1 = Vec::new();
    for g in metric.geodesics(frame.x(), frame.y(), CAP).unwrap() {
        let path = g.vertices;
        let enters = path
            .windows(2)
            .any(|w| strictly_inside(map, &inside_c, &[&c], w[0], w[1]));
        if enters {
            continue;
        }
        if subset(&inside_c, &enclosed(map, &[frame.far(), &path])) {
            s1.push(path.clone());
        }
        outside.push(path);
    }
    (outside, s1)
}

#[test]
fn criterion_02_03_meet_lattice_and_crossing() {
    let start = Instant::now();
    let mut instances = 0usize;
    let mut pairs = 0usize;
    let mut rich = 0usize;
    let mut failures: Vec<String> = Vec::new();
    let mut crossing_failures: Vec<String> = Vec::new();
    for inst in meet_instances() {
        let map = &inst.map;
        let metric = Metric::new(map);
        let n = inst.cycle.len();
        for i in 0..n {
            for j in i + 1..n {
                let frame = ArcFrame::new(map, &inst.cycle, i, j);
                let (outside, s1) = side_classes(map, &metric, &inst.cycle, &frame);
                if s1.is_empty() {
                    continue;
                }
                instances += 1;
                if s1.len() > 1 {
                    rich += 1;
                }
                let tag = || {
                    format!(
                        "{:?} {:?}",
                        labels(map, &[frame.x()]),
                        labels(map, &[frame.y()])
                    )
                };
                for g in &outside {
                    let lib = frame.classify(map, g).unwrap();
                    if (lib == Side::S1) != s1.contains(g) {
                        failures.push(format!("side class disagrees at {}", tag()));
                    }
                }
                let region: Vec<Vec<bool>> = s1
                    .iter()
                    .map(|g| enclosed(map, &[frame.near(), g]))
                    .collect();
                let prec = |a: usize, b: usize| subset(&region[a], &region[b]);
                let idx = |g: &Vec<VertexId>| s1.iter().position(|h| h == g);
                let d = metric.distance(frame.x(), frame.y()).unwrap();
                let meet = |a: &[VertexId], b: &[VertexId]| frame.meet(map, a, b).unwrap();
                let k = s1.len();
                for a in 0..k {
                    if meet(&s1[a], &s1[a]) != s1[a] {
                        failures.push(format!("meet not idempotent at {}", tag()));
                    }
                    for b in 0..k {
                        pairs += 1;
                        let ab = meet(&s1[a], &s1[b]);
                        if ab.len() != d + 1 || ab != meet(&s1[b], &s1[a]) {
                            failures.push(format!("length or commutativity at {}", tag()));
                        }
                        let lower: Vec<usize> =
                            (0..k).filter(|&g| prec(g, a) && prec(g, b)).collect();
                        let glb: Vec<usize> = lower
                            .iter()
                            .copied()
                            .filter(|&g| lower.iter().all(|&o| prec(o, g)))
                            .collect();
                        if glb.len() != 1 || idx(&ab) != Some(glb[0]) {
                            failures.push(format!("meet is not the glb at {}", tag()));
                        }
                        if k <= 8 {
                            for c in 0..k {
                                let left = meet(&ab, &s1[c]);
                                let right = meet(&s1[a], &meet(&s1[b], &s1[c]));
                                if left != right {
                                    failures.push(format!("not associative at {}", tag()));
                                }
                            }
                        }
                    }
                }
                // least element by brute force, then the crossing check
                let least: Vec<usize> = (0..k).filter(|&g| (0..k).all(|o| prec(g, o))).collect();
                let found = closest_in_frame(&metric, &frame, CAP).unwrap().vertices;
                if least.len() != 1 || idx(&found) != Some(least[0]) {
                    crossing_failures.push(format!("closest geodesic is not least at {}", tag()));
                    continue;
                }
                let walls: [&[VertexId]; 2] = [frame.near(), &found];
                let comp = enclosed(map, &walls);
                for g in &outside {
                    if g.windows(2)
                        .any(|w| strictly_inside(map, &comp, &walls, w[0], w[1]))
                    {
                        crossing_failures.push(format!(
                            "{:?} crosses at {}",
                            labels(map, g),
                            tag()
                        ));
                    }
                }
            }
        }
    }
    failures.truncate(5);
    crossing_failures.truncate(5);
    verdict(
        2,
        "meet equals brute-force glb; idempotent, commutative, associative, |meet| = d",
        instances >= 100 && rich > 0 && failures.is_empty(),
        start,
        60,
        format!("{instances} instances ({rich} with |S1| > 1), {pairs} ordered pairs, failures {failures:?}"),
    );
    verdict(
        3,
        "no outside geodesic crosses xCy ∪ closest geodesic",
        instances >= 100 && crossing_failures.is_empty(),
        start,
        60,
        format!("{instances} instances, failures {crossing_failures:?}"),
    );
}

// ---- 4 ----

#[test]
fn criterion_04_hull_suite() {
    let start = Instant::now();
    let base = tessellation(4, 5, 3).unwrap();
    let g2 = spoke_faces(
        &base,
        &Schedule::Seeded {
            ns: vec![2, 3],
            seed: 0,
        }
        .resolve(&base)
        .unwrap(),
        true,
    )
    .unwrap();
    let windows = [
        ("{3,7} r=3", tessellation(3, 7, 3).unwrap()),
        ("{4,5} r=3", base.clone()),
        ("g2 on {4,5} r=3", g2),
    ];
    let mut procedure_ok = true;
    let mut hulls = 0;
    let mut certified = 0;
    let mut literal_violations = Vec::new();
    let mut provable_violations = 0;
    let mut notes = Vec::new();
    for (name, map) in &windows {
        let metric = Metric::new(map);
        let delta = metric
            .thin_triangle_delta(Scope::Certified, DeltaMode::Exact, CAP)
            .unwrap()
            .delta;
        notes.push(format!("{name}: δ={delta}"));
        for f in map.core_faces() {
            hulls += 1;
            let trace = match geodetic_hull(&metric, f, CAP) {
                Ok(t) => t,
                Err(e) => {
                    procedure_ok = false;
                    notes.push(format!("{name} face {}: {e}", f.idx()));
                    continue;
                }
            };
            let lens = trace.lengths();
            let decreasing = lens.windows(2).all(|w| w[1] < w[0]);
            if !decreasing || !is_geodetic(map, trace.terminal()) {
                procedure_ok = false;
                notes.push(format!("{name} face {}: lengths {lens:?}", f.idx()));
            }
            if trace.certified {
                certified += 1;
                let len = trace.terminal().len();
                if len > 6 * delta {
                    literal_violations.push(format!(
                        "{name} face {} |C|={len} 6δ={}",
                        f.idx(),
                        6 * delta
                    ));
                }
                if len / 6 > delta {
                    provable_violations += 1;
                }
            }
        }
    }
    let shown: Vec<_> = literal_violations.iter().take(3).collect();
    verdict(
        4,
        "hulls terminate, shrink strictly, end geodetic; certified |C_t| <= 6δ",
        procedure_ok && literal_violations.is_empty(),
        start,
        300,
        format!(
            "{hulls} hulls, {certified} certified, {} literal 6δ violations (e.g. {shown:?}), {provable_violations} violations of floor(|C|/6) <= δ, {notes:?}",
            literal_violations.len()
        ),
    );
}

// ---- 5 ----

#[test]
fn criterion_05_boundary_walks() {
    let start = Instant::now();
    let windows = [
        ("grid 9", grid(9).unwrap()),
        ("{4,5} r=4", tessellation(4, 5, 4).unwrap()),
    ];
    let cfg = SearchConfig {
        size_cap: 6,
        ..SearchConfig::default()
    };
    let mut total = 0usize;
    let mut bad = Vec::new();
    for (name, map) in &windows {
        let codegree = map.max_codegree().unwrap();
        let allowed = core(map);
        let sets = connected_subsets(map, &allowed, 6);
        let visited = visit_subsets(map, &allowed, cfg, |_, _| Ok(())).unwrap();
        if visited as usize != sets.len() {
            bad.push(format!(
                "{name}: enumerator saw {visited}, oracle {}",
                sets.len()
            ));
        }
        for s in &sets {
            total += 1;
            let w = boundary_walk(map, s).unwrap();
            let ds = boundary(map, s);
            let hits: BTreeSet<VertexId> = w
                .walk
                .iter()
                .map(|&d| map.origin(d))
                .filter(|v| ds.contains(v))
                .collect();
            if hits.len() * codegree <= w.len() || !w.subwalks.iter().all(|x| x.length < codegree) {
                bad.push(format!(
                    "{name}: S={:?} |C|={} hits={}",
                    labels(map, s),
                    w.len(),
                    hits.len()
                ));
            }
        }
    }
    bad.truncate(5);
    verdict(
        5,
        "|C ∩ ∂S| > |C|/Δ(G*) with every subwalk shorter than Δ(G*)",
        bad.is_empty() && total > 0,
        start,
        120,
        format!("{total} connected core sets of size <= 6, failures {bad:?}"),
    );
}

// ---- 6 and 7 ----

fn hull_cycles(map: &PlanarMap) -> Vec<Vec<VertexId>> {
    let metric = Metric::new(map);
    let mut out: Vec<Vec<VertexId>> = Vec::new();
    for f in map.core_faces() {
        let t = geodetic_hull(&metric, f, CAP).unwrap();
        let c = t.terminal().to_vec();
        let key: BTreeSet<VertexId> = c.iter().copied().collect();
        if c.iter().all(|&v| !map.is_rim(v))
            && !out
                .iter()
                .any(|o| o.iter().copied().collect::<BTreeSet<_>>() == key)
        {
            out.push(c);
        }
    }
    out
}

fn brute_cheeger(map: &PlanarMap, cap: usize) -> Rational {
    connected_subsets(map, &core(map), cap)
        .iter()
        .map(|s| q(boundary(map, s).len(), s.len()))
        .min()
        .unwrap()
}

#[test]
fn criterion_06_counting_inequality() {
    let start = Instant::now();
    let map = tessellation(4, 5, 3).unwrap();
    let reduced = eliminate_decorations(&map).unwrap().map;
    let cycles = hull_cycles(&reduced);
    let lists: Vec<Vec<i64>> = cycles.iter().map(|c| labels(&reduced, c)).collect();
    let cfg = SearchConfig {
        size_cap: 8,
        ..SearchConfig::default()
    };
    let cert = hyperbolicity_certificate(&map, cfg, CAP, Some(&lists)).unwrap();
    let c = brute_cheeger(&reduced, 8);
    let delta = q(map.max_degree(), 1);
    let one = q(1, 1);
    let mut bad = Vec::new();
    for (cyc, line) in cycles.iter().zip(&cert.per_cycle) {
        let faces = bounded_faces_inside(&reduced, cyc);
        let holds = c * q(faces, 1) <= (one + c) * delta * q(cyc.len(), 1);
        if !holds || line.count.faces != faces || line.count.len != cyc.len() {
            bad.push(format!(
                "|C|={} F={faces} (library F={})",
                cyc.len(),
                line.count.faces
            ));
        }
    }
    let ok = bad.is_empty()
        && cert.c_prime() == c
        && cert.verdict == Verdict::Certified
        && !cycles.is_empty();
    verdict(
        6,
        "F <= ((1+c')Δ/c')|C| on face-hull cycles of {4,5} r=3",
        ok,
        start,
        300,
        format!(
            "c'={} (oracle {c}), bound {}, {} cycles, verdict {}, failures {bad:?}",
            cert.c_prime(),
            (one + c) * delta / c,
            cycles.len(),
            cert.verdict.as_str()
        ),
    );
}

#[test]
fn criterion_07_nonamenable_bound() {
    let start = Instant::now();
    let map = tessellation(4, 5, 3).unwrap();
    let cycles = hull_cycles(&map);
    let as_cycles: Vec<Cycle> = cycles
        .iter()
        .map(|c| Cycle::new(&map, c.clone()).unwrap())
        .collect();
    let k_hat = faces_inside_ratio(&map, &as_cycles).unwrap().max;
    let oracle_k = cycles
        .iter()
        .map(|c| q(bounded_faces_inside(&map, c), c.len()))
        .max()
        .unwrap();
    let codegree = map.max_codegree().unwrap();
    let bound = q(1, 1) / (k_hat * q(codegree * codegree, 1));
    let sets = connected_subsets(&map, &core(&map), 8);
    let worst = sets
        .iter()
        .map(|s| q(boundary(&map, s).len(), s.len()))
        .min()
        .unwrap();
    verdict(
        7,
        "|∂S|/|S| >= 1/(k̂·Δ(G*)²) for connected core S, |S| <= 8",
        k_hat == oracle_k && worst >= bound,
        start,
        300,
        format!("k̂={k_hat} (oracle {oracle_k}), Δ*={codegree}, bound {bound}, min ratio {worst} over {} sets", sets.len()),
    );
}

// ---- 8 ----

fn block(n: usize, r0: usize, k: usize) -> Vec<VertexId> {
    (r0..r0 + k)
        .flat_map(|r| (r0..r0 + k).map(move |c| grid_vertex(n, r, c)))
        .collect()
}

fn block_perimeter(n: usize, r0: usize, m: usize) -> Vec<VertexId> {
    let v = |r, c| grid_vertex(n, r, c);
    let mut vs = Vec::new();
    vs.extend((r0..r0 + m).map(|c| v(r0, c)));
    vs.extend((r0..r0 + m).map(|r| v(r, r0 + m)));
    vs.extend((r0 + 1..=r0 + m).rev().map(|c| v(r0 + m, c)));
    vs.extend((r0 + 1..=r0 + m).rev().map(|r| v(r, r0)));
    vs
}

fn linear(values: &[usize]) -> bool {
    let step = values[1] as i64 - values[0] as i64;
    step > 0 && values.windows(2).all(|w| w[1] as i64 - w[0] as i64 == step)
}

#[test]
fn criterion_08_negative_controls() {
    let start = Instant::now();
    let mut notes = Vec::new();

    // (a) grid
    let g = grid(14).unwrap();
    let blocks_ok = (1..=6).all(|k| {
        let b = block(14, 3, k);
        q(boundary(&g, &b).len(), b.len()) == q(4, k)
    });
    let perims: Vec<Cycle> = (2..=8)
        .map(|m| Cycle::new(&g, block_perimeter(14, 3, m)).unwrap())
        .collect();
    let table = faces_inside_ratio(&g, &perims).unwrap();
    let growth_ok = table.table.iter().zip(2..=8usize).all(|(row, m)| {
        row.ratio() == q(m, 4) && row.faces == bounded_faces_inside(&g, &block_perimeter(14, 3, m))
    });
    let cert =
        hyperbolicity_certificate(&grid(10).unwrap(), SearchConfig::default(), CAP, None).unwrap();
    let a = blocks_ok && growth_ok && cert.verdict == Verdict::Refused;
    notes.push(format!(
        "(a) blocks 4/k {blocks_ok}, m/4 growth {growth_ok}, grid 10 {}",
        cert.verdict.as_str()
    ));

    // (b) and (c): one decorated face, n = 2..6
    let base = tessellation(4, 5, 3).unwrap();
    let face: FaceId = base.core_faces()[0];
    let mut open = Vec::new();
    let mut shut = Vec::new();
    let mut interiors = Vec::new();
    let mut boundaries = Vec::new();
    let mut witness_ok = true;
    for n in 2..=6 {
        let g1 = spoke_faces(&base, &[(face, n)], false).unwrap();
        open.push(g1.max_codegree().unwrap());
        let (_, _, interior, recorded) = spoke_witnesses(&g1).remove(0);
        let ds = boundary(&g1, &interior);
        witness_ok &=
            ds == recorded.iter().copied().collect::<BTreeSet<_>>() && connected(&g1, &interior);
        interiors.push(interior.len());
        boundaries.push(ds.len());
        shut.push(
            spoke_faces(&base, &[(face, n)], true)
                .unwrap()
                .max_codegree()
                .unwrap(),
        );
    }
    let fixed_boundary = boundaries.windows(2).all(|w| w[0] == w[1]);
    let growing = interiors.windows(2).all(|w| w[1] > w[0]);
    let b = linear(&open) && witness_ok && fixed_boundary && growing;
    notes.push(format!(
        "(b) g1 codegree {open:?}, witness |S| {interiors:?} with |∂S| {boundaries:?}"
    ));
    let c = shut.iter().all(|&x| x == shut[0]);
    notes.push(format!("(c) g2 codegree {shut:?}"));

    // (d) composite
    let comp = composite(6, 3).unwrap();
    let ratios: Vec<Rational> = composite_copies(&comp)
        .iter()
        .map(|(_, vs)| q(boundary(&comp, vs).len(), vs.len()))
        .collect();
    let d = ratios.len() == 6 && ratios.windows(2).all(|w| w[1] < w[0]);
    notes.push(format!(
        "(d) composite copy ratios {:?}",
        ratios.iter().map(|r| r.to_string()).collect::<Vec<_>>()
    ));

    verdict(
        8,
        "negative controls",
        a && b && c && d,
        start,
        300,
        notes.join("; "),
    );
}

// ---- 9 ----

fn decorated_grid() -> PlanarMap {
    let g = grid(10).unwrap();
    let (v, w) = (grid_vertex(10, 4, 4), grid_vertex(10, 5, 5));
    let face = g
        .core_faces()
        .into_iter()
        .find(|&f| g.face_vertices(f).contains(&v) && g.face_vertices(f).contains(&w))
        .unwrap();
    let g = attach_path(&g, face, v, Some(w), 3).unwrap();
    let u = grid_vertex(10, 2, 6);
    let face = g
        .core_faces()
        .into_iter()
        .find(|&f| g.face_vertices(f).contains(&u))
        .unwrap();
    attach_path(&g, face, u, None, 2).unwrap()
}

#[test]
fn criterion_09_decoration_elimination() {
    let start = Instant::now();
    let g = decorated_grid();
    let elim = eliminate_decorations(&g).unwrap();
    let h = &elim.map;
    let idempotent = find_decorations(h).decorations.is_empty()
        && eliminate_decorations(h).unwrap().removed.is_empty();
    let min_degree = h
        .vertices()
        .filter(|&v| !h.is_rim(v))
        .map(|v| h.degree(v))
        .min()
        .unwrap();
    let c = cheeger_lower(
        &g,
        SearchConfig {
            size_cap: 5,
            ..SearchConfig::default()
        },
    )
    .unwrap()
    .ratio;
    let two_over_c = q(2, 1) / c;
    let sizes_ok = elim
        .removed
        .iter()
        .all(|d| q(d.vertices.len(), 1) <= two_over_c);

    // every pair of surviving vertices closer than both rim distances
    let rd = rim_distance(&g);
    let mut pairs = 0;
    let mut qi_ok = true;
    for x in g.vertices() {
        let Some(x2) = elim.correspondence[x.idx()] else {
            continue;
        };
        let dg = bfs(&g, x);
        let dh = bfs(h, x2);
        for y in g.vertices().filter(|&y| y > x) {
            let Some(y2) = elim.correspondence[y.idx()] else {
                continue;
            };
            let d = dg[y.idx()].unwrap();
            let limit = rd[x.idx()].unwrap().min(rd[y.idx()].unwrap());
            if d >= limit {
                continue;
            }
            pairs += 1;
            let d2 = dh[y2.idx()].unwrap();
            qi_ok &= d2 <= d && q(d, 1) <= two_over_c * q(d2, 1);
        }
    }
    let lib = quasi_isometry_check(&g, &elim, c).unwrap();
    verdict(
        9,
        "decoration elimination",
        idempotent && min_degree >= 3 && sizes_ok && qi_ok && lib.pairs == pairs && !elim.removed.is_empty(),
        start,
        60,
        format!(
            "{} decorations removed in {} round(s), idempotent {idempotent}, min non-rim degree {min_degree}, c={c}, sizes {:?} <= {two_over_c}, {pairs} certified pairs (library {}), max stretch {}",
            elim.removed.len(),
            elim.rounds,
            elim.removed.iter().map(|d| d.vertices.len()).collect::<Vec<_>>(),
            lib.pairs,
            lib.max_stretch
        ),
    );
}

// ---- 10 ----

fn cli(args: &[&str], threads: &str) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_coarseplane"))
        .args(args)
        .env("COARSEPLANE_THREADS", threads)
        .output()
        .unwrap();
    (out.status.code().unwrap_or(-1), out.stdout)
}

#[test]
fn criterion_10_cli_determinism() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let map_45 = path("t45.json");
    let map_g1 = path("g1.json");
    assert_eq!(
        cli(
            &[
                "gen",
                "tessellation",
                "--p",
                "4",
                "--q",
                "5",
                "--r",
                "3",
                "-o",
                &map_45
            ],
            "1"
        )
        .0,
        0
    );
    assert_eq!(
        cli(
            &["gen", "g1", "--ns", "2,3", "--seed", "5", "-o", &map_g1],
            "1"
        )
        .0,
        0
    );
    let runs: Vec<Vec<String>> = vec![
        vec![
            "gen".into(),
            "g2".into(),
            "--ns".into(),
            "2,4".into(),
            "--seed".into(),
            "9".into(),
        ],
        vec![
            "gen".into(),
            "composite".into(),
            "--n".into(),
            "3".into(),
            "--levels".into(),
            "2".into(),
        ],
        vec![
            "analyze".into(),
            "-i".into(),
            map_45.clone(),
            "--size-cap".into(),
            "7".into(),
        ],
        vec![
            "analyze".into(),
            "-i".into(),
            map_g1.clone(),
            "--seed".into(),
            "3".into(),
        ],
        vec![
            "hull".into(),
            "-i".into(),
            map_g1.clone(),
            "--face".into(),
            "3".into(),
        ],
        vec![
            "profile".into(),
            "-i".into(),
            map_45.clone(),
            "--cap".into(),
            "7".into(),
        ],
        vec![
            "export".into(),
            "-i".into(),
            map_45.clone(),
            "--format".into(),
            "svg".into(),
        ],
        vec![
            "export".into(),
            "-i".into(),
            map_g1.clone(),
            "--format".into(),
            "dot".into(),
        ],
    ];
    let mut bad = Vec::new();
    for args in &runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = cli(&args, "1");
        let again = cli(&args, "1");
        let wide = cli(&args, "8");
        if first.1.is_empty() || first != again || first != wide {
            bad.push(args.join(" "));
        }
    }
    verdict(
        10,
        "CLI output byte-identical across runs and across 1 and 8 threads",
        bad.is_empty(),
        start,
        300,
        format!("{} invocations x 3 runs, differing {bad:?}", runs.len()),
    );
}
