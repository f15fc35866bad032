//! One report per window: degree data, δ, Cheeger ratio, profile, hulls,
//! faces-inside ratio, and a verdict for each of the three implications
//! relating hyperbolicity, isoperimetry and codegree.

use std::sync::Mutex;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fraction::{Fraction, Rational};
use crate::hull::{geodetic_hull, HullTrace};
use crate::iso::{
    boundary_walk, cheeger_from_survey, core_vertices, survey_subsets, visit_subsets, Cheeger,
    IsoProfile, SearchConfig, Survey, DEFAULT_BUDGET,
};
use crate::lii::{cycle_counts, faces_inside_ratio, hyperbolicity_certificate, Certificate};
use crate::map::{cycle_interior, to_json, Cycle, PlanarMap};
use crate::metric::{DeltaMode, DeltaReport, Metric, Scope, TriangleWitness};

pub const REPORT_FORMAT: &str = "report-v1";
pub const DEFAULT_GEODESIC_CAP: u64 = 1_000_000;
pub const DEFAULT_DELTA_TRIALS: usize = 2000;

/// Limits shared by every measurement in a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Caps {
    pub size_cap: usize,
    pub budget: u64,
    pub geodesic_cap: u64,
    pub seed: u64,
    pub delta_trials: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            size_cap: 6,
            budget: DEFAULT_BUDGET,
            geodesic_cap: DEFAULT_GEODESIC_CAP,
            seed: 0,
            delta_trials: DEFAULT_DELTA_TRIALS,
        }
    }
}

impl Caps {
    pub fn validate(&self) -> Result<()> {
        let zero = [
            ("size cap", self.size_cap as u64),
            ("enumeration budget", self.budget),
            ("geodesic cap", self.geodesic_cap),
            ("delta trials", self.delta_trials as u64),
        ]
        .into_iter()
        .find(|(_, v)| *v == 0);
        match zero {
            Some((name, _)) => Err(Error::InvalidParameter(format!("{name} must be positive"))),
            None => Ok(()),
        }
    }

    pub fn search(&self) -> SearchConfig {
        SearchConfig {
            size_cap: self.size_cap,
            budget: self.budget,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Certified,
    Refused,
    HypothesisFailed,
    Advisory,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Implication {
    pub verdict: Verdict,
    pub reasons: Vec<String>,
    pub data: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeSummary {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub rim: usize,
    pub core: usize,
    pub max_degree: usize,
    pub codegree: Option<usize>,
    pub core_codegree: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaSummary {
    pub scope: Scope,
    pub exact: bool,
    pub value: usize,
    pub triangles: usize,
    pub witness: Option<TriangleWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheegerSummary {
    pub scope: Scope,
    pub ratio: Option<Fraction>,
    pub size_cap: usize,
    pub states: u64,
    pub exhaustive: bool,
    pub witness: Vec<i64>,
    pub boundary: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfilePoint {
    pub boundary: usize,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileSummary {
    pub scope: Scope,
    pub exhaustive: bool,
    pub points: Vec<ProfilePoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HullSummary {
    pub scope: Scope,
    pub faces: usize,
    pub geodetic: usize,
    pub certified: usize,
    pub skipped: usize,
    pub budget_limited: usize,
    pub max_terminal: usize,
    pub max_steps: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KHat {
    pub scope: Scope,
    pub value: Option<Fraction>,
    pub cycles: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Implications {
    pub hyperbolic: Implication,
    pub bounded_codegree: Implication,
    pub nonamenable: Implication,
}

/// Everything measured on one window. Field order is the serialization order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub format: &'static str,
    pub input_digest: String,
    pub caps: Caps,
    pub degree_stats: DegreeSummary,
    pub delta: DeltaSummary,
    pub cheeger: CheegerSummary,
    pub profile: ProfileSummary,
    pub hull: HullSummary,
    pub k_hat: KHat,
    pub implications: Implications,
}

impl AnalysisReport {
    /// True when a budget or cap cut some measurement short.
    pub fn truncated(&self) -> bool {
        !self.cheeger.exhaustive || !self.delta.exact || self.hull.budget_limited > 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn digest(map: &PlanarMap) -> String {
    format!("sha256:{:x}", Sha256::digest(to_json(map).as_bytes()))
}

/// Measurements shared by the three implication checks.
pub struct Measurements<'a> {
    pub map: &'a PlanarMap,
    pub caps: Caps,
    pub metric: Metric<'a>,
    pub delta: DeltaReport,
    pub survey: Survey,
    pub cheeger: Option<Cheeger>,
    pub profile: IsoProfile,
    pub hulls: Vec<Result<HullTrace>>,
    pub hull_cycles: Vec<Cycle>,
    pub k_hat: Option<Rational>,
}

pub fn measure(map: &PlanarMap, caps: Caps) -> Result<Measurements<'_>> {
    caps.validate()?;
    let metric = Metric::new(map);
    let delta =
        match metric.thin_triangle_delta(Scope::Certified, DeltaMode::Exact, caps.geodesic_cap) {
            Err(e) if e.is_budget() => metric.thin_triangle_delta(
                Scope::Certified,
                DeltaMode::Sampled {
                    seed: caps.seed,
                    trials: caps.delta_trials,
                },
                caps.geodesic_cap,
            )?,
            other => other?,
        };
    let survey = survey_subsets(map, &core_vertices(map), caps.search());
    let cheeger = match cheeger_from_survey(map, &survey, caps.search()) {
        Ok(c) => Some(c),
        Err(Error::CheegerNonpositive | Error::SearchBudgetExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let profile = IsoProfile::from_survey(&survey);
    let hulls: Vec<Result<HullTrace>> = map
        .core_faces()
        .par_iter()
        .map(|&f| geodetic_hull(&metric, f, caps.geodesic_cap))
        .collect();
    let hull_cycles: Vec<Cycle> = hulls
        .iter()
        .flatten()
        .filter(|t| t.geodetic)
        .filter_map(|t| t.terminal_cycle(map).ok())
        .filter(|c| cycle_counts(map, c).is_ok())
        .collect();
    let k_hat = if hull_cycles.is_empty() {
        None
    } else {
        Some(faces_inside_ratio(map, &hull_cycles)?.max)
    };
    Ok(Measurements {
        map,
        caps,
        metric,
        delta,
        survey,
        cheeger,
        profile,
        hulls,
        hull_cycles,
        k_hat,
    })
}

fn implication(verdict: Verdict, reasons: Vec<String>, data: Value) -> Implication {
    Implication {
        verdict,
        reasons,
        data,
    }
}

/// Non-amenable with bounded codegree implies hyperbolic: eliminate
/// decorations, measure `c'`, and run the counting chain on sampled cycles.
pub fn check_implication_1(m: &Measurements) -> Result<(Implication, Option<Certificate>)> {
    match hyperbolicity_certificate(m.map, m.caps.search(), m.caps.geodesic_cap, None) {
        Ok(cert) => {
            let mut reasons = Vec::new();
            let premise = cert.per_cycle.iter().filter(|l| !l.premise).count();
            let counting = cert.per_cycle.iter().filter(|l| !l.counting).count();
            if premise > 0 {
                reasons.push(format!(
                    "{premise} sampled cycle interiors have |∂S| < c'|S|; c' measured at cap {} is not a lower bound at window scale",
                    m.caps.size_cap
                ));
            }
            if counting > 0 {
                reasons.push(format!(
                    "{counting} sampled cycles violate F ≤ ((1+c')Δ/c')|C|"
                ));
            }
            let verdict = match (cert.verdict, cert.codegree) {
                (crate::lii::Verdict::Refused, _) => Verdict::Refused,
                (_, None) => {
                    reasons.push("no bounded face after decoration elimination".into());
                    Verdict::Advisory
                }
                _ => Verdict::Certified,
            };
            let mut data = cert.to_json();
            data["bound"] = serde_json::to_value(Fraction::from(cert.bound)).unwrap();
            data["decorations_removed"] = cert.decorations_removed.into();
            Ok((implication(verdict, reasons, data), Some(cert)))
        }
        Err(Error::CheegerNonpositive) => Ok((
            implication(
                Verdict::Refused,
                vec!["measured Cheeger ratio is not positive after decoration elimination".into()],
                Value::Null,
            ),
            None,
        )),
        Err(Error::EverythingIsADecoration) => Ok((
            implication(
                Verdict::HypothesisFailed,
                vec!["decoration elimination leaves nothing to measure".into()],
                Value::Null,
            ),
            None,
        )),
        Err(e) if e.is_budget() => Ok((
            implication(Verdict::Advisory, vec![e.to_string()], Value::Null),
            None,
        )),
        Err(e) => Err(e),
    }
}

/// Hyperbolic and weakly non-amenable implies bounded codegree: every
/// certified hull is short relative to δ and encloses its face in a set the
/// profile bounds.
pub fn check_implication_2(m: &Measurements, hyperbolic: Verdict) -> Result<Implication> {
    let map = m.map;
    let delta = m.delta.delta;
    let max_degree = map.max_degree();
    let mut reasons = Vec::new();
    let mut literal_violations = 0;
    let mut provable_violations = 0;
    let mut enclosure_violations = 0;
    let mut beyond_profile = 0;
    let mut max_terminal = 0;
    let mut max_enclosed = 0;
    let mut budget_limited = 0;
    for trace in &m.hulls {
        let t = match trace {
            Ok(t) => t,
            Err(e) if e.is_budget() => {
                budget_limited += 1;
                continue;
            }
            Err(_) => continue,
        };
        if !(t.geodetic && t.certified) {
            continue;
        }
        let len = t.terminal().len();
        max_terminal = max_terminal.max(len);
        if len > 6 * delta {
            literal_violations += 1;
        }
        if len / 6 > delta {
            provable_violations += 1;
        }
        let cyc = t.terminal_cycle(map)?;
        let reg = cycle_interior(map, &cyc)?;
        let mut s: Vec<_> = reg.interior_vertices.clone();
        s.extend_from_slice(cyc.vertices());
        let face_len = map.face(t.face).len();
        let boundary = crate::iso::vertex_boundary(map, &s).len();
        max_enclosed = max_enclosed.max(s.len());
        if face_len > s.len() || boundary >= max_degree * len.max(1) {
            enclosure_violations += 1;
        }
        match m.profile.bound(boundary) {
            Some(f) if s.len() <= m.caps.size_cap && s.len() > f => enclosure_violations += 1,
            _ if s.len() > m.caps.size_cap => beyond_profile += 1,
            _ => {}
        }
    }
    let f_bound = m.profile.bound(6 * delta * max_degree);
    let data = serde_json::json!({
        "delta": delta,
        "max_terminal": max_terminal,
        "max_enclosed": max_enclosed,
        "literal_6delta_violations": literal_violations,
        "provable_violations": provable_violations,
        "enclosure_violations": enclosure_violations,
        "beyond_profile": beyond_profile,
        "profile_at_6delta_degree": f_bound,
        "core_codegree": core_codegree(map),
    });
    if literal_violations > 0 {
        reasons.push(format!(
            "{literal_violations} certified hulls are longer than 6δ; the length bound used is ⌊|C|/6⌋ ≤ δ"
        ));
    }
    if beyond_profile > 0 {
        reasons.push(format!(
            "{beyond_profile} hull interiors exceed the size cap; profile bound not checked there"
        ));
    }
    let verdict = if provable_violations > 0 || enclosure_violations > 0 {
        reasons.push("a certified hull breaks the length or enclosure bound".into());
        Verdict::Refused
    } else if let Some(v) = hypothesis(hyperbolic, &mut reasons) {
        v
    } else if !m.delta.exact || budget_limited > 0 || !m.profile.exhaustive {
        reasons.push("δ, hulls or profile were cut short by a cap".into());
        Verdict::Advisory
    } else {
        Verdict::Certified
    };
    Ok(implication(verdict, reasons, data))
}

/// Downgrade implied by the verdict on hyperbolicity, if any.
fn hypothesis(hyperbolic: Verdict, reasons: &mut Vec<String>) -> Option<Verdict> {
    match hyperbolic {
        Verdict::Certified => None,
        Verdict::Advisory => {
            reasons.push("hyperbolicity was not measured to completion".into());
            Some(Verdict::Advisory)
        }
        Verdict::Refused | Verdict::HypothesisFailed => {
            reasons.push("hyperbolicity is not established on this window".into());
            Some(Verdict::HypothesisFailed)
        }
    }
}

fn core_codegree(map: &PlanarMap) -> Option<usize> {
    map.core_faces()
        .into_iter()
        .map(|f| map.face(f).len())
        .max()
}

/// Hyperbolic and weakly non-amenable with no unbounded face implies
/// non-amenable: walk around every enumerated connected core set and compare
/// its ratio with `1/(k̂·Δ(G*)²)`.
pub fn check_implication_3(m: &Measurements, hyperbolic: Verdict) -> Result<Implication> {
    let map = m.map;
    let mut reasons = Vec::new();
    let (Some(codegree), Some(k)) = (map.max_codegree(), m.k_hat) else {
        return Ok(implication(
            Verdict::Advisory,
            vec!["no bounded face or no certified hull cycle to measure k̂".into()],
            Value::Null,
        ));
    };
    let unbounded = Mutex::new(0usize);
    let walked = visit_subsets(
        map,
        &core_vertices(map),
        m.caps.search(),
        |s, _| match boundary_walk(map, s) {
            Ok(w) => {
                if w.distinct_hits * codegree <= w.len() || !w.subwalks_shorter_than(codegree) {
                    return Err(Error::Postcondition(format!(
                        "walk around {:?} has {} boundary hits for length {}",
                        s.iter().map(|&v| map.label(v)).collect::<Vec<_>>(),
                        w.distinct_hits,
                        w.len()
                    )));
                }
                Ok(())
            }
            Err(Error::MeetsUnboundedFace) => {
                *unbounded.lock().unwrap() += 1;
                Ok(())
            }
            Err(e) => Err(e),
        },
    );
    let bound = Ratio::new(*k.denom(), k.numer() * (codegree * codegree) as u64);
    let mut data = serde_json::json!({
        "k_hat": Fraction::from(k),
        "codegree": codegree,
        "bound": Fraction::from(bound),
    });
    let states = match walked {
        Ok(states) => states,
        Err(e) if e.is_budget() => {
            return Ok(implication(Verdict::Advisory, vec![e.to_string()], data));
        }
        Err(Error::Postcondition(msg)) => {
            return Ok(implication(Verdict::Refused, vec![msg], data));
        }
        Err(e) => return Err(e),
    };
    let unbounded = unbounded.into_inner().unwrap();
    data["subsets"] = states.into();
    data["walks_meeting_unbounded_face"] = unbounded.into();
    let min_ratio = m.survey.best.as_ref().map(|w| w.ratio());
    if let Some(r) = min_ratio {
        data["min_ratio"] = serde_json::to_value(Fraction::from(r)).unwrap();
    }
    let verdict = if min_ratio.is_some_and(|r| r < bound) {
        reasons.push("a connected core set has |∂S|/|S| below 1/(k̂·Δ(G*)²)".into());
        Verdict::Refused
    } else if let Some(v) = hypothesis(hyperbolic, &mut reasons) {
        v
    } else if unbounded > 0 {
        reasons.push(format!(
            "{unbounded} boundary walks meet the unbounded face; the no-unbounded-face precondition is unverifiable"
        ));
        Verdict::Advisory
    } else {
        Verdict::Certified
    };
    Ok(implication(verdict, reasons, data))
}

pub fn analyze(map: &PlanarMap, caps: Caps) -> Result<AnalysisReport> {
    let m = measure(map, caps)?;
    let (one, _) = check_implication_1(&m)?;
    let two = check_implication_2(&m, one.verdict)?;
    let three = check_implication_3(&m, one.verdict)?;

    let degree_stats = DegreeSummary {
        vertices: map.num_vertices(),
        edges: map.num_edges(),
        faces: map.num_faces(),
        rim: map.rim_vertices().count(),
        core: core_vertices(map).len(),
        max_degree: map.max_degree(),
        codegree: map.max_codegree(),
        core_codegree: core_codegree(map),
    };
    let delta = DeltaSummary {
        scope: m.delta.scope,
        exact: m.delta.exact,
        value: m.delta.delta,
        triangles: m.delta.triangles,
        witness: m.delta.witness.clone(),
    };
    let cheeger = CheegerSummary {
        scope: if m.survey.exhaustive {
            Scope::Certified
        } else {
            Scope::Advisory
        },
        ratio: m.survey.best.as_ref().map(|w| w.ratio().into()),
        size_cap: caps.size_cap,
        states: m.survey.states,
        exhaustive: m.survey.exhaustive,
        witness: m
            .survey
            .best
            .as_ref()
            .map(|w| w.vertices.iter().map(|&v| map.label(v)).collect())
            .unwrap_or_default(),
        boundary: m.survey.best.as_ref().map(|w| w.boundary),
    };
    let profile = ProfileSummary {
        scope: if m.profile.exhaustive {
            Scope::Certified
        } else {
            Scope::Advisory
        },
        exhaustive: m.profile.exhaustive,
        points: m
            .profile
            .points
            .iter()
            .map(|w| ProfilePoint {
                boundary: w.boundary,
                size: w.size,
            })
            .collect(),
    };
    let ok: Vec<&HullTrace> = m.hulls.iter().flatten().collect();
    let hull = HullSummary {
        scope: if ok.iter().all(|t| t.certified) {
            Scope::Certified
        } else {
            Scope::Advisory
        },
        faces: m.hulls.len(),
        geodetic: ok.iter().filter(|t| t.geodetic).count(),
        certified: ok.iter().filter(|t| t.certified).count(),
        skipped: m
            .hulls
            .iter()
            .filter(|r| matches!(r, Err(e) if !e.is_budget()))
            .count(),
        budget_limited: m
            .hulls
            .iter()
            .filter(|r| matches!(r, Err(e) if e.is_budget()))
            .count(),
        max_terminal: ok.iter().map(|t| t.terminal().len()).max().unwrap_or(0),
        max_steps: ok.iter().map(|t| t.steps.len()).max().unwrap_or(0),
    };
    let k_hat = KHat {
        scope: Scope::Certified,
        value: m.k_hat.map(Fraction::from),
        cycles: m.hull_cycles.len(),
    };
    Ok(AnalysisReport {
        format: REPORT_FORMAT,
        input_digest: digest(map),
        caps,
        degree_stats,
        delta,
        cheeger,
        profile,
        hull,
        k_hat,
        implications: Implications {
            hyperbolic: one,
            bounded_codegree: two,
            nonamenable: three,
        },
    })
}
