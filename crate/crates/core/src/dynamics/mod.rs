//! Iteration of holomorphic self-maps.

mod map;

pub use map::{HolomorphicMap, MapExpr, MARGIN_FLOOR};

use rand::Rng;
use serde::Serialize;

use crate::domain::BoundaryTarget;
use crate::ends::{build_end_tree, classify_limit, EndTree, LimitVerdict, DEFAULT_MAX_LEVEL, SNAP_TOL};
use crate::error::{HoroError, Result};
use crate::horofunction::{
    approach_sequence, estimate_horofunction, horoball_level, horosphere_membership, sample_horoball,
    ApproachStyle, HorofunctionEstimate, HorosphereFamily, Membership, DEFAULT_TOL, ESCAPE_LEVEL, MAX_TERMS,
    TAIL,
};
use crate::kobayashi::DistanceEngine;
use crate::point::Point;
use map::{step, Step};

pub const DEFAULT_HORIZON: usize = 200;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitClass {
    Target(BoundaryTarget),
    RelativelyCompact,
    Inconclusive(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitRecord {
    pub seed: Point,
    pub horizon: usize,
    /// `f^0(z), f^1(z), …`; stops early when an image rounds onto the boundary.
    pub iterates: Vec<Point>,
    pub exhaustion_indices: Vec<u32>,
    /// `k(z, f^n(z))`.
    pub pole_distances: Vec<f64>,
    /// Step whose image rounded onto the boundary.
    pub boundary_hit: Option<usize>,
    pub classification: OrbitClass,
}

fn require_exact(engine: &DistanceEngine) -> Result<()> {
    if engine.is_chain() {
        return Err(HoroError::Unsupported(
            "dynamics needs an exact or conformal engine".into(),
        ));
    }
    Ok(())
}

fn tree_for(engine: &DistanceEngine) -> Result<EndTree> {
    build_end_tree(engine.domain(), DEFAULT_MAX_LEVEL)
}

pub fn iterate(engine: &DistanceEngine, f: &HolomorphicMap, z: &Point, horizon: usize) -> Result<OrbitRecord> {
    let tree = tree_for(engine)?;
    iterate_in(engine, &tree, f, z, horizon)
}

fn iterate_in(
    engine: &DistanceEngine,
    tree: &EndTree,
    f: &HolomorphicMap,
    z: &Point,
    horizon: usize,
) -> Result<OrbitRecord> {
    require_exact(engine)?;
    let domain = engine.domain();
    domain.require_member(z)?;
    let mut iterates = vec![*z];
    let mut boundary_hit = None;
    for n in 1..=horizon {
        match step(engine, f, iterates.last().expect("nonempty"))? {
            Step::Inside(w) => iterates.push(w),
            Step::Boundary => {
                boundary_hit = Some(n);
                break;
            }
        }
    }
    let exhaustion_indices = iterates
        .iter()
        .map(|w| domain.exhaustion_index(w))
        .collect::<Result<Vec<_>>>()?;
    let pole_distances = iterates
        .iter()
        .map(|w| engine.distance(z, w))
        .collect::<Result<Vec<_>>>()?;
    let classification = match classify_limit(tree, &iterates)? {
        LimitVerdict::Target(t) => OrbitClass::Target(t),
        LimitVerdict::Interior(_) => OrbitClass::RelativelyCompact,
        LimitVerdict::NoLimit(why) => {
            if exhaustion_indices.iter().all(|j| *j <= ESCAPE_LEVEL) {
                OrbitClass::RelativelyCompact
            } else {
                OrbitClass::Inconclusive(why)
            }
        }
    };
    Ok(OrbitRecord {
        seed: *z,
        horizon,
        iterates,
        exhaustion_indices,
        pole_distances,
        boundary_hit,
        classification,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Escape {
    CompactlyDivergent,
    RelativelyCompact,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct EscapeReport {
    pub verdict: Escape,
    pub horizon: usize,
    pub escape_level: u32,
    /// Largest exhaustion index along each orbit.
    pub max_index: Vec<u32>,
    /// Smallest exhaustion index over the last quarter of each orbit.
    pub tail_min_index: Vec<u32>,
}

/// Empirical escape test: every orbit ends beyond the escape level, or every
/// orbit stays within it.
pub fn compact_divergence(
    engine: &DistanceEngine,
    f: &HolomorphicMap,
    seeds: &[Point],
    horizon: usize,
) -> Result<EscapeReport> {
    let tree = tree_for(engine)?;
    let orbits = seeds
        .iter()
        .map(|s| iterate_in(engine, &tree, f, s, horizon))
        .collect::<Result<Vec<_>>>()?;
    escape_report(&orbits, horizon)
}

fn escape_report(orbits: &[OrbitRecord], horizon: usize) -> Result<EscapeReport> {
    if orbits.is_empty() {
        return Err(HoroError::InvalidInput("at least one seed is required".into()));
    }
    let mut max_index = Vec::new();
    let mut tail_min_index = Vec::new();
    for o in orbits {
        let idx = &o.exhaustion_indices;
        let start = idx.len() - (idx.len() / 4).max(1);
        max_index.push(idx.iter().copied().max().unwrap_or(0));
        tail_min_index.push(idx[start..].iter().copied().min().unwrap_or(0));
    }
    let verdict = if tail_min_index.iter().all(|j| *j > ESCAPE_LEVEL) {
        Escape::CompactlyDivergent
    } else if max_index.iter().all(|j| *j <= ESCAPE_LEVEL) {
        Escape::RelativelyCompact
    } else {
        Escape::Inconclusive
    };
    Ok(EscapeReport {
        verdict,
        horizon,
        escape_level: ESCAPE_LEVEL,
        max_index,
        tail_min_index,
    })
}

/// Boundary target and horofunction extracted from the orbit of the pole.
#[derive(Clone, Debug)]
pub struct WolffData {
    pub pole: Point,
    pub target: BoundaryTarget,
    pub estimate: HorofunctionEstimate,
    /// Indices `n` with `k(p, f^{n+1}(p)) > k(p, f^n(p))`.
    pub indices: Vec<usize>,
    pub orbit: OrbitRecord,
}

#[derive(Clone, Debug, Serialize)]
pub struct WolffSummary {
    pub pole: Point,
    pub target: BoundaryTarget,
    pub indices: Vec<usize>,
    pub certificate: crate::horofunction::Certificate,
}

impl WolffData {
    pub fn summary(&self) -> WolffSummary {
        WolffSummary {
            pole: self.pole,
            target: self.target.clone(),
            indices: self.indices.clone(),
            certificate: self.estimate.certificate(),
        }
    }
}

fn custom_estimate(engine: &DistanceEngine, pole: &Point, target: &BoundaryTarget, points: &[Point]) -> Result<HorofunctionEstimate> {
    let keep = &points[points.len().saturating_sub(MAX_TERMS)..];
    let style = ApproachStyle::Custom { points: keep.to_vec() };
    let seq = approach_sequence(engine.domain(), target, &style, keep.len())?;
    estimate_horofunction(engine, pole, &seq, &[], DEFAULT_TOL)
}

pub fn wolff_data(engine: &DistanceEngine, f: &HolomorphicMap, pole: &Point, horizon: usize) -> Result<WolffData> {
    let tree = tree_for(engine)?;
    let orbit = iterate_in(engine, &tree, f, pole, horizon)?;
    let escape = escape_report(std::slice::from_ref(&orbit), horizon)?;
    if escape.verdict != Escape::CompactlyDivergent {
        return Err(HoroError::Precondition(format!(
            "orbit of the pole is not compactly divergent within {horizon} iterates"
        )));
    }
    let d = &orbit.pole_distances;
    let indices: Vec<usize> = (0..d.len().saturating_sub(1)).filter(|&n| d[n + 1] > d[n]).collect();
    if indices.len() < TAIL {
        return Err(HoroError::Horizon(format!(
            "only {} increasing-distance indices within {horizon} iterates",
            indices.len()
        )));
    }
    let sub: Vec<Point> = indices.iter().map(|&n| orbit.iterates[n]).collect();
    let target = match classify_limit(&tree, &sub)? {
        LimitVerdict::Target(t) => t,
        other => {
            return Err(HoroError::Horizon(format!(
                "Wolff subsequence does not settle on a boundary target: {other:?}"
            )))
        }
    };
    let estimate = custom_estimate(engine, pole, &target, &sub)?;
    Ok(WolffData {
        pole: *pole,
        target,
        estimate,
        indices,
        orbit,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct InclusionViolation {
    pub sample: Point,
    pub step: usize,
    pub image: Point,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InclusionRow {
    pub radius: f64,
    pub samples: usize,
    pub checks: usize,
    pub indeterminate: usize,
    pub violations: Vec<InclusionViolation>,
    /// Largest observed `h(f(z)) − h(z)`.
    pub max_one_step_change: f64,
    pub cascade_checks: usize,
    pub cascade_violations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct InclusionReport {
    pub rows: Vec<InclusionRow>,
    pub total_violations: usize,
    pub total_cascade_violations: usize,
}

/// Checks that iterates of horoball samples stay in the big horosphere, and
/// the one-step cascade `h_{ξ_n}(f^n(z)) ≤ h_ξ(z)`.
#[allow(clippy::too_many_arguments)]
pub fn wolff_inclusion_check<R: Rng>(
    engine: &DistanceEngine,
    f: &HolomorphicMap,
    wolff: &WolffData,
    family: &HorosphereFamily,
    radii: &[f64],
    samples: usize,
    max_steps: usize,
    rng: &mut R,
) -> Result<InclusionReport> {
    require_exact(engine)?;
    let xi = &wolff.estimate;
    // ξ_n from the shifted Wolff subsequence, restricted to indices where the
    // distance from the pole has not dropped
    let d = &wolff.orbit.pole_distances;
    let mut cascade: Vec<(usize, HorofunctionEstimate)> = Vec::new();
    for n in 1..=max_steps.min(3) {
        let pts: Vec<Point> = wolff
            .indices
            .iter()
            .filter(|&&m| m + n < d.len() && d[m + n] >= d[m])
            .map(|&m| wolff.orbit.iterates[m + n])
            .collect();
        if pts.len() >= TAIL {
            if let Ok(e) = custom_estimate(engine, &wolff.pole, &wolff.target, &pts) {
                cascade.push((n, e));
            }
        }
    }
    let mut rows = Vec::new();
    for &radius in radii {
        horoball_level(radius)?;
        let zs = sample_horoball(xi, radius, samples, rng)?;
        let mut row = InclusionRow {
            radius,
            samples: zs.len(),
            checks: 0,
            indeterminate: 0,
            violations: Vec::new(),
            max_one_step_change: f64::NEG_INFINITY,
            cascade_checks: 0,
            cascade_violations: 0,
        };
        for z in &zs {
            let hz = xi.value(z)?;
            let spread_z = xi.oscillation_at(z)?;
            let mut current = *z;
            for n in 1..=max_steps {
                let Step::Inside(next) = step(engine, f, &current)? else { break };
                current = next;
                if n == 1 {
                    row.max_one_step_change = row.max_one_step_change.max(xi.value(&current)? - hz);
                }
                let m = horosphere_membership(family, &current, radius)?;
                row.checks += 1;
                match m.in_big {
                    Membership::Inside => {}
                    Membership::Indeterminate => row.indeterminate += 1,
                    Membership::Outside => row.violations.push(InclusionViolation {
                        sample: *z,
                        step: n,
                        image: current,
                        values: m.values,
                    }),
                }
                if let Some((_, e)) = cascade.iter().find(|(k, _)| *k == n) {
                    let guard = 2.0 * (spread_z + e.oscillation_at(&current)?) + 1e-9;
                    row.cascade_checks += 1;
                    if e.value(&current)? > hz + guard {
                        row.cascade_violations += 1;
                    }
                }
            }
        }
        rows.push(row);
    }
    Ok(InclusionReport {
        total_violations: rows.iter().map(|r| r.violations.len()).sum(),
        total_cascade_violations: rows.iter().map(|r| r.cascade_violations).sum(),
        rows,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DwVerdict {
    RelativelyCompact,
    BoundaryLimit,
    NoCommonLimit,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpreadSample {
    pub n: usize,
    pub spread: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DenjoyWolffReport {
    pub verdict: DwVerdict,
    pub limit: Option<BoundaryTarget>,
    pub horizon: usize,
    pub seeds: Vec<Point>,
    pub per_seed: Vec<OrbitClass>,
    /// Seed agrees with the first seed's target.
    pub agreement: Vec<bool>,
    pub escape: EscapeReport,
    /// Euclidean diameter of `f^n` applied to a Kobayashi ball of radius 1.
    pub spread: Vec<SpreadSample>,
    pub justification: String,
}

const PROBE_BALL_RADIUS: f64 = 1.0;

fn probe_ball(engine: &DistanceEngine, centre: &Point) -> Result<Vec<Point>> {
    let domain = engine.domain();
    let count = if domain.dim() == 1 { 256 } else { 1024 };
    let mut scored: Vec<(f64, Point)> = domain
        .halton_points(count)
        .into_iter()
        .map(|q| engine.distance(centre, &q).map(|d| (d, q)))
        .collect::<Result<_>>()?;
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut ball: Vec<Point> = vec![*centre];
    for (i, (d, q)) in scored.into_iter().enumerate() {
        if d <= PROBE_BALL_RADIUS || i < 8 {
            ball.push(q);
        }
    }
    Ok(ball)
}

fn diameter(points: &[Point]) -> f64 {
    let mut best = 0.0f64;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.max(a.euclid_dist(b));
        }
    }
    best
}

fn checkpoints(horizon: usize) -> Vec<usize> {
    let mut out = vec![1, 2, 5];
    let mut n = 10;
    while n <= horizon {
        out.push(n);
        n *= 2;
    }
    if horizon >= 40 && !out.contains(&40) {
        out.push(40);
    }
    out.retain(|n| *n <= horizon);
    out.sort_unstable();
    out.dedup();
    out
}

pub fn denjoy_wolff(
    engine: &DistanceEngine,
    f: &HolomorphicMap,
    seeds: &[Point],
    horizon: usize,
) -> Result<DenjoyWolffReport> {
    require_exact(engine)?;
    if seeds.is_empty() {
        return Err(HoroError::InvalidInput("at least one seed is required".into()));
    }
    let tree = tree_for(engine)?;
    let orbits = seeds
        .iter()
        .map(|s| iterate_in(engine, &tree, f, s, horizon))
        .collect::<Result<Vec<_>>>()?;
    let escape = escape_report(&orbits, horizon)?;
    let per_seed: Vec<OrbitClass> = orbits.iter().map(|o| o.classification.clone()).collect();

    // raw images: an orbit that rounds onto the boundary keeps its rounded value
    let mut ball = probe_ball(engine, &seeds[0])?;
    let marks = checkpoints(horizon);
    let mut spread = Vec::new();
    let mut n = 0;
    for &m in &marks {
        while n < m {
            for q in ball.iter_mut() {
                *q = f.apply(q);
            }
            n += 1;
        }
        spread.push(SpreadSample { n, spread: diameter(&ball) });
    }

    let first = match &per_seed[0] {
        OrbitClass::Target(t) => Some(t.clone()),
        _ => None,
    };
    let agreement: Vec<bool> = per_seed
        .iter()
        .map(|c| match (c, &first) {
            (OrbitClass::Target(t), Some(f0)) => t.matches(f0, SNAP_TOL),
            _ => false,
        })
        .collect();
    let (verdict, limit) = match escape.verdict {
        Escape::RelativelyCompact => (DwVerdict::RelativelyCompact, None),
        Escape::Inconclusive => (DwVerdict::Inconclusive, None),
        Escape::CompactlyDivergent => {
            if first.is_some() && agreement.iter().all(|a| *a) {
                (DwVerdict::BoundaryLimit, first)
            } else {
                (DwVerdict::NoCommonLimit, None)
            }
        }
    };
    Ok(DenjoyWolffReport {
        verdict,
        limit,
        horizon,
        seeds: seeds.to_vec(),
        per_seed,
        agreement,
        escape,
        spread,
        justification: "spread of f^n over a compact Kobayashi ball is the proxy for compact-open \
                        convergence; pointwise limits are locally uniform on domains with the \
                        boundary separation property, which holds for every shipped domain"
            .into(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SubsequenceLimit {
    pub seed: usize,
    pub schedule: String,
    pub indices: Vec<usize>,
    pub verdict: LimitVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct TargetSetReport {
    /// Distinct classified limits; a sample of the target set.
    pub targets: Vec<BoundaryTarget>,
    pub subsequences: Vec<SubsequenceLimit>,
    /// Largest `k(f^n(z_0), f^n(z_j))` over scheduled `n`.
    pub max_cross_distance: f64,
    /// Largest increase of `k(f^n(z_0), f^n(z_j))` between scheduled `n`.
    pub max_cross_increase: f64,
    pub sample: bool,
}

pub fn target_set_sample(
    engine: &DistanceEngine,
    f: &HolomorphicMap,
    seeds: &[Point],
    schedule: Option<&[usize]>,
    horizon: usize,
) -> Result<TargetSetReport> {
    require_exact(engine)?;
    let tree = tree_for(engine)?;
    let orbits = seeds
        .iter()
        .map(|s| iterate_in(engine, &tree, f, s, horizon))
        .collect::<Result<Vec<_>>>()?;
    if escape_report(&orbits, horizon)?.verdict != Escape::CompactlyDivergent {
        return Err(HoroError::Precondition("iterates are not compactly divergent".into()));
    }
    let mut subsequences = Vec::new();
    let mut targets: Vec<BoundaryTarget> = Vec::new();
    for (s, o) in orbits.iter().enumerate() {
        let len = o.iterates.len();
        let mut schedules: Vec<(String, Vec<usize>)> = Vec::new();
        let mut powers: Vec<usize> = match schedule {
            Some(sch) => sch.iter().copied().filter(|n| *n < len).collect(),
            None => (0..usize::BITS).map(|k| 1usize << k).take_while(|n| *n < len).collect(),
        };
        // the last available iterate closes every schedule
        if powers.last() != Some(&(len - 1)) {
            powers.push(len - 1);
        }
        schedules.push((if schedule.is_some() { "custom" } else { "powers_of_two" }.into(), powers));
        let d = &o.pole_distances;
        let wolff: Vec<usize> = (0..len.saturating_sub(1)).filter(|&n| d[n + 1] > d[n]).collect();
        schedules.push(("wolff".into(), wolff));
        for (label, idx) in schedules {
            if idx.len() < TAIL {
                continue;
            }
            let pts: Vec<Point> = idx.iter().map(|&n| o.iterates[n]).collect();
            let verdict = classify_limit(&tree, &pts)?;
            if let LimitVerdict::Target(t) = &verdict {
                if !targets.iter().any(|u| u.matches(t, SNAP_TOL)) {
                    targets.push(t.clone());
                }
            }
            subsequences.push(SubsequenceLimit {
                seed: s,
                schedule: label,
                indices: idx,
                verdict,
            });
        }
    }
    let mut max_cross_distance = 0.0f64;
    let mut max_cross_increase = f64::NEG_INFINITY;
    for o in &orbits[1..] {
        let len = o.iterates.len().min(orbits[0].iterates.len());
        let mut prev: Option<f64> = None;
        for n in 0..len {
            let k = engine.distance(&orbits[0].iterates[n], &o.iterates[n])?;
            max_cross_distance = max_cross_distance.max(k);
            if let Some(p) = prev {
                max_cross_increase = max_cross_increase.max(k - p);
            }
            prev = Some(k);
        }
    }
    if max_cross_increase == f64::NEG_INFINITY {
        max_cross_increase = 0.0;
    }
    Ok(TargetSetReport {
        targets,
        subsequences,
        max_cross_distance,
        max_cross_increase,
        sample: true,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ShrinkRow {
    pub radius: f64,
    pub raster_points: usize,
    pub inside: usize,
    pub indeterminate: usize,
    /// Largest Euclidean distance from the target to a sampled member; half the
    /// diameter is at most this.
    pub extent: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShrinkReport {
    pub target: BoundaryTarget,
    pub labels: Vec<String>,
    pub rows: Vec<ShrinkRow>,
    pub verdict: String,
}

fn log_polar_raster(engine: &DistanceEngine, sigma: &Point) -> Vec<Point> {
    let domain = engine.domain();
    let c = domain.inner_anchor(sigma);
    let dim = domain.dim();
    let (nr, nt) = if dim == 1 { (60, 61) } else { (16, 9) };
    let rhos: Vec<f64> = (0..nr)
        .map(|k| (1e-5f64.ln() + (2f64.ln() - 1e-5f64.ln()) * k as f64 / (nr - 1) as f64).exp())
        .collect();
    let thetas: Vec<f64> = (0..nt).map(|k| -1.5 + 3.0 * k as f64 / (nt - 1) as f64).collect();
    let per_coord: Vec<Vec<num_complex::Complex64>> = (0..dim)
        .map(|i| {
            let s = sigma.coord(i);
            let dir = c.coord(i) - s;
            rhos.iter()
                .flat_map(|r| thetas.iter().map(move |t| s + dir * num_complex::Complex64::from_polar(*r, *t)))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    if dim == 1 {
        out.extend(per_coord[0].iter().map(|z| Point::planar(*z)));
    } else {
        for a in &per_coord[0] {
            for b in &per_coord[1] {
                out.push(Point::pair(*a, *b));
            }
        }
    }
    out.retain(|p| domain.contains(p).unwrap_or(false));
    out
}

/// Sampled big-horosphere regions for a decreasing radius schedule.
pub fn big_horosphere_shrink_probe(
    engine: &DistanceEngine,
    family: &HorosphereFamily,
    radii: &[f64],
) -> Result<ShrinkReport> {
    require_exact(engine)?;
    let Some(sigma) = family.target.as_point().copied() else {
        return Err(HoroError::Unsupported("shrink probe needs a boundary point target".into()));
    };
    if radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(HoroError::InvalidInput("radius schedule must decrease".into()));
    }
    let raster = log_polar_raster(engine, &sigma);
    let mut rows = Vec::new();
    for &radius in radii {
        horoball_level(radius)?;
        let mut row = ShrinkRow {
            radius,
            raster_points: raster.len(),
            inside: 0,
            indeterminate: 0,
            extent: 0.0,
        };
        for z in &raster {
            match horosphere_membership(family, z, radius)?.in_big {
                Membership::Inside => {
                    row.inside += 1;
                    row.extent = row.extent.max(z.euclid_dist(&sigma));
                }
                Membership::Indeterminate => row.indeterminate += 1,
                Membership::Outside => {}
            }
        }
        rows.push(row);
    }
    let shrinking = rows.windows(2).all(|w| w[1].extent < w[0].extent);
    let collapsed = match (rows.first(), rows.last()) {
        (Some(a), Some(b)) => rows.len() >= 2 && b.extent <= 0.1 * a.extent,
        _ => false,
    };
    let verdict = if shrinking && collapsed {
        "singleton_consistent"
    } else if shrinking {
        "shrinking"
    } else {
        "not_shrinking"
    };
    Ok(ShrinkReport {
        target: family.target.clone(),
        labels: family.labels.clone(),
        rows,
        verdict: verdict.into(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceRow {
    pub radius: f64,
    pub samples: usize,
    pub violations: usize,
    /// Extremes of `h(z) − h(f(z))`.
    pub min_slack: f64,
    pub max_slack: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub precondition: Option<String>,
    pub target: Option<BoundaryTarget>,
    pub rows: Vec<InvarianceRow>,
}

/// Fixed-point-free maps of convex domains keep horoballs at their Wolff
/// point: `h(f(z)) ≤ h(z)` on samples.
pub fn invariant_horoball_check<R: Rng>(
    engine: &DistanceEngine,
    f: &HolomorphicMap,
    pole: &Point,
    radii: &[f64],
    samples: usize,
    horizon: usize,
    rng: &mut R,
) -> Result<InvarianceReport> {
    require_exact(engine)?;
    let domain = engine.domain();
    let fail = |why: String| InvarianceReport {
        precondition: Some(why),
        target: None,
        rows: Vec::new(),
    };
    if !domain.is_convex() {
        return Ok(fail(format!("{} is not convex", domain.name())));
    }
    let count = if domain.dim() == 1 { 256 } else { 1024 };
    for z in domain.halton_points(count) {
        if engine.distance(&z, &f.apply(&z))? < 1e-9 {
            return Ok(fail(format!("sampled fixed point near {z}")));
        }
    }
    let wolff = match wolff_data(engine, f, pole, horizon) {
        Ok(w) => w,
        Err(HoroError::Precondition(why)) => return Ok(fail(format!("orbit does not escape: {why}"))),
        Err(e) => return Err(e),
    };
    let xi = &wolff.estimate;
    let mut rows = Vec::new();
    for &radius in radii {
        let zs = sample_horoball(xi, radius, samples, rng)?;
        let mut row = InvarianceRow {
            radius,
            samples: zs.len(),
            violations: 0,
            min_slack: f64::INFINITY,
            max_slack: f64::NEG_INFINITY,
        };
        for z in &zs {
            let Step::Inside(fz) = step(engine, f, z)? else { continue };
            let slack = xi.value(z)? - xi.value(&fz)?;
            let guard = 2.0 * (xi.oscillation_at(z)? + xi.oscillation_at(&fz)?) + 1e-9;
            if slack < -guard {
                row.violations += 1;
            }
            row.min_slack = row.min_slack.min(slack);
            row.max_slack = row.max_slack.max(slack);
        }
        rows.push(row);
    }
    Ok(InvarianceReport {
        precondition: None,
        target: Some(wolff.target),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainModel;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn disk_map(expr: MapExpr) -> (DistanceEngine, HolomorphicMap) {
        let e = DistanceEngine::new(DomainModel::disk()).unwrap();
        let f = HolomorphicMap::certify(&e, expr).unwrap();
        (e, f)
    }

    fn halfway2() -> MapExpr {
        MapExpr::Coordinatewise { maps: vec![MapExpr::halfway(), MapExpr::halfway()] }
    }

    #[test]
    fn halfway_orbit_closed_form() {
        let (e, f) = disk_map(MapExpr::halfway());
        let o = iterate(&e, &f, &Point::real(0.0), 30).unwrap();
        for (n, w) in o.iterates.iter().enumerate() {
            assert_eq!(w.z(), c(1.0 - 0.5f64.powi(n as i32), 0.0));
            assert!((o.pole_distances[n] - w.z().re.atanh()).abs() < 1e-9);
        }
        assert_eq!(o.classification, OrbitClass::Target(BoundaryTarget::point(Point::real(1.0))));
    }

    #[test]
    fn rotation_is_relatively_compact() {
        let (e, f) = disk_map(MapExpr::rotation(PI / 2.0));
        let o = iterate(&e, &f, &Point::real(0.5), 40).unwrap();
        assert_eq!(o.classification, OrbitClass::RelativelyCompact);
        assert!(o.iterates.iter().all(|w| (w.norm() - 0.5).abs() < 1e-12));
    }

    #[test]
    fn bidisc_orbit_reaches_corner() {
        let e = DistanceEngine::new(DomainModel::bidisc()).unwrap();
        let f = HolomorphicMap::certify(&e, halfway2()).unwrap();
        let o = iterate(&e, &f, &Point::pair(c(0.0, 0.0), c(0.0, 0.0)), 200).unwrap();
        let corner = BoundaryTarget::point(Point::pair(c(1.0, 0.0), c(1.0, 0.0)));
        match o.classification {
            OrbitClass::Target(t) => assert!(t.matches(&corner, 1e-9)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn escape_verdicts() {
        let seeds = [Point::real(0.0), Point::planar(c(0.0, 0.3)), Point::real(-0.5)];
        let (e, f) = disk_map(MapExpr::halfway());
        assert_eq!(compact_divergence(&e, &f, &seeds, 200).unwrap().verdict, Escape::CompactlyDivergent);
        let (e, f) = disk_map(MapExpr::affine(c(0.5, 0.0), c(0.0, 0.0)));
        assert_eq!(compact_divergence(&e, &f, &seeds, 200).unwrap().verdict, Escape::RelativelyCompact);
        let (e, f) = disk_map(MapExpr::mobius(0.5, 0.0));
        assert_eq!(compact_divergence(&e, &f, &seeds, 200).unwrap().verdict, Escape::CompactlyDivergent);
    }

    #[test]
    fn wolff_data_disk_matches_busemann() {
        let (e, f) = disk_map(MapExpr::halfway());
        let w = wolff_data(&e, &f, &Point::real(0.0), 200).unwrap();
        assert!(w.target.matches(&BoundaryTarget::point(Point::real(1.0)), 1e-12));
        for win in w.indices.windows(2) {
            assert!(win[1] > win[0]);
        }
        for z in e.domain().probe_grid() {
            let zz = z.z();
            let oracle = 0.5 * ((c(1.0, 0.0) - zz).norm_sqr() / (1.0 - zz.norm_sqr())).ln();
            assert!((w.estimate.value(&z).unwrap() - oracle).abs() < 1e-5);
        }
        let (e, f) = disk_map(MapExpr::rotation(1.0));
        assert!(matches!(wolff_data(&e, &f, &Point::real(0.0), 200), Err(HoroError::Precondition(_))));
    }

    #[test]
    fn wolff_inclusion_disk() {
        let (e, f) = disk_map(MapExpr::halfway());
        let pole = Point::real(0.0);
        let w = wolff_data(&e, &f, &pole, 200).unwrap();
        let fam = HorosphereFamily::build(&e, &pole, &w.target, &[ApproachStyle::Radial], 40, DEFAULT_TOL).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = wolff_inclusion_check(&e, &f, &w, &fam, &[0.5, 1.0, 2.0], 30, 10, &mut rng).unwrap();
        assert_eq!(r.total_violations, 0);
        assert_eq!(r.total_cascade_violations, 0);
        for row in &r.rows {
            assert!(row.max_one_step_change <= -0.34, "{}", row.max_one_step_change);
            assert!(row.cascade_checks > 0);
        }
    }

    #[test]
    fn denjoy_wolff_examples() {
        let seeds = [Point::real(0.0), Point::planar(c(0.0, 0.3)), Point::real(-0.5)];
        let (e, f) = disk_map(MapExpr::halfway());
        let r = denjoy_wolff(&e, &f, &seeds, 200).unwrap();
        assert_eq!(r.verdict, DwVerdict::BoundaryLimit);
        assert!(r.limit.unwrap().matches(&BoundaryTarget::point(Point::real(1.0)), 1e-12));
        let at40 = r.spread.iter().find(|s| s.n == 40).unwrap();
        assert!(at40.spread < 1e-6);

        let (e, f) = disk_map(MapExpr::rotation(PI / 2.0));
        assert_eq!(denjoy_wolff(&e, &f, &[Point::real(0.5)], 200).unwrap().verdict, DwVerdict::RelativelyCompact);

        let (e, f) = disk_map(MapExpr::mobius(0.5, 0.0));
        let r = denjoy_wolff(&e, &f, &seeds, 200).unwrap();
        let y = r.limit.unwrap();
        assert!((y.as_point().unwrap().z() - c(1.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn strip_conjugate_goes_right() {
        let e = DistanceEngine::new(DomainModel::unit_strip()).unwrap();
        let expr = MapExpr::StripConjugate {
            im_min: 0.0,
            im_max: 1.0,
            inner: Box::new(MapExpr::affine(c(2.0, 0.0), c(0.0, 1.0))),
        };
        let f = HolomorphicMap::certify(&e, expr).unwrap();
        let seeds = [Point::planar(c(0.0, 0.5)), Point::planar(c(-1.0, 0.2))];
        let r = denjoy_wolff(&e, &f, &seeds, 200).unwrap();
        assert_eq!(r.verdict, DwVerdict::BoundaryLimit);
        match r.limit.unwrap() {
            BoundaryTarget::End(end) => assert!(end.direction[0] > 0.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn target_sets() {
        let seeds = [Point::real(0.0), Point::real(-0.5)];
        let (e, f) = disk_map(MapExpr::halfway());
        let r = target_set_sample(&e, &f, &seeds, None, 200).unwrap();
        assert_eq!(r.targets.len(), 1);
        assert!(r.targets[0].matches(&BoundaryTarget::point(Point::real(1.0)), 1e-12));
        assert!(r.max_cross_increase <= 1e-9);
        let (e, f) = disk_map(MapExpr::rotation(1.0));
        assert!(matches!(target_set_sample(&e, &f, &seeds, None, 200), Err(HoroError::Precondition(_))));
    }

    #[test]
    fn shrink_probe_disk() {
        let e = DistanceEngine::new(DomainModel::disk()).unwrap();
        let target = BoundaryTarget::point(Point::real(1.0));
        let fam = HorosphereFamily::build(&e, &Point::real(0.0), &target, &[ApproachStyle::Radial], 40, DEFAULT_TOL).unwrap();
        let r = big_horosphere_shrink_probe(&e, &fam, &[1.0, 0.1, 0.01]).unwrap();
        assert_eq!(r.verdict, "singleton_consistent");
        for row in &r.rows {
            let oracle = 2.0 * row.radius / (1.0 + row.radius);
            assert!(row.extent <= oracle + 1e-9 && row.extent > 0.8 * oracle, "{row:?}");
        }
    }

    #[test]
    fn invariant_horoballs() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (e, f) = disk_map(MapExpr::halfway());
        let r = invariant_horoball_check(&e, &f, &Point::real(0.0), &[0.5, 1.0], 40, 200, &mut rng).unwrap();
        assert!(r.precondition.is_none());
        for row in &r.rows {
            assert_eq!(row.violations, 0);
            assert!(row.min_slack >= 0.5 * 2f64.ln() - 1e-6);
        }
        let (e, f) = disk_map(MapExpr::mobius(0.5, 0.0));
        let r = invariant_horoball_check(&e, &f, &Point::real(0.0), &[1.0], 40, 200, &mut rng).unwrap();
        for row in &r.rows {
            assert_eq!(row.violations, 0);
            // hyperbolic automorphism: the Busemann function drops by the same amount everywhere
            assert!((row.max_slack - row.min_slack).abs() < 1e-6);
            assert!((row.min_slack - 0.5 * 3f64.ln()).abs() < 1e-6);
        }
        let (e, f) = disk_map(MapExpr::affine(c(0.5, 0.0), c(0.0, 0.0)));
        let r = invariant_horoball_check(&e, &f, &Point::real(0.3), &[1.0], 10, 200, &mut rng).unwrap();
        assert!(r.precondition.is_some());
    }
}
