//! Horofunction estimates, horoballs, big/small horospheres and fibers.
//!
//! A horofunction is estimated as the tail of
//! `h_n(z) = k(z, x_n) − k(p, x_n)` along an approach sequence `x_n`, with
//! the tail oscillation on a fixed probe grid as its certificate.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{BoundaryTarget, DomainKind, DomainModel};
use crate::error::{HoroError, Result};
use crate::geodesy::geodesic_point;
use crate::kobayashi::DistanceEngine;
use crate::point::Point;

pub const TAIL: usize = 5;
pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_TERMS: usize = 40;
pub const MAX_TERMS: usize = 60;
/// Exhaustion level the last sequence point must reach.
pub const ESCAPE_LEVEL: u32 = 10;

/// How a sequence approaches its boundary target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "style", rename_all = "snake_case")]
pub enum ApproachStyle {
    Radial,
    /// Straight approach making the given angle with the inner normal.
    Tangential { angle: f64 },
    /// Coordinate `i` approaches at rate `2^{-n·e_i}`.
    Skew { exponents: Vec<f64> },
    /// Escape to an end along a fixed height (strip) or real offset (half-plane).
    Height { value: f64 },
    Custom { points: Vec<Point> },
}

impl ApproachStyle {
    pub fn label(&self) -> String {
        match self {
            ApproachStyle::Radial => "radial".into(),
            ApproachStyle::Tangential { angle } => format!("tangential({angle})"),
            ApproachStyle::Skew { exponents } => {
                let e: Vec<String> = exponents.iter().map(|x| x.to_string()).collect();
                format!("skew({})", e.join(","))
            }
            ApproachStyle::Height { value } => format!("height({value})"),
            ApproachStyle::Custom { points } => format!("custom({} points)", points.len()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ApproachSequence {
    pub target: BoundaryTarget,
    pub style: ApproachStyle,
    pub points: Vec<Point>,
}

/// Points `x_1, …, x_N` approaching `target`; stops early at the last point
/// that is still representable inside the domain.
pub fn approach_sequence(
    domain: &DomainModel,
    target: &BoundaryTarget,
    style: &ApproachStyle,
    terms: usize,
) -> Result<ApproachSequence> {
    domain.validate_target(target)?;
    if terms == 0 || terms > MAX_TERMS {
        return Err(HoroError::InvalidInput(format!("sequence length must be 1..={MAX_TERMS}")));
    }
    let make: Box<dyn Fn(usize) -> Option<Point>> = match (target, style) {
        (_, ApproachStyle::Custom { points }) => {
            for p in points {
                domain.require_member(p)?;
            }
            let points = points.clone();
            Box::new(move |n| points.get(n - 1).copied())
        }
        (BoundaryTarget::BoundaryPoint(sigma), _) => point_sequence(domain, sigma, style)?,
        (BoundaryTarget::End(end), _) => end_sequence(domain, end.direction, style)?,
    };
    let mut points = Vec::with_capacity(terms);
    for n in 1..=terms {
        let Some(x) = make(n) else { break };
        if !domain.contains(&x)? {
            break;
        }
        points.push(x);
    }
    if points.is_empty() {
        return Err(HoroError::InvalidInput("approach sequence has no interior points".into()));
    }
    Ok(ApproachSequence {
        target: target.clone(),
        style: style.clone(),
        points,
    })
}

type SequenceFn = Box<dyn Fn(usize) -> Option<Point>>;

fn point_sequence(domain: &DomainModel, sigma: &Point, style: &ApproachStyle) -> Result<SequenceFn> {
    let sigma = *sigma;
    let c = domain.inner_anchor(&sigma);
    Ok(match style {
        ApproachStyle::Radial => Box::new(move |n| {
            let t = 0.5f64.powi(n as i32);
            Some(sigma.map_coords(|i, s| s + (c.coord(i) - s) * t))
        }),
        ApproachStyle::Tangential { angle } => {
            if sigma.dim() != 1 {
                return Err(HoroError::InvalidInput("tangential approach needs dimension 1".into()));
            }
            if !(angle.abs() < std::f64::consts::FRAC_PI_2) {
                return Err(HoroError::InvalidInput("tangential angle must lie in (-pi/2, pi/2)".into()));
            }
            let rot = Complex64::from_polar(angle.cos(), *angle);
            Box::new(move |n| {
                let t = 0.5f64.powi(n as i32);
                Some(Point::planar(sigma.z() + (c.z() - sigma.z()) * rot * t))
            })
        }
        ApproachStyle::Skew { exponents } => {
            if sigma.dim() < 2 {
                return Err(HoroError::InvalidInput("skew approach needs dimension >= 2".into()));
            }
            if exponents.len() != sigma.dim() || exponents.iter().any(|e| !(*e > 0.0)) {
                return Err(HoroError::InvalidInput("skew needs one positive exponent per coordinate".into()));
            }
            let e = exponents.clone();
            Box::new(move |n| {
                Some(sigma.map_coords(|i, s| s + (c.coord(i) - s) * 2f64.powf(-(n as f64) * e[i])))
            })
        }
        ApproachStyle::Height { .. } => {
            return Err(HoroError::InvalidInput("height approach is only defined for ends".into()));
        }
        ApproachStyle::Custom { .. } => unreachable!("handled by caller"),
    })
}

fn end_sequence(domain: &DomainModel, direction: [f64; 2], style: &ApproachStyle) -> Result<SequenceFn> {
    match (domain.kind(), style) {
        (DomainKind::Strip { im_min, im_max }, ApproachStyle::Radial | ApproachStyle::Height { .. }) => {
            let y = match style {
                ApproachStyle::Height { value } => {
                    if !(*value > *im_min && *value < *im_max) {
                        return Err(HoroError::InvalidInput(format!("height {value} outside the strip")));
                    }
                    *value
                }
                _ => 0.5 * (im_min + im_max),
            };
            let sign = if direction[0] >= 0.0 { 1.0 } else { -1.0 };
            Ok(Box::new(move |n| Some(Point::planar(Complex64::new(sign * n as f64, y)))))
        }
        (DomainKind::HalfPlane, ApproachStyle::Radial | ApproachStyle::Height { .. }) => {
            let x = match style {
                ApproachStyle::Height { value } => *value,
                _ => 0.0,
            };
            Ok(Box::new(move |n| Some(Point::planar(Complex64::new(x, 2f64.powi(n as i32))))))
        }
        _ => Err(HoroError::InvalidInput(format!(
            "style {} toward an end of {} is not supported",
            style.label(),
            domain.name()
        ))),
    }
}

/// Tail of normalized distance functions along an approach sequence.
#[derive(Clone, Debug)]
pub struct HorofunctionEstimate {
    engine: DistanceEngine,
    pub pole: Point,
    pub sequence: ApproachSequence,
    pub probes: Vec<Point>,
    /// `probe_tail[j][k] = h_{N−TAIL+1+k}(probes[j])`.
    pub probe_tail: Vec<[f64; TAIL]>,
    /// Max over probes of the tail spread.
    pub osc: f64,
    pub tol: f64,
    pub converged: bool,
    /// Tail values non-increasing in `n` at every probe.
    pub monotone_tail: bool,
    lifted_tail: Vec<Point>,
    pole_offsets: [f64; TAIL],
}

/// Serializable summary of an estimate.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub pole: Point,
    pub target: BoundaryTarget,
    pub style: String,
    pub terms: usize,
    pub probes: usize,
    pub osc: f64,
    pub tol: f64,
    pub converged: bool,
    pub monotone_tail: bool,
}

pub fn estimate_horofunction(
    engine: &DistanceEngine,
    pole: &Point,
    sequence: &ApproachSequence,
    extra_probes: &[Point],
    tol: f64,
) -> Result<HorofunctionEstimate> {
    if engine.is_chain() {
        return Err(HoroError::Unsupported(
            "horofunction estimates need an exact or conformal engine".into(),
        ));
    }
    let domain = engine.domain();
    domain.require_member(pole)?;
    if sequence.points.len() < TAIL {
        return Err(HoroError::Precondition(format!(
            "sequence has {} points, the tail needs {TAIL}",
            sequence.points.len()
        )));
    }
    for p in extra_probes {
        domain.require_member(p)?;
    }
    let last = sequence.points.last().expect("nonempty");
    let level = domain.exhaustion_index(last)?;
    if level < ESCAPE_LEVEL {
        return Err(HoroError::Precondition(format!(
            "sequence only reaches exhaustion level {level}"
        )));
    }
    let tail_points = &sequence.points[sequence.points.len() - TAIL..];
    let lifted_tail: Vec<Point> = tail_points.iter().map(|x| engine.lift(x)).collect();
    let lifted_pole = engine.lift(pole);
    let mut pole_offsets = [0.0; TAIL];
    for (k, x) in lifted_tail.iter().enumerate() {
        pole_offsets[k] = engine.lifted_distance(&lifted_pole, x);
    }
    let mut probes = domain.probe_grid();
    probes.extend_from_slice(extra_probes);
    let mut est = HorofunctionEstimate {
        engine: engine.clone(),
        pole: *pole,
        sequence: sequence.clone(),
        probes: Vec::new(),
        probe_tail: Vec::new(),
        osc: 0.0,
        tol,
        converged: false,
        monotone_tail: true,
        lifted_tail,
        pole_offsets,
    };
    let tails: Vec<[f64; TAIL]> = probes.par_iter().map(|z| est.tail_unchecked(z)).collect();
    est.osc = tails.iter().map(spread).fold(0.0, f64::max);
    est.monotone_tail = tails
        .iter()
        .all(|t| t.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    est.probes = probes;
    est.probe_tail = tails;
    est.converged = est.osc < tol;
    if !est.converged {
        return Err(HoroError::Unresolved {
            osc: est.osc,
            estimate: Box::new(est),
        });
    }
    Ok(est)
}

fn spread(t: &[f64; TAIL]) -> f64 {
    let max = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = t.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

impl HorofunctionEstimate {
    pub fn engine(&self) -> &DistanceEngine {
        &self.engine
    }

    pub fn target(&self) -> &BoundaryTarget {
        &self.sequence.target
    }

    fn tail_unchecked(&self, z: &Point) -> [f64; TAIL] {
        if z == &self.pole {
            return [0.0; TAIL];
        }
        let lz = self.engine.lift(z);
        std::array::from_fn(|k| self.engine.lifted_distance(&lz, &self.lifted_tail[k]) - self.pole_offsets[k])
    }

    /// Tail values `h_{N−4}(z), …, h_N(z)`.
    pub fn tail_at(&self, z: &Point) -> Result<[f64; TAIL]> {
        self.engine.domain().require_member(z)?;
        Ok(self.tail_unchecked(z))
    }

    /// Latest estimate `h_N(z)`; exactly 0 at the pole.
    pub fn value(&self, z: &Point) -> Result<f64> {
        Ok(self.tail_at(z)?[TAIL - 1])
    }

    /// Tail spread at `z`.
    pub fn oscillation_at(&self, z: &Point) -> Result<f64> {
        Ok(spread(&self.tail_at(z)?))
    }

    pub fn certificate(&self) -> Certificate {
        Certificate {
            pole: self.pole,
            target: self.sequence.target.clone(),
            style: self.sequence.style.label(),
            terms: self.sequence.points.len(),
            probes: self.probes.len(),
            osc: self.osc,
            tol: self.tol,
            converged: self.converged,
            monotone_tail: self.monotone_tail,
        }
    }

    /// Sup over the probe grid of `|h_self − h_other|`.
    pub fn sup_gap(&self, other: &HorofunctionEstimate) -> f64 {
        self.probes
            .par_iter()
            .zip(&self.probe_tail)
            .map(|(z, t)| (t[TAIL - 1] - other.tail_unchecked(z)[TAIL - 1]).abs())
            .reduce(|| 0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Inside,
    Outside,
    Indeterminate,
}

impl Membership {
    pub fn is_inside(self) -> bool {
        self == Membership::Inside
    }

    fn any(items: &[Membership]) -> Membership {
        if items.contains(&Membership::Inside) {
            Membership::Inside
        } else if items.iter().all(|m| *m == Membership::Outside) {
            Membership::Outside
        } else {
            Membership::Indeterminate
        }
    }

    fn all(items: &[Membership]) -> Membership {
        if items.contains(&Membership::Outside) {
            Membership::Outside
        } else if items.iter().all(|m| *m == Membership::Inside) {
            Membership::Inside
        } else {
            Membership::Indeterminate
        }
    }
}

/// Horoball level `½ log R`.
pub fn horoball_level(radius: f64) -> Result<f64> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(HoroError::InvalidInput("horoball radius must be positive".into()));
    }
    Ok(0.5 * radius.ln())
}

/// `h(z) < ½ log R`, indeterminate when the gap to the level is within twice
/// the tail oscillation at `z`.
pub fn horoball_contains(est: &HorofunctionEstimate, z: &Point, radius: f64) -> Result<Membership> {
    let level = horoball_level(radius)?;
    if !est.converged {
        return Err(HoroError::Unresolved {
            osc: est.osc,
            estimate: Box::new(est.clone()),
        });
    }
    let tail = est.tail_at(z)?;
    Ok(classify(tail[TAIL - 1] - level, 2.0 * spread(&tail)))
}

fn classify(gap: f64, band: f64) -> Membership {
    if band > 0.0 && gap.abs() <= band {
        Membership::Indeterminate
    } else if gap < 0.0 {
        Membership::Inside
    } else {
        Membership::Outside
    }
}

/// A point with `h < level`, found along the geodesic from the pole through
/// the last sequence point.
pub fn deep_point(est: &HorofunctionEstimate, level: f64) -> Result<Point> {
    if !(level < 0.0) || !level.is_finite() {
        return Err(HoroError::InvalidInput("deep point level must be negative".into()));
    }
    let engine = &est.engine;
    let domain = engine.domain();
    let toward = est.sequence.points.last().expect("nonempty");
    let deep_enough = |q: &Point| -> Option<f64> {
        let t = est.tail_unchecked(q);
        let h = t[TAIL - 1];
        (h + spread(&t) < level).then_some(h)
    };
    let mut s_max = -4.0 * level;
    let mut q = geodesic_point(engine, &est.pole, toward, s_max)?;
    let mut shrinks = 0;
    while !domain.contains(&q)? {
        s_max *= 0.9;
        shrinks += 1;
        if shrinks > 400 {
            return Err(HoroError::SearchFailure("no representable point on the ray".into()));
        }
        q = geodesic_point(engine, &est.pole, toward, s_max)?;
    }
    if deep_enough(&q).is_none() {
        return Err(HoroError::SearchFailure(format!(
            "h = {} at Kobayashi radius {s_max} does not reach level {level}",
            est.tail_unchecked(&q)[TAIL - 1]
        )));
    }
    // bisect for h ≈ 1.2·level, keeping a margin below the level
    let goal = 1.2 * level;
    let (mut lo, mut hi) = (0.0, s_max);
    let mut best = q;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let p = geodesic_point(engine, &est.pole, toward, mid)?;
        let t = est.tail_unchecked(&p);
        if t[TAIL - 1] <= goal {
            if deep_enough(&p).is_some() {
                best = p;
            }
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(best)
}

/// Finite approximation of the approach directions to a boundary target.
#[derive(Clone, Debug)]
pub struct HorosphereFamily {
    pub target: BoundaryTarget,
    pub labels: Vec<String>,
    pub estimates: Vec<HorofunctionEstimate>,
    /// Members whose estimate did not certify.
    pub unresolved: Vec<bool>,
}

impl HorosphereFamily {
    pub fn build(
        engine: &DistanceEngine,
        pole: &Point,
        target: &BoundaryTarget,
        styles: &[ApproachStyle],
        terms: usize,
        tol: f64,
    ) -> Result<Self> {
        if styles.is_empty() {
            return Err(HoroError::InvalidInput("empty direction family".into()));
        }
        let mut labels = Vec::new();
        let mut estimates = Vec::new();
        let mut unresolved = Vec::new();
        for style in styles {
            let seq = approach_sequence(engine.domain(), target, style, terms)?;
            match estimate_horofunction(engine, pole, &seq, &[], tol) {
                Ok(e) => {
                    estimates.push(e);
                    unresolved.push(false);
                }
                Err(HoroError::Unresolved { estimate, .. }) => {
                    estimates.push(*estimate);
                    unresolved.push(true);
                }
                Err(e) => return Err(e),
            }
            labels.push(style.label());
        }
        Ok(Self {
            target: target.clone(),
            labels,
            estimates,
            unresolved,
        })
    }

    pub fn is_partial(&self) -> bool {
        self.unresolved.iter().any(|u| *u)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HorosphereMembership {
    /// Some family member's horoball contains `z`.
    pub in_big: Membership,
    /// Every family member's horoball contains `z`.
    pub in_small: Membership,
    pub values: Vec<f64>,
    pub memberships: Vec<Membership>,
    /// Label of the member attaining the minimum value.
    pub min_witness: String,
    /// Label of the member attaining the maximum value.
    pub max_witness: String,
    pub partial: bool,
}

pub fn horosphere_membership(family: &HorosphereFamily, z: &Point, radius: f64) -> Result<HorosphereMembership> {
    let level = horoball_level(radius)?;
    let mut values = Vec::with_capacity(family.estimates.len());
    let mut memberships = Vec::with_capacity(family.estimates.len());
    for (est, unresolved) in family.estimates.iter().zip(&family.unresolved) {
        let tail = est.tail_at(z)?;
        let v = tail[TAIL - 1];
        values.push(v);
        memberships.push(if *unresolved {
            Membership::Indeterminate
        } else {
            classify(v - level, 2.0 * spread(&tail))
        });
    }
    let argmin = (0..values.len()).min_by(|&a, &b| values[a].total_cmp(&values[b])).expect("nonempty");
    let argmax = (0..values.len()).max_by(|&a, &b| values[a].total_cmp(&values[b])).expect("nonempty");
    Ok(HorosphereMembership {
        in_big: Membership::any(&memberships),
        in_small: Membership::all(&memberships),
        values,
        memberships,
        min_witness: family.labels[argmin].clone(),
        max_witness: family.labels[argmax].clone(),
        partial: family.is_partial(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberRelation {
    Identical,
    Distinct,
    Indeterminate,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberSample {
    pub labels: Vec<String>,
    #[serde(skip)]
    pub estimates: Vec<HorofunctionEstimate>,
    pub certificates: Vec<Certificate>,
    pub gaps: Vec<Vec<f64>>,
    pub relations: Vec<Vec<FiberRelation>>,
    /// Always a finite style set, never the whole fiber.
    pub sampled: bool,
}

/// Estimates along each style plus the pairwise distinctness matrix.
pub fn fiber_sample(
    engine: &DistanceEngine,
    pole: &Point,
    target: &BoundaryTarget,
    styles: &[ApproachStyle],
    terms: usize,
    tol: f64,
) -> Result<FiberSample> {
    let tree = crate::ends::build_end_tree(engine.domain(), crate::ends::DEFAULT_MAX_LEVEL)?;
    let mut estimates = Vec::new();
    let mut labels = Vec::new();
    for style in styles {
        let seq = approach_sequence(engine.domain(), target, style, terms)?;
        let verdict = crate::ends::classify_limit(&tree, &seq.points)?;
        match verdict {
            crate::ends::LimitVerdict::Target(t) if t.matches(target, 1e-6) => {}
            other => {
                return Err(HoroError::Precondition(format!(
                    "style {} converges to {other:?}, not to {}",
                    style.label(),
                    target.describe()
                )))
            }
        }
        estimates.push(estimate_horofunction(engine, pole, &seq, &[], tol)?);
        labels.push(style.label());
    }
    let n = estimates.len();
    let mut gaps = vec![vec![0.0; n]; n];
    let mut relations = vec![vec![FiberRelation::Identical; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let gap = estimates[i].sup_gap(&estimates[j]);
            let guard = 4.0 * estimates[i].osc.max(estimates[j].osc);
            let rel = if gap < tol {
                FiberRelation::Identical
            } else if gap > guard {
                FiberRelation::Distinct
            } else {
                FiberRelation::Indeterminate
            };
            gaps[i][j] = gap;
            gaps[j][i] = gap;
            relations[i][j] = rel;
            relations[j][i] = rel;
        }
    }
    Ok(FiberSample {
        labels,
        certificates: estimates.iter().map(HorofunctionEstimate::certificate).collect(),
        estimates,
        gaps,
        relations,
        sampled: true,
    })
}

/// Random points strictly inside `H_p(ξ, R)`.
pub fn sample_horoball<R: Rng>(
    est: &HorofunctionEstimate,
    radius: f64,
    count: usize,
    rng: &mut R,
) -> Result<Vec<Point>> {
    horoball_level(radius)?;
    let domain = est.engine.domain();
    let dim = domain.dim();
    let sigma = est.target().as_point().copied();
    let inner = sigma.map(|s| domain.inner_anchor(&s));
    let window = proposal_window(domain, sigma.as_ref());
    let mut out = Vec::with_capacity(count);
    let max_attempts = 2000 * count.max(1);
    for attempt in 0..max_attempts {
        if out.len() >= count {
            break;
        }
        let proposal = match (attempt % 2, sigma, inner) {
            (1, Some(s), Some(c)) => {
                // log-radial proposal toward the target with angular jitter
                let coords: Vec<Complex64> = (0..dim)
                    .map(|i| {
                        let lambda = rng.gen_range(1e-3f64.ln()..0.0).exp();
                        let theta = rng.gen_range(-1.3..1.3);
                        s.coord(i) + (c.coord(i) - s.coord(i)) * Complex64::from_polar(lambda, theta)
                    })
                    .collect();
                Point::new(&coords)?
            }
            _ => {
                let coords: Vec<Complex64> = (0..dim)
                    .map(|i| {
                        let [x0, x1, y0, y1] = window[i];
                        Complex64::new(rng.gen_range(x0..x1), rng.gen_range(y0..y1))
                    })
                    .collect();
                Point::new(&coords)?
            }
        };
        if domain.contains(&proposal)? && horoball_contains(est, &proposal, radius)? == Membership::Inside {
            out.push(proposal);
        }
    }
    if out.len() < count {
        return Err(HoroError::SearchFailure(format!(
            "found {} of {count} horoball samples",
            out.len()
        )));
    }
    Ok(out)
}

fn proposal_window(domain: &DomainModel, sigma: Option<&Point>) -> Vec<[f64; 4]> {
    let factors = domain.kind().planar_factors();
    (0..domain.dim())
        .map(|i| {
            let bb = match &factors {
                Some(f) => f[i].bounding_box(),
                None => [-1.0, 1.0, -1.0, 1.0],
            };
            let centre = sigma.map(|s| s.coord(i)).unwrap_or(Complex64::new(0.0, 0.0));
            [
                bb[0].max(centre.re - 4.0),
                bb[1].min(centre.re + 4.0),
                bb[2].max(centre.im - 4.0),
                bb[3].min(centre.im + 4.0),
            ]
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvexityViolation {
    pub kind: String,
    pub points: Vec<Point>,
    pub parameter: f64,
    pub excess: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvexityReport {
    pub radius: f64,
    pub chords_checked: usize,
    pub rays_checked: usize,
    pub violations: Vec<ConvexityViolation>,
}

const ROUNDING_FLOOR: f64 = 1e-9;

/// Sampled quasi-convexity of `h` on chords of the horoball and
/// star-shapedness toward the Euclidean boundary target.
pub fn convexity_check<R: Rng>(
    est: &HorofunctionEstimate,
    radius: f64,
    samples: usize,
    rng: &mut R,
) -> Result<ConvexityReport> {
    let domain = est.engine.domain();
    if !domain.is_convex() {
        return Err(HoroError::Precondition(format!("{} is not convex", domain.name())));
    }
    if !est.converged {
        return Err(HoroError::Precondition("estimate is not converged".into()));
    }
    let level = horoball_level(radius)?;
    let pts = sample_horoball(est, radius, 2 * samples, rng)?;
    let mut violations = Vec::new();
    let guard = |tails: &[[f64; TAIL]]| 3.0 * tails.iter().map(spread).fold(ROUNDING_FLOOR, f64::max);
    for k in 0..samples {
        let (z1, z2) = (pts[2 * k], pts[2 * k + 1]);
        let (t1, t2) = (est.tail_unchecked(&z1), est.tail_unchecked(&z2));
        for t in [0.25, 0.5, 0.75] {
            let zt = z1.lerp(&z2, t);
            let tt = est.tail_unchecked(&zt);
            let excess = tt[TAIL - 1] - t1[TAIL - 1].max(t2[TAIL - 1]);
            if excess > guard(&[t1, t2, tt]) {
                violations.push(ConvexityViolation {
                    kind: "chord".into(),
                    points: vec![z1, z2],
                    parameter: t,
                    excess,
                });
            }
        }
    }
    let mut rays = 0;
    if let Some(sigma) = est.target().as_point() {
        for z in pts.iter().take(samples) {
            rays += 1;
            for s in [0.1, 0.3, 0.5, 0.7, 0.9] {
                let q = z.lerp(sigma, s);
                if !domain.contains(&q)? {
                    violations.push(ConvexityViolation {
                        kind: "ray_left_domain".into(),
                        points: vec![*z],
                        parameter: s,
                        excess: f64::INFINITY,
                    });
                    continue;
                }
                let tq = est.tail_unchecked(&q);
                let excess = tq[TAIL - 1] - level;
                if excess >= 0.0 && excess > guard(&[tq]) {
                    violations.push(ConvexityViolation {
                        kind: "ray".into(),
                        points: vec![*z],
                        parameter: s,
                        excess,
                    });
                }
            }
        }
    }
    Ok(ConvexityReport {
        radius,
        chords_checked: samples,
        rays_checked: rays,
        violations,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationReport {
    /// `sup_z |h(z) − φ_{w,p}(z)|` over the probe grid for each interior `w`.
    pub gaps: Vec<f64>,
    pub min_gap: f64,
}

/// Gap between the estimate and the normalized distance functions
/// `φ_w = k(·, w) − k(p, w)` of interior points.
pub fn interior_separation(est: &HorofunctionEstimate, interior: &[Point]) -> Result<SeparationReport> {
    let engine = &est.engine;
    let mut gaps = Vec::with_capacity(interior.len());
    for w in interior {
        engine.domain().require_member(w)?;
        let lw = engine.lift(w);
        let offset = engine.lifted_distance(&engine.lift(&est.pole), &lw);
        let gap = est
            .probes
            .par_iter()
            .zip(&est.probe_tail)
            .map(|(z, t)| {
                let phi = engine.lifted_distance(&engine.lift(z), &lw) - offset;
                (t[TAIL - 1] - phi).abs()
            })
            .reduce(|| 0.0, f64::max);
        gaps.push(gap);
    }
    Ok(SeparationReport {
        min_gap: gaps.iter().copied().fold(f64::INFINITY, f64::min),
        gaps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn busemann(sigma: Complex64, z: Complex64) -> f64 {
        0.5 * ((sigma - z).norm_sqr() / (1.0 - z.norm_sqr())).ln()
    }

    fn disk_estimate(sigma: Complex64, style: ApproachStyle) -> HorofunctionEstimate {
        let e = DistanceEngine::new(DomainModel::disk()).unwrap();
        let t = BoundaryTarget::point(Point::planar(sigma));
        let seq = approach_sequence(e.domain(), &t, &style, 40).unwrap();
        estimate_horofunction(&e, &Point::real(0.0), &seq, &[], DEFAULT_TOL).unwrap()
    }

    #[test]
    fn sequence_examples() {
        let d = DomainModel::disk();
        let s = approach_sequence(&d, &BoundaryTarget::point(Point::real(1.0)), &ApproachStyle::Radial, 3).unwrap();
        let xs: Vec<f64> = s.points.iter().map(|p| p.z().re).collect();
        assert_eq!(xs, vec![0.5, 0.75, 0.875]);

        let b = DomainModel::bidisc();
        let t = BoundaryTarget::point(Point::pair(c(1.0, 0.0), c(1.0, 0.0)));
        let s = approach_sequence(&b, &t, &ApproachStyle::Skew { exponents: vec![1.0, 2.0] }, 2).unwrap();
        assert_eq!(s.points[0], Point::pair(c(0.5, 0.0), c(0.75, 0.0)));
        assert_eq!(s.points[1], Point::pair(c(0.75, 0.0), c(0.9375, 0.0)));

        let skew_1d = approach_sequence(&d, &BoundaryTarget::point(Point::real(1.0)), &ApproachStyle::Skew { exponents: vec![1.0] }, 2);
        assert!(matches!(skew_1d, Err(HoroError::InvalidInput(_))));
    }

    #[test]
    fn disk_busemann_and_normalization() {
        let est = disk_estimate(c(1.0, 0.0), ApproachStyle::Radial);
        assert_eq!(est.value(&Point::real(0.0)).unwrap(), 0.0);
        assert_abs_diff_eq!(est.value(&Point::real(0.5)).unwrap(), -0.5 * 3f64.ln(), epsilon = 1e-6);
        assert_abs_diff_eq!(est.value(&Point::real(-0.5)).unwrap(), 0.5 * 3f64.ln(), epsilon = 1e-6);
        for z in &est.probes {
            assert_abs_diff_eq!(est.value(z).unwrap(), busemann(c(1.0, 0.0), z.z()), epsilon = 1e-6);
        }
        assert!(est.monotone_tail);
    }

    #[test]
    fn horoball_examples() {
        let est = disk_estimate(c(1.0, 0.0), ApproachStyle::Radial);
        assert_eq!(horoball_contains(&est, &Point::real(0.0), 2.0).unwrap(), Membership::Inside);
        assert_eq!(horoball_contains(&est, &Point::real(0.0), 1.0).unwrap(), Membership::Outside);
        assert_eq!(horoball_contains(&est, &Point::real(0.5), 1.0).unwrap(), Membership::Inside);
    }

    #[test]
    fn deep_points_reach_their_level() {
        let est = disk_estimate(c(1.0, 0.0), ApproachStyle::Radial);
        for level in [-1.0, -3.0, -6.0, -1e-9] {
            let q = deep_point(&est, level).unwrap();
            assert!(est.value(&q).unwrap() < level);
        }
        let q = deep_point(&est, -1.0).unwrap();
        assert_abs_diff_eq!(est.value(&q).unwrap(), -1.2, epsilon = 0.05);
    }

    #[test]
    fn disk_fiber_is_a_singleton() {
        let e = DistanceEngine::new(DomainModel::disk()).unwrap();
        let styles = [
            ApproachStyle::Radial,
            ApproachStyle::Tangential { angle: std::f64::consts::FRAC_PI_4 },
            ApproachStyle::Tangential { angle: -std::f64::consts::FRAC_PI_4 },
        ];
        let f = fiber_sample(&e, &Point::real(0.0), &BoundaryTarget::point(Point::real(1.0)), &styles, 40, DEFAULT_TOL).unwrap();
        for row in &f.relations {
            assert!(row.iter().all(|r| *r == FiberRelation::Identical), "{:?}", f.gaps);
        }
    }

    #[test]
    fn disk_horoballs_are_convex() {
        let est = disk_estimate(c(1.0, 0.0), ApproachStyle::Radial);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rep = convexity_check(&est, 1.0, 50, &mut rng).unwrap();
        assert!(rep.violations.is_empty(), "{:?}", rep.violations);
    }

    #[test]
    fn estimates_are_separated_from_interior_points() {
        let est = disk_estimate(c(1.0, 0.0), ApproachStyle::Radial);
        let rep = interior_separation(&est, &[Point::real(0.9), Point::real(0.99), Point::planar(c(0.0, 0.5))]).unwrap();
        assert!(rep.min_gap > 0.0);
    }
}
