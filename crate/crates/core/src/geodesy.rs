//! Geodesics, (1, ε)-quasi-geodesics, Gromov products and the
//! good-compactification probe.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::conformal::ConformalChart;
use crate::domain::DomainKind;
use crate::error::{HoroError, Result};
use crate::kobayashi::{ChainGraph, DistanceEngine, EngineMode};
use crate::point::Point;

/// Sampled path with parameters `t_i` and points `γ(t_i)`.
#[derive(Clone, Debug, Serialize)]
pub struct PathSample {
    pub params: Vec<f64>,
    pub points: Vec<Point>,
    pub is_geodesic: bool,
    pub epsilon: f64,
}

impl PathSample {
    fn single(z: &Point, is_geodesic: bool, epsilon: f64) -> Self {
        Self {
            params: vec![0.0],
            points: vec![*z],
            is_geodesic,
            epsilon,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.params.last().copied().unwrap_or(0.0) - self.params.first().copied().unwrap_or(0.0)
    }
}

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Isometry of a planar factor onto the disk sending `a` to 0, and its inverse.
fn to_local(kind: &DomainKind, a: Complex64, z: Complex64) -> Complex64 {
    match kind {
        DomainKind::Disk => (z - a) / (ONE - a.conj() * z),
        DomainKind::HalfPlane => (z - a) / (z - a.conj()),
        DomainKind::Strip { im_min, im_max } => {
            let e = strip_to_half_plane(*im_min, *im_max);
            to_local(&DomainKind::HalfPlane, e(a), e(z))
        }
        DomainKind::Conformal(chart) => to_local(&DomainKind::Disk, chart.to_disk(a), chart.to_disk(z)),
        DomainKind::ConvexPlanar { chart: Some(chart), .. } => {
            to_local(&DomainKind::Disk, chart.to_disk(a), chart.to_disk(z))
        }
        _ => Complex64::new(f64::NAN, f64::NAN),
    }
}

fn from_local(kind: &DomainKind, a: Complex64, v: Complex64) -> Complex64 {
    match kind {
        DomainKind::Disk => (v + a) / (ONE + a.conj() * v),
        DomainKind::HalfPlane => (a - v * a.conj()) / (ONE - v),
        DomainKind::Strip { im_min, im_max } => {
            let e = strip_to_half_plane(*im_min, *im_max);
            let eta = from_local(&DomainKind::HalfPlane, e(a), v);
            Complex64::new(0.0, *im_min) + eta.ln() * ((im_max - im_min) / PI)
        }
        DomainKind::Conformal(chart) => chart.from_disk(from_local(&DomainKind::Disk, chart.to_disk(a), v)),
        DomainKind::ConvexPlanar { chart: Some(chart), .. } => {
            chart.from_disk(from_local(&DomainKind::Disk, chart.to_disk(a), v))
        }
        _ => Complex64::new(f64::NAN, f64::NAN),
    }
}

fn strip_to_half_plane(im_min: f64, im_max: f64) -> impl Fn(Complex64) -> Complex64 {
    let w = im_max - im_min;
    move |z: Complex64| ((z - Complex64::new(0.0, im_min)) * (PI / w)).exp()
}

/// Ball automorphism exchanging `a` and 0.
fn ball_involution(a: &Point, z: &Point) -> Point {
    let (a1, a2) = (a.coord(0), a.coord(1));
    let (z1, z2) = (z.coord(0), z.coord(1));
    let a2n = a1.norm_sqr() + a2.norm_sqr();
    let inner = z1 * a1.conj() + z2 * a2.conj();
    let denom = ONE - inner;
    if a2n == 0.0 {
        return Point::pair(-z1, -z2);
    }
    let s = ((1.0 - a2n.sqrt()) * (1.0 + a2n.sqrt())).sqrt();
    let p1 = a1 * (inner / a2n);
    let p2 = a2 * (inner / a2n);
    Point::pair((a1 - p1 - (z1 - p1) * s) / denom, (a2 - p2 - (z2 - p2) * s) / denom)
}

fn planar_geodesic_point(kind: &DomainKind, a: Complex64, b: Complex64, s: f64) -> Complex64 {
    if a == b {
        return a;
    }
    let u = to_local(kind, a, b);
    from_local(kind, a, u / u.norm() * s.tanh())
}

/// Point at Kobayashi distance `s` from `z` on the geodesic towards `w`.
pub fn geodesic_point(engine: &DistanceEngine, z: &Point, w: &Point, s: f64) -> Result<Point> {
    if engine.is_chain() {
        return Err(HoroError::Unsupported("no exact geodesics on chain_approx engines".into()));
    }
    let total = engine.distance(z, w)?;
    if total == 0.0 {
        return Ok(*z);
    }
    Ok(geodesic_point_unchecked(engine, z, w, s, total))
}

fn geodesic_point_unchecked(engine: &DistanceEngine, z: &Point, w: &Point, s: f64, total: f64) -> Point {
    let kind = engine.domain().kind();
    match kind.planar_factors() {
        None => {
            let u = ball_involution(z, w);
            let r = u.norm();
            let t = s.tanh() / r;
            ball_involution(z, &u.map_coords(|_, c| c * t))
        }
        Some(factors) => {
            let dists = engine
                .factor_distances(z, w)
                .ok()
                .flatten()
                .unwrap_or_else(|| vec![total; factors.len()]);
            let parts: Vec<Complex64> = factors
                .iter()
                .enumerate()
                .map(|(i, f)| planar_geodesic_point(f, z.coord(i), w.coord(i), s * dists[i] / total))
                .collect();
            Point::new(&parts).unwrap_or(*z)
        }
    }
}

/// Unit-speed geodesic from `z` to `w` sampled at `samples` equally spaced parameters.
pub fn geodesic(engine: &DistanceEngine, z: &Point, w: &Point, samples: usize) -> Result<PathSample> {
    if engine.is_chain() {
        return Err(HoroError::Unsupported(
            "no exact geodesics on chain_approx engines; use quasi_geodesic".into(),
        ));
    }
    let total = engine.distance(z, w)?;
    if total == 0.0 {
        return Ok(PathSample::single(z, true, 0.0));
    }
    let n = samples.max(2);
    let mut params = Vec::with_capacity(n);
    let mut points = Vec::with_capacity(n);
    for i in 0..n {
        let t = total * i as f64 / (n - 1) as f64;
        params.push(t);
        points.push(match i {
            0 => *z,
            _ if i == n - 1 => *w,
            _ => geodesic_point_unchecked(engine, z, w, t, total),
        });
    }
    Ok(PathSample {
        params,
        points,
        is_geodesic: true,
        epsilon: 0.0,
    })
}

const MAX_CHECKED: usize = 400;

fn checked_indices(n: usize) -> Vec<usize> {
    if n <= MAX_CHECKED {
        return (0..n).collect();
    }
    let mut idx: Vec<usize> = (0..MAX_CHECKED).map(|k| k * (n - 1) / (MAX_CHECKED - 1)).collect();
    idx.dedup();
    idx
}

/// (1, ε)-quasi-geodesic from `z` to `w`, verified pairwise before return.
pub fn quasi_geodesic(engine: &DistanceEngine, z: &Point, w: &Point, epsilon: f64) -> Result<PathSample> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(HoroError::InvalidInput("epsilon must be positive".into()));
    }
    engine.domain().require_member(z)?;
    engine.domain().require_member(w)?;
    if z == w {
        return Ok(PathSample::single(z, false, epsilon));
    }
    match engine.mode() {
        EngineMode::ChainApprox(params) => chain_quasi_geodesic(engine, z, w, epsilon, params.max_refinements),
        _ => exact_quasi_geodesic(engine, z, w, epsilon),
    }
}

fn exact_quasi_geodesic(engine: &DistanceEngine, z: &Point, w: &Point, epsilon: f64) -> Result<PathSample> {
    let total = engine.distance(z, w)?;
    let mut hop = epsilon / 4.0;
    let mut worst = f64::INFINITY;
    for _ in 0..4 {
        let hops = ((total / hop).ceil() as usize).max(1);
        if hops > 200_000 {
            return Err(HoroError::Construction(format!("{hops} hops needed for epsilon {epsilon}")));
        }
        let mut points = Vec::with_capacity(hops + 1);
        points.push(*z);
        for i in 1..hops {
            points.push(geodesic_point_unchecked(engine, z, w, total * i as f64 / hops as f64, total));
        }
        points.push(*w);
        let mut params = Vec::with_capacity(points.len());
        params.push(0.0);
        for i in 1..points.len() {
            let d = engine.distance_unchecked(&points[i - 1], &points[i]);
            params.push(params[i - 1] + d);
        }
        let sample = PathSample {
            params,
            points,
            is_geodesic: false,
            epsilon,
        };
        worst = max_defect(&sample, |a, b| engine.distance_unchecked(a, b));
        if worst <= epsilon {
            return Ok(sample);
        }
        hop *= 0.5;
    }
    Err(HoroError::Construction(format!(
        "pairwise defect {worst} exceeds epsilon {epsilon}"
    )))
}

/// Largest `| d(γ_i, γ_j) − |t_i − t_j| |` over checked pairs.
pub fn max_defect(path: &PathSample, dist: impl Fn(&Point, &Point) -> f64) -> f64 {
    let idx = checked_indices(path.len());
    let mut worst: f64 = 0.0;
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            let d = dist(&path.points[i], &path.points[j]);
            worst = worst.max((d - (path.params[j] - path.params[i]).abs()).abs());
        }
    }
    worst
}

fn chain_quasi_geodesic(
    engine: &DistanceEngine,
    z: &Point,
    w: &Point,
    epsilon: f64,
    max_refinements: u32,
) -> Result<PathSample> {
    let EngineMode::ChainApprox(mut params) = engine.mode() else {
        unreachable!("chain engine");
    };
    let mut worst = f64::INFINITY;
    for _ in 0..=max_refinements {
        let graph = ChainGraph::build(engine, z, w, params.spacing, &params)?;
        let result = graph.shortest(z, w)?;
        let sample = PathSample {
            params: result.path_lengths.clone(),
            points: result.path.clone(),
            is_geodesic: false,
            epsilon,
        };
        // independent single-source runs from a few path nodes
        let n = sample.len();
        let sources: Vec<usize> = if n >= 8 {
            (0..8).map(|k| k * (n - 1) / 7).collect()
        } else {
            (0..n).collect()
        };
        worst = 0.0;
        for &i in &sources {
            let Some(src) = graph.node_index(&sample.points[i]) else { continue };
            let (dist, _) = graph.dijkstra(src, true);
            for j in 0..n {
                let Some(dst) = graph.node_index(&sample.points[j]) else { continue };
                let gap = (sample.params[j] - sample.params[i]).abs();
                worst = worst.max((dist[dst] - gap).abs());
            }
        }
        if worst <= epsilon {
            return Ok(sample);
        }
        params.spacing *= 0.5;
    }
    Err(HoroError::Construction(format!(
        "graph defect {worst} exceeds epsilon {epsilon}"
    )))
}

/// `⟨x, y⟩_p = (d(x, p) + d(y, p) − d(x, y)) / 2`.
pub fn gromov_product(engine: &DistanceEngine, p: &Point, x: &Point, y: &Point) -> Result<f64> {
    let dxp = engine.distance(x, p)?;
    let dyp = engine.distance(y, p)?;
    let dxy = engine.distance(x, y)?;
    Ok(0.5 * (dxp + dyp - dxy))
}

#[derive(Clone, Debug, Serialize)]
pub struct GoodCompactificationReport {
    /// `min_i d(o, σ_n(t_i))` per family member.
    pub min_distances: Vec<f64>,
    /// `⟨x_n, y_n⟩_o` for the endpoints of each member.
    pub gromov_bounds: Vec<f64>,
    /// Sup over probes of the gap between the endpoints' normalized distance functions.
    pub endpoint_gaps: Vec<f64>,
    /// Set when the endpoints do not approach a common horofunction.
    pub precondition: Option<String>,
    pub verdict: String,
}

pub const DIVERGENCE_THRESHOLD: f64 = 5.0;
const ENDPOINT_GAP_TOL: f64 = 1e-3;

/// Escape test for a family of geodesic samples whose endpoints approach a
/// common boundary point.
pub fn good_compactification_probe(
    engine: &DistanceEngine,
    family: &[PathSample],
    pole: &Point,
) -> Result<GoodCompactificationReport> {
    let probes = engine.domain().halton_points(16);
    let mut min_distances = Vec::with_capacity(family.len());
    let mut gromov_bounds = Vec::with_capacity(family.len());
    let mut endpoint_gaps = Vec::with_capacity(family.len());
    for path in family {
        let (Some(x), Some(y)) = (path.points.first(), path.points.last()) else {
            return Err(HoroError::InvalidInput("empty path in family".into()));
        };
        let mut best = f64::INFINITY;
        for q in &path.points {
            best = best.min(engine.distance(pole, q)?);
        }
        min_distances.push(best);
        gromov_bounds.push(gromov_product(engine, pole, x, y)?);
        let (dx, dy) = (engine.distance(pole, x)?, engine.distance(pole, y)?);
        let mut gap: f64 = 0.0;
        for q in &probes {
            let fx = engine.distance(q, x)? - dx;
            let fy = engine.distance(q, y)? - dy;
            gap = gap.max((fx - fy).abs());
        }
        endpoint_gaps.push(gap);
    }
    let precondition = match endpoint_gaps.last() {
        Some(&g) if g > ENDPOINT_GAP_TOL => Some(format!(
            "endpoint normalized distance functions differ by {g} on probes"
        )),
        _ => None,
    };
    let half = &min_distances[min_distances.len() / 2..];
    let monotone = half.windows(2).all(|w| w[1] >= w[0]);
    let diverges = precondition.is_none()
        && min_distances.last().is_some_and(|&m| m > DIVERGENCE_THRESHOLD)
        && monotone;
    Ok(GoodCompactificationReport {
        min_distances,
        gromov_bounds,
        endpoint_gaps,
        precondition,
        verdict: if diverges { "diverges" } else { "inconclusive" }.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainModel;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn radial_disk_geodesic() {
        let e = DistanceEngine::new(DomainModel::disk()).unwrap();
        let g = geodesic(&e, &Point::real(0.0), &Point::real(1f64.tanh()), 11).unwrap();
        assert_abs_diff_eq!(g.length(), 1.0, epsilon = 1e-12);
        for (t, p) in g.params.iter().zip(&g.points) {
            assert_abs_diff_eq!(p.z().re, t.tanh(), epsilon = 1e-12);
        }
        let single = geodesic(&e, &Point::real(0.2), &Point::real(0.2), 5).unwrap();
        assert_eq!(single.len(), 1);
    }

    #[test]
    fn bidisc_geodesic_uses_max_clock() {
        let e = DistanceEngine::new(DomainModel::bidisc()).unwrap();
        let w = Point::pair(c(1f64.tanh(), 0.0), c(0.5f64.tanh(), 0.0));
        let g = geodesic(&e, &Point::pair(c(0.0, 0.0), c(0.0, 0.0)), &w, 5).unwrap();
        assert_abs_diff_eq!(g.length(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g.points[2].coord(1).re, 0.25f64.tanh(), epsilon = 1e-12);
    }

    #[test]
    fn geodesics_are_additive_on_every_exact_domain() {
        let cases = vec![
            (DomainModel::half_plane(), Point::planar(c(0.3, 0.2)), Point::planar(c(-2.0, 3.0))),
            (DomainModel::unit_strip(), Point::planar(c(-1.0, 0.1)), Point::planar(c(2.0, 0.8))),
            (DomainModel::ball(), Point::pair(c(0.1, 0.2), c(-0.3, 0.0)), Point::pair(c(0.5, -0.1), c(0.4, 0.6))),
            (DomainModel::bidisc(), Point::pair(c(0.1, 0.2), c(-0.3, 0.0)), Point::pair(c(0.5, -0.1), c(0.4, 0.6))),
        ];
        for (domain, z, w) in cases {
            let e = DistanceEngine::new(domain).unwrap();
            let g = geodesic(&e, &z, &w, 9).unwrap();
            for i in 0..g.len() {
                for j in i + 1..g.len() {
                    let d = e.distance(&g.points[i], &g.points[j]).unwrap();
                    assert_abs_diff_eq!(d, g.params[j] - g.params[i], epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn quasi_geodesic_on_disk() {
        let e = DistanceEngine::new(DomainModel::disk()).unwrap();
        let q = quasi_geodesic(&e, &Point::real(0.0), &Point::real(0.5), 0.01).unwrap();
        assert_abs_diff_eq!(q.length(), 0.5f64.atanh(), epsilon = 1e-9);
        assert!(max_defect(&q, |a, b| e.distance(a, b).unwrap()) <= 0.01);
        let single = quasi_geodesic(&e, &Point::real(0.2), &Point::real(0.2), 0.1).unwrap();
        assert_eq!(single.len(), 1);
        assert!(quasi_geodesic(&e, &Point::real(0.2), &Point::real(0.3), 0.0).is_err());
    }

    #[test]
    fn quasi_geodesic_on_square_chain() {
        let e = DistanceEngine::new(DomainModel::square(2.0).unwrap()).unwrap();
        let q = quasi_geodesic(&e, &Point::real(0.0), &Point::real(0.9), 0.2).unwrap();
        assert!(q.len() > 2);
        assert_eq!(q.points.last().unwrap(), &Point::real(0.9));
    }

    #[test]
    fn gromov_examples() {
        let e = DistanceEngine::new(DomainModel::disk()).unwrap();
        let p = Point::real(0.0);
        let g = gromov_product(&e, &p, &Point::real(0.9), &Point::real(0.9)).unwrap();
        assert_abs_diff_eq!(g, 0.9f64.atanh(), epsilon = 1e-14);
        let g = gromov_product(&e, &p, &Point::real(0.9), &Point::real(-0.9)).unwrap();
        assert!(g.abs() < 1e-12);
        let g = gromov_product(&e, &p, &p, &Point::real(0.4)).unwrap();
        assert_eq!(g, 0.0);
    }

    #[test]
    fn good_compactification_on_disk() {
        let e = DistanceEngine::new(DomainModel::disk()).unwrap();
        let family: Vec<PathSample> = (1..=20)
            .map(|n| {
                let r = 1.0 - 2f64.powi(-n);
                let th = 2f64.powi(-n);
                geodesic(&e, &Point::planar(Complex64::from_polar(r, th)), &Point::planar(Complex64::from_polar(r, -th)), 33)
                    .unwrap()
            })
            .collect();
        let rep = good_compactification_probe(&e, &family, &Point::real(0.0)).unwrap();
        assert_eq!(rep.verdict, "diverges", "{rep:?}");
        let through = geodesic(&e, &Point::real(-0.5), &Point::real(0.5), 9).unwrap();
        let rep = good_compactification_probe(&e, &[through], &Point::real(0.0)).unwrap();
        assert!(rep.min_distances[0] < 1e-12);
    }
}
