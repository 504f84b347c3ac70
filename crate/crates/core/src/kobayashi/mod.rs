//! Kobayashi distance and infinitesimal metric.
//!
//! Normalization: curvature −4, so `k_D(0, r) = arctanh r` and the disk
//! metric at `z` is `|v| / (1 − |z|²)`.

mod chain;

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conformal::ConformalChart;
use crate::domain::{DomainKind, DomainModel};
use crate::error::{HoroError, Result};
use crate::point::Point;

pub use chain::{ChainGraph, ChainResult};

/// Closed interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.lo * s, self.hi * s)
    }
}

/// Lattice parameters for the chain approximation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    /// Initial lattice spacing `h`.
    pub spacing: f64,
    /// Radius, in units of `h`, within which an off-lattice endpoint is wired in.
    pub neighbor_radius: f64,
    /// Number of halvings of `h` allowed while chasing a tolerance.
    pub max_refinements: u32,
    /// Hard cap on lattice nodes.
    pub max_nodes: usize,
}

impl Default for ChainParams {
    fn default() -> Self {
        Self {
            spacing: 0.04,
            neighbor_radius: 2.0,
            max_refinements: 3,
            max_nodes: 3_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EngineMode {
    Exact,
    ConformalPullback,
    ChainApprox(ChainParams),
}

impl EngineMode {
    pub fn label(&self) -> &'static str {
        match self {
            EngineMode::Exact => "exact",
            EngineMode::ConformalPullback => "conformal_pullback",
            EngineMode::ChainApprox(_) => "chain_approx (approximate, interval-valued)",
        }
    }
}

#[derive(Debug)]
enum Layout {
    Ball,
    Planar(Vec<DomainKind>),
}

impl Layout {
    fn of(domain: &DomainModel) -> Arc<Self> {
        Arc::new(match domain.kind().planar_factors() {
            None => Layout::Ball,
            Some(f) => Layout::Planar(f),
        })
    }
}

#[derive(Clone, Debug)]
pub struct DistanceEngine {
    domain: DomainModel,
    mode: EngineMode,
    layout: Arc<Layout>,
}

impl DistanceEngine {
    /// Picks the default mode: exact formulas where they exist, conformal
    /// pullback for chart domains, chains for polygons.
    pub fn new(domain: DomainModel) -> Result<Self> {
        let mode = match domain.kind().planar_factors() {
            None => EngineMode::Exact,
            Some(factors) => {
                if factors.iter().any(|f| matches!(f, DomainKind::ConvexPlanar { .. })) {
                    if domain.dim() == 1 {
                        EngineMode::ChainApprox(ChainParams::default())
                    } else if factors
                        .iter()
                        .all(|f| !matches!(f, DomainKind::ConvexPlanar { chart: None, .. }))
                    {
                        EngineMode::ConformalPullback
                    } else {
                        return Err(HoroError::Unsupported(
                            "products with general polygon factors have no distance engine".into(),
                        ));
                    }
                } else if factors.iter().any(|f| matches!(f, DomainKind::Conformal(_))) {
                    EngineMode::ConformalPullback
                } else {
                    EngineMode::Exact
                }
            }
        };
        Ok(Self {
            layout: Layout::of(&domain),
            domain,
            mode,
        })
    }

    /// Conformal-pullback engine; every polygon factor needs a chart.
    pub fn conformal(domain: DomainModel) -> Result<Self> {
        if let Some(factors) = domain.kind().planar_factors() {
            if factors
                .iter()
                .any(|f| matches!(f, DomainKind::ConvexPlanar { chart: None, .. }))
            {
                return Err(HoroError::Unsupported(
                    "polygon has no conformal chart (only regular polygons do)".into(),
                ));
            }
        }
        Ok(Self {
            layout: Layout::of(&domain),
            domain,
            mode: EngineMode::ConformalPullback,
        })
    }

    pub fn chain(domain: DomainModel, params: ChainParams) -> Result<Self> {
        if domain.dim() != 1 {
            return Err(HoroError::Unsupported("chain approximation is planar only".into()));
        }
        if !(params.spacing > 0.0) || !(params.neighbor_radius >= 1.0) {
            return Err(HoroError::InvalidInput("bad chain parameters".into()));
        }
        Ok(Self {
            layout: Layout::of(&domain),
            domain,
            mode: EngineMode::ChainApprox(params),
        })
    }

    pub fn domain(&self) -> &DomainModel {
        &self.domain
    }

    pub fn mode(&self) -> EngineMode {
        self.mode
    }

    pub fn is_chain(&self) -> bool {
        matches!(self.mode, EngineMode::ChainApprox(_))
    }

    fn layout(&self) -> &Layout {
        &self.layout
    }

    fn check_points(&self, z: &Point, w: &Point) -> Result<()> {
        self.domain.require_member(z)?;
        self.domain.require_member(w)
    }

    /// Kobayashi distance. Chain engines must use [`Self::chain_distance`].
    pub fn distance(&self, z: &Point, w: &Point) -> Result<f64> {
        self.check_points(z, w)?;
        if self.is_chain() {
            return Err(HoroError::Unsupported(
                "chain_approx engines are interval-valued; use chain_distance".into(),
            ));
        }
        Ok(self.distance_unchecked(z, w))
    }

    /// Distance without membership checks; callers guarantee membership.
    pub(crate) fn distance_unchecked(&self, z: &Point, w: &Point) -> f64 {
        if z == w {
            return 0.0;
        }
        self.lifted_distance(&self.lift(z), &self.lift(w))
    }

    fn uses_chart(&self, kind: &DomainKind) -> bool {
        match kind {
            DomainKind::Conformal(_) => true,
            DomainKind::ConvexPlanar { chart: Some(_), .. } => !self.is_chain(),
            _ => false,
        }
    }

    /// Replaces chart coordinates by their disk images, so repeated distance
    /// evaluations against the same point skip the chart inversion.
    pub(crate) fn lift(&self, z: &Point) -> Point {
        match self.layout() {
            Layout::Ball => *z,
            Layout::Planar(factors) => z.map_coords(|i, c| match &factors[i] {
                DomainKind::Conformal(chart) => chart.to_disk(c),
                DomainKind::ConvexPlanar { chart: Some(chart), .. } if !self.is_chain() => chart.to_disk(c),
                _ => c,
            }),
        }
    }

    /// Distance between lifted points.
    pub(crate) fn lifted_distance(&self, z: &Point, w: &Point) -> f64 {
        if z == w {
            return 0.0;
        }
        // fixed argument order makes the result exactly symmetric
        let (a, b) = if z.lex_cmp(w).is_le() { (z, w) } else { (w, z) };
        match self.layout() {
            Layout::Ball => ball_distance(a, b),
            Layout::Planar(factors) => factors
                .iter()
                .enumerate()
                .map(|(i, f)| {
                    if self.uses_chart(f) {
                        disk_distance(a.coord(i), b.coord(i))
                    } else {
                        planar_distance(f, a.coord(i), b.coord(i))
                    }
                })
                .fold(0.0, f64::max),
        }
    }

    /// Per-coordinate factor distances; `None` for the ball.
    pub fn factor_distances(&self, z: &Point, w: &Point) -> Result<Option<Vec<f64>>> {
        self.check_points(z, w)?;
        if self.is_chain() {
            return Err(HoroError::Unsupported("factor distances need an exact engine".into()));
        }
        Ok(match self.layout() {
            Layout::Ball => None,
            Layout::Planar(factors) => Some(
                factors
                    .iter()
                    .enumerate()
                    .map(|(i, f)| {
                        let (a, b) = (z.coord(i), w.coord(i));
                        let (a, b) = if (a.re, a.im) <= (b.re, b.im) { (a, b) } else { (b, a) };
                        if a == b {
                            0.0
                        } else if self.uses_chart(f) {
                            let (la, lb) = match f {
                                DomainKind::Conformal(c) => (c.to_disk(a), c.to_disk(b)),
                                DomainKind::ConvexPlanar { chart: Some(c), .. } => (c.to_disk(a), c.to_disk(b)),
                                _ => (a, b),
                            };
                            disk_distance(la, lb)
                        } else {
                            planar_distance(f, a, b)
                        }
                    })
                    .collect(),
            ),
        })
    }

    /// Distance as an interval: degenerate for exact engines, the chain
    /// interval at the base spacing otherwise.
    pub fn distance_interval(&self, z: &Point, w: &Point) -> Result<Interval> {
        match self.mode {
            EngineMode::ChainApprox(_) => Ok(self.chain_distance(z, w, f64::INFINITY)?.interval),
            _ => Ok(Interval::point(self.distance(z, w)?)),
        }
    }

    /// Infinitesimal Kobayashi metric; an interval only for polygons under
    /// the chain engine.
    pub fn infinitesimal_metric(&self, z: &Point, v: &[Complex64]) -> Result<Interval> {
        self.domain.require_member(z)?;
        if v.len() != z.dim() {
            return Err(HoroError::DimensionMismatch {
                expected: z.dim(),
                got: v.len(),
            });
        }
        if v.iter().all(|c| c.norm() == 0.0) {
            return Err(HoroError::InvalidInput("tangent vector must be nonzero".into()));
        }
        Ok(self.metric_unchecked(z, v))
    }

    pub(crate) fn metric_unchecked(&self, z: &Point, v: &[Complex64]) -> Interval {
        match self.layout() {
            Layout::Ball => {
                let p = 1.0 - z.norm() * z.norm();
                let vn2: f64 = v.iter().map(|c| c.norm_sqr()).sum();
                let inner: Complex64 = v.iter().zip(z.coords()).map(|(a, b)| a * b.conj()).sum();
                Interval::point((vn2 / p + inner.norm_sqr() / (p * p)).sqrt())
            }
            Layout::Planar(factors) => {
                let mut lo: f64 = 0.0;
                let mut hi: f64 = 0.0;
                for (i, f) in factors.iter().enumerate() {
                    let m = self.planar_metric(f, z.coord(i), v[i].norm());
                    lo = lo.max(m.lo);
                    hi = hi.max(m.hi);
                }
                Interval::new(lo, hi)
            }
        }
    }

    fn planar_metric(&self, kind: &DomainKind, z: Complex64, speed: f64) -> Interval {
        match kind {
            DomainKind::Disk => Interval::point(speed / ((1.0 - z.norm()) * (1.0 + z.norm()))),
            DomainKind::HalfPlane => Interval::point(speed / (2.0 * z.im)),
            DomainKind::Strip { im_min, im_max } => {
                let w = im_max - im_min;
                let y = (z.im - im_min) / w;
                Interval::point(PI * speed / (2.0 * w * (PI * y).sin()))
            }
            DomainKind::Conformal(chart) => Interval::point(chart_metric(chart.as_ref(), z, speed)),
            DomainKind::ConvexPlanar { polygon, chart } => match (&self.mode, chart) {
                (EngineMode::ChainApprox(_), _) | (_, None) => {
                    let d = polygon.signed_distance(z);
                    Interval::new(speed / (2.0 * d), speed / d)
                }
                (_, Some(chart)) => Interval::point(chart_metric(chart.as_ref(), z, speed)),
            },
            // planar_factors never yields these
            DomainKind::Ball | DomainKind::Polydisc { .. } | DomainKind::Product(_) => {
                Interval::point(f64::NAN)
            }
        }
    }

    /// Shortest-path interval over the lattice graph, refined until its width
    /// is at most `tol`.
    pub fn chain_distance(&self, z: &Point, w: &Point, tol: f64) -> Result<ChainResult> {
        let EngineMode::ChainApprox(params) = self.mode else {
            return Err(HoroError::Unsupported("chain_distance needs a chain_approx engine".into()));
        };
        self.check_points(z, w)?;
        if z == w {
            return Ok(ChainResult {
                interval: Interval::point(0.0),
                spacing: params.spacing,
                path: vec![*z],
                path_lengths: vec![0.0],
            });
        }
        let mut best: Option<ChainResult> = None;
        let mut h = params.spacing;
        for _ in 0..=params.max_refinements {
            let graph = ChainGraph::build(self, z, w, h, &params)?;
            let result = graph.shortest(z, w)?;
            let done = result.interval.width() <= tol;
            best = Some(result);
            if done {
                return Ok(best.expect("just set"));
            }
            h *= 0.5;
        }
        Err(HoroError::ChainRefinement {
            tol,
            best: best.expect("at least one pass").interval,
        })
    }
}

fn chart_metric(chart: &dyn ConformalChart, z: Complex64, speed: f64) -> f64 {
    let u = chart.to_disk(z);
    speed * chart.to_disk_derivative(z).norm() / ((1.0 - u.norm()) * (1.0 + u.norm()))
}

/// `k` from `tanh k = B / A` with `A² = B² + p1·p2`, without cancellation.
fn from_parts(b2: f64, p1: f64, p2: f64) -> f64 {
    let b = b2.sqrt();
    let a = (b2 + p1 * p2).sqrt();
    if b == 0.0 {
        return 0.0;
    }
    let ratio = b / a;
    if ratio < 0.5 {
        ratio.atanh()
    } else {
        // ½ log((A + B) / (A − B)) with A² − B² = p1·p2
        (a + b).ln() - 0.5 * p1.ln() - 0.5 * p2.ln()
    }
}

pub(crate) fn disk_distance(z: Complex64, w: Complex64) -> f64 {
    let pz = (1.0 - z.norm()) * (1.0 + z.norm());
    let pw = (1.0 - w.norm()) * (1.0 + w.norm());
    from_parts((z - w).norm_sqr(), pz, pw)
}

fn planar_distance(kind: &DomainKind, z: Complex64, w: Complex64) -> f64 {
    match kind {
        DomainKind::Disk => disk_distance(z, w),
        DomainKind::HalfPlane => from_parts((z - w).norm_sqr(), 2.0 * z.im, 2.0 * w.im),
        DomainKind::Strip { im_min, im_max } => {
            let width = im_max - im_min;
            let dx = (z.re - w.re) / width;
            let y1 = (z.im - im_min) / width;
            let y2 = (w.im - im_min) / width;
            let sh = (0.5 * PI * dx).sinh();
            let sn = (0.5 * PI * (y1 - y2)).sin();
            from_parts(
                4.0 * (sh * sh + sn * sn),
                2.0 * (PI * y1).sin(),
                2.0 * (PI * y2).sin(),
            )
        }
        DomainKind::Conformal(chart) => disk_distance(chart.to_disk(z), chart.to_disk(w)),
        DomainKind::ConvexPlanar { chart: Some(chart), .. } => {
            disk_distance(chart.to_disk(z), chart.to_disk(w))
        }
        _ => f64::NAN,
    }
}

fn ball_distance(z: &Point, w: &Point) -> f64 {
    let (z1, z2) = (z.coord(0), z.coord(1));
    let d1 = w.coord(0) - z1;
    let d2 = w.coord(1) - z2;
    let wedge = z1 * d2 - z2 * d1;
    let s2 = (d1.norm_sqr() + d2.norm_sqr() - wedge.norm_sqr()).max(0.0);
    let pz = (1.0 - z.norm()) * (1.0 + z.norm());
    let pw = (1.0 - w.norm()) * (1.0 + w.norm());
    from_parts(s2, pz, pw)
}
