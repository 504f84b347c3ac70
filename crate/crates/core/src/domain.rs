//! Supported hyperbolic domains and their compact exhaustions.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conformal::{ConformalChart, EccentricDisc, RegularPolygonChart};
use crate::error::{HoroError, Result};
use crate::point::Point;
use crate::polygon::ConvexPolygon;

/// Relative membership margin: a point is inside when its boundary distance
/// exceeds `EPS_MEM · max(1, |z|)`.
pub const EPS_MEM: f64 = 1e-15;

/// Points within this relative band of the boundary count as boundary points.
pub const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub enum DomainKind {
    Disk,
    /// `{Im z > 0}`.
    HalfPlane,
    /// `{im_min < Im z < im_max}`.
    Strip { im_min: f64, im_max: f64 },
    /// Unit ball of ℂ².
    Ball,
    Polydisc { dim: usize },
    Product(Vec<DomainKind>),
    Conformal(Arc<dyn ConformalChart>),
    ConvexPlanar {
        polygon: ConvexPolygon,
        chart: Option<Arc<RegularPolygonChart>>,
    },
}

impl DomainKind {
    pub fn convex_planar(polygon: ConvexPolygon) -> Self {
        let chart = RegularPolygonChart::for_polygon(&polygon).map(Arc::new);
        DomainKind::ConvexPlanar { polygon, chart }
    }

    pub fn dim(&self) -> usize {
        match self {
            DomainKind::Ball => 2,
            DomainKind::Polydisc { dim } => *dim,
            DomainKind::Product(factors) => factors.iter().map(DomainKind::dim).sum(),
            _ => 1,
        }
    }

    pub fn name(&self) -> String {
        match self {
            DomainKind::Disk => "disk".into(),
            DomainKind::HalfPlane => "half_plane".into(),
            DomainKind::Strip { im_min, im_max } => format!("strip({im_min}<Im<{im_max})"),
            DomainKind::Ball => "ball".into(),
            DomainKind::Polydisc { dim } => format!("polydisc({dim})"),
            DomainKind::Product(f) => {
                let names: Vec<String> = f.iter().map(DomainKind::name).collect();
                format!("product[{}]", names.join(" x "))
            }
            DomainKind::Conformal(chart) => format!("conformal[{}]", chart.describe()),
            DomainKind::ConvexPlanar { polygon, .. } => {
                format!("convex_planar({} vertices)", polygon.vertices().len())
            }
        }
    }

    /// Planar factors in coordinate order; `None` for the ball.
    pub fn planar_factors(&self) -> Option<Vec<DomainKind>> {
        match self {
            DomainKind::Ball => None,
            DomainKind::Polydisc { dim } => Some(vec![DomainKind::Disk; *dim]),
            DomainKind::Product(factors) => {
                let mut out = Vec::new();
                for f in factors {
                    out.extend(f.planar_factors()?);
                }
                Some(out)
            }
            other => Some(vec![other.clone()]),
        }
    }

    pub fn is_product(&self) -> bool {
        matches!(self, DomainKind::Polydisc { dim } if *dim > 1) || matches!(self, DomainKind::Product(f) if f.len() > 1)
    }

    /// Signed Euclidean boundary distance, positive inside.
    pub fn signed_distance(&self, z: &Point) -> f64 {
        match self {
            DomainKind::Disk => 1.0 - z.z().norm(),
            DomainKind::HalfPlane => z.z().im,
            DomainKind::Strip { im_min, im_max } => {
                let y = z.z().im;
                (y - im_min).min(im_max - y)
            }
            DomainKind::Ball => 1.0 - z.norm(),
            DomainKind::Polydisc { .. } => z
                .coords()
                .iter()
                .map(|c| 1.0 - c.norm())
                .fold(f64::INFINITY, f64::min),
            DomainKind::Product(factors) => {
                let mut start = 0;
                let mut best = f64::INFINITY;
                for f in factors {
                    let d = f.dim();
                    best = best.min(f.signed_distance(&z.slice(start, d)));
                    start += d;
                }
                best
            }
            DomainKind::Conformal(chart) => chart.signed_boundary_distance(z.z()),
            DomainKind::ConvexPlanar { polygon, .. } => polygon.signed_distance(z.z()),
        }
    }

    pub fn is_bounded(&self) -> bool {
        match self {
            DomainKind::HalfPlane | DomainKind::Strip { .. } => false,
            DomainKind::Product(f) => f.iter().all(DomainKind::is_bounded),
            DomainKind::Conformal(chart) => chart.bounding_box().iter().all(|v| v.is_finite()),
            _ => true,
        }
    }

    pub fn is_convex(&self) -> bool {
        match self {
            DomainKind::Conformal(chart) => chart.describe().starts_with("disc"),
            DomainKind::Product(f) => f.iter().all(DomainKind::is_convex),
            _ => true,
        }
    }

    fn anchor(&self) -> Point {
        let zero = Complex64::new(0.0, 0.0);
        match self {
            DomainKind::Disk => Point::planar(zero),
            DomainKind::HalfPlane => Point::planar(Complex64::new(0.0, 1.0)),
            DomainKind::Strip { im_min, im_max } => {
                Point::planar(Complex64::new(0.0, 0.5 * (im_min + im_max)))
            }
            DomainKind::Ball => Point::pair(zero, zero),
            DomainKind::Polydisc { dim } => Point::new(&vec![zero; *dim]).expect("dim <= 2"),
            DomainKind::Product(f) => {
                Point::concat(&f.iter().map(DomainKind::anchor).collect::<Vec<_>>())
                    .expect("product dim <= 2")
            }
            DomainKind::Conformal(chart) => Point::planar(chart.from_disk(zero)),
            DomainKind::ConvexPlanar { polygon, .. } => Point::planar(polygon.centroid()),
        }
    }

    /// Interior point used as the far end of radial approach segments.
    fn inner_anchor(&self, sigma: &Point) -> Point {
        match self {
            DomainKind::HalfPlane => Point::planar(Complex64::new(sigma.z().re, 1.0)),
            DomainKind::Strip { im_min, im_max } => {
                Point::planar(Complex64::new(sigma.z().re, 0.5 * (im_min + im_max)))
            }
            DomainKind::Product(f) => {
                let mut start = 0;
                let mut parts = Vec::new();
                for k in f {
                    let d = k.dim();
                    parts.push(k.inner_anchor(&sigma.slice(start, d)));
                    start += d;
                }
                Point::concat(&parts).expect("product dim <= 2")
            }
            other => other.anchor(),
        }
    }

    fn snap(&self, z: &Point, tol: f64) -> Point {
        match self {
            DomainKind::Disk | DomainKind::Ball => {
                let r = z.norm();
                if 1.0 - r <= tol && r > 0.0 {
                    z.map_coords(|_, c| c / r)
                } else {
                    *z
                }
            }
            DomainKind::Polydisc { .. } => z.map_coords(|_, c| {
                let r = c.norm();
                if 1.0 - r <= tol && r > 0.0 {
                    c / r
                } else {
                    c
                }
            }),
            DomainKind::Product(f) => {
                let mut start = 0;
                let mut parts = Vec::new();
                for k in f {
                    let d = k.dim();
                    parts.push(k.snap(&z.slice(start, d), tol));
                    start += d;
                }
                Point::concat(&parts).expect("product dim <= 2")
            }
            DomainKind::HalfPlane => {
                if z.z().im <= tol {
                    Point::planar(Complex64::new(z.z().re, 0.0))
                } else {
                    *z
                }
            }
            DomainKind::Strip { im_min, im_max } => {
                let c = z.z();
                if c.im - im_min <= tol {
                    Point::planar(Complex64::new(c.re, *im_min))
                } else if im_max - c.im <= tol {
                    Point::planar(Complex64::new(c.re, *im_max))
                } else {
                    *z
                }
            }
            DomainKind::Conformal(chart) => {
                if chart.signed_boundary_distance(z.z()) <= tol {
                    Point::planar(chart.nearest_boundary_point(z.z()))
                } else {
                    *z
                }
            }
            DomainKind::ConvexPlanar { polygon, .. } => {
                if polygon.signed_distance(z.z()) <= tol {
                    Point::planar(polygon.nearest_boundary_point(z.z()))
                } else {
                    *z
                }
            }
        }
    }

    /// Planar bounding box `[xmin, xmax, ymin, ymax]` (may be infinite).
    pub fn bounding_box(&self) -> [f64; 4] {
        let inf = f64::INFINITY;
        match self {
            DomainKind::Disk => [-1.0, 1.0, -1.0, 1.0],
            DomainKind::HalfPlane => [-inf, inf, 0.0, inf],
            DomainKind::Strip { im_min, im_max } => [-inf, inf, *im_min, *im_max],
            DomainKind::Conformal(chart) => chart.bounding_box(),
            DomainKind::ConvexPlanar { polygon, .. } => polygon.bounding_box(),
            DomainKind::Polydisc { dim: 1 } => [-1.0, 1.0, -1.0, 1.0],
            DomainKind::Product(f) if f.len() == 1 => f[0].bounding_box(),
            _ => [-inf, inf, -inf, inf],
        }
    }

    /// Smallest width of the domain, used to check grid resolutions.
    pub fn min_width(&self) -> f64 {
        match self {
            DomainKind::Strip { im_min, im_max } => im_max - im_min,
            DomainKind::HalfPlane => f64::INFINITY,
            DomainKind::Product(f) => f.iter().map(DomainKind::min_width).fold(f64::INFINITY, f64::min),
            DomainKind::Ball | DomainKind::Polydisc { .. } | DomainKind::Disk => 2.0,
            other => {
                let b = other.bounding_box();
                (b[1] - b[0]).min(b[3] - b[2])
            }
        }
    }

    /// Number of unit-cube coordinates consumed by `sample_unit`.
    pub fn sample_dims(&self) -> usize {
        match self {
            DomainKind::Ball => 4,
            DomainKind::Polydisc { dim } => 2 * dim,
            DomainKind::Product(f) => f.iter().map(DomainKind::sample_dims).sum(),
            _ => 2,
        }
    }

    /// Maps unit-cube coordinates to a point of the probe region, or `None`
    /// when the candidate is rejected.
    pub fn sample_unit(&self, u: &[f64]) -> Option<Point> {
        use std::f64::consts::TAU;
        let disk = |u0: f64, u1: f64| Complex64::from_polar(0.9 * u0.sqrt(), TAU * u1);
        match self {
            DomainKind::Disk => Some(Point::planar(disk(u[0], u[1]))),
            DomainKind::HalfPlane => {
                let y = (0.05f64.ln() + u[1] * (4.0f64.ln() - 0.05f64.ln())).exp();
                Some(Point::planar(Complex64::new(-2.0 + 4.0 * u[0], y)))
            }
            DomainKind::Strip { im_min, im_max } => {
                let w = im_max - im_min;
                Some(Point::planar(Complex64::new(
                    -3.0 + 6.0 * u[0],
                    im_min + w * (0.05 + 0.9 * u[1]),
                )))
            }
            DomainKind::Ball => {
                let z = Complex64::new(0.9 * (2.0 * u[0] - 1.0), 0.9 * (2.0 * u[1] - 1.0));
                let w = Complex64::new(0.9 * (2.0 * u[2] - 1.0), 0.9 * (2.0 * u[3] - 1.0));
                let p = Point::pair(z, w);
                (p.norm() < 0.9).then_some(p)
            }
            DomainKind::Polydisc { dim } => {
                let coords: Vec<Complex64> = (0..*dim).map(|i| disk(u[2 * i], u[2 * i + 1])).collect();
                Point::new(&coords).ok()
            }
            DomainKind::Product(f) => {
                let mut parts = Vec::new();
                let mut start = 0;
                for k in f {
                    let d = k.sample_dims();
                    parts.push(k.sample_unit(&u[start..start + d])?);
                    start += d;
                }
                Point::concat(&parts).ok()
            }
            DomainKind::Conformal(chart) => Some(Point::planar(chart.from_disk(disk(u[0], u[1])))),
            DomainKind::ConvexPlanar { polygon, .. } => {
                let b = polygon.bounding_box();
                let z = Complex64::new(b[0] + (b[1] - b[0]) * u[0], b[2] + (b[3] - b[2]) * u[1]);
                let inner = polygon.signed_distance(polygon.centroid());
                (polygon.signed_distance(z) >= 0.05 * inner).then_some(Point::planar(z))
            }
        }
    }
}

/// Compact exhaustion `K_j = {δ(z) ≥ margin_ratio^j, |z| ≤ radius_step·j}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Exhaustion {
    pub margin_ratio: f64,
    pub radius_step: f64,
}

impl Default for Exhaustion {
    fn default() -> Self {
        Self {
            margin_ratio: 0.5,
            radius_step: 1.0,
        }
    }
}

impl Exhaustion {
    pub fn margin(&self, j: u32) -> f64 {
        self.margin_ratio.powi(j as i32)
    }

    pub fn radius(&self, j: u32) -> f64 {
        self.radius_step * j as f64
    }

    /// Smallest `j ≥ 1` with `margin(j) ≤ delta`.
    pub fn margin_level(&self, delta: f64) -> u32 {
        if delta >= self.margin(1) {
            return 1;
        }
        let guess = (delta.ln() / self.margin_ratio.ln()).ceil();
        let mut j = if guess.is_finite() { guess.clamp(1.0, 4000.0) as u32 } else { 4000 };
        while self.margin(j) > delta && j < 4000 {
            j += 1;
        }
        while j > 1 && self.margin(j - 1) <= delta {
            j -= 1;
        }
        j
    }

    /// Smallest `j ≥ 1` with `radius(j) ≥ norm`.
    pub fn radius_level(&self, norm: f64) -> u32 {
        let mut j = (norm / self.radius_step).ceil().max(1.0) as u32;
        while self.radius(j) < norm && j < u32::MAX {
            j += 1;
        }
        while j > 1 && self.radius(j - 1) >= norm {
            j -= 1;
        }
        j
    }
}

/// A hyperbolic domain together with its compact exhaustion.
#[derive(Clone, Debug)]
pub struct DomainModel {
    kind: DomainKind,
    exhaustion: Exhaustion,
}

impl DomainModel {
    pub fn new(kind: DomainKind) -> Result<Self> {
        Self::with_exhaustion(kind, Exhaustion::default())
    }

    pub fn with_exhaustion(kind: DomainKind, exhaustion: Exhaustion) -> Result<Self> {
        if kind.dim() == 0 || kind.dim() > crate::point::MAX_DIM {
            return Err(HoroError::InvalidDomain(format!(
                "complex dimension {} is not supported",
                kind.dim()
            )));
        }
        match &kind {
            DomainKind::Strip { im_min, im_max } if !(im_min < im_max) || !im_min.is_finite() || !im_max.is_finite() => {
                return Err(HoroError::InvalidDomain("strip needs im_min < im_max".into()));
            }
            DomainKind::Polydisc { dim } if *dim == 0 => {
                return Err(HoroError::InvalidDomain("polydisc of dimension 0".into()));
            }
            DomainKind::Product(f) if f.is_empty() => {
                return Err(HoroError::InvalidDomain("product without factors".into()));
            }
            _ => {}
        }
        if !(exhaustion.margin_ratio > 0.0 && exhaustion.margin_ratio < 1.0 && exhaustion.radius_step > 0.0) {
            return Err(HoroError::InvalidDomain("bad exhaustion parameters".into()));
        }
        Ok(Self { kind, exhaustion })
    }

    pub fn disk() -> Self {
        Self::new(DomainKind::Disk).expect("valid")
    }

    pub fn bidisc() -> Self {
        Self::new(DomainKind::Polydisc { dim: 2 }).expect("valid")
    }

    pub fn ball() -> Self {
        Self::new(DomainKind::Ball).expect("valid")
    }

    pub fn half_plane() -> Self {
        Self::new(DomainKind::HalfPlane).expect("valid")
    }

    pub fn strip(im_min: f64, im_max: f64) -> Result<Self> {
        Self::new(DomainKind::Strip { im_min, im_max })
    }

    pub fn unit_strip() -> Self {
        Self::strip(0.0, 1.0).expect("valid")
    }

    pub fn square(side: f64) -> Result<Self> {
        Self::new(DomainKind::convex_planar(ConvexPolygon::square(side)?))
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn exhaustion(&self) -> &Exhaustion {
        &self.exhaustion
    }

    pub fn dim(&self) -> usize {
        self.kind.dim()
    }

    pub fn name(&self) -> String {
        self.kind.name()
    }

    pub fn is_bounded(&self) -> bool {
        self.kind.is_bounded()
    }

    pub fn is_convex(&self) -> bool {
        self.kind.is_convex()
    }

    pub fn check_dim(&self, z: &Point) -> Result<()> {
        if z.dim() != self.dim() {
            return Err(HoroError::DimensionMismatch {
                expected: self.dim(),
                got: z.dim(),
            });
        }
        Ok(())
    }

    fn scale(z: &Point) -> f64 {
        z.norm().max(1.0)
    }

    /// Euclidean boundary distance with sign: positive inside.
    pub fn signed_boundary_distance(&self, z: &Point) -> Result<f64> {
        self.check_dim(z)?;
        Ok(self.kind.signed_distance(z))
    }

    pub fn contains(&self, z: &Point) -> Result<bool> {
        let d = self.signed_boundary_distance(z)?;
        Ok(z.is_finite() && d > EPS_MEM * Self::scale(z))
    }

    /// Euclidean distance to the boundary; zero on the boundary.
    pub fn boundary_distance(&self, z: &Point) -> Result<f64> {
        let d = self.signed_boundary_distance(z)?;
        let band = EPS_MEM * Self::scale(z);
        if d < -band {
            return Err(HoroError::Exterior(z.to_string()));
        }
        Ok(if d > band { d } else { 0.0 })
    }

    pub fn require_member(&self, z: &Point) -> Result<()> {
        if !self.contains(z)? {
            return Err(HoroError::Exterior(z.to_string()));
        }
        Ok(())
    }

    /// Smallest `j` with `z ∈ K_j`.
    pub fn exhaustion_index(&self, z: &Point) -> Result<u32> {
        self.require_member(z)?;
        let delta = self.boundary_distance(z)?;
        Ok(self
            .exhaustion
            .margin_level(delta)
            .max(self.exhaustion.radius_level(z.norm())))
    }

    /// Smallest `j` with `z` in the closure piece `Ω̄ ∩ {|z| ≤ r_j}` used for ends.
    pub fn closure_level(&self, z: &Point) -> u32 {
        self.exhaustion.radius_level(z.norm())
    }

    pub fn anchor(&self) -> Point {
        self.kind.anchor()
    }

    pub fn inner_anchor(&self, sigma: &Point) -> Point {
        self.kind.inner_anchor(sigma)
    }

    /// Projects coordinates within `tol` of the boundary onto it.
    pub fn snap_to_boundary(&self, z: &Point, tol: f64) -> Point {
        self.kind.snap(z, tol)
    }

    pub fn is_boundary_point(&self, z: &Point) -> Result<bool> {
        let d = self.signed_boundary_distance(z)?;
        Ok(d.abs() <= BOUNDARY_TOL * Self::scale(z))
    }

    pub fn validate_target(&self, target: &BoundaryTarget) -> Result<()> {
        match target {
            BoundaryTarget::BoundaryPoint(p) => {
                if !self.is_boundary_point(p)? {
                    return Err(HoroError::InvalidInput(format!("{p} is not a boundary point")));
                }
            }
            BoundaryTarget::End(e) => {
                if self.is_bounded() {
                    return Err(HoroError::InvalidInput("bounded domains have no ends".into()));
                }
                if e.path.is_empty() {
                    return Err(HoroError::InvalidInput("empty end path".into()));
                }
            }
        }
        Ok(())
    }

    /// Deterministic Halton probe grid: 64 points in dimension 1, 256 in dimension 2.
    pub fn probe_grid(&self) -> Vec<Point> {
        let count = if self.dim() == 1 { 64 } else { 256 };
        self.halton_points(count)
    }

    pub fn halton_points(&self, count: usize) -> Vec<Point> {
        const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];
        let dims = self.kind.sample_dims();
        let mut out = Vec::with_capacity(count);
        let mut index = 1u64;
        while out.len() < count && index < 1_000_000 {
            let u: Vec<f64> = (0..dims).map(|d| halton(index, PRIMES[d])).collect();
            if let Some(p) = self.kind.sample_unit(&u) {
                if self.contains(&p).unwrap_or(false) {
                    out.push(p);
                }
            }
            index += 1;
        }
        out
    }
}

pub fn halton(mut index: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while index > 0 {
        f /= base as f64;
        r += f * (index % base) as f64;
        index /= base;
    }
    r
}

/// Identifier of an end: the component index at each exhaustion level, plus
/// the mean escape direction of its deepest recorded component.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndTarget {
    pub path: Vec<usize>,
    pub direction: [f64; 2],
}

/// A point of `Ω̄^End \ Ω`: a boundary point or an end.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryTarget {
    BoundaryPoint(Point),
    End(EndTarget),
}

pub use BoundaryTarget::BoundaryPoint as TargetPoint;

impl BoundaryTarget {
    pub fn point(p: Point) -> Self {
        BoundaryTarget::BoundaryPoint(p)
    }

    pub fn as_point(&self) -> Option<&Point> {
        match self {
            BoundaryTarget::BoundaryPoint(p) => Some(p),
            BoundaryTarget::End(_) => None,
        }
    }

    /// Same target up to `tol` (boundary points) or on the common levels (ends).
    pub fn matches(&self, other: &BoundaryTarget, tol: f64) -> bool {
        match (self, other) {
            (BoundaryTarget::BoundaryPoint(a), BoundaryTarget::BoundaryPoint(b)) => {
                a.dim() == b.dim() && a.euclid_dist(b) <= tol
            }
            (BoundaryTarget::End(a), BoundaryTarget::End(b)) => {
                let n = a.path.len().min(b.path.len());
                n > 0 && a.path[..n] == b.path[..n]
            }
            _ => false,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            BoundaryTarget::BoundaryPoint(p) => format!("boundary point {p}"),
            BoundaryTarget::End(e) => format!(
                "end {:?} (direction {:.3}{:+.3}i)",
                e.path, e.direction[0], e.direction[1]
            ),
        }
    }
}

/// Structured-config descriptor of a domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainDescriptor {
    Disk,
    HalfPlane,
    Strip {
        #[serde(default)]
        im_min: f64,
        #[serde(default = "one")]
        im_max: f64,
    },
    Ball,
    Polydisc {
        dim: usize,
    },
    Product {
        factors: Vec<DomainDescriptor>,
    },
    ConvexPlanar {
        vertices: Vec<[f64; 2]>,
    },
    RegularPolygon {
        sides: usize,
        circumradius: f64,
        #[serde(default)]
        phase: f64,
    },
    Conformal {
        center: [f64; 2],
        radius: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl DomainDescriptor {
    pub fn to_kind(&self) -> Result<DomainKind> {
        Ok(match self {
            DomainDescriptor::Disk => DomainKind::Disk,
            DomainDescriptor::HalfPlane => DomainKind::HalfPlane,
            DomainDescriptor::Strip { im_min, im_max } => DomainKind::Strip {
                im_min: *im_min,
                im_max: *im_max,
            },
            DomainDescriptor::Ball => DomainKind::Ball,
            DomainDescriptor::Polydisc { dim } => {
                if *dim == 0 || *dim > crate::point::MAX_DIM {
                    return Err(HoroError::InvalidDomain(format!("polydisc dim {dim}")));
                }
                DomainKind::Polydisc { dim: *dim }
            }
            DomainDescriptor::Product { factors } => {
                DomainKind::Product(factors.iter().map(|f| f.to_kind()).collect::<Result<_>>()?)
            }
            DomainDescriptor::ConvexPlanar { vertices } => DomainKind::convex_planar(ConvexPolygon::new(
                vertices.iter().map(|v| Complex64::new(v[0], v[1])).collect(),
            )?),
            DomainDescriptor::RegularPolygon {
                sides,
                circumradius,
                phase,
            } => {
                if *sides < 3 {
                    return Err(HoroError::InvalidDomain("regular polygon needs >= 3 sides".into()));
                }
                let subdivisions = crate::polygon::MIN_VERTICES.div_ceil(*sides).max(1);
                DomainKind::convex_planar(ConvexPolygon::regular(*sides, *circumradius, *phase, subdivisions)?)
            }
            DomainDescriptor::Conformal { center, radius } => {
                if !(*radius > 0.0) {
                    return Err(HoroError::InvalidDomain("disc radius must be positive".into()));
                }
                DomainKind::Conformal(Arc::new(EccentricDisc {
                    center: Complex64::new(center[0], center[1]),
                    radius: *radius,
                }))
            }
        })
    }

    pub fn build(&self) -> Result<DomainModel> {
        DomainModel::new(self.to_kind()?)
    }
}
