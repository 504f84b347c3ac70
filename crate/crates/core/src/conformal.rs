//! Conformal charts from planar domains onto the unit disk.
//!
//! Distances on a chart domain are disk distances of the mapped points. The
//! regular-polygon chart is the Schwarz–Christoffel map
//! `F(w) = c + C ∫₀ʷ (1 + tⁿ)^(-2/n) dt`, inverted by Newton continuation.

use std::fmt;

use num_complex::Complex64;

use crate::polygon::ConvexPolygon;
use crate::quadrature::gl16;

fn beta(a: f64, b: f64) -> f64 {
    libm::tgamma(a) * libm::tgamma(b) / libm::tgamma(a + b)
}

pub trait ConformalChart: Send + Sync + fmt::Debug {
    fn to_disk(&self, z: Complex64) -> Complex64;
    fn from_disk(&self, u: Complex64) -> Complex64;
    /// Derivative of `to_disk` at `z`.
    fn to_disk_derivative(&self, z: Complex64) -> Complex64;
    /// Positive inside, negative outside.
    fn signed_boundary_distance(&self, z: Complex64) -> f64;
    fn nearest_boundary_point(&self, z: Complex64) -> Complex64;
    /// `[xmin, xmax, ymin, ymax]`.
    fn bounding_box(&self) -> [f64; 4];
    fn describe(&self) -> String;
}

/// The disc `|z − center| < radius`.
#[derive(Clone, Debug, PartialEq)]
pub struct EccentricDisc {
    pub center: Complex64,
    pub radius: f64,
}

impl ConformalChart for EccentricDisc {
    fn to_disk(&self, z: Complex64) -> Complex64 {
        (z - self.center) / self.radius
    }

    fn from_disk(&self, u: Complex64) -> Complex64 {
        self.center + u * self.radius
    }

    fn to_disk_derivative(&self, _z: Complex64) -> Complex64 {
        Complex64::new(1.0 / self.radius, 0.0)
    }

    fn signed_boundary_distance(&self, z: Complex64) -> f64 {
        self.radius - (z - self.center).norm()
    }

    fn nearest_boundary_point(&self, z: Complex64) -> Complex64 {
        let d = z - self.center;
        if d.norm() == 0.0 {
            return self.center + self.radius;
        }
        self.center + d / d.norm() * self.radius
    }

    fn bounding_box(&self) -> [f64; 4] {
        [
            self.center.re - self.radius,
            self.center.re + self.radius,
            self.center.im - self.radius,
            self.center.im + self.radius,
        ]
    }

    fn describe(&self) -> String {
        format!("disc(center={}, radius={})", self.center, self.radius)
    }
}

const SERIES_RADIUS: f64 = 0.75;

/// Schwarz–Christoffel chart of a regular polygon.
#[derive(Clone, Debug)]
pub struct RegularPolygonChart {
    polygon: ConvexPolygon,
    sides: usize,
    center: Complex64,
    /// Complex scale `C` including the rotation.
    scale: Complex64,
    series: Vec<f64>,
}

impl RegularPolygonChart {
    /// Builds the chart when the polygon's corners are regular.
    pub fn for_polygon(polygon: &ConvexPolygon) -> Option<Self> {
        let (center, radius, phase, n) = polygon.regular_shape()?;
        let nf = n as f64;
        // S(e^{iπ/n}) = e^{iπ/n} · B(1/n, 1 − 2/n) / n
        let corner_len = beta(1.0 / nf, 1.0 - 2.0 / nf) / nf;
        let scale = Complex64::from_polar(radius / corner_len, phase - std::f64::consts::PI / nf);
        let a = 2.0 / nf;
        let mut series = vec![1.0];
        let mut ck: f64 = 1.0;
        for k in 0..400 {
            ck *= (a + k as f64) / (k as f64 + 1.0);
            series.push(ck);
            if ck * SERIES_RADIUS.powi((n * (k + 1)) as i32) < 1e-19 {
                break;
            }
        }
        Some(Self {
            polygon: polygon.clone(),
            sides: n,
            center,
            scale,
            series,
        })
    }

    fn integrand(&self, t: Complex64) -> Complex64 {
        (Complex64::new(1.0, 0.0) + t.powu(self.sides as u32)).powf(-2.0 / self.sides as f64)
    }

    /// `S(w) = ∫₀ʷ (1 + tⁿ)^(-2/n) dt`.
    fn primitive(&self, w: Complex64) -> Complex64 {
        let r = w.norm();
        if r <= SERIES_RADIUS {
            return self.series_value(w);
        }
        let w0 = w * (SERIES_RADIUS / r);
        let mut acc = self.series_value(w0);
        let (nodes, weights) = gl16();
        let d = w - w0;
        // graded toward the far endpoint, where a prevertex may sit
        let mut a = 0.0;
        let mut len = 0.5;
        for piece in 0..40 {
            let b = if piece == 39 { 1.0 } else { a + len };
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            let mut s = Complex64::new(0.0, 0.0);
            for (x, wt) in nodes.iter().zip(weights) {
                s += self.integrand(w0 + d * (mid + half * x)) * *wt;
            }
            acc += s * d * half;
            a = b;
            len *= 0.5;
            if b >= 1.0 || len < 1e-14 {
                if b < 1.0 {
                    let half = 0.5 * (1.0 - a);
                    let mid = 0.5 * (1.0 + a);
                    let mut s = Complex64::new(0.0, 0.0);
                    for (x, wt) in nodes.iter().zip(weights) {
                        s += self.integrand(w0 + d * (mid + half * x)) * *wt;
                    }
                    acc += s * d * half;
                }
                break;
            }
        }
        acc
    }

    fn series_value(&self, w: Complex64) -> Complex64 {
        let n = self.sides;
        let wn = w.powu(n as u32);
        let mut power = w;
        let mut sum = Complex64::new(0.0, 0.0);
        for (k, c) in self.series.iter().enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += power * (sign * c / (n * k + 1) as f64);
            power *= wn;
        }
        sum
    }

    fn forward(&self, w: Complex64) -> Complex64 {
        self.center + self.scale * self.primitive(w)
    }

    fn invert(&self, z: Complex64) -> Complex64 {
        let target = (z - self.center) / self.scale;
        let mut w = Complex64::new(0.0, 0.0);
        const STAGES: usize = 4;
        for stage in 1..=STAGES {
            let goal = target * (stage as f64 / STAGES as f64);
            for _ in 0..60 {
                let residual = self.primitive(w) - goal;
                let mut step = residual / self.integrand(w);
                let mut next = w - step;
                while next.norm() >= 1.0 {
                    step *= 0.5;
                    next = w - step;
                }
                w = next;
                if step.norm() <= 1e-17 * (1.0 + w.norm()) || residual.norm() == 0.0 {
                    break;
                }
            }
        }
        w
    }
}

impl ConformalChart for RegularPolygonChart {
    fn to_disk(&self, z: Complex64) -> Complex64 {
        self.invert(z)
    }

    fn from_disk(&self, u: Complex64) -> Complex64 {
        self.forward(u)
    }

    fn to_disk_derivative(&self, z: Complex64) -> Complex64 {
        let w = self.invert(z);
        Complex64::new(1.0, 0.0) / (self.scale * self.integrand(w))
    }

    fn signed_boundary_distance(&self, z: Complex64) -> f64 {
        self.polygon.signed_distance(z)
    }

    fn nearest_boundary_point(&self, z: Complex64) -> Complex64 {
        self.polygon.nearest_boundary_point(z)
    }

    fn bounding_box(&self) -> [f64; 4] {
        self.polygon.bounding_box()
    }

    fn describe(&self) -> String {
        format!("schwarz-christoffel regular {}-gon", self.sides)
    }
}
