//! Closed convex polylines.

use num_complex::Complex64;

use crate::error::{HoroError, Result};

pub const MIN_VERTICES: usize = 8;

/// A convex polygon given by a closed polyline in counter-clockwise order.
///
/// Collinear vertices are allowed, so a square can be described by its four
/// corners plus the four edge midpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Complex64>,
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Complex64>) -> Result<Self> {
        if vertices.len() < MIN_VERTICES {
            return Err(HoroError::InvalidDomain(format!(
                "convex_planar needs at least {MIN_VERTICES} vertices, got {}",
                vertices.len()
            )));
        }
        if vertices.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(HoroError::InvalidDomain("non-finite vertex".into()));
        }
        let mut vertices = vertices;
        let area2: f64 = (0..vertices.len())
            .map(|i| {
                let a = vertices[i];
                let b = vertices[(i + 1) % vertices.len()];
                a.re * b.im - a.im * b.re
            })
            .sum();
        if area2 == 0.0 {
            return Err(HoroError::InvalidDomain("degenerate polygon".into()));
        }
        if area2 < 0.0 {
            vertices.reverse();
        }
        let scale = vertices.iter().map(|v| v.norm()).fold(1.0, f64::max);
        let n = vertices.len();
        let mut turning = 0;
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            if (b - a).norm() == 0.0 {
                return Err(HoroError::InvalidDomain("repeated vertex".into()));
            }
            let cross = cross(b - a, c - b);
            if cross < -1e-12 * scale * scale {
                return Err(HoroError::InvalidDomain(format!(
                    "polyline is not convex at vertex {}",
                    (i + 1) % n
                )));
            }
            if cross > 1e-12 * scale * scale {
                turning += 1;
            }
        }
        if turning < 3 {
            return Err(HoroError::InvalidDomain("polyline has fewer than 3 corners".into()));
        }
        Ok(Self { vertices })
    }

    /// Square of the given side centred at the origin, with edge midpoints as
    /// extra vertices.
    pub fn square(side: f64) -> Result<Self> {
        Self::regular(4, side / std::f64::consts::SQRT_2, std::f64::consts::FRAC_PI_4, 2)
    }

    /// Regular `n`-gon with circumradius `radius`, first corner at angle
    /// `phase`, and every edge split into `subdivisions` collinear pieces.
    pub fn regular(n: usize, radius: f64, phase: f64, subdivisions: usize) -> Result<Self> {
        let corners: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(radius, phase + std::f64::consts::TAU * k as f64 / n as f64))
            .collect();
        let mut vertices = Vec::with_capacity(n * subdivisions);
        for k in 0..n {
            let a = corners[k];
            let b = corners[(k + 1) % n];
            for s in 0..subdivisions {
                vertices.push(a + (b - a) * (s as f64 / subdivisions as f64));
            }
        }
        Self::new(vertices)
    }

    pub fn vertices(&self) -> &[Complex64] {
        &self.vertices
    }

    /// Vertices where the boundary actually turns.
    pub fn corners(&self) -> Vec<Complex64> {
        let n = self.vertices.len();
        let scale = self.vertices.iter().map(|v| v.norm()).fold(1.0, f64::max);
        (0..n)
            .filter_map(|i| {
                let a = self.vertices[(i + n - 1) % n];
                let b = self.vertices[i];
                let c = self.vertices[(i + 1) % n];
                (cross(b - a, c - b) > 1e-12 * scale * scale).then_some(b)
            })
            .collect()
    }

    pub fn centroid(&self) -> Complex64 {
        let corners = self.corners();
        corners.iter().sum::<Complex64>() / corners.len() as f64
    }

    fn edges(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Positive inside, negative outside, magnitude = distance to the polyline.
    pub fn signed_distance(&self, z: Complex64) -> f64 {
        let mut inside = true;
        let mut best = f64::INFINITY;
        for (a, b) in self.edges() {
            if cross(b - a, z - a) < 0.0 {
                inside = false;
            }
            best = best.min(segment_distance(z, a, b));
        }
        if inside {
            best
        } else {
            -best
        }
    }

    pub fn nearest_boundary_point(&self, z: Complex64) -> Complex64 {
        let mut best = (f64::INFINITY, z);
        for (a, b) in self.edges() {
            let p = segment_projection(z, a, b);
            let d = (z - p).norm();
            if d < best.0 {
                best = (d, p);
            }
        }
        best.1
    }

    pub fn bounding_box(&self) -> [f64; 4] {
        let mut bb = [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY];
        for v in &self.vertices {
            bb[0] = bb[0].min(v.re);
            bb[1] = bb[1].max(v.re);
            bb[2] = bb[2].min(v.im);
            bb[3] = bb[3].max(v.im);
        }
        bb
    }

    /// Centre, circumradius and first-corner angle when the corners form a
    /// regular polygon.
    pub fn regular_shape(&self) -> Option<(Complex64, f64, f64, usize)> {
        let corners = self.corners();
        let n = corners.len();
        if n < 3 {
            return None;
        }
        let c = self.centroid();
        let radius = (corners[0] - c).norm();
        let tol = 1e-9 * radius.max(1.0);
        if corners.iter().any(|v| ((v - c).norm() - radius).abs() > tol) {
            return None;
        }
        let side = (corners[1] - corners[0]).norm();
        for k in 0..n {
            if ((corners[(k + 1) % n] - corners[k]).norm() - side).abs() > tol {
                return None;
            }
        }
        Some((c, radius, (corners[0] - c).arg(), n))
    }
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn segment_projection(z: Complex64, a: Complex64, b: Complex64) -> Complex64 {
    let d = b - a;
    let t = ((z - a).re * d.re + (z - a).im * d.im) / d.norm_sqr();
    a + d * t.clamp(0.0, 1.0)
}

fn segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    (z - segment_projection(z, a, b)).norm()
}
