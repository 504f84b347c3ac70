//! Points of ℂ or ℂ², stored inline so they stay `Copy`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{HoroError, Result};

pub const MAX_DIM: usize = 2;

#[derive(Clone, Copy, PartialEq)]
pub struct Point {
    coords: [Complex64; MAX_DIM],
    dim: usize,
}

impl Point {
    pub fn new(coords: &[Complex64]) -> Result<Self> {
        if coords.is_empty() || coords.len() > MAX_DIM {
            return Err(HoroError::InvalidInput(format!(
                "points must have complex dimension 1..={MAX_DIM}, got {}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(HoroError::InvalidInput("non-finite coordinate".into()));
        }
        let mut out = [Complex64::new(0.0, 0.0); MAX_DIM];
        out[..coords.len()].copy_from_slice(coords);
        Ok(Self {
            coords: out,
            dim: coords.len(),
        })
    }

    pub fn planar(z: Complex64) -> Self {
        Self {
            coords: [z, Complex64::new(0.0, 0.0)],
            dim: 1,
        }
    }

    pub fn real(x: f64) -> Self {
        Self::planar(Complex64::new(x, 0.0))
    }

    pub fn pair(z: Complex64, w: Complex64) -> Self {
        Self {
            coords: [z, w],
            dim: 2,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords[..self.dim]
    }

    pub fn coord(&self, i: usize) -> Complex64 {
        self.coords()[i]
    }

    /// First coordinate, for planar points.
    pub fn z(&self) -> Complex64 {
        self.coords[0]
    }

    pub fn is_finite(&self) -> bool {
        self.coords()
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Euclidean norm in ℂ^dim.
    pub fn norm(&self) -> f64 {
        self.coords()
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn euclid_dist(&self, other: &Point) -> f64 {
        self.coords()
            .iter()
            .zip(other.coords())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Sub-point made of coordinates `start..start + len`.
    pub fn slice(&self, start: usize, len: usize) -> Point {
        Point::new(&self.coords()[start..start + len]).expect("slice of a valid point")
    }

    /// Concatenate factor points into one point of the product.
    pub fn concat(parts: &[Point]) -> Result<Point> {
        let coords: Vec<Complex64> = parts.iter().flat_map(|p| p.coords().to_vec()).collect();
        Point::new(&coords)
    }

    pub fn map_coords(&self, mut f: impl FnMut(usize, Complex64) -> Complex64) -> Point {
        let mut out = *self;
        for i in 0..self.dim {
            out.coords[i] = f(i, self.coords[i]);
        }
        out
    }

    /// Affine combination `s·self + (1 − s)·other`.
    pub fn lerp(&self, other: &Point, s: f64) -> Point {
        self.map_coords(|i, c| c * s + other.coords[i] * (1.0 - s))
    }

    /// Lexicographic total order on (re, im) of each coordinate.
    pub fn lex_cmp(&self, other: &Point) -> std::cmp::Ordering {
        for (a, b) in self.coords().iter().zip(other.coords()) {
            let o = a
                .re
                .total_cmp(&b.re)
                .then_with(|| a.im.total_cmp(&b.im));
            if o.is_ne() {
                return o;
            }
        }
        self.dim.cmp(&other.dim)
    }

    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.coords().iter().map(|c| [c.re, c.im]).collect()
    }

    pub fn from_pairs(pairs: &[[f64; 2]]) -> Result<Point> {
        let coords: Vec<Complex64> = pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        Point::new(&coords)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}{:+}i", c.re, c.im)?;
        }
        write!(f, ")")
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_pairs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Point::from_pairs(&pairs).map_err(serde::de::Error::custom)
    }
}
