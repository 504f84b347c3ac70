//! Holomorphic self-map expressions and their certification.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{DomainKind, BOUNDARY_TOL};
use crate::error::{HoroError, Result};
use crate::kobayashi::DistanceEngine;
use crate::point::Point;

fn cx(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

/// Map syntax tree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapExpr {
    /// `e^{iθ} (z + a) / (1 + ā z)`.
    Mobius {
        a: [f64; 2],
        #[serde(default)]
        rotation: f64,
    },
    /// `a z + b`.
    Affine { a: [f64; 2], b: [f64; 2] },
    /// `c_0 + c_1 z + c_2 z² + …`.
    Poly { coeffs: Vec<[f64; 2]> },
    /// One planar map per coordinate.
    Coordinatewise { maps: Vec<MapExpr> },
    /// Applies `maps` left to right.
    Compose { maps: Vec<MapExpr> },
    /// A half-plane map transported to the strip `{im_min < Im z < im_max}`
    /// through `ζ = exp(π(z − i·im_min)/(im_max − im_min))`.
    StripConjugate {
        #[serde(default)]
        im_min: f64,
        #[serde(default = "one")]
        im_max: f64,
        inner: Box<MapExpr>,
    },
}

fn one() -> f64 {
    1.0
}

impl MapExpr {
    pub fn mobius(a: f64, rotation: f64) -> Self {
        MapExpr::Mobius { a: [a, 0.0], rotation }
    }

    pub fn rotation(angle: f64) -> Self {
        MapExpr::Mobius { a: [0.0, 0.0], rotation: angle }
    }

    pub fn affine(a: Complex64, b: Complex64) -> Self {
        MapExpr::Affine {
            a: [a.re, a.im],
            b: [b.re, b.im],
        }
    }

    /// `z ↦ (z + 1) / 2`.
    pub fn halfway() -> Self {
        Self::affine(Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0))
    }

    /// Complex dimension the expression acts on.
    pub fn dim(&self) -> Result<usize> {
        match self {
            MapExpr::Coordinatewise { maps } => {
                for m in maps {
                    if m.dim()? != 1 {
                        return Err(HoroError::InvalidInput("coordinatewise entries must be planar".into()));
                    }
                }
                Ok(maps.len())
            }
            MapExpr::Compose { maps } => {
                let dims: Vec<usize> = maps.iter().map(|m| m.dim()).collect::<Result<_>>()?;
                match dims.first() {
                    None => Err(HoroError::InvalidInput("empty composition".into())),
                    Some(d) if dims.iter().all(|x| x == d) => Ok(*d),
                    _ => Err(HoroError::InvalidInput("composition mixes dimensions".into())),
                }
            }
            MapExpr::StripConjugate { inner, .. } => {
                if inner.dim()? != 1 {
                    return Err(HoroError::InvalidInput("strip conjugation needs a planar map".into()));
                }
                Ok(1)
            }
            _ => Ok(1),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            MapExpr::Mobius { a, rotation } => {
                if !(cx(*a).norm() < 1.0) || !rotation.is_finite() {
                    return Err(HoroError::InvalidInput("mobius parameter must satisfy |a| < 1".into()));
                }
            }
            MapExpr::Affine { a, b } => {
                if !a.iter().chain(b).all(|v| v.is_finite()) {
                    return Err(HoroError::InvalidInput("non-finite affine coefficient".into()));
                }
            }
            MapExpr::Poly { coeffs } => {
                if coeffs.is_empty() || !coeffs.iter().flatten().all(|v| v.is_finite()) {
                    return Err(HoroError::InvalidInput("polynomial needs finite coefficients".into()));
                }
            }
            MapExpr::Coordinatewise { maps } | MapExpr::Compose { maps } => {
                for m in maps {
                    m.validate()?;
                }
            }
            MapExpr::StripConjugate { im_min, im_max, inner } => {
                if !(im_min < im_max) {
                    return Err(HoroError::InvalidInput("strip conjugation needs im_min < im_max".into()));
                }
                inner.validate()?;
            }
        }
        self.dim().map(|_| ())
    }

    /// Disk automorphism primitives (and their products and compositions).
    pub fn is_automorphism(&self) -> bool {
        match self {
            MapExpr::Mobius { .. } => true,
            MapExpr::Coordinatewise { maps } | MapExpr::Compose { maps } => {
                maps.iter().all(MapExpr::is_automorphism)
            }
            _ => false,
        }
    }

    fn eval_planar(&self, z: Complex64) -> Complex64 {
        match self {
            MapExpr::Mobius { a, rotation } => {
                let a = cx(*a);
                Complex64::from_polar(1.0, *rotation) * (z + a) / (Complex64::new(1.0, 0.0) + a.conj() * z)
            }
            MapExpr::Affine { a, b } => cx(*a) * z + cx(*b),
            MapExpr::Poly { coeffs } => coeffs
                .iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + cx(*c)),
            MapExpr::Compose { maps } => maps.iter().fold(z, |acc, m| m.eval_planar(acc)),
            MapExpr::StripConjugate { im_min, im_max, inner } => {
                let w = im_max - im_min;
                let u = (z - Complex64::new(0.0, *im_min)) * (PI / w);
                let logged = match inner.as_ref() {
                    // Log(aζ + b) = log a + u + Log(1 + b/(aζ)) avoids overflow far right
                    MapExpr::Affine { a, b } if u.re > 0.0 => {
                        let (a, b) = (cx(*a), cx(*b));
                        let rest = b / a * (-u).exp();
                        let mut l = a.ln() + u + (Complex64::new(1.0, 0.0) + rest).ln();
                        // keep the branch with argument in (0, π)
                        while l.im <= 0.0 {
                            l.im += 2.0 * PI;
                        }
                        while l.im > PI {
                            l.im -= 2.0 * PI;
                        }
                        l
                    }
                    other => other.eval_planar(u.exp()).ln(),
                };
                Complex64::new(0.0, *im_min) + logged * (w / PI)
            }
            MapExpr::Coordinatewise { .. } => Complex64::new(f64::NAN, f64::NAN),
        }
    }

    /// Raw evaluation, no membership checks.
    pub fn eval(&self, z: &Point) -> Point {
        match self {
            MapExpr::Coordinatewise { maps } => z.map_coords(|i, c| maps[i].eval_planar(c)),
            MapExpr::Compose { maps } if z.dim() > 1 => maps.iter().fold(*z, |acc, m| m.eval(&acc)),
            _ => z.map_coords(|_, c| self.eval_planar(c)),
        }
    }

    pub fn describe(&self) -> String {
        serde_json::to_string(self).unwrap_or_else(|_| "<map>".into())
    }
}

/// A map expression certified as a self-map of a domain on a sample grid.
#[derive(Clone, Debug, Serialize)]
pub struct HolomorphicMap {
    pub expr: MapExpr,
    /// Minimum boundary distance of the sampled images.
    pub self_map_margin: f64,
    pub automorphism: bool,
    pub grid_size: usize,
    pub pairs_checked: usize,
}

/// Images closer than this to the boundary are rejected unless the map is an
/// automorphism primitive.
pub const MARGIN_FLOOR: f64 = 1e-9;

impl HolomorphicMap {
    pub fn certify(engine: &DistanceEngine, expr: MapExpr) -> Result<Self> {
        expr.validate()?;
        let domain = engine.domain();
        let dim = expr.dim()?;
        if dim != domain.dim() {
            return Err(HoroError::DimensionMismatch {
                expected: domain.dim(),
                got: dim,
            });
        }
        if let (MapExpr::StripConjugate { im_min, im_max, .. }, DomainKind::Strip { im_min: a, im_max: b }) =
            (&expr, domain.kind())
        {
            if im_min != a || im_max != b {
                return Err(HoroError::InvalidInput("strip conjugation does not match the domain".into()));
            }
        }
        let count = if dim == 1 { 256 } else { 1024 };
        let grid = domain.halton_points(count);
        let automorphism = expr.is_automorphism();
        let mut margin = f64::INFINITY;
        let mut images = Vec::with_capacity(grid.len());
        for z in &grid {
            let fz = expr.eval(z);
            if !fz.is_finite() || !domain.contains(&fz)? {
                return Err(HoroError::Certification(format!("image of {z} is {fz}, outside the domain")));
            }
            margin = margin.min(domain.boundary_distance(&fz)?);
            images.push(fz);
        }
        if margin < MARGIN_FLOOR && !automorphism {
            return Err(HoroError::Certification(format!(
                "sampled image comes within {margin:e} of the boundary"
            )));
        }
        let mut pairs = 0;
        if !engine.is_chain() {
            for k in 0..grid.len().saturating_sub(1) {
                let before = engine.distance(&grid[k], &grid[k + 1])?;
                let after = engine.distance(&images[k], &images[k + 1])?;
                pairs += 1;
                if after > before + 1e-9 {
                    return Err(HoroError::Certification(format!(
                        "distance grows from {before} to {after} between {} and {}",
                        grid[k],
                        grid[k + 1]
                    )));
                }
            }
        }
        Ok(Self {
            expr,
            self_map_margin: margin,
            automorphism,
            grid_size: grid.len(),
            pairs_checked: pairs,
        })
    }

    pub fn apply(&self, z: &Point) -> Point {
        self.expr.eval(z)
    }
}

/// Outcome of one step of an orbit.
pub(crate) enum Step {
    Inside(Point),
    /// The image rounds onto the boundary.
    Boundary,
}

pub(crate) fn step(engine: &DistanceEngine, f: &HolomorphicMap, z: &Point) -> Result<Step> {
    let domain = engine.domain();
    let fz = f.apply(z);
    if fz.is_finite() && domain.contains(&fz)? {
        return Ok(Step::Inside(fz));
    }
    if fz.is_finite() && domain.signed_boundary_distance(&fz)? >= -BOUNDARY_TOL * fz.norm().max(1.0) {
        return Ok(Step::Boundary);
    }
    Err(HoroError::Certification(format!("iterate {fz} left the domain")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainModel;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn evaluation() {
        assert_eq!(MapExpr::halfway().eval(&Point::real(0.0)), Point::real(0.5));
        let m = MapExpr::mobius(0.5, 0.0);
        let v = m.eval(&Point::real(0.0)).z();
        assert!((v - c(0.5, 0.0)).norm() < 1e-15);
        let p = MapExpr::Poly { coeffs: vec![[0.0, 0.0], [0.0, 0.0], [0.5, 0.0]] };
        assert_eq!(p.eval(&Point::real(0.5)), Point::real(0.125));
        let cw = MapExpr::Coordinatewise { maps: vec![MapExpr::halfway(), MapExpr::rotation(PI / 2.0)] };
        let out = cw.eval(&Point::pair(c(0.0, 0.0), c(0.5, 0.0)));
        assert!((out.coord(1) - c(0.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn strip_conjugate_matches_direct_formula() {
        let m = MapExpr::StripConjugate {
            im_min: 0.0,
            im_max: 1.0,
            inner: Box::new(MapExpr::affine(c(2.0, 0.0), c(0.0, 1.0))),
        };
        for z in [c(0.3, 0.5), c(-2.0, 0.1), c(5.0, 0.9)] {
            let direct = (2.0 * (PI * z).exp() + c(0.0, 1.0)).ln() / PI;
            assert!((m.eval(&Point::planar(z)).z() - direct).norm() < 1e-12);
        }
        let far = m.eval(&Point::planar(c(150.0, 0.5))).z();
        assert!(far.re > 150.0 && far.im > 0.0 && far.im < 1.0);
    }

    #[test]
    fn certification() {
        let e = DistanceEngine::new(DomainModel::disk()).unwrap();
        assert!(HolomorphicMap::certify(&e, MapExpr::halfway()).is_ok());
        assert!(HolomorphicMap::certify(&e, MapExpr::mobius(0.5, 0.0)).unwrap().automorphism);
        let bad = MapExpr::affine(c(2.0, 0.0), c(0.0, 0.0));
        assert!(matches!(HolomorphicMap::certify(&e, bad), Err(HoroError::Certification(_))));
        let wrong_dim = MapExpr::Coordinatewise { maps: vec![MapExpr::halfway(), MapExpr::halfway()] };
        assert!(HolomorphicMap::certify(&e, wrong_dim).is_err());
    }
}
