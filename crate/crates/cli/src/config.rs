use std::path::Path;

use horolab::domain::{BoundaryTarget, DomainDescriptor};
use horolab::dynamics::MapExpr;
use horolab::ends::{build_end_tree, DEFAULT_MAX_LEVEL};
use horolab::horofunction::{ApproachStyle, DEFAULT_TERMS};
use horolab::kobayashi::ChainParams;
use horolab::{DistanceEngine, DomainModel, HoroError, Point};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Boundary target as written in a config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetSpec {
    /// A boundary point, e.g. `{"point": [[1, 0]]}`.
    Point(Point),
    /// The end whose direction is closest, e.g. `{"end": [1, 0]}`.
    End([f64; 2]),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineChoice {
    #[default]
    Auto,
    Conformal,
    Chain,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_domain")]
    pub domain: DomainDescriptor,
    #[serde(default)]
    pub engine: EngineChoice,
    #[serde(default = "default_map")]
    pub map: MapExpr,
    #[serde(default)]
    pub pole: Option<Point>,
    /// Points for `dist`; the first two are the endpoints for `geodesic`.
    #[serde(default = "default_points")]
    pub points: Vec<Point>,
    #[serde(default = "default_target")]
    pub target: TargetSpec,
    #[serde(default = "default_styles")]
    pub styles: Vec<ApproachStyle>,
    #[serde(default = "default_terms")]
    pub terms: usize,
    #[serde(default)]
    pub probes: Vec<Point>,
    #[serde(default = "default_radius")]
    pub radius: f64,
    /// Orbit seeds for `orbit` and `denjoy-wolff`.
    #[serde(default = "default_seeds")]
    pub seeds: Vec<Point>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Quasi-geodesic defect; exact geodesics when absent.
    #[serde(default)]
    pub epsilon: Option<f64>,
    /// Raster window `[xmin, xmax, ymin, ymax]` for `region`.
    #[serde(default)]
    pub window: Option<[f64; 4]>,
    #[serde(default = "default_max_level")]
    pub max_level: u32,
}

fn default_domain() -> DomainDescriptor {
    DomainDescriptor::Disk
}

fn default_map() -> MapExpr {
    MapExpr::halfway()
}

fn default_points() -> Vec<Point> {
    vec![Point::real(0.0), Point::real(0.5)]
}

fn default_target() -> TargetSpec {
    TargetSpec::Point(Point::real(1.0))
}

fn default_styles() -> Vec<ApproachStyle> {
    vec![ApproachStyle::Radial]
}

fn default_terms() -> usize {
    DEFAULT_TERMS
}

fn default_radius() -> f64 {
    1.0
}

fn default_seeds() -> Vec<Point> {
    vec![
        Point::real(0.0),
        Point::planar(Complex64::new(0.0, 0.3)),
        Point::real(-0.5),
    ]
}

fn default_samples() -> usize {
    33
}

fn default_max_level() -> u32 {
    DEFAULT_MAX_LEVEL
}

impl Default for RunConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults parse")
    }
}

/// Configuration failures map to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
    }

    pub fn domain(&self) -> Result<DomainModel, HoroError> {
        self.domain.build()
    }

    pub fn engine(&self, resolution: Option<usize>) -> Result<DistanceEngine, HoroError> {
        let domain = self.domain()?;
        match self.engine {
            EngineChoice::Auto => DistanceEngine::new(domain),
            EngineChoice::Conformal => DistanceEngine::conformal(domain),
            EngineChoice::Chain => {
                let mut params = ChainParams::default();
                if let Some(r) = resolution {
                    params.spacing = 1.0 / r.max(1) as f64;
                }
                DistanceEngine::chain(domain, params)
            }
        }
    }

    pub fn pole(&self, domain: &DomainModel) -> Point {
        self.pole.unwrap_or_else(|| domain.anchor())
    }

    pub fn target(&self, domain: &DomainModel) -> Result<BoundaryTarget, HoroError> {
        let target = match &self.target {
            TargetSpec::Point(p) => BoundaryTarget::point(*p),
            TargetSpec::End(dir) => {
                let tree = build_end_tree(domain, self.max_level)?;
                let best = tree.ends.iter().max_by(|a, b| {
                    let da = a.direction[0] * dir[0] + a.direction[1] * dir[1];
                    let db = b.direction[0] * dir[0] + b.direction[1] * dir[1];
                    da.total_cmp(&db)
                });
                match best {
                    Some(end) => BoundaryTarget::End(end.clone()),
                    None => return Err(HoroError::InvalidInput(format!("{} has no ends", domain.name()))),
                }
            }
        };
        domain.validate_target(&target)?;
        Ok(target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_describe_the_disk() {
        let c = RunConfig::default();
        assert_eq!(c.domain, DomainDescriptor::Disk);
        assert_eq!(c.points.len(), 2);
        assert_eq!(c.seeds.len(), 3);
    }

    #[test]
    fn parses_targets_and_rejects_unknown_fields() {
        let c: RunConfig = serde_json::from_str(
            r#"{"domain": {"kind": "strip", "im_min": 0, "im_max": 1}, "target": {"end": [1, 0]}}"#,
        )
        .unwrap();
        let d = c.domain().unwrap();
        match c.target(&d).unwrap() {
            BoundaryTarget::End(e) => assert!(e.direction[0] > 0.0),
            other => panic!("{other:?}"),
        }
        assert!(serde_json::from_str::<RunConfig>(r#"{"domian": {"kind": "disk"}}"#).is_err());
    }
}
