//! End compactification at desk scale.
//!
//! Level `j` holds the connected components of `Ω̄ \ K̄_j`, where
//! `K̄_j = Ω̄ ∩ {|z| ≤ r_j}`, computed by lattice flood fill over a fixed
//! window. Components touching the window edge are unbounded; chains of
//! unbounded components reaching the last level are the ends.

use std::collections::VecDeque;

use num_complex::Complex64;
use serde::Serialize;

use crate::domain::{BoundaryTarget, DomainKind, DomainModel, EndTarget};
use crate::error::{HoroError, Result};
use crate::kobayashi::DistanceEngine;
use crate::point::Point;

pub const DEFAULT_MAX_LEVEL: u32 = 12;
/// Tail diameter below which a sequence counts as Cauchy.
pub const CAUCHY_TOL: f64 = 1e-6;
/// Boundary distance below which a Cauchy limit is a boundary point.
pub const SNAP_TOL: f64 = 1e-6;
/// Suffix-minimum level a divergent pair family must pass.
pub const DIVERGENCE_LEVEL: f64 = 10.0;

#[derive(Clone, Debug, Serialize)]
pub struct Component {
    pub id: usize,
    pub parent: Option<usize>,
    pub cells: usize,
    pub unbounded: bool,
    /// Unit vector of the mean cell position.
    pub direction: [f64; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct Level {
    pub level: u32,
    pub radius: f64,
    pub components: Vec<Component>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum TreeMode {
    /// `Ω̄` is compact: every level is empty.
    Bounded,
    /// Flood fill on one planar coordinate.
    Planar { coordinate: usize },
    /// Two or more unbounded factors: the complement is connected at every level.
    Merged,
}

#[derive(Clone, Debug)]
struct Grid {
    h: f64,
    half_width: f64,
    n: usize,
    /// Per level, component label of each cell (−1 when not in the complement).
    labels: Vec<Vec<i32>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EndTree {
    #[serde(skip)]
    domain: DomainModel,
    pub domain_name: String,
    pub mode: TreeMode,
    pub max_level: u32,
    /// Lattice spacing of the flood fill; 0 when no fill was needed.
    pub resolution: f64,
    pub levels: Vec<Level>,
    pub ends: Vec<EndTarget>,
    #[serde(skip)]
    grid: Option<Grid>,
}

pub fn build_end_tree(domain: &DomainModel, max_level: u32) -> Result<EndTree> {
    build_end_tree_with(domain, max_level, None)
}

/// As [`build_end_tree`] with an explicit lattice spacing.
pub fn build_end_tree_with(domain: &DomainModel, max_level: u32, spacing: Option<f64>) -> Result<EndTree> {
    if max_level == 0 {
        return Err(HoroError::InvalidInput("max_level must be positive".into()));
    }
    let ex = domain.exhaustion();
    let empty_levels = |count: usize| -> Vec<Level> {
        (1..=max_level)
            .map(|j| Level {
                level: j,
                radius: ex.radius(j),
                components: (0..count)
                    .map(|id| Component {
                        id,
                        parent: (j > 1).then_some(id),
                        cells: 0,
                        unbounded: true,
                        direction: [0.0, 0.0],
                    })
                    .collect(),
            })
            .collect()
    };
    let base = |mode, levels: Vec<Level>, ends, resolution, grid| EndTree {
        domain: domain.clone(),
        domain_name: domain.name(),
        mode,
        max_level,
        resolution,
        levels,
        ends,
        grid,
    };
    if domain.is_bounded() {
        return Ok(base(TreeMode::Bounded, empty_levels(0), Vec::new(), 0.0, None));
    }
    let factors = domain.kind().planar_factors().ok_or_else(|| {
        HoroError::Unsupported("end trees need planar factors".into())
    })?;
    let unbounded: Vec<usize> = (0..factors.len()).filter(|&i| !factors[i].is_bounded()).collect();
    if unbounded.len() >= 2 {
        let end = EndTarget {
            path: vec![0; max_level as usize],
            direction: [0.0, 0.0],
        };
        return Ok(base(TreeMode::Merged, empty_levels(1), vec![end], 0.0, None));
    }
    let coordinate = unbounded[0];
    let kind = &factors[coordinate];
    let width = kind.min_width();
    let h = spacing.unwrap_or_else(|| (1.0 / 16.0f64).min(width / 16.0));
    if !(h > 0.0) || width / h < 4.0 {
        return Err(HoroError::Resolution(format!(
            "spacing {h} cannot resolve a domain of width {width}"
        )));
    }
    let half_width = ex.radius(max_level) + 2.0;
    let n = (2.0 * half_width / h).round() as usize + 1;
    if n * n > 20_000_000 {
        return Err(HoroError::Resolution(format!("flood fill needs {n}x{n} cells")));
    }
    let pos = |i: usize, j: usize| Complex64::new(-half_width + i as f64 * h, -half_width + j as f64 * h);
    let in_closure: Vec<bool> = (0..n * n)
        .map(|c| {
            let p = Point::planar(pos(c % n, c / n));
            planar_signed_distance(kind, &p) >= -1e-12
        })
        .collect();
    let mut levels = Vec::with_capacity(max_level as usize);
    let mut labels: Vec<Vec<i32>> = Vec::with_capacity(max_level as usize);
    for j in 1..=max_level {
        let r = ex.radius(j);
        let mut label = vec![-1i32; n * n];
        let mut comps = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n * n {
            if label[start] >= 0 || !in_closure[start] || pos(start % n, start / n).norm() <= r {
                continue;
            }
            let id = comps.len();
            label[start] = id as i32;
            queue.push_back(start);
            let (mut cells, mut unb, mut sum) = (0usize, false, Complex64::new(0.0, 0.0));
            while let Some(c) = queue.pop_front() {
                let (i, k) = (c % n, c / n);
                cells += 1;
                sum += pos(i, k);
                if i == 0 || k == 0 || i == n - 1 || k == n - 1 {
                    unb = true;
                }
                let mut push = |ni: usize, nk: usize| {
                    let nc = ni + n * nk;
                    if label[nc] < 0 && in_closure[nc] && pos(ni, nk).norm() > r {
                        label[nc] = id as i32;
                        queue.push_back(nc);
                    }
                };
                if i > 0 {
                    push(i - 1, k);
                }
                if i + 1 < n {
                    push(i + 1, k);
                }
                if k > 0 {
                    push(i, k - 1);
                }
                if k + 1 < n {
                    push(i, k + 1);
                }
            }
            let parent = (j > 1).then(|| labels[(j - 2) as usize][start] as usize);
            let norm = sum.norm();
            comps.push(Component {
                id,
                parent,
                cells,
                unbounded: unb,
                direction: if norm > 0.0 { [sum.re / norm, sum.im / norm] } else { [0.0, 0.0] },
            });
        }
        labels.push(label);
        levels.push(Level {
            level: j,
            radius: r,
            components: comps,
        });
    }
    let mut ends = Vec::new();
    for comp in levels.last().expect("max_level >= 1").components.iter().filter(|c| c.unbounded) {
        let mut path = vec![comp.id];
        let mut cur = comp;
        for lvl in levels[..levels.len() - 1].iter().rev() {
            cur = &lvl.components[cur.parent.expect("nested level")];
            path.push(cur.id);
        }
        path.reverse();
        ends.push(EndTarget {
            path,
            direction: comp.direction,
        });
    }
    let grid = Grid {
        h,
        half_width,
        n,
        labels,
    };
    Ok(base(TreeMode::Planar { coordinate }, levels, ends, h, Some(grid)))
}

fn planar_signed_distance(kind: &DomainKind, p: &Point) -> f64 {
    kind.signed_distance(p)
}

impl EndTree {
    pub fn domain(&self) -> &DomainModel {
        &self.domain
    }

    pub fn end_count(&self) -> usize {
        self.ends.len()
    }

    pub fn component_counts(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.components.len()).collect()
    }

    /// Component of `Ω̄ \ K̄_j` containing `z`, if `z` lies outside `K̄_j`.
    pub fn component_at(&self, level: u32, z: &Point) -> Option<usize> {
        if level == 0 || level > self.max_level || z.norm() <= self.domain.exhaustion().radius(level) {
            return None;
        }
        match &self.mode {
            TreeMode::Bounded => None,
            TreeMode::Merged => Some(0),
            TreeMode::Planar { coordinate } => {
                let grid = self.grid.as_ref().expect("planar trees keep their grid");
                let c = z.coord(*coordinate);
                let lim = grid.half_width - grid.h;
                let x = c.re.clamp(-lim, lim);
                let y = c.im.clamp(-lim, lim);
                let i = ((x + grid.half_width) / grid.h).round() as i64;
                let k = ((y + grid.half_width) / grid.h).round() as i64;
                let labels = &grid.labels[(level - 1) as usize];
                // nearest labelled cell within two cells
                let mut best: Option<(i64, usize)> = None;
                for di in -2..=2i64 {
                    for dk in -2..=2i64 {
                        let (a, b) = (i + di, k + dk);
                        if a < 0 || b < 0 || a as usize >= grid.n || b as usize >= grid.n {
                            continue;
                        }
                        let l = labels[a as usize + grid.n * b as usize];
                        let d2 = di * di + dk * dk;
                        if l >= 0 && best.is_none_or(|(bd, _)| d2 < bd) {
                            best = Some((d2, l as usize));
                        }
                    }
                }
                best.map(|(_, l)| l)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitVerdict {
    Target(BoundaryTarget),
    Interior(Point),
    NoLimit(String),
}

/// Limit of a sequence in the end compactification.
pub fn classify_limit(tree: &EndTree, points: &[Point]) -> Result<LimitVerdict> {
    let domain = &tree.domain;
    if points.is_empty() {
        return Err(HoroError::InvalidInput("empty sequence".into()));
    }
    for p in points {
        domain.check_dim(p)?;
        if domain.signed_boundary_distance(p)? < -SNAP_TOL * p.norm().max(1.0) {
            return Err(HoroError::Exterior(p.to_string()));
        }
    }
    let n = points.len();
    let tail_len = (n / 4).max(5).min(n);
    let tail = &points[n - tail_len..];
    let last = *tail.last().expect("nonempty");

    if n >= 2 {
        if let Some(limit) = cauchy_limit(tail) {
            let delta = domain.signed_boundary_distance(&limit)?;
            if delta <= SNAP_TOL * limit.norm().max(1.0) {
                let snapped = domain.snap_to_boundary(&limit, SNAP_TOL * limit.norm().max(1.0));
                return Ok(LimitVerdict::Target(BoundaryTarget::BoundaryPoint(snapped)));
            }
            return Ok(LimitVerdict::Interior(limit));
        }
    }

    if tree.mode != TreeMode::Bounded && domain.closure_level(&last) > tree.max_level {
        let mut path = Vec::with_capacity(tree.max_level as usize);
        for j in 1..=tree.max_level {
            // the trailing run outside K̄_j must sit in one component
            let r = domain.exhaustion().radius(j);
            let start = points.iter().rposition(|p| p.norm() <= r).map_or(0, |i| i + 1);
            let comps: Vec<Option<usize>> = points[start..].iter().map(|p| tree.component_at(j, p)).collect();
            let first = comps[0];
            if first.is_none() || comps.iter().any(|c| *c != first) {
                return Ok(LimitVerdict::NoLimit(format!(
                    "tail visits several components of level {j}"
                )));
            }
            path.push(first.expect("checked"));
        }
        return Ok(match tree.ends.iter().find(|e| e.path == path) {
            Some(end) => LimitVerdict::Target(BoundaryTarget::End(end.clone())),
            None => LimitVerdict::NoLimit(format!("component chain {path:?} is not an end")),
        });
    }

    let escaping = tail.windows(2).all(|w| w[1].norm() > w[0].norm()) && tree.mode != TreeMode::Bounded;
    let indices: Vec<u32> = points
        .iter()
        .map(|p| domain.exhaustion_index(p).unwrap_or(u32::MAX))
        .collect();
    let head_max = indices[..n - tail_len].iter().copied().max().unwrap_or(0);
    let tail_max = indices[n - tail_len..].iter().copied().max().unwrap_or(u32::MAX);
    let bounded = tail_max != u32::MAX && (n == tail_len || tail_max <= head_max);
    if !escaping && bounded {
        return Ok(LimitVerdict::Interior(last));
    }
    Ok(LimitVerdict::NoLimit(
        "no Cauchy tail, no stable end, and the tail does not stay in a compact set".into(),
    ))
}

/// Limit of a tail whose diameter, or geometric tail bound, is below
/// [`CAUCHY_TOL`].
fn cauchy_limit(tail: &[Point]) -> Option<Point> {
    let last = *tail.last()?;
    let diameter = tail.iter().map(|p| p.euclid_dist(&last)).fold(0.0, f64::max);
    if diameter < CAUCHY_TOL {
        return Some(last);
    }
    let steps: Vec<f64> = tail.windows(2).map(|w| w[0].euclid_dist(&w[1])).collect();
    if steps.len() >= 3 && steps.iter().all(|s| *s > 0.0) {
        let ratio = steps.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
        if ratio < 0.95 {
            let bound = steps.last().expect("nonempty") * ratio / (1.0 - ratio);
            if bound < CAUCHY_TOL {
                return Some(last);
            }
        }
    }
    None
}

#[derive(Clone, Debug, Serialize)]
pub struct DivergenceReport {
    /// `k(x_n, y_n)`.
    pub diagonal: Vec<f64>,
    /// `min_{i, j ≥ n} k(x_i, y_j)`.
    pub suffix_min: Vec<f64>,
    pub liminf_estimate: f64,
    pub verdict: String,
}

/// Growth of `k(x_n, y_m)` for sequences converging to distinct targets.
pub fn divergence_check(
    engine: &DistanceEngine,
    tree: &EndTree,
    targets: (&BoundaryTarget, &BoundaryTarget),
    xs: &[Point],
    ys: &[Point],
) -> Result<DivergenceReport> {
    if targets.0.matches(targets.1, SNAP_TOL) {
        return Err(HoroError::Precondition("targets coincide".into()));
    }
    for (seq, target) in [(xs, targets.0), (ys, targets.1)] {
        match classify_limit(tree, seq)? {
            LimitVerdict::Target(t) if t.matches(target, SNAP_TOL) => {}
            other => {
                return Err(HoroError::Precondition(format!(
                    "sequence converges to {other:?}, not {}",
                    target.describe()
                )))
            }
        }
    }
    let n = xs.len().min(ys.len());
    if n == 0 {
        return Err(HoroError::InvalidInput("empty sequences".into()));
    }
    let mut matrix = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            matrix[i][j] = engine.distance(&xs[i], &ys[j])?;
        }
    }
    let diagonal: Vec<f64> = (0..n).map(|i| matrix[i][i]).collect();
    let mut suffix_min = vec![f64::INFINITY; n];
    for s in (0..n).rev() {
        let mut m = if s + 1 < n { suffix_min[s + 1] } else { f64::INFINITY };
        for (k, row) in matrix.iter().enumerate().skip(s) {
            m = m.min(matrix[s][k]).min(row[s]);
        }
        suffix_min[s] = m;
    }
    let tail_start = (3 * n) / 4;
    let half = n / 2;
    let increasing = diagonal[half..].windows(2).all(|w| w[1] > w[0]);
    let divergent = suffix_min[tail_start.min(n - 1)] > DIVERGENCE_LEVEL && increasing;
    Ok(DivergenceReport {
        liminf_estimate: suffix_min[n - 1],
        diagonal,
        suffix_min,
        verdict: if divergent { "divergent" } else { "inconclusive" }.into(),
    })
}
