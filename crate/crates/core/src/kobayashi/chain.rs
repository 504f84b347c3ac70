//! Lattice chain approximation of the Kobayashi distance on planar domains.
//!
//! Nodes are the lattice `z + h·(ℤ + iℤ)` clipped to the domain, joined by a
//! 16-neighbour stencil. Each edge carries the interval
//! `[len·min κ_lo, len·max κ_hi]` with the metric sampled at both ends and
//! the midpoint; the lower and upper path lengths come from two separate
//! shortest-path runs.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use serde::Serialize;

use super::{ChainParams, DistanceEngine, Interval};
use crate::domain::DomainKind;
use crate::error::{HoroError, Result};
use crate::point::Point;

const STENCIL: [(i64, i64); 16] = [
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (1, 1),
    (1, -1),
    (-1, 1),
    (-1, -1),
    (1, 2),
    (2, 1),
    (-1, 2),
    (-2, 1),
    (1, -2),
    (2, -1),
    (-1, -2),
    (-2, -1),
];

#[derive(Clone, Debug, Serialize)]
pub struct ChainResult {
    pub interval: Interval,
    /// Lattice spacing that produced the interval.
    pub spacing: f64,
    /// Upper-weight shortest path from `z` to `w`.
    pub path: Vec<Point>,
    /// Upper-weight graph distance from `z` to each path point.
    pub path_lengths: Vec<f64>,
}

pub struct ChainGraph<'a> {
    engine: &'a DistanceEngine,
    origin: Complex64,
    h: f64,
    imin: i64,
    jmin: i64,
    nx: usize,
    ny: usize,
    /// Unit-speed metric interval per lattice node (NaN lo when outside).
    metric: Vec<Interval>,
    extra: Option<Complex64>,
    extra_links: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> ChainGraph<'a> {
    pub fn build(engine: &'a DistanceEngine, z: &Point, w: &Point, h: f64, params: &ChainParams) -> Result<Self> {
        let domain = engine.domain();
        let (z0, w0) = (z.z(), w.z());
        let bb = domain.kind().bounding_box();
        let pad = (z0 - w0).norm() + 1.0;
        let xmin = bb[0].max(z0.re.min(w0.re) - pad);
        let xmax = bb[1].min(z0.re.max(w0.re) + pad);
        let ymin = bb[2].max(z0.im.min(w0.im) - pad);
        let ymax = bb[3].min(z0.im.max(w0.im) + pad);
        let imin = ((xmin - z0.re) / h).floor() as i64;
        let imax = ((xmax - z0.re) / h).ceil() as i64;
        let jmin = ((ymin - z0.im) / h).floor() as i64;
        let jmax = ((ymax - z0.im) / h).ceil() as i64;
        let nx = (imax - imin + 1) as usize;
        let ny = (jmax - jmin + 1) as usize;
        if nx.saturating_mul(ny) > params.max_nodes {
            return Err(HoroError::Resolution(format!(
                "lattice of spacing {h} needs {nx}x{ny} nodes"
            )));
        }
        let mut graph = Self {
            engine,
            origin: z0,
            h,
            imin,
            jmin,
            nx,
            ny,
            metric: Vec::with_capacity(nx * ny),
            extra: None,
            extra_links: Vec::new(),
        };
        for idx in 0..nx * ny {
            let p = graph.position(idx);
            graph.metric.push(graph.unit_metric(p).unwrap_or(Interval::point(f64::NAN)));
        }
        if graph.node_index(w).is_none() {
            let reach = params.neighbor_radius * h;
            let links: Vec<usize> = (0..nx * ny)
                .filter(|&i| graph.is_node(i) && (graph.position(i) - w0).norm() <= reach)
                .filter(|&i| graph.unit_metric(0.5 * (graph.position(i) + w0)).is_some())
                .collect();
            if links.is_empty() {
                return Err(HoroError::Resolution(format!("no lattice node within {reach} of {w}")));
            }
            graph.extra = Some(w0);
            graph.extra_links = links;
        }
        Ok(graph)
    }

    fn unit_metric(&self, p: Complex64) -> Option<Interval> {
        let point = Point::planar(p);
        if !self.engine.domain().contains(&point).unwrap_or(false) {
            return None;
        }
        Some(self.engine.metric_unchecked(&point, &[Complex64::new(1.0, 0.0)]))
    }

    fn position(&self, idx: usize) -> Complex64 {
        if idx == self.nx * self.ny {
            return self.extra.expect("extra node exists");
        }
        let i = (idx % self.nx) as i64 + self.imin;
        let j = (idx / self.nx) as i64 + self.jmin;
        self.origin + Complex64::new(i as f64 * self.h, j as f64 * self.h)
    }

    fn is_node(&self, idx: usize) -> bool {
        idx == self.nx * self.ny && self.extra.is_some() || idx < self.metric.len() && !self.metric[idx].lo.is_nan()
    }

    fn extra_index(&self) -> usize {
        self.nx * self.ny
    }

    /// Lattice node at `p`, if `p` sits on the lattice.
    pub fn node_index(&self, p: &Point) -> Option<usize> {
        let q = (p.z() - self.origin) / self.h;
        let (i, j) = (q.re.round(), q.im.round());
        if (q.re - i).abs() > 1e-9 || (q.im - j).abs() > 1e-9 {
            if let Some(e) = self.extra {
                if (e - p.z()).norm() <= 1e-12 * self.h {
                    return Some(self.extra_index());
                }
            }
            return None;
        }
        let (i, j) = (i as i64 - self.imin, j as i64 - self.jmin);
        if i < 0 || j < 0 || i as usize >= self.nx || j as usize >= self.ny {
            return None;
        }
        let idx = i as usize + self.nx * j as usize;
        self.is_node(idx).then_some(idx)
    }

    fn node_metric(&self, idx: usize) -> Interval {
        if idx == self.extra_index() {
            self.unit_metric(self.position(idx)).expect("extra node inside")
        } else {
            self.metric[idx]
        }
    }

    fn edge(&self, a: usize, b: usize, upper: bool) -> Option<f64> {
        let (pa, pb) = (self.position(a), self.position(b));
        let mid = self.unit_metric(0.5 * (pa + pb))?;
        let (ma, mb) = (self.node_metric(a), self.node_metric(b));
        let len = (pb - pa).norm();
        Some(if upper {
            len * ma.hi.max(mb.hi).max(mid.hi)
        } else {
            len * ma.lo.min(mb.lo).min(mid.lo)
        })
    }

    fn neighbours(&self, idx: usize, out: &mut Vec<usize>) {
        out.clear();
        if idx == self.extra_index() {
            out.extend_from_slice(&self.extra_links);
            return;
        }
        let i = (idx % self.nx) as i64;
        let j = (idx / self.nx) as i64;
        for (di, dj) in STENCIL {
            let (a, b) = (i + di, j + dj);
            if a < 0 || b < 0 || a as usize >= self.nx || b as usize >= self.ny {
                continue;
            }
            let n = a as usize + self.nx * b as usize;
            if self.is_node(n) {
                out.push(n);
            }
        }
        if self.extra.is_some() && self.extra_links.binary_search(&idx).is_ok() {
            out.push(self.extra_index());
        }
    }

    /// Single-source shortest paths with lower or upper edge weights.
    pub fn dijkstra(&self, source: usize, upper: bool) -> (Vec<f64>, Vec<usize>) {
        let n = self.extra_index() + 1;
        let mut dist = vec![f64::INFINITY; n];
        let mut pred = vec![usize::MAX; n];
        let mut heap = BinaryHeap::new();
        let mut nb = Vec::with_capacity(17);
        dist[source] = 0.0;
        heap.push(Entry(0.0, source));
        while let Some(Entry(d, u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            self.neighbours(u, &mut nb);
            for &v in &nb {
                let Some(wt) = self.edge(u, v, upper) else { continue };
                let nd = d + wt;
                if nd < dist[v] {
                    dist[v] = nd;
                    pred[v] = u;
                    heap.push(Entry(nd, v));
                }
            }
        }
        (dist, pred)
    }

    pub fn shortest(&self, z: &Point, w: &Point) -> Result<ChainResult> {
        let src = self.node_index(z).expect("z is the lattice origin");
        let dst = self.node_index(w).unwrap_or(self.extra_index());
        let (lo_dist, _) = self.dijkstra(src, false);
        let (hi_dist, pred) = self.dijkstra(src, true);
        if !hi_dist[dst].is_finite() {
            return Err(HoroError::Resolution(format!("{w} is not reachable from {z} on the lattice")));
        }
        let hi = hi_dist[dst];
        let mut lo = lo_dist[dst];
        if let DomainKind::ConvexPlanar { polygon, .. } = self.engine.domain().kind() {
            let bound = 0.5 * (polygon.signed_distance(z.z()) / polygon.signed_distance(w.z())).ln().abs();
            lo = lo.max(bound);
        }
        let lo = lo.min(hi);
        let mut nodes = vec![dst];
        while *nodes.last().expect("nonempty") != src {
            nodes.push(pred[*nodes.last().expect("nonempty")]);
        }
        nodes.reverse();
        let path = nodes
            .iter()
            .map(|&i| if i == dst { *w } else { Point::planar(self.position(i)) })
            .collect();
        let path_lengths = nodes.iter().map(|&i| hi_dist[i]).collect();
        Ok(ChainResult {
            interval: Interval::new(lo, hi),
            spacing: self.h,
            path,
            path_lengths,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainModel;

    #[test]
    fn chain_on_disk_brackets_exact_value() {
        let params = ChainParams {
            spacing: 0.01,
            max_refinements: 0,
            ..ChainParams::default()
        };
        let e = DistanceEngine::chain(DomainModel::disk(), params).unwrap();
        let r = e.chain_distance(&Point::real(0.0), &Point::real(0.5), 0.1).unwrap();
        let exact = 0.5f64.atanh();
        assert!(r.interval.contains(exact), "{:?}", r.interval);
        assert!(r.interval.width() < 0.1);
    }

    #[test]
    fn chain_on_square_respects_convex_bounds() {
        let e = DistanceEngine::new(DomainModel::square(2.0).unwrap()).unwrap();
        let z = Point::real(0.0);
        assert_eq!(e.chain_distance(&z, &z, 0.0).unwrap().interval, Interval::point(0.0));
        let r = e.chain_distance(&z, &Point::real(0.9), 2.0).unwrap();
        let bound = 0.5 * 10f64.ln();
        assert!(r.interval.lo >= bound - 1e-12);
        assert!(r.interval.hi >= r.interval.lo);
        let pullback = DistanceEngine::conformal(DomainModel::square(2.0).unwrap())
            .unwrap()
            .distance(&z, &Point::real(0.9))
            .unwrap();
        assert!(r.interval.contains(pullback), "{:?} vs {pullback}", r.interval);
    }

    #[test]
    fn unreachable_tolerance_reports_best_interval() {
        let e = DistanceEngine::new(DomainModel::square(2.0).unwrap()).unwrap();
        let err = e.chain_distance(&Point::real(0.0), &Point::real(0.9), 1e-6).unwrap_err();
        assert!(matches!(err, HoroError::ChainRefinement { .. }));
    }
}
