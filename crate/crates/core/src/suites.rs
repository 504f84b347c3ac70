//! Invariant suites behind `verify`. Reports are deterministic in the seed
//! and carry no timings, so two runs can be compared byte for byte.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::domain::{BoundaryTarget, DomainModel, EndTarget};
use crate::dynamics::{
    denjoy_wolff, target_set_sample, wolff_data, wolff_inclusion_check, DwVerdict, HolomorphicMap, MapExpr,
    DEFAULT_HORIZON,
};
use crate::ends::{build_end_tree, classify_limit, divergence_check, LimitVerdict};
use crate::error::{HoroError, Result};
use crate::geodesy::{gromov_product, quasi_geodesic};
use crate::horofunction::{
    approach_sequence, convexity_check, deep_point, estimate_horofunction, fiber_sample, horoball_contains,
    horosphere_membership, ApproachStyle, HorofunctionEstimate, HorosphereFamily, Membership, DEFAULT_TERMS,
    DEFAULT_TOL,
};
use crate::kobayashi::DistanceEngine;
use crate::point::Point;

pub const NORMALIZATION: &str = "k_D(0, r) = artanh r (curvature -4); horoball level = 0.5 log R";

pub const SUITES: &[&str] = &[
    "metric",
    "busemann",
    "horoball",
    "quasigeodesic",
    "gromov",
    "deeppoint",
    "decomposition",
    "fibers",
    "convexity",
    "wolff",
    "denjoywolff",
    "divergence",
    "ends",
];

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Worst observed value for the check.
    pub observed: f64,
    /// The bound `observed` is compared with.
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub normalization: String,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    fn new() -> Self {
        Self { checks: Vec::new() }
    }

    /// Passes when `observed <= bound`.
    fn at_most(&mut self, name: impl Into<String>, observed: f64, bound: f64) {
        self.checks.push(Check {
            name: name.into(),
            passed: observed <= bound,
            observed,
            bound,
        });
    }

    /// Passes when `observed >= bound`.
    fn at_least(&mut self, name: impl Into<String>, observed: f64, bound: f64) {
        self.checks.push(Check {
            name: name.into(),
            passed: observed >= bound,
            observed,
            bound,
        });
    }

    fn holds(&mut self, name: impl Into<String>, ok: bool) {
        let v = if ok { 1.0 } else { 0.0 };
        self.checks.push(Check {
            name: name.into(),
            passed: ok,
            observed: v,
            bound: 1.0,
        });
    }

    fn finish(self, suite: &str) -> SuiteReport {
        SuiteReport {
            suite: suite.into(),
            passed: self.checks.iter().all(|c| c.passed),
            checks: self.checks,
        }
    }
}

fn suite_rng(seed: u64, suite: &str) -> ChaCha8Rng {
    // FNV-1a keeps per-suite streams independent of suite order
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in suite.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Uniform points of the domain's sampling window.
pub fn random_points<R: Rng>(domain: &DomainModel, count: usize, rng: &mut R) -> Vec<Point> {
    let dims = domain.kind().sample_dims();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let u: Vec<f64> = (0..dims).map(|_| rng.gen::<f64>()).collect();
        if let Some(p) = domain.kind().sample_unit(&u) {
            if domain.contains(&p).unwrap_or(false) {
                out.push(p);
            }
        }
    }
    out
}

fn engine(domain: DomainModel) -> Result<DistanceEngine> {
    DistanceEngine::new(domain)
}

fn busemann_disk(sigma: Complex64, z: Complex64) -> f64 {
    0.5 * ((sigma - z).norm_sqr() / (1.0 - z.norm_sqr())).ln()
}

fn radial_estimate(e: &DistanceEngine, pole: &Point, target: &BoundaryTarget) -> Result<HorofunctionEstimate> {
    let seq = approach_sequence(e.domain(), target, &ApproachStyle::Radial, DEFAULT_TERMS)?;
    estimate_horofunction(e, pole, &seq, &[], DEFAULT_TOL)
}

fn skew(a: f64, b: f64) -> ApproachStyle {
    ApproachStyle::Skew { exponents: vec![a, b] }
}

fn bidisc_styles() -> Vec<ApproachStyle> {
    vec![ApproachStyle::Radial, skew(1.0, 2.0), skew(2.0, 1.0)]
}

fn disk_styles() -> Vec<ApproachStyle> {
    vec![
        ApproachStyle::Radial,
        ApproachStyle::Tangential { angle: PI / 4.0 },
        ApproachStyle::Tangential { angle: -PI / 4.0 },
    ]
}

fn corner() -> Point {
    Point::pair(c(1.0, 0.0), c(1.0, 0.0))
}

fn origin2() -> Point {
    Point::pair(c(0.0, 0.0), c(0.0, 0.0))
}

fn metric(seed: u64) -> Result<SuiteReport> {
    let mut rng = suite_rng(seed, "metric");
    let mut rec = Recorder::new();
    let domains = [
        DomainModel::disk(),
        DomainModel::bidisc(),
        DomainModel::ball(),
        DomainModel::half_plane(),
        DomainModel::unit_strip(),
    ];
    for d in domains {
        let name = d.name();
        let e = engine(d)?;
        let pts = random_points(e.domain(), 600, &mut rng);
        let mut tri = f64::NEG_INFINITY;
        let mut asym = 0.0f64;
        let mut selfd = 0.0f64;
        for t in pts.chunks(3) {
            let (a, b, x) = (&t[0], &t[1], &t[2]);
            let ab = e.distance(a, b)?;
            tri = tri.max(ab - e.distance(a, x)? - e.distance(x, b)?);
            asym = asym.max((ab - e.distance(b, a)?).abs());
            selfd = selfd.max(e.distance(a, a)?);
        }
        rec.at_most(format!("{name}: triangle excess"), tri, 1e-9);
        rec.at_most(format!("{name}: asymmetry"), asym, 0.0);
        rec.at_most(format!("{name}: self distance"), selfd, 0.0);
        // z ∈ K_j for every j from its index on, and not before
        let ex = *e.domain().exhaustion();
        let mut nesting = true;
        for p in &pts {
            let j = e.domain().exhaustion_index(p)?;
            let delta = e.domain().boundary_distance(p)?;
            let member = |k: u32| delta >= ex.margin(k) && p.norm() <= ex.radius(k);
            nesting &= (j..j + 8).all(member) && (j == 1 || !member(j - 1));
        }
        rec.holds(format!("{name}: exhaustion nesting"), nesting);
    }

    // strip against the disk through exp and the Cayley map
    let strip = engine(DomainModel::unit_strip())?;
    let disk = engine(DomainModel::disk())?;
    let to_disk = |z: Complex64| {
        let zeta = (PI * z).exp();
        Point::planar((zeta - c(0.0, 1.0)) / (zeta + c(0.0, 1.0)))
    };
    let mut gap = 0.0f64;
    for _ in 0..200 {
        let a = c(rng.gen_range(-2.0..2.0), rng.gen_range(0.05..0.95));
        let b = c(rng.gen_range(-2.0..2.0), rng.gen_range(0.05..0.95));
        let ks = strip.distance(&Point::planar(a), &Point::planar(b))?;
        let kd = disk.distance(&to_disk(a), &to_disk(b))?;
        gap = gap.max((ks - kd).abs());
    }
    rec.at_most("strip: conformal invariance gap", gap, 1e-9);

    let f = HolomorphicMap::certify(&disk, MapExpr::halfway())?;
    let pts = random_points(disk.domain(), 400, &mut rng);
    let mut growth = f64::NEG_INFINITY;
    for pair in pts.chunks(2) {
        let before = disk.distance(&pair[0], &pair[1])?;
        let after = disk.distance(&f.apply(&pair[0]), &f.apply(&pair[1]))?;
        growth = growth.max(after - before);
    }
    rec.at_most("disk: (z+1)/2 distance growth", growth, 1e-9);
    Ok(rec.finish("metric"))
}

fn busemann(_seed: u64) -> Result<SuiteReport> {
    let mut rec = Recorder::new();
    let e = engine(DomainModel::disk())?;
    let pole = Point::real(0.0);
    for sigma in [c(1.0, 0.0), c(0.0, 1.0), Complex64::from_polar(1.0, PI / 5.0)] {
        let est = radial_estimate(&e, &pole, &BoundaryTarget::point(Point::planar(sigma)))?;
        let mut worst = 0.0f64;
        for z in &est.probes {
            worst = worst.max((est.value(z)? - busemann_disk(sigma, z.z())).abs());
        }
        rec.at_most(format!("sigma={sigma}: max error over {} probes", est.probes.len()), worst, 1e-6);
        rec.holds(format!("sigma={sigma}: h(pole) = 0"), est.value(&pole)? == 0.0);
    }
    Ok(rec.finish("busemann"))
}

fn horoball(_seed: u64) -> Result<SuiteReport> {
    let mut rec = Recorder::new();
    let e = engine(DomainModel::disk())?;
    let est = radial_estimate(&e, &Point::real(0.0), &BoundaryTarget::point(Point::real(1.0)))?;
    for radius in [0.25, 1.0, 4.0] {
        let centre = 1.0 / (1.0 + radius);
        let rad = radius / (1.0 + radius);
        let mut wrong = 0usize;
        let mut raster = 0usize;
        for i in 0..100 {
            for j in 0..100 {
                let z = c(-1.0 + (i as f64 + 0.5) / 50.0, -1.0 + (j as f64 + 0.5) / 50.0);
                if z.norm() >= 1.0 {
                    continue;
                }
                raster += 1;
                let off = (z - centre).norm() - rad;
                if off.abs() <= 1e-5 {
                    continue;
                }
                let got = horoball_contains(&est, &Point::planar(z), radius)?;
                let expect = if off < 0.0 { Membership::Inside } else { Membership::Outside };
                if got != expect {
                    wrong += 1;
                }
            }
        }
        rec.at_most(format!("R={radius}: misclassified of {raster}"), wrong as f64, 0.0);
    }
    let mut nested = true;
    for z in &est.probes {
        for (r1, r2) in [(0.25, 1.0), (1.0, 4.0)] {
            if horoball_contains(&est, z, r1)? == Membership::Inside {
                nested &= horoball_contains(&est, z, r2)? == Membership::Inside;
            }
        }
    }
    rec.holds("nesting in R", nested);
    Ok(rec.finish("horoball"))
}

fn quasigeodesic(seed: u64) -> Result<SuiteReport> {
    let mut rng = suite_rng(seed, "quasigeodesic");
    let mut rec = Recorder::new();
    for d in [DomainModel::disk(), DomainModel::bidisc()] {
        let name = d.name();
        let e = engine(d)?;
        for eps in [0.1, 0.01] {
            let mut lower = f64::NEG_INFINITY;
            let mut upper = f64::NEG_INFINITY;
            let mut triples = 0;
            let ends = random_points(e.domain(), 10, &mut rng);
            for pair in ends.chunks(2) {
                let path = quasi_geodesic(&e, &pair[0], &pair[1], eps)?;
                let n = path.len();
                for _ in 0..100 {
                    let mut idx = [rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)];
                    idx.sort_unstable();
                    let [x, y, z] = idx.map(|i| path.points[i]);
                    let xz = e.distance(&x, &z)?;
                    let via = e.distance(&x, &y)? + e.distance(&y, &z)?;
                    lower = lower.max(xz - via);
                    upper = upper.max(via - xz - 3.0 * eps);
                    triples += 1;
                }
            }
            rec.at_most(format!("{name} eps={eps}: d(x,z) - d(x,y) - d(y,z) over {triples} triples"), lower, 1e-9);
            rec.at_most(format!("{name} eps={eps}: d(x,y) + d(y,z) - d(x,z) - 3eps"), upper, 1e-9);
        }
    }
    Ok(rec.finish("quasigeodesic"))
}

fn gromov(seed: u64) -> Result<SuiteReport> {
    let mut rng = suite_rng(seed, "gromov");
    let mut rec = Recorder::new();
    let e = engine(DomainModel::disk())?;
    let pole = Point::real(0.0);
    let mut products = Vec::new();
    for n in 1..=20 {
        let r = 1.0 - 0.5f64.powi(n);
        let theta = 0.5f64.powi(n);
        let x = Point::planar(Complex64::from_polar(r, theta));
        let y = Point::planar(Complex64::from_polar(r, -theta));
        products.push(gromov_product(&e, &pole, &x, &y)?);
    }
    rec.at_least("radial pairs: product at N=20", products[19], 5.0);
    let rising = products[10..].windows(2).all(|w| w[1] > w[0]);
    rec.holds("radial pairs: products increase over the second half", rising);
    for d in [DomainModel::disk(), DomainModel::bidisc()] {
        let name = d.name();
        let e = engine(d)?;
        let pts = random_points(e.domain(), 2000, &mut rng);
        let mut worst = f64::NEG_INFINITY;
        for q in pts.chunks(4).take(500) {
            let (p, x, y, z) = (&q[0], &q[1], &q[2], &q[3]);
            let g = gromov_product(&e, p, x, y)?;
            let phi_x = e.distance(z, x)? - e.distance(p, x)?;
            let phi_y = e.distance(z, y)? - e.distance(p, y)?;
            worst = worst.max(-(phi_x + phi_y) / 2.0 - g);
        }
        rec.at_most(format!("{name}: lower bound excess over 500 quadruples"), worst, 1e-9);
    }
    Ok(rec.finish("gromov"))
}

fn deeppoint(_seed: u64) -> Result<SuiteReport> {
    let mut rec = Recorder::new();
    let cases = [
        (DomainModel::disk(), Point::real(0.0), Point::real(1.0)),
        (DomainModel::bidisc(), origin2(), corner()),
    ];
    for (d, pole, sigma) in cases {
        let name = d.name();
        let e = engine(d)?;
        let est = radial_estimate(&e, &pole, &BoundaryTarget::point(sigma))?;
        for level in [-1.0, -3.0, -6.0] {
            let x = deep_point(&est, level)?;
            rec.at_most(format!("{name} L={level}: h(deep point) - L"), est.value(&x)? - level, -f64::MIN_POSITIVE);
        }
    }
    Ok(rec.finish("deeppoint"))
}

fn decomposition(seed: u64) -> Result<SuiteReport> {
    let mut rng = suite_rng(seed, "decomposition");
    let mut rec = Recorder::new();
    let e = engine(DomainModel::bidisc())?;
    let family = HorosphereFamily::build(
        &e,
        &origin2(),
        &BoundaryTarget::point(corner()),
        &bidisc_styles(),
        DEFAULT_TERMS,
        DEFAULT_TOL,
    )?;
    let mut mismatches = 0usize;
    let mut samples = 0usize;
    for z in random_points(e.domain(), 500, &mut rng) {
        let m = horosphere_membership(&family, &z, 1.0)?;
        let each: Vec<Membership> = family
            .estimates
            .iter()
            .map(|est| horoball_contains(est, &z, 1.0))
            .collect::<Result<_>>()?;
        let some = each.contains(&Membership::Inside);
        let all = each.iter().all(|m| *m == Membership::Inside);
        if m.in_big.is_inside() != some || m.in_small.is_inside() != all {
            mismatches += 1;
        }
        samples += 1;
    }
    rec.at_most(format!("identity mismatches over {samples} samples"), mismatches as f64, 0.0);
    let probe = Point::pair(c(0.0, 0.0), c(0.5, 0.0));
    let m = horosphere_membership(&family, &probe, 1.0)?;
    rec.holds("probe (0, 0.5): in_big", m.in_big == Membership::Inside);
    rec.holds("probe (0, 0.5): not in_small", m.in_small == Membership::Outside);
    Ok(rec.finish("decomposition"))
}

fn fibers(_seed: u64) -> Result<SuiteReport> {
    let mut rec = Recorder::new();
    let e = engine(DomainModel::bidisc())?;
    let split = fiber_sample(
        &e,
        &origin2(),
        &BoundaryTarget::point(corner()),
        &[ApproachStyle::Radial, skew(1.0, 2.0)],
        DEFAULT_TERMS,
        DEFAULT_TOL,
    )?;
    let probe = Point::pair(c(0.0, 0.0), c(0.5, 0.0));
    let diff = split.estimates[0].value(&probe)? - split.estimates[1].value(&probe)?;
    rec.at_most("bidisc: |radial - skew(1,2) - 0.549306| at (0, 0.5)", (diff - 0.549306).abs(), 1e-4);
    rec.holds(
        "bidisc: radial and skew(1,2) distinct",
        split.relations[0][1] == crate::horofunction::FiberRelation::Distinct,
    );
    let e = engine(DomainModel::disk())?;
    let disk = fiber_sample(
        &e,
        &Point::real(0.0),
        &BoundaryTarget::point(Point::real(1.0)),
        &disk_styles(),
        DEFAULT_TERMS,
        DEFAULT_TOL,
    )?;
    let worst = disk.gaps.iter().flatten().copied().fold(0.0, f64::max);
    rec.at_most("disk: largest pairwise gap", worst, 1e-5);
    Ok(rec.finish("fibers"))
}

fn convexity(seed: u64) -> Result<SuiteReport> {
    let mut rng = suite_rng(seed, "convexity");
    let mut rec = Recorder::new();
    let square = DomainModel::square(2.0)?;
    let cases = [
        (engine(DomainModel::disk())?, Point::real(0.0), Point::real(1.0)),
        (engine(DomainModel::bidisc())?, origin2(), corner()),
        (DistanceEngine::conformal(square)?, Point::real(0.0), Point::real(1.0)),
    ];
    for (e, pole, sigma) in cases {
        let name = e.domain().name();
        let est = radial_estimate(&e, &pole, &BoundaryTarget::point(sigma))?;
        for radius in [0.5, 1.0, 2.0] {
            let r = convexity_check(&est, radius, 200, &mut rng)?;
            rec.at_most(
                format!("{name} R={radius}: violations over {} chords, {} rays", r.chords_checked, r.rays_checked),
                r.violations.len() as f64,
                0.0,
            );
        }
    }
    Ok(rec.finish("convexity"))
}

fn wolff(seed: u64) -> Result<SuiteReport> {
    let mut rng = suite_rng(seed, "wolff");
    let mut rec = Recorder::new();
    let cases = [
        (DomainModel::disk(), MapExpr::halfway(), Point::real(0.0), Point::real(1.0), disk_styles()),
        (
            DomainModel::bidisc(),
            MapExpr::Coordinatewise { maps: vec![MapExpr::halfway(), MapExpr::halfway()] },
            origin2(),
            corner(),
            bidisc_styles(),
        ),
    ];
    for (d, expr, pole, x, styles) in cases {
        let name = d.name();
        let e = engine(d)?;
        let f = HolomorphicMap::certify(&e, expr)?;
        let w = wolff_data(&e, &f, &pole, DEFAULT_HORIZON)?;
        let gap = match w.target.as_point() {
            Some(p) => p.euclid_dist(&x),
            None => f64::INFINITY,
        };
        rec.at_most(format!("{name}: Wolff target distance to {x}"), gap, 1e-9);
        let family = HorosphereFamily::build(&e, &pole, &w.target, &styles, DEFAULT_TERMS, DEFAULT_TOL)?;
        let report = wolff_inclusion_check(&e, &f, &w, &family, &[0.5, 1.0, 2.0], 100, 10, &mut rng)?;
        rec.at_most(format!("{name}: inclusion violations"), report.total_violations as f64, 0.0);
        rec.at_most(format!("{name}: cascade violations"), report.total_cascade_violations as f64, 0.0);
        let step = report.rows.iter().map(|r| r.max_one_step_change).fold(f64::NEG_INFINITY, f64::max);
        rec.at_most(format!("{name}: largest one-step change of h"), step, -0.34);
    }
    Ok(rec.finish("wolff"))
}

fn denjoywolff(_seed: u64) -> Result<SuiteReport> {
    let mut rec = Recorder::new();
    let disk = engine(DomainModel::disk())?;
    let seeds = [Point::real(0.0), Point::planar(c(0.0, 0.3)), Point::real(-0.5)];
    let one = BoundaryTarget::point(Point::real(1.0));

    let f = HolomorphicMap::certify(&disk, MapExpr::halfway())?;
    let r = denjoy_wolff(&disk, &f, &seeds, DEFAULT_HORIZON)?;
    rec.holds("(z+1)/2: limit 1", r.limit.as_ref().is_some_and(|y| y.matches(&one, 1e-9)));
    let spread40 = r.spread.iter().find(|s| s.n == 40).map_or(f64::INFINITY, |s| s.spread);
    rec.at_most("(z+1)/2: probe-ball spread at n = 40", spread40, 1e-6);
    let targets = target_set_sample(&disk, &f, &seeds, None, DEFAULT_HORIZON)?;
    rec.holds(
        "(z+1)/2: sampled target set is {1}",
        targets.targets.len() == 1 && targets.targets[0].matches(&one, 1e-9),
    );

    let f = HolomorphicMap::certify(&disk, MapExpr::rotation(PI / 2.0))?;
    let r = denjoy_wolff(&disk, &f, &[Point::real(0.5)], DEFAULT_HORIZON)?;
    rec.holds("rotation: relatively compact", r.verdict == DwVerdict::RelativelyCompact);

    let strip = engine(DomainModel::unit_strip())?;
    let conj = MapExpr::StripConjugate {
        im_min: 0.0,
        im_max: 1.0,
        inner: Box::new(MapExpr::affine(c(2.0, 0.0), c(0.0, 1.0))),
    };
    let f = HolomorphicMap::certify(&strip, conj)?;
    let strip_seeds = [Point::planar(c(0.0, 0.5)), Point::planar(c(-1.0, 0.2)), Point::planar(c(2.0, 0.8))];
    let r = denjoy_wolff(&strip, &f, &strip_seeds, DEFAULT_HORIZON)?;
    let right = matches!(&r.limit, Some(BoundaryTarget::End(EndTarget { direction, .. })) if direction[0] > 0.0);
    rec.holds("strip conjugate: right end", right);

    let f = HolomorphicMap::certify(&disk, MapExpr::mobius(0.5, 0.0))?;
    let r = denjoy_wolff(&disk, &f, &seeds, DEFAULT_HORIZON)?;
    let miss = r
        .limit
        .as_ref()
        .and_then(|y| y.as_point().map(|p| (p.z() - c(1.0, 0.0)).norm()))
        .unwrap_or(f64::INFINITY);
    rec.at_most("hyperbolic automorphism: distance of the limit to 1", miss, 1e-6);
    Ok(rec.finish("denjoywolff"))
}

fn divergence(_seed: u64) -> Result<SuiteReport> {
    let mut rec = Recorder::new();
    let disk = engine(DomainModel::disk())?;
    let xs: Vec<Point> = (1..=20).map(|n| Point::real(1.0 - 0.5f64.powi(n))).collect();
    let ys: Vec<Point> = xs.iter().map(|p| Point::real(-p.z().re)).collect();
    let tree = build_end_tree(disk.domain(), 12)?;
    let targets = (BoundaryTarget::point(Point::real(1.0)), BoundaryTarget::point(Point::real(-1.0)));
    let r = divergence_check(&disk, &tree, (&targets.0, &targets.1), &xs, &ys)?;
    rec.at_least("disk antipodal: suffix min at tail index 15", r.suffix_min[14], 10.0);
    rec.holds("disk antipodal: verdict divergent", r.verdict == "divergent");

    let strip = engine(DomainModel::unit_strip())?;
    let tree = build_end_tree(strip.domain(), 12)?;
    let xs: Vec<Point> = (1..=20).map(|n| Point::planar(c(n as f64, 0.5))).collect();
    let ys: Vec<Point> = (1..=20).map(|n| Point::planar(c(-(n as f64), 0.5))).collect();
    let ends: Vec<EndTarget> = tree.ends.clone();
    let right = ends.iter().find(|e| e.direction[0] > 0.0).cloned();
    let left = ends.iter().find(|e| e.direction[0] < 0.0).cloned();
    let (Some(right), Some(left)) = (right, left) else {
        return Err(HoroError::Precondition("strip end tree lacks two ends".into()));
    };
    let (a, b) = (BoundaryTarget::End(right), BoundaryTarget::End(left));
    let r = divergence_check(&strip, &tree, (&a, &b), &xs, &ys)?;
    rec.at_least("strip opposite ends: suffix min at tail index 15", r.suffix_min[14], 10.0);
    rec.holds("strip opposite ends: verdict divergent", r.verdict == "divergent");
    let back = divergence_check(&strip, &tree, (&b, &a), &ys, &xs)?;
    rec.holds("strip: symmetric in the targets", back.suffix_min == r.suffix_min);
    Ok(rec.finish("divergence"))
}

fn ends(_seed: u64) -> Result<SuiteReport> {
    let mut rec = Recorder::new();
    for (d, expected) in [
        (DomainModel::disk(), 0),
        (DomainModel::bidisc(), 0),
        (DomainModel::unit_strip(), 2),
        (DomainModel::half_plane(), 1),
    ] {
        let name = d.name();
        let tree = build_end_tree(&d, 12)?;
        rec.at_most(format!("{name}: |ends - {expected}|"), (tree.end_count() as f64 - expected as f64).abs(), 0.0);
    }

    let is_point = |v: &LimitVerdict, p: &Point| matches!(v, LimitVerdict::Target(BoundaryTarget::BoundaryPoint(q)) if q.euclid_dist(p) < 1e-9);
    let end_sign = |v: &LimitVerdict| match v {
        LimitVerdict::Target(BoundaryTarget::End(e)) => e.direction[0].signum(),
        _ => 0.0,
    };

    let disk = DomainModel::disk();
    let tree = build_end_tree(&disk, 12)?;
    let one = Point::real(1.0);
    let seq = approach_sequence(&disk, &BoundaryTarget::point(one), &ApproachStyle::Radial, DEFAULT_TERMS)?;
    rec.holds("disk radial -> 1", is_point(&classify_limit(&tree, &seq.points)?, &one));
    for style in &disk_styles()[1..] {
        let seq = approach_sequence(&disk, &BoundaryTarget::point(one), style, DEFAULT_TERMS)?;
        rec.holds(format!("disk {} -> 1", style.label()), is_point(&classify_limit(&tree, &seq.points)?, &one));
    }
    let circle: Vec<Point> = (0..40).map(|n| Point::planar(Complex64::from_polar(0.5, n as f64))).collect();
    rec.holds("disk bounded orbit -> interior", matches!(classify_limit(&tree, &circle)?, LimitVerdict::Interior(_)));

    let bidisc = DomainModel::bidisc();
    let tree = build_end_tree(&bidisc, 12)?;
    for style in bidisc_styles() {
        let seq = approach_sequence(&bidisc, &BoundaryTarget::point(corner()), &style, DEFAULT_TERMS)?;
        rec.holds(format!("bidisc {} -> (1,1)", style.label()), is_point(&classify_limit(&tree, &seq.points)?, &corner()));
    }

    let strip = DomainModel::unit_strip();
    let tree = build_end_tree(&strip, 12)?;
    for (sign, y) in [(1.0, 0.5), (-1.0, 0.5), (1.0, 0.2), (-1.0, 0.9)] {
        let pts: Vec<Point> = (1..=30).map(|n| Point::planar(c(sign * n as f64, y))).collect();
        rec.holds(
            format!("strip {sign:+} at height {y} -> matching end"),
            end_sign(&classify_limit(&tree, &pts)?) == sign,
        );
    }
    let alternating: Vec<Point> = (1..=30)
        .map(|n| Point::planar(c(if n % 2 == 0 { n as f64 } else { -(n as f64) }, 0.5)))
        .collect();
    rec.holds(
        "strip alternating -> no limit",
        matches!(classify_limit(&tree, &alternating)?, LimitVerdict::NoLimit(_)),
    );

    let half = DomainModel::half_plane();
    let tree = build_end_tree(&half, 12)?;
    let up: Vec<Point> = (1..=30).map(|n| Point::planar(c(0.3, 2f64.powi(n)))).collect();
    rec.holds("half-plane upward -> end", matches!(classify_limit(&tree, &up)?, LimitVerdict::Target(BoundaryTarget::End(_))));
    let down: Vec<Point> = (1..=30).map(|n| Point::planar(c(0.3, 0.5f64.powi(n)))).collect();
    rec.holds("half-plane downward -> 0.3", is_point(&classify_limit(&tree, &down)?, &Point::real(0.3)));
    Ok(rec.finish("ends"))
}

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    match name {
        "metric" => metric(seed),
        "busemann" => busemann(seed),
        "horoball" => horoball(seed),
        "quasigeodesic" => quasigeodesic(seed),
        "gromov" => gromov(seed),
        "deeppoint" => deeppoint(seed),
        "decomposition" => decomposition(seed),
        "fibers" => fibers(seed),
        "convexity" => convexity(seed),
        "wolff" => wolff(seed),
        "denjoywolff" => denjoywolff(seed),
        "divergence" => divergence(seed),
        "ends" => ends(seed),
        other => Err(HoroError::InvalidInput(format!(
            "unknown suite {other}; expected one of {} or all",
            SUITES.join(", ")
        ))),
    }
}

/// Runs one suite, or every suite for `"all"`.
pub fn verify(name: &str, seed: u64) -> Result<VerifyReport> {
    let names: Vec<&str> = if name == "all" { SUITES.to_vec() } else { vec![name] };
    let suites = names.iter().map(|n| run_suite(n, seed)).collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport {
        seed,
        normalization: NORMALIZATION.into(),
        passed: suites.iter().all(|s| s.passed),
        suites,
    })
}

/// The bundled worked examples: disk Busemann, bidisc fiber split, strip ends
/// and the Denjoy–Wolff limit of `(z+1)/2`.
pub fn worked_examples(seed: u64) -> Result<VerifyReport> {
    let suites = ["busemann", "fibers", "ends", "denjoywolff"]
        .iter()
        .map(|n| run_suite(n, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport {
        seed,
        normalization: NORMALIZATION.into(),
        passed: suites.iter().all(|s| s.passed),
        suites,
    })
}
