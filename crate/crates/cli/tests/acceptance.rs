//! Acceptance criteria, one PASS/FAIL line each. Oracles are closed forms
//! written out here, independent of the library's own formulas.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use horolab::domain::{BoundaryTarget, EndTarget};
use horolab::dynamics::{
    denjoy_wolff, target_set_sample, wolff_data, wolff_inclusion_check, DwVerdict, HolomorphicMap, MapExpr,
};
use horolab::ends::{build_end_tree, classify_limit, divergence_check, LimitVerdict};
use horolab::geodesy::{gromov_product, quasi_geodesic};
use horolab::horofunction::{
    approach_sequence, convexity_check, deep_point, estimate_horofunction, fiber_sample, horoball_contains,
    horosphere_membership, sample_horoball, ApproachStyle, HorofunctionEstimate, HorosphereFamily, Membership,
};
use horolab::suites::random_points;
use horolab::{DistanceEngine, DomainModel, Point};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Poincaré distance with `k(0, r) = artanh r`.
fn disk_k(z: Complex64, w: Complex64) -> f64 {
    ((z - w) / (c(1.0, 0.0) - w.conj() * z)).norm().atanh()
}

/// `½ log(|σ − z|² / (1 − |z|²))`.
fn busemann(sigma: Complex64, z: Complex64) -> f64 {
    0.5 * ((sigma - z).norm_sqr() / (1.0 - z.norm_sqr())).ln()
}

fn corner() -> Point {
    Point::pair(c(1.0, 0.0), c(1.0, 0.0))
}

fn origin2() -> Point {
    Point::pair(c(0.0, 0.0), c(0.0, 0.0))
}

fn skew(a: f64, b: f64) -> ApproachStyle {
    ApproachStyle::Skew { exponents: vec![a, b] }
}

fn radial(e: &DistanceEngine, pole: &Point, sigma: Point) -> HorofunctionEstimate {
    let seq = approach_sequence(e.domain(), &BoundaryTarget::point(sigma), &ApproachStyle::Radial, 40).unwrap();
    estimate_horofunction(e, pole, &seq, &[], 1e-6).unwrap()
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn disk_busemann() -> Outcome {
    let e = DistanceEngine::new(DomainModel::disk()).unwrap();
    let mut worst = 0.0f64;
    let mut probes = 0;
    for sigma in [c(1.0, 0.0), c(0.0, 1.0), Complex64::from_polar(1.0, PI / 5.0)] {
        let est = radial(&e, &Point::real(0.0), Point::planar(sigma));
        probes = est.probes.len();
        for z in &est.probes {
            worst = worst.max((est.value(z).unwrap() - busemann(sigma, z.z())).abs());
        }
    }
    outcome(worst <= 1e-6 && probes == 64, format!("max error {worst:.3e} at {probes} probes (tol 1e-6)"))
}

fn horoball_geometry() -> Outcome {
    let e = DistanceEngine::new(DomainModel::disk()).unwrap();
    let est = radial(&e, &Point::real(0.0), Point::real(1.0));
    let mut wrong = 0;
    let mut checked = 0;
    for radius in [0.25, 1.0, 4.0] {
        let centre = 1.0 / (1.0 + radius);
        let rad = radius / (1.0 + radius);
        // 10^4 raster points inside the disk
        let mut raster = 0;
        let mut k = 0u64;
        while raster < 10_000 {
            k += 1;
            let z = c(2.0 * halton(k, 2) - 1.0, 2.0 * halton(k, 3) - 1.0);
            if z.norm() >= 1.0 {
                continue;
            }
            raster += 1;
            let off = (z - centre).norm() - rad;
            if off.abs() <= 1e-5 {
                continue;
            }
            checked += 1;
            let got = horoball_contains(&est, &Point::planar(z), radius).unwrap();
            let expect = if off < 0.0 { Membership::Inside } else { Membership::Outside };
            if got != expect {
                wrong += 1;
            }
        }
    }
    outcome(wrong == 0, format!("{wrong} misclassified of {checked} raster points over R in {{0.25, 1, 4}}"))
}

fn halton(mut i: u64, base: u64) -> f64 {
    let (mut f, mut r) = (1.0, 0.0);
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

fn quasi_geodesic_suite(rng: &mut ChaCha8Rng) -> Outcome {
    let e = DistanceEngine::new(DomainModel::disk()).unwrap();
    let mut violations = 0;
    let mut triples = 0;
    for eps in [0.1, 0.01] {
        let ends = random_points(e.domain(), 20, rng);
        for pair in ends.chunks(2) {
            let path = quasi_geodesic(&e, &pair[0], &pair[1], eps).unwrap();
            let n = path.len();
            for _ in 0..100 {
                let mut idx = [rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)];
                idx.sort_unstable();
                let [x, y, z] = idx.map(|i| path.points[i].z());
                let (xy, yz, xz) = (disk_k(x, y), disk_k(y, z), disk_k(x, z));
                triples += 1;
                if xz > xy + yz + 1e-9 || xy + yz > xz + 3.0 * eps + 1e-9 {
                    violations += 1;
                }
            }
        }
    }
    outcome(violations == 0, format!("{violations} violations over {triples} triples, eps in {{0.1, 0.01}}"))
}

fn gromov_suite(rng: &mut ChaCha8Rng) -> Outcome {
    let e = DistanceEngine::new(DomainModel::disk()).unwrap();
    let o = Point::real(0.0);
    let mut last = 0.0;
    let mut lib_gap = 0.0f64;
    for n in 1..=20 {
        let r = 1.0 - 0.5f64.powi(n);
        let t = 0.5f64.powi(n);
        let (x, y) = (Complex64::from_polar(r, t), Complex64::from_polar(r, -t));
        let lib = gromov_product(&e, &o, &Point::planar(x), &Point::planar(y)).unwrap();
        let oracle = (disk_k(x, c(0.0, 0.0)) + disk_k(y, c(0.0, 0.0)) - disk_k(x, y)) / 2.0;
        lib_gap = lib_gap.max((lib - oracle).abs());
        last = lib;
    }
    let mut bad = 0;
    let pts = random_points(e.domain(), 4000, rng);
    for q in pts.chunks(4) {
        let [p, x, y, z] = [q[0].z(), q[1].z(), q[2].z(), q[3].z()];
        let g = gromov_product(&e, &q[0], &q[1], &q[2]).unwrap();
        let phi = |a: Complex64| disk_k(z, a) - disk_k(p, a);
        if g < -(phi(x) + phi(y)) / 2.0 - 1e-9 {
            bad += 1;
        }
    }
    outcome(
        last > 5.0 && bad == 0 && lib_gap < 1e-6,
        format!("product at N=20 = {last:.6}; library vs oracle {lib_gap:.1e}; {bad} bound violations over 1000 quadruples"),
    )
}

fn deep_points() -> Outcome {
    let disk = DistanceEngine::new(DomainModel::disk()).unwrap();
    let bidisc = DistanceEngine::new(DomainModel::bidisc()).unwrap();
    let xi_d = radial(&disk, &Point::real(0.0), Point::real(1.0));
    let xi_b = radial(&bidisc, &origin2(), corner());
    let mut worst = f64::NEG_INFINITY;
    for level in [-1.0, -3.0, -6.0] {
        let x = deep_point(&xi_d, level).unwrap();
        worst = worst.max(busemann(c(1.0, 0.0), x.z()) - level);
        let x = deep_point(&xi_b, level).unwrap();
        let h = busemann(c(1.0, 0.0), x.coord(0)).max(busemann(c(1.0, 0.0), x.coord(1)));
        worst = worst.max(h - level);
    }
    outcome(worst < 0.0, format!("largest h(x) - L = {worst:.4} over L in {{-1, -3, -6}}"))
}

fn bidisc_family(e: &DistanceEngine) -> HorosphereFamily {
    let styles = [ApproachStyle::Radial, skew(1.0, 2.0), skew(2.0, 1.0)];
    HorosphereFamily::build(e, &origin2(), &BoundaryTarget::point(corner()), &styles, 40, 1e-6).unwrap()
}

fn decomposition(rng: &mut ChaCha8Rng) -> Outcome {
    let e = DistanceEngine::new(DomainModel::bidisc()).unwrap();
    let family = bidisc_family(&e);
    let mut identity = 0;
    let mut oracle = 0;
    for z in random_points(e.domain(), 500, rng) {
        let m = horosphere_membership(&family, &z, 1.0).unwrap();
        let each: Vec<Membership> = family.estimates.iter().map(|x| horoball_contains(x, &z, 1.0).unwrap()).collect();
        let some = each.contains(&Membership::Inside);
        let all = each.iter().all(|x| *x == Membership::Inside);
        if m.in_big.is_inside() != some || m.in_small.is_inside() != all {
            identity += 1;
        }
        // radial → max(B₁, B₂), skew(1,2) → B₂, skew(2,1) → B₁
        let (b1, b2) = (busemann(c(1.0, 0.0), z.coord(0)), busemann(c(1.0, 0.0), z.coord(1)));
        let (lo, hi) = (b1.min(b2), b1.max(b2));
        if lo.abs() > 1e-6 && hi.abs() > 1e-6 && (m.in_big.is_inside() != (lo < 0.0) || m.in_small.is_inside() != (hi < 0.0)) {
            oracle += 1;
        }
    }
    let probe = horosphere_membership(&family, &Point::pair(c(0.0, 0.0), c(0.5, 0.0)), 1.0).unwrap();
    let probe_ok = probe.in_big == Membership::Inside && probe.in_small == Membership::Outside;
    outcome(
        identity == 0 && oracle == 0 && probe_ok,
        format!("{identity} identity and {oracle} oracle mismatches over 500 samples; probe (0, 0.5) big/small = {:?}/{:?}", probe.in_big, probe.in_small),
    )
}

fn fiber_split() -> Outcome {
    let e = DistanceEngine::new(DomainModel::bidisc()).unwrap();
    let split = fiber_sample(&e, &origin2(), &BoundaryTarget::point(corner()), &[ApproachStyle::Radial, skew(1.0, 2.0)], 40, 1e-6).unwrap();
    let probe = Point::pair(c(0.0, 0.0), c(0.5, 0.0));
    let diff = split.estimates[0].value(&probe).unwrap() - split.estimates[1].value(&probe).unwrap();
    let oracle = 0.5 * 3f64.ln();
    let e = DistanceEngine::new(DomainModel::disk()).unwrap();
    let styles = [
        ApproachStyle::Radial,
        ApproachStyle::Tangential { angle: PI / 4.0 },
        ApproachStyle::Tangential { angle: -PI / 4.0 },
    ];
    let disk = fiber_sample(&e, &Point::real(0.0), &BoundaryTarget::point(Point::real(1.0)), &styles, 40, 1e-6).unwrap();
    let worst = disk.gaps.iter().flatten().copied().fold(0.0, f64::max);
    outcome(
        (diff - 0.549306).abs() <= 1e-4 && (diff - oracle).abs() <= 1e-4 && worst <= 1e-5,
        format!("bidisc split {diff:.6} (target 0.549306 ± 1e-4); disk pairwise gap {worst:.2e}"),
    )
}

fn convexity(rng: &mut ChaCha8Rng) -> Outcome {
    let square = DistanceEngine::conformal(DomainModel::square(2.0).unwrap()).unwrap();
    let cases = [
        (DistanceEngine::new(DomainModel::disk()).unwrap(), Point::real(0.0), Point::real(1.0)),
        (DistanceEngine::new(DomainModel::bidisc()).unwrap(), origin2(), corner()),
        (square, Point::real(0.0), Point::real(1.0)),
    ];
    let mut violations = 0;
    let mut chords = 0;
    let mut rays = 0;
    for (e, pole, sigma) in cases {
        let est = radial(&e, &pole, sigma);
        for radius in [0.5, 1.0, 2.0] {
            let r = convexity_check(&est, radius, 200, rng).unwrap();
            violations += r.violations.len();
            chords += r.chords_checked;
            rays += r.rays_checked;
        }
    }
    // disk horoballs against the Euclidean disc oracle
    let mut oracle = 0;
    for radius in [0.5, 1.0, 2.0] {
        let (centre, rad) = (1.0 / (1.0 + radius), radius / (1.0 + radius));
        for _ in 0..200 {
            let pick = |rng: &mut ChaCha8Rng| c(centre, 0.0) + Complex64::from_polar(rad * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI));
            let (a, b) = (pick(rng), pick(rng));
            for t in [0.25, 0.5, 0.75] {
                if ((a * t + b * (1.0 - t)) - centre).norm() >= rad {
                    oracle += 1;
                }
            }
        }
    }
    outcome(
        violations == 0 && oracle == 0 && chords >= 9 * 200 && rays >= 9 * 200,
        format!("{violations} violations over {chords} chords and {rays} rays (disk, bidisc, square)"),
    )
}

fn wolff_suite(rng: &mut ChaCha8Rng) -> Outcome {
    let cases = [
        (DomainModel::disk(), MapExpr::halfway(), Point::real(0.0), Point::real(1.0)),
        (
            DomainModel::bidisc(),
            MapExpr::Coordinatewise { maps: vec![MapExpr::halfway(), MapExpr::halfway()] },
            origin2(),
            corner(),
        ),
    ];
    let mut ok = true;
    let mut notes = Vec::new();
    for (d, expr, pole, x) in cases {
        let bidisc = d.dim() == 2;
        let e = DistanceEngine::new(d).unwrap();
        let f = HolomorphicMap::certify(&e, expr).unwrap();
        let w = wolff_data(&e, &f, &pole, 200).unwrap();
        ok &= w.target.as_point().is_some_and(|p| p.euclid_dist(&x) < 1e-9);
        // ξ against the closed form (max of coordinate Busemann values)
        let h = |z: &Point| (0..z.dim()).map(|i| busemann(c(1.0, 0.0), z.coord(i))).fold(f64::NEG_INFINITY, f64::max);
        let xi_err = w.estimate.probes.iter().map(|z| (w.estimate.value(z).unwrap() - h(z)).abs()).fold(0.0, f64::max);
        ok &= xi_err < 1e-5;
        let family = if bidisc {
            bidisc_family(&e)
        } else {
            HorosphereFamily::build(&e, &pole, &w.target, &[ApproachStyle::Radial], 40, 1e-6).unwrap()
        };
        let report = wolff_inclusion_check(&e, &f, &w, &family, &[0.5, 1.0, 2.0], 100, 10, rng).unwrap();
        let step = report.rows.iter().map(|r| r.max_one_step_change).fold(f64::NEG_INFINITY, f64::max);
        let mut oracle_step = f64::NEG_INFINITY;
        for radius in [0.5, 1.0, 2.0] {
            for z in sample_horoball(&w.estimate, radius, 100, rng).unwrap() {
                oracle_step = oracle_step.max(h(&f.apply(&z)) - h(&z));
            }
        }
        ok &= report.total_violations == 0 && step <= -0.34 && oracle_step <= -0.34;
        notes.push(format!(
            "{}: violations {}, one-step max {step:.4} (oracle {oracle_step:.4}), xi err {xi_err:.1e}",
            if bidisc { "bidisc" } else { "disk" },
            report.total_violations
        ));
    }
    outcome(ok, notes.join("; "))
}

fn denjoy_wolff_suite() -> Outcome {
    let disk = DistanceEngine::new(DomainModel::disk()).unwrap();
    let seeds = [Point::real(0.0), Point::planar(c(0.0, 0.3)), Point::real(-0.5)];
    let f = HolomorphicMap::certify(&disk, MapExpr::halfway()).unwrap();
    let r = denjoy_wolff(&disk, &f, &seeds, 200).unwrap();
    let to_one = r.limit.as_ref().and_then(|y| y.as_point().copied()).map_or(f64::INFINITY, |p| (p.z() - 1.0).norm());
    let spread = r.spread.iter().find(|s| s.n == 40).map_or(f64::INFINITY, |s| s.spread);
    let targets = target_set_sample(&disk, &f, &seeds, None, 200).unwrap();
    let consistent = targets.targets.iter().all(|t| t.as_point().is_some_and(|p| (p.z() - 1.0).norm() < 1e-9));

    let rot = HolomorphicMap::certify(&disk, MapExpr::rotation(PI / 2.0)).unwrap();
    let compact = denjoy_wolff(&disk, &rot, &[Point::real(0.5)], 200).unwrap().verdict == DwVerdict::RelativelyCompact;

    let strip = DistanceEngine::new(DomainModel::unit_strip()).unwrap();
    // (z+1)/2 on the disk is ζ ↦ 2ζ + i on the half-plane; e^{πz} carries the strip there
    let conj = MapExpr::StripConjugate { im_min: 0.0, im_max: 1.0, inner: Box::new(MapExpr::affine(c(2.0, 0.0), c(0.0, 1.0))) };
    let g = HolomorphicMap::certify(&strip, conj).unwrap();
    let z0 = c(0.0, 0.5);
    let direct = ((2.0 * (PI * z0).exp() + c(0.0, 1.0)).ln() / PI - g.apply(&Point::planar(z0)).z()).norm();
    let strip_seeds = [Point::planar(z0), Point::planar(c(-1.0, 0.2))];
    let right = matches!(
        denjoy_wolff(&strip, &g, &strip_seeds, 200).unwrap().limit,
        Some(BoundaryTarget::End(EndTarget { direction, .. })) if direction[0] > 0.0
    );

    let hyp = HolomorphicMap::certify(&disk, MapExpr::mobius(0.5, 0.0)).unwrap();
    let r = denjoy_wolff(&disk, &hyp, &seeds, 200).unwrap();
    let hyp_gap = r.limit.as_ref().and_then(|y| y.as_point().copied()).map_or(f64::INFINITY, |p| (p.z() - 1.0).norm());

    outcome(
        to_one < 1e-9 && spread < 1e-6 && consistent && compact && right && direct < 1e-12 && hyp_gap <= 1e-6,
        format!(
            "(z+1)/2 -> 1 (gap {to_one:.1e}), spread@40 {spread:.2e}; rotation compact {compact}; strip right end {right}; automorphism gap {hyp_gap:.1e}"
        ),
    )
}

fn divergence_suite() -> Outcome {
    let disk = DistanceEngine::new(DomainModel::disk()).unwrap();
    let xs: Vec<Point> = (1..=20).map(|n| Point::real(1.0 - 0.5f64.powi(n))).collect();
    let ys: Vec<Point> = xs.iter().map(|p| Point::real(-p.z().re)).collect();
    let tree = build_end_tree(disk.domain(), 12).unwrap();
    let r = divergence_check(&disk, &tree, (&BoundaryTarget::point(Point::real(1.0)), &BoundaryTarget::point(Point::real(-1.0))), &xs, &ys).unwrap();
    let oracle15 = 2.0 * (1.0 - 0.5f64.powi(15)).atanh();
    let disk_ok = r.verdict == "divergent" && r.suffix_min[14] > 10.0 && (r.diagonal[14] - oracle15).abs() < 1e-9
        && r.diagonal.windows(2).all(|w| w[1] > w[0]);

    let strip = DistanceEngine::new(DomainModel::unit_strip()).unwrap();
    let tree = build_end_tree(strip.domain(), 12).unwrap();
    let xs: Vec<Point> = (1..=20).map(|n| Point::planar(c(n as f64, 0.5))).collect();
    let ys: Vec<Point> = (1..=20).map(|n| Point::planar(c(-(n as f64), 0.5))).collect();
    let right = tree.ends.iter().find(|e| e.direction[0] > 0.0).cloned().unwrap();
    let left = tree.ends.iter().find(|e| e.direction[0] < 0.0).cloned().unwrap();
    let s = divergence_check(&strip, &tree, (&BoundaryTarget::End(right), &BoundaryTarget::End(left)), &xs, &ys).unwrap();
    // along the centre line the strip metric is π/2 per unit length
    let strip_oracle = PI * 15.0;
    let strip_ok = s.verdict == "divergent" && s.suffix_min[14] > 10.0 && (s.diagonal[14] - strip_oracle).abs() < 1e-9
        && s.diagonal.windows(2).all(|w| w[1] > w[0]);
    outcome(
        disk_ok && strip_ok,
        format!("tail index 15: disk {:.4} (oracle {oracle15:.4}), strip {:.4} (oracle {strip_oracle:.4})", r.suffix_min[14], s.suffix_min[14]),
    )
}

fn ends_suite() -> Outcome {
    let mut ok = true;
    let mut counts = Vec::new();
    for (d, expected) in [
        (DomainModel::disk(), 0),
        (DomainModel::bidisc(), 0),
        (DomainModel::unit_strip(), 2),
        (DomainModel::half_plane(), 1),
    ] {
        let n = build_end_tree(&d, 12).unwrap().end_count();
        ok &= n == expected;
        counts.push(format!("{} {n}", d.name()));
    }
    let mut agree = 0;
    let mut total = 0;
    let mut tally = |good: bool| {
        total += 1;
        if good {
            agree += 1;
        }
    };
    let disk = DomainModel::disk();
    let tree = build_end_tree(&disk, 12).unwrap();
    for sigma in [c(1.0, 0.0), c(0.0, 1.0), Complex64::from_polar(1.0, PI / 5.0)] {
        for style in [ApproachStyle::Radial, ApproachStyle::Tangential { angle: PI / 4.0 }, ApproachStyle::Tangential { angle: -PI / 4.0 }] {
            let seq = approach_sequence(&disk, &BoundaryTarget::point(Point::planar(sigma)), &style, 40).unwrap();
            let v = classify_limit(&tree, &seq.points).unwrap();
            tally(matches!(v, LimitVerdict::Target(BoundaryTarget::BoundaryPoint(p)) if (p.z() - sigma).norm() < 1e-9));
        }
    }
    let bidisc = DomainModel::bidisc();
    let tree = build_end_tree(&bidisc, 12).unwrap();
    for style in [ApproachStyle::Radial, skew(1.0, 2.0), skew(2.0, 1.0)] {
        let seq = approach_sequence(&bidisc, &BoundaryTarget::point(corner()), &style, 40).unwrap();
        let v = classify_limit(&tree, &seq.points).unwrap();
        tally(matches!(v, LimitVerdict::Target(BoundaryTarget::BoundaryPoint(p)) if p.euclid_dist(&corner()) < 1e-9));
    }
    let strip = DomainModel::unit_strip();
    let tree = build_end_tree(&strip, 12).unwrap();
    for sign in [1.0, -1.0] {
        for y in [0.3, 0.5, 0.7] {
            let pts: Vec<Point> = (1..=40).map(|n| Point::planar(c(sign * n as f64, y))).collect();
            let v = classify_limit(&tree, &pts).unwrap();
            tally(matches!(v, LimitVerdict::Target(BoundaryTarget::End(e)) if e.direction[0].signum() == sign));
        }
    }
    let half = DomainModel::half_plane();
    let tree = build_end_tree(&half, 12).unwrap();
    let up: Vec<Point> = (1..=40).map(|n| Point::planar(c(0.0, 2f64.powi(n)))).collect();
    tally(matches!(classify_limit(&tree, &up).unwrap(), LimitVerdict::Target(BoundaryTarget::End(_))));
    ok &= agree == total;
    outcome(ok, format!("end counts [{}]; classify_limit agrees on {agree}/{total} sequences", counts.join(", ")))
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_horolab");
    let start = Instant::now();
    let run = || Command::new(bin).args(["verify", "all", "--seed", "4242"]).output().expect("binary runs");
    let a = run();
    let b = run();
    let secs = start.elapsed().as_secs_f64() / 2.0;
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    outcome(
        same && a.status.success() && secs < 180.0,
        format!("identical reports {same} ({} bytes), exit {:?}, {secs:.1}s per run", a.stdout.len(), a.status.code()),
    )
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    type Criterion<'a> = (&'a str, f64, Box<dyn FnMut() -> Outcome + 'a>);
    let mut rng2 = rng.clone();
    let mut rng3 = ChaCha8Rng::seed_from_u64(3);
    let mut rng4 = ChaCha8Rng::seed_from_u64(4);
    let mut rng5 = ChaCha8Rng::seed_from_u64(5);
    // runtime budgets in seconds; infinite where none is stated
    let criteria: Vec<Criterion> = vec![
        ("disk Busemann oracle", 1.0, Box::new(disk_busemann)),
        ("horoball geometry oracle", 5.0, Box::new(horoball_geometry)),
        ("quasi-geodesic triples", 5.0, Box::new(|| quasi_geodesic_suite(&mut rng))),
        ("Gromov lower bound and divergence", 2.0, Box::new(|| gromov_suite(&mut rng2))),
        ("deep points", 2.0, Box::new(deep_points)),
        ("horosphere decomposition", 10.0, Box::new(|| decomposition(&mut rng3))),
        ("fiber split", f64::INFINITY, Box::new(fiber_split)),
        ("horoball convexity", f64::INFINITY, Box::new(|| convexity(&mut rng4))),
        ("Wolff inclusions", 30.0, Box::new(|| wolff_suite(&mut rng5))),
        ("Denjoy-Wolff limits", f64::INFINITY, Box::new(denjoy_wolff_suite)),
        ("divergence of opposite targets", f64::INFINITY, Box::new(divergence_suite)),
        ("ends and limit classification", f64::INFINITY, Box::new(ends_suite)),
        ("determinism of verify all", f64::INFINITY, Box::new(determinism)),
    ];
    let mut failures = 0;
    for (i, (name, budget, mut check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let out = check();
        let secs = start.elapsed().as_secs_f64();
        let in_time = secs < budget;
        let passed = out.passed && in_time;
        if !passed {
            failures += 1;
        }
        let timing = if budget.is_finite() { format!("{secs:.2}s of {budget}s") } else { format!("{secs:.2}s") };
        println!("{} [{:>2}] {name}: {} ({timing})", if passed { "PASS" } else { "FAIL" }, i + 1, out.detail);
    }
    println!("{} of 13 criteria passed", 13 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
