use std::f64::consts::TAU;

use horolab::domain::BoundaryTarget;
use horolab::dynamics::{HolomorphicMap, MapExpr};
use horolab::horofunction::{approach_sequence, estimate_horofunction, ApproachStyle, HorofunctionEstimate};
use horolab::suites::random_points;
use horolab::{DistanceEngine, DomainModel, Point};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn domains() -> Vec<DomainModel> {
    vec![DomainModel::disk(), DomainModel::bidisc(), DomainModel::half_plane(), DomainModel::unit_strip()]
}

fn points(domain: &DomainModel, seed: u64, n: usize) -> Vec<Point> {
    random_points(domain, n, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn radial_disk() -> (DistanceEngine, HorofunctionEstimate) {
    let e = DistanceEngine::new(DomainModel::disk()).unwrap();
    let seq = approach_sequence(e.domain(), &BoundaryTarget::point(Point::real(1.0)), &ApproachStyle::Radial, 40).unwrap();
    let est = estimate_horofunction(&e, &Point::real(0.0), &seq, &[], 1e-6).unwrap();
    (e, est)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_is_a_metric(seed in any::<u64>(), which in 0usize..4) {
        let d = domains().swap_remove(which);
        let e = DistanceEngine::new(d).unwrap();
        let p = points(e.domain(), seed, 3);
        let (x, y, z) = (&p[0], &p[1], &p[2]);
        let xy = e.distance(x, y).unwrap();
        prop_assert!(xy >= 0.0);
        prop_assert!(e.distance(x, x).unwrap().abs() < 1e-12);
        prop_assert!((xy - e.distance(y, x).unwrap()).abs() <= 1e-9 * xy.max(1.0));
        let slack = 1e-9 * xy.max(1.0);
        prop_assert!(e.distance(x, z).unwrap() <= xy + e.distance(y, z).unwrap() + slack);
    }

    #[test]
    fn disk_distance_is_rotation_invariant(r in 0.0f64..0.99, s in 0.0f64..0.99, a in 0.0f64..TAU, b in 0.0f64..TAU, t in 0.0f64..TAU) {
        let e = DistanceEngine::new(DomainModel::disk()).unwrap();
        let z = Complex64::from_polar(r, a);
        let w = Complex64::from_polar(s, b);
        let u = Complex64::from_polar(1.0, t);
        let d0 = e.distance(&Point::planar(z), &Point::planar(w)).unwrap();
        let d1 = e.distance(&Point::planar(u * z), &Point::planar(u * w)).unwrap();
        prop_assert!((d0 - d1).abs() < 1e-9);
    }

    #[test]
    fn horofunction_is_one_lipschitz(seed in any::<u64>()) {
        let (e, est) = radial_disk();
        let p = points(e.domain(), seed, 2);
        let gap = (est.value(&p[0]).unwrap() - est.value(&p[1]).unwrap()).abs();
        prop_assert!(gap <= e.distance(&p[0], &p[1]).unwrap() + 1e-9);
    }

    #[test]
    fn exhaustion_index_grows_toward_the_boundary(r in 0.0f64..0.999, t in 0.0f64..TAU) {
        let d = DomainModel::disk();
        let inner = d.exhaustion_index(&Point::planar(Complex64::from_polar(r, t))).unwrap();
        let outer = d.exhaustion_index(&Point::planar(Complex64::from_polar(r + (1.0 - r) / 2.0, t))).unwrap();
        prop_assert!(inner <= outer);
    }

    #[test]
    fn holomorphic_self_maps_do_not_expand(seed in any::<u64>(), which in 0usize..3) {
        let e = DistanceEngine::new(DomainModel::disk()).unwrap();
        let expr = [MapExpr::halfway(), MapExpr::mobius(0.5, 0.3), MapExpr::rotation(1.0)][which].clone();
        let f = HolomorphicMap::certify(&e, expr).unwrap();
        let p = points(e.domain(), seed, 2);
        let before = e.distance(&p[0], &p[1]).unwrap();
        let after = e.distance(&f.apply(&p[0]), &f.apply(&p[1])).unwrap();
        prop_assert!(after <= before + 1e-9 * before.max(1.0));
    }
}

#[test]
fn product_distance_is_the_max_of_factors() {
    let e = DistanceEngine::new(DomainModel::bidisc()).unwrap();
    let disk = DistanceEngine::new(DomainModel::disk()).unwrap();
    for p in points(e.domain(), 7, 40).chunks(2) {
        let factor = |i: usize| {
            disk.distance(&Point::planar(p[0].coord(i)), &Point::planar(p[1].coord(i))).unwrap()
        };
        let d = e.distance(&p[0], &p[1]).unwrap();
        assert!((d - factor(0).max(factor(1))).abs() < 1e-12);
    }
}

#[test]
fn exterior_points_are_rejected() {
    let e = DistanceEngine::new(DomainModel::disk()).unwrap();
    assert!(e.distance(&Point::real(1.5), &Point::real(0.0)).is_err());
}
