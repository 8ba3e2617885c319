//! Large seeded samples: inverse parameters, bisector equation, isometry invariance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use solgeom::bisector::{bisector_residual, BisectorSpec};
use solgeom::curves::{curve_params, curve_point, translation_distance};
use solgeom::group::{apply_isometry, stabilizer_elements, translate_from_origin, Point};

fn point(rng: &mut ChaCha8Rng, h: f64) -> Point {
    Point::new(
        rng.random_range(-h..=h),
        rng.random_range(-h..=h),
        rng.random_range(-h..=h),
    )
}

#[test]
fn inverse_parameters_roundtrip_ten_thousand_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5017);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let p = point(&mut rng, 3.0);
        let params = curve_params(p).unwrap();
        let q = curve_point(&params, params.t).unwrap();
        worst = worst.max(q.max_norm_diff(&p));
    }
    assert!(worst <= 1e-9, "worst roundtrip error {worst:e}");
}

#[test]
fn bisector_equation_agrees_with_distances() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb15);
    for _ in 0..1000 {
        let p2 = point(&mut rng, 2.0);
        let x = point(&mut rng, 2.0);
        let spec = BisectorSpec::new(Point::ORIGIN, p2).unwrap();
        let r = bisector_residual(&spec, x).unwrap();
        let direct =
            translation_distance(Point::ORIGIN, x).unwrap() - translation_distance(x, p2).unwrap();
        assert!(
            (r - direct).abs() <= 1e-8,
            "p2 {p2:?} x {x:?}: {r} vs {direct}"
        );
        if direct.abs() > 1e-8 {
            assert_eq!(r.signum(), direct.signum());
        }
    }
}

#[test]
fn bisector_zero_set_agrees_with_distances() {
    // Points moved onto the surface along z must zero both functions.
    let mut rng = ChaCha8Rng::seed_from_u64(0x2e70);
    let mut hits = 0;
    for _ in 0..1000 {
        let p2 = point(&mut rng, 1.5);
        let spec = BisectorSpec::new(Point::ORIGIN, p2).unwrap();
        let (x, y) = (rng.random_range(-1.5..=1.5), rng.random_range(-1.5..=1.5));
        let f = |z: f64| bisector_residual(&spec, Point::new(x, y, z)).unwrap();
        let (mut a, mut b) = (-3.0f64, 3.0f64);
        if f(a).signum() == f(b).signum() {
            continue;
        }
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if f(m).signum() == f(a).signum() {
                a = m;
            } else {
                b = m;
            }
        }
        let on = Point::new(x, y, 0.5 * (a + b));
        let direct = translation_distance(Point::ORIGIN, on).unwrap()
            - translation_distance(on, p2).unwrap();
        assert!(direct.abs() <= 1e-8, "{on:?}: {direct:e}");
        hits += 1;
    }
    assert!(hits > 100);
}

#[test]
fn seam_ladders() {
    // A jump at the seam survives the symmetric second difference, and the
    // difference quotients settle instead of blowing up like 1/ε.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ea);
    for _ in 0..200 {
        let p2 = point(&mut rng, 2.0);
        let spec = BisectorSpec::new(Point::ORIGIN, p2).unwrap();
        let (x, y) = (rng.random_range(-2.0..=2.0), rng.random_range(-2.0..=2.0));
        for seam in [0.0, p2.z] {
            let r = |z: f64| bisector_residual(&spec, Point::new(x, y, z)).unwrap();
            let at = r(seam);
            let mut slopes = Vec::new();
            for eps in [1e-2, 1e-3, 1e-4, 1e-5, 1e-6] {
                let (lo, hi) = (r(seam - eps), r(seam + eps));
                slopes.push((hi - lo) / (2.0 * eps));
                for z in [seam - eps, seam + eps] {
                    let q = Point::new(x, y, z);
                    let direct = translation_distance(Point::ORIGIN, q).unwrap()
                        - translation_distance(q, p2).unwrap();
                    assert!((r(z) - direct).abs() <= 1e-8);
                }
                if eps == 1e-6 {
                    assert!(
                        (hi + lo - 2.0 * at).abs() <= 1e-6,
                        "seam {seam}: {lo} {at} {hi}"
                    );
                }
            }
            let last = slopes[slopes.len() - 1];
            assert!(
                (last - slopes[slopes.len() - 2]).abs() <= 1e-3 * last.abs().max(1.0),
                "{slopes:?}"
            );
        }
    }
}

#[test]
fn distance_is_invariant_and_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x150);
    let stab = stabilizer_elements();
    for _ in 0..1000 {
        let (a, b, g) = (
            point(&mut rng, 2.0),
            point(&mut rng, 2.0),
            point(&mut rng, 2.0),
        );
        let d = translation_distance(a, b).unwrap();
        let back = translation_distance(b, a).unwrap();
        assert!(
            (d - back).abs() <= 1e-9 * d.max(1.0),
            "symmetry {a:?} {b:?}"
        );
        let (ga, gb) = (
            translate_from_origin(g, a).unwrap(),
            translate_from_origin(g, b).unwrap(),
        );
        let dg = translation_distance(ga, gb).unwrap();
        assert!((d - dg).abs() <= 1e-9 * d.max(1.0), "translation by {g:?}");
        for iso in &stab {
            let ds = translation_distance(apply_isometry(iso, a), apply_isometry(iso, b)).unwrap();
            assert!((d - ds).abs() <= 1e-9 * d.max(1.0));
        }
    }
}

#[test]
fn base_plane_distance_is_euclidean() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xe0c);
    for _ in 0..1000 {
        let a = Point::new(
            rng.random_range(-3.0..=3.0),
            rng.random_range(-3.0..=3.0),
            0.0,
        );
        let b = Point::new(
            rng.random_range(-3.0..=3.0),
            rng.random_range(-3.0..=3.0),
            0.0,
        );
        let d = translation_distance(a, b).unwrap();
        assert!((d - (a.x - b.x).hypot(a.y - b.y)).abs() <= 1e-12);
    }
}
