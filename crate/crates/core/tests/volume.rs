//! Ball volume against sampling oracles that do not share the quadrature's integrand.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use solgeom::ball::{ball_volume, sphere_point};
use solgeom::curves::translation_distance;
use solgeom::group::Point;

/// |det ∂(x,y,z)/∂(ρ,θ,φ)| of the sphere parametrization by central differences.
/// The metric has unit determinant, so this is the volume density.
fn jacobian(rho: f64, theta: f64, phi: f64) -> f64 {
    if rho == 0.0 {
        return 0.0;
    }
    let d = |f: &dyn Fn(f64) -> Point, t: f64, h: f64| {
        let (a, b) = (f(t + h), f(t - h));
        [
            (a.x - b.x) / (2.0 * h),
            (a.y - b.y) / (2.0 * h),
            (a.z - b.z) / (2.0 * h),
        ]
    };
    let wrap = |p: f64| {
        if p > PI {
            p - 2.0 * PI
        } else if p <= -PI {
            p + 2.0 * PI
        } else {
            p
        }
    };
    let c0 = d(
        &|r| sphere_point(r, phi, theta).unwrap(),
        rho,
        1e-5f64.min(0.5 * rho),
    );
    let c1 = d(
        &|t| sphere_point(rho, phi, t).unwrap(),
        theta,
        1e-5f64.min(0.5 * (FRAC_PI_2 - theta.abs())),
    );
    let c2 = d(&|p| sphere_point(rho, wrap(p), theta).unwrap(), phi, 1e-5);
    let det = c0[0] * (c1[1] * c2[2] - c1[2] * c2[1]) - c0[1] * (c1[0] * c2[2] - c1[2] * c2[0])
        + c0[2] * (c1[0] * c2[1] - c1[1] * c2[0]);
    det.abs()
}

/// Mean and standard error of `f` over `chunks × per_chunk` seeded samples.
fn monte_carlo<F>(seed: u64, chunks: u64, per_chunk: usize, f: F) -> (f64, f64)
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let (s, s2) = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            (0..per_chunk).fold((0.0, 0.0), |(s, s2), _| {
                let v = f(&mut rng);
                (s + v, s2 + v * v)
            })
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = (chunks as usize * per_chunk) as f64;
    let mean = s / n;
    let var = (s2 / n - mean * mean) * n / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn volume_grows_faster_than_euclidean() {
    let mut last = 0.0;
    for k in 1..=10 {
        let r = 0.25 * k as f64;
        let v = ball_volume(r).unwrap();
        assert!(v.value > last, "not increasing at {r}");
        assert!(v.value >= 4.0 / 3.0 * PI * r.powi(3));
        assert!(v.error <= 1e-9 * v.value);
        last = v.value;
    }
    let small = ball_volume(0.1).unwrap().value / (4.0 / 3.0 * PI * 1e-3);
    assert!((1.0..=1.001).contains(&small), "{small}");
}

#[test]
fn volume_matches_parametric_monte_carlo() {
    let r = 2.5;
    let box_volume = r * PI * 2.0 * PI;
    let (mean, se) = monte_carlo(0x7011, 64, 15_625, |rng| {
        let rho = rng.random_range(0.0..r);
        let theta = rng.random_range(-FRAC_PI_2..FRAC_PI_2);
        let phi = PI - rng.random_range(0.0..2.0 * PI);
        jacobian(rho, theta, phi)
    });
    let (mc, mc_se) = (box_volume * mean, box_volume * se);
    let q = ball_volume(r).unwrap();
    let combined = (mc_se * mc_se + q.error * q.error).sqrt();
    assert!(
        (q.value - mc).abs() <= 3.0 * combined,
        "{} vs {mc} ± {mc_se}",
        q.value
    );
}

#[test]
fn volume_matches_hit_or_miss() {
    let r = 2.5;
    let (lo, hi) = ([-5.0, -5.0, -r], [5.0, 5.0, r]);
    let box_volume: f64 = (0..3).map(|k| hi[k] - lo[k]).product();
    let (frac, se) = monte_carlo(0xba11, 64, 4_000, |rng| {
        let p = Point::new(
            rng.random_range(lo[0]..hi[0]),
            rng.random_range(lo[1]..hi[1]),
            rng.random_range(lo[2]..hi[2]),
        );
        f64::from(translation_distance(Point::ORIGIN, p).unwrap() <= r)
    });
    let q = ball_volume(r).unwrap();
    assert!(
        (q.value - box_volume * frac).abs() <= 3.0 * box_volume * se,
        "{} vs {}",
        q.value,
        box_volume * frac
    );
}

#[test]
fn hit_or_miss_box_contains_the_ball() {
    let r = 2.5;
    for i in 0..200 {
        for j in 0..=100 {
            let p = sphere_point(
                r,
                PI - 2.0 * PI * i as f64 / 200.0,
                -FRAC_PI_2 + PI * j as f64 / 100.0,
            )
            .unwrap();
            assert!(p.x.abs() < 5.0 && p.y.abs() < 5.0 && p.z.abs() <= r + 1e-12);
        }
    }
}
