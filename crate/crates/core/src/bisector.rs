//! Bisector (equidistant) surfaces of point pairs and equidistant loci of point triples.
//!
//! For `p1 = O` and `p2 = (a, b, c)` a point `X = (x, y, z)` lies on the bisector iff
//!
//! ```text
//! |z-c|/|e^{z-c}-1| · sqrt((x-a)² e^{2z} + (e^{z-c}-1)² + (y-b)² e^{-2c})
//!     = |z|/|e^z-1| · sqrt(x² e^{2z} + (e^z-1)² + y²)
//! ```
//!
//! The left side is `d(p2, X)`, the right side `d(O, X)`. The factors
//! `|w|/|e^w-1|` have removable singularities at `w = 0`, so the levels
//! `z = 0` and `z = c` are handled by the series `1 - w/2`. For `c = 0` the
//! equation reduces to `e^{2z} a(a-2x) + b(b-2y) = 0`, and on `z = 0` to the
//! Euclidean perpendicular bisector `xa + yb = (a²+b²)/2`.
//!
//! General pairs are reduced to `p1 = O` by the inverse translation of `p1`.

use serde::{Deserialize, Serialize};

use crate::contour::extract_zero_set;
use crate::curves::translation_distance;
use crate::error::{Result, SolError};
use crate::group::{exp_checked, translate_to_origin, Point};
use crate::mesh::{linspace, Region, Resolution, TriangleMesh};
use crate::solve::{first_of_starts, NewtonOptions};

/// Half-width of the band around `z = 0` and `z = c` evaluated by the series limit.
pub const SEAM_BAND: f64 = 1e-8;

/// Residual threshold for locus points against the third pair.
pub const LOCUS_TOLERANCE: f64 = 1e-6;

/// A pair of distinct points whose bisector is studied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BisectorSpec {
    pub p1: Point,
    pub p2: Point,
}

impl BisectorSpec {
    pub fn new(p1: Point, p2: Point) -> Result<Self> {
        if !(p1.is_finite() && p2.is_finite()) {
            return Err(SolError::DegenerateInput(
                "non-finite bisector point".into(),
            ));
        }
        if p1 == p2 {
            return Err(SolError::DegenerateInput(format!(
                "bisector of {p1:?} with itself"
            )));
        }
        Ok(Self { p1, p2 })
    }

    /// The same bisector with `p1` moved to the origin.
    pub fn reduced(&self) -> Result<Self> {
        Self::new(Point::ORIGIN, translate_to_origin(self.p1, self.p2)?)
    }
}

/// Which case of the implicit equation applies at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BisectorBranch {
    /// `c ≠ 0`, `z ∉ {0, c}`.
    Generic,
    /// `c ≠ 0`, `z = c`.
    LevelOfP2,
    /// `c ≠ 0`, `z = 0`.
    BasePlane,
    /// `c = 0`, `z ≠ 0`.
    LevelPair,
    /// `c = 0`, `z = 0`: Euclidean perpendicular bisector.
    LevelPairBasePlane,
}

/// Branch of the implicit equation for `p2 = (a, b, c)` at height `z`, using the seam band.
pub fn bisector_branch(c: f64, z: f64) -> BisectorBranch {
    let near_zero = z.abs() < SEAM_BAND;
    if c == 0.0 {
        if near_zero {
            BisectorBranch::LevelPairBasePlane
        } else {
            BisectorBranch::LevelPair
        }
    } else if near_zero {
        BisectorBranch::BasePlane
    } else if (z - c).abs() < SEAM_BAND {
        BisectorBranch::LevelOfP2
    } else {
        BisectorBranch::Generic
    }
}

/// `|w| / |e^w - 1|`, continued by `1 - w/2` near `w = 0`.
fn level_factor(w: f64) -> f64 {
    if w.abs() < SEAM_BAND {
        1.0 - 0.5 * w
    } else {
        w / w.exp_m1()
    }
}

fn norm3(u: f64, v: f64, w: f64) -> f64 {
    u.hypot(v).hypot(w)
}

/// `d(O, X)` in closed form.
fn origin_side(x: Point) -> Result<f64> {
    let ez = exp_checked(x.z)?;
    Ok(level_factor(x.z) * norm3(x.x * ez, x.z.exp_m1(), x.y))
}

/// `d(p2, X)` in closed form.
fn pair_side(p2: Point, x: Point) -> Result<f64> {
    let ez = exp_checked(x.z)?;
    let emc = exp_checked(-p2.z)?;
    let w = x.z - p2.z;
    exp_checked(w)?;
    Ok(level_factor(w) * norm3((x.x - p2.x) * ez, w.exp_m1(), (x.y - p2.y) * emc))
}

/// Implicit bisector function `d(O, X) - d(p2, X)` for `spec.p1 = O`.
///
/// Positive where `X` is closer to `p2`, zero on the surface, `-d(O, p2)` at
/// `X = O` and `+d(O, p2)` at `X = p2`.
pub fn bisector_residual(spec: &BisectorSpec, x: Point) -> Result<f64> {
    if !spec.p1.is_origin() {
        return Err(SolError::Domain(format!(
            "residual needs p1 at the origin, got {:?}; use BisectorSpec::reduced",
            spec.p1
        )));
    }
    if !x.is_finite() {
        return Err(SolError::DegenerateInput(format!("non-finite point {x:?}")));
    }
    Ok(origin_side(x)? - pair_side(spec.p2, x)?)
}

/// [`bisector_residual`] for an arbitrary pair, evaluated after moving `p1` to the origin.
pub fn pair_residual(p1: Point, p2: Point, x: Point) -> Result<f64> {
    let spec = BisectorSpec::new(p1, p2)?.reduced()?;
    bisector_residual(&spec, translate_to_origin(p1, x)?)
}

/// Polynomial form of the `c = 0` bisector, `e^{2z} a(a-2x) + b(b-2y)`.
///
/// Its sign is opposite to [`bisector_residual`] and its zero set the same.
pub fn level_pair_polynomial(p2: Point, x: Point) -> Result<f64> {
    if p2.z != 0.0 {
        return Err(SolError::Domain(format!(
            "p2 = {p2:?} is not in the base plane"
        )));
    }
    let e2z = exp_checked(2.0 * x.z)?;
    Ok(e2z * p2.x * (p2.x - 2.0 * x.x) + p2.y * (p2.y - 2.0 * x.y))
}

/// `xa + yb - (a²+b²)/2`, the base-plane bisector line of `O` and `(a, b, 0)`.
pub fn base_plane_line(p2: Point, x: Point) -> f64 {
    x.x * p2.x + x.y * p2.y - 0.5 * (p2.x * p2.x + p2.y * p2.y)
}

/// Whether `|d(p1, X) - d(X, p2)| <= tol`, with both distances solved directly.
pub fn bisector_membership(p1: Point, p2: Point, x: Point, tol: f64) -> Result<bool> {
    BisectorSpec::new(p1, p2)?;
    if !(tol > 0.0) {
        return Err(SolError::Domain(format!(
            "tolerance {tol} must be positive"
        )));
    }
    let d1 = translation_distance(p1, x)?;
    let d2 = translation_distance(x, p2)?;
    Ok((d1 - d2).abs() <= tol)
}

/// Mesh of the bisector of `p1`, `p2` inside `region` (coordinates of the original pair).
///
/// Slices where the residual cannot be evaluated are skipped. An empty mesh
/// means the surface misses the region.
pub fn bisector_mesh(
    p1: Point,
    p2: Point,
    region: &Region,
    resolution: &Resolution,
) -> Result<TriangleMesh> {
    let spec = BisectorSpec::new(p1, p2)?.reduced()?;
    exp_checked(p1.z)?;
    exp_checked(-p1.z)?;
    let f = |x: Point| {
        translate_to_origin(p1, x)
            .and_then(|y| bisector_residual(&spec, y))
            .unwrap_or(f64::NAN)
    };
    let mesh = extract_zero_set(&f, region, resolution);
    mesh.validate()?;
    Ok(mesh)
}

/// Closed-form equidistant locus of `O`, `a2 = (a, b, 0)`, `a3 = (a1, b1, 0)` at height `z`.
pub fn planar_locus_point(a2: Point, a3: Point, z: f64) -> Result<Point> {
    if a2.z != 0.0 || a3.z != 0.0 {
        return Err(SolError::Domain(
            "both vertices must lie in the base plane".into(),
        ));
    }
    let (a, b, a1, b1) = (a2.x, a2.y, a3.x, a3.y);
    let det = a * b1 - a1 * b;
    let scale = (a.abs() + b.abs()) * (a1.abs() + b1.abs());
    if det.abs() <= 1e-14 * scale || det == 0.0 {
        return Err(SolError::DegenerateTriangle(format!(
            "O, {a2:?}, {a3:?} are collinear in the base plane"
        )));
    }
    let e2z = exp_checked(2.0 * z)?;
    let emz = exp_checked(-2.0 * z)?;
    let x = (b * b1 * (b - b1) * emz + a * a * b1 - a1 * a1 * b) / (2.0 * det);
    let y = (-a * a1 * (a - a1) * e2z + a * b1 * b1 - a1 * b * b) / (2.0 * det);
    Ok(Point::new(x, y, z))
}

/// Points equidistant from three vertices, one per sampled height.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LocusPolyline {
    pub points: Vec<Point>,
    /// Heights of `points`, strictly increasing.
    pub parameterization: Vec<f64>,
}

/// Outcome of [`equidistant_locus`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocusResult {
    pub locus: LocusPolyline,
    /// Sampled heights where no solution was found.
    pub omitted: Vec<f64>,
    /// Largest `|residual|` of the third pair over the returned points.
    pub max_third_residual: f64,
}

impl LocusResult {
    pub fn is_empty(&self) -> bool {
        self.locus.points.is_empty()
    }
}

const LOCUS_GRID: usize = 21;
const LOCUS_GRID_STARTS: usize = 8;

/// Intersection of the bisectors of `(a1, a2)` and `(a1, a3)` sampled at `samples`
/// heights across `z_range`.
///
/// Each slice is a 2×2 Newton solve in `(x, y)`. The first slice solved is the
/// one nearest the mean vertex height, seeded from a coarse grid; the others
/// continue outwards warm-started from their neighbour and fall back to the
/// grid if that fails.
pub fn equidistant_locus(
    a1: Point,
    a2: Point,
    a3: Point,
    z_range: (f64, f64),
    samples: usize,
) -> Result<LocusResult> {
    let s12 = BisectorSpec::new(a1, a2)?;
    let s13 = BisectorSpec::new(a1, a3)?;
    BisectorSpec::new(a2, a3)?;
    let (z0, z1) = z_range;
    if !(z0.is_finite() && z1.is_finite() && z0 <= z1) || samples == 0 {
        return Err(SolError::Domain(format!(
            "bad locus range {z_range:?} with {samples} samples"
        )));
    }
    if samples > 1 && z0 == z1 {
        return Err(SolError::Domain(
            "several samples need a nonempty range".into(),
        ));
    }
    let zs = linspace(z0, z1, samples);
    let opts = NewtonOptions::default();

    let residuals = |z: f64| {
        move |v: &[f64; 2]| -> Result<[f64; 2]> {
            let x = Point::new(v[0], v[1], z);
            Ok([
                pair_residual(s12.p1, s12.p2, x)?,
                pair_residual(s13.p1, s13.p2, x)?,
            ])
        }
    };

    let verts = [a1, a2, a3];
    let cx = verts.iter().map(|p| p.x).sum::<f64>() / 3.0;
    let cy = verts.iter().map(|p| p.y).sum::<f64>() / 3.0;
    let spread = verts
        .iter()
        .map(|p| (p.x - cx).abs().max((p.y - cy).abs()))
        .fold(0.0f64, f64::max);
    let half = (2.0 * spread).max(1.0);

    let grid_starts = |z: f64| -> Vec<[f64; 2]> {
        let f = residuals(z);
        let axis = linspace(-half, half, LOCUS_GRID);
        let mut ranked: Vec<(f64, [f64; 2])> = Vec::new();
        for &u in &axis {
            for &v in &axis {
                let s = [cx + u, cy + v];
                if let Ok(r) = f(&s) {
                    let m = r[0].abs().max(r[1].abs());
                    if m.is_finite() {
                        ranked.push((m, s));
                    }
                }
            }
        }
        ranked.sort_by(|p, q| p.0.total_cmp(&q.0));
        ranked
            .into_iter()
            .take(LOCUS_GRID_STARTS)
            .map(|(_, s)| s)
            .collect()
    };

    let solve = |z: f64, warm: Option<[f64; 2]>| -> Option<[f64; 2]> {
        let f = residuals(z);
        if let Some(w) = warm {
            if let Ok(rep) = first_of_starts(&f, &[w], &opts) {
                return Some([rep.solution[0], rep.solution[1]]);
            }
        }
        first_of_starts(&f, &grid_starts(z), &opts)
            .ok()
            .map(|rep| [rep.solution[0], rep.solution[1]])
    };

    let zmean = verts.iter().map(|p| p.z).sum::<f64>() / 3.0;
    let first = (0..zs.len())
        .min_by(|&i, &j| (zs[i] - zmean).abs().total_cmp(&(zs[j] - zmean).abs()))
        .unwrap_or(0);
    let mut found: Vec<Option<[f64; 2]>> = vec![None; zs.len()];
    found[first] = solve(zs[first], None);
    let mut warm = found[first];
    for k in first + 1..zs.len() {
        found[k] = solve(zs[k], warm);
        warm = found[k].or(warm);
    }
    warm = found[first];
    for k in (0..first).rev() {
        found[k] = solve(zs[k], warm);
        warm = found[k].or(warm);
    }

    let mut locus = LocusPolyline::default();
    let mut omitted = Vec::new();
    let mut max_third_residual = 0.0f64;
    for (z, sol) in zs.iter().zip(found) {
        match sol {
            Some([x, y]) => {
                let p = Point::new(x, y, *z);
                let third = pair_residual(a2, a3, p)?.abs();
                max_third_residual = max_third_residual.max(third);
                locus.points.push(p);
                locus.parameterization.push(*z);
            }
            None => omitted.push(*z),
        }
    }
    Ok(LocusResult {
        locus,
        omitted,
        max_third_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::translation_distance;

    fn spec(a: f64, b: f64, c: f64) -> BisectorSpec {
        BisectorSpec::new(Point::ORIGIN, Point::new(a, b, c)).unwrap()
    }

    #[test]
    fn vertical_pair_midpoint() {
        let r = bisector_residual(&spec(0.0, 0.0, 2.0), Point::new(0.0, 0.0, 1.0)).unwrap();
        assert!(r.abs() < 1e-15);
    }

    #[test]
    fn endpoints_give_signed_pair_distance() {
        let s = spec(0.4, -0.7, 1.3);
        let d = translation_distance(s.p1, s.p2).unwrap();
        assert!((bisector_residual(&s, s.p1).unwrap() + d).abs() < 1e-12);
        assert!((bisector_residual(&s, s.p2).unwrap() - d).abs() < 1e-12);
    }

    #[test]
    fn positive_nearer_p2() {
        let s = spec(1.0, 2.0, 0.5);
        assert!(bisector_residual(&s, Point::new(0.9, 2.1, 0.6)).unwrap() > 0.0);
        assert!(bisector_residual(&s, Point::new(0.1, 0.0, -0.1)).unwrap() < 0.0);
    }

    #[test]
    fn base_plane_line_is_zero_set() {
        let p2 = Point::new(0.8, -1.3, 0.0);
        let s = BisectorSpec::new(Point::ORIGIN, p2).unwrap();
        for t in [-2.0, -0.5, 0.0, 0.3, 1.7] {
            // Points of xa + yb = (a²+b²)/2.
            let x = Point::new(0.4 + t * 1.3, -0.65 + t * 0.8, 0.0);
            assert!(base_plane_line(p2, x).abs() < 1e-15);
            let r = bisector_residual(&s, x).unwrap();
            assert!(r.abs() < 1e-14, "{r}");
        }
    }

    #[test]
    fn level_pair_polynomial_zero_set() {
        let p2 = Point::new(1.0, 1.0, 0.0);
        let s = BisectorSpec::new(Point::ORIGIN, p2).unwrap();
        for z in [-1.2f64, -0.3, 0.4, 1.1] {
            // e^{2z}(1-2x) + (1-2y) = 0.
            for x in [-1.0, 0.2, 0.9] {
                let y = 0.5 * (1.0 + (2.0 * z).exp() * (1.0 - 2.0 * x));
                let p = Point::new(x, y, z);
                assert!(level_pair_polynomial(p2, p).unwrap().abs() < 1e-13);
                assert!(bisector_residual(&s, p).unwrap().abs() < 1e-12);
            }
        }
        let off = Point::new(0.9, 0.9, 0.2);
        let sign_poly = level_pair_polynomial(p2, off).unwrap().signum();
        assert_eq!(sign_poly, -bisector_residual(&s, off).unwrap().signum());
    }

    #[test]
    fn branch_classification() {
        assert_eq!(bisector_branch(1.0, 0.5), BisectorBranch::Generic);
        assert_eq!(bisector_branch(1.0, 1.0), BisectorBranch::LevelOfP2);
        assert_eq!(bisector_branch(1.0, 0.0), BisectorBranch::BasePlane);
        assert_eq!(bisector_branch(0.0, 0.5), BisectorBranch::LevelPair);
        assert_eq!(
            bisector_branch(0.0, 0.0),
            BisectorBranch::LevelPairBasePlane
        );
    }

    #[test]
    fn special_levels_match_their_closed_forms() {
        let (a, b, c): (f64, f64, f64) = (0.7, -0.4, 0.9);
        let s = spec(a, b, c);
        let (x, y): (f64, f64) = (0.3, 1.1);
        // z = c.
        let rhs = c.abs() / c.exp_m1().abs()
            * ((x * c.exp()).powi(2) + c.exp_m1().powi(2) + y * y).sqrt();
        let lhs = ((x - a).powi(2) * (2.0 * c).exp() + (y - b).powi(2) * (-2.0 * c).exp()).sqrt();
        let r = bisector_residual(&s, Point::new(x, y, c)).unwrap();
        assert!((r - (rhs - lhs)).abs() < 1e-14);
        // z = 0.
        let lhs0 = c.abs() / c.exp_m1().abs()
            * ((a - x).powi(2) * (2.0 * c).exp() + c.exp_m1().powi(2) + (b - y).powi(2)).sqrt();
        let r0 = bisector_residual(&s, Point::new(x, y, 0.0)).unwrap();
        assert!((r0 - (x.hypot(y) - lhs0)).abs() < 1e-14);
    }

    #[test]
    fn generic_branch_matches_literal_form() {
        let (a, b, c): (f64, f64, f64) = (1.2, 0.3, -0.8);
        let (x, y, z): (f64, f64, f64) = (-0.4, 0.9, 0.6);
        let lhs = (c - z).abs() / (c.exp() - z.exp()).abs()
            * ((a - x).powi(2) * (2.0 * (c + z)).exp()
                + (c.exp() - z.exp()).powi(2)
                + (b - y).powi(2))
            .sqrt();
        let rhs = z.abs() / z.exp_m1().abs()
            * ((x * z.exp()).powi(2) + z.exp_m1().powi(2) + y * y).sqrt();
        let r = bisector_residual(&spec(a, b, c), Point::new(x, y, z)).unwrap();
        assert!((r - (rhs - lhs)).abs() < 1e-13);
    }

    #[test]
    fn seams_are_continuous() {
        let s = spec(0.5, -0.9, 1.4);
        for (x, y) in [(0.2, 0.1), (-1.0, 2.0)] {
            for seam in [0.0, 1.4] {
                let at = bisector_residual(&s, Point::new(x, y, seam)).unwrap();
                for eps in [1e-2, 1e-4, 1e-6, 1e-9] {
                    for sgn in [-1.0, 1.0] {
                        let r = bisector_residual(&s, Point::new(x, y, seam + sgn * eps)).unwrap();
                        assert!(
                            (r - at).abs() <= 10.0 * eps,
                            "seam {seam} eps {eps}: {r} vs {at}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn residual_requires_origin_p1() {
        let s = BisectorSpec::new(Point::new(1.0, 0.0, 0.0), Point::new(0.0, 1.0, 0.0)).unwrap();
        assert!(bisector_residual(&s, Point::ORIGIN).is_err());
        assert!(BisectorSpec::new(Point::ORIGIN, Point::ORIGIN).is_err());
    }

    #[test]
    fn pair_residual_matches_distance_difference() {
        let (p1, p2) = (Point::new(0.3, -0.2, 0.5), Point::new(-0.6, 0.8, -0.4));
        let x = Point::new(0.1, 0.4, 1.0);
        let direct = translation_distance(p1, x).unwrap() - translation_distance(p2, x).unwrap();
        assert!((pair_residual(p1, p2, x).unwrap() - direct).abs() < 1e-10);
    }

    #[test]
    fn membership_examples() {
        let p2 = Point::new(0.0, 0.0, 3.0);
        assert!(bisector_membership(Point::ORIGIN, p2, Point::new(0.0, 0.0, 1.5), 1e-9).unwrap());
        assert!(!bisector_membership(Point::ORIGIN, p2, Point::new(0.0, 0.0, 0.5), 1e-3).unwrap());
        assert!(bisector_membership(Point::ORIGIN, p2, Point::ORIGIN, 0.0).is_err());
    }

    #[test]
    fn planar_locus_symmetric_case() {
        let c =
            planar_locus_point(Point::new(1.0, 0.0, 0.0), Point::new(0.0, 1.0, 0.0), 0.0).unwrap();
        assert!(c.approx_eq(&Point::new(0.5, 0.5, 0.0), 1e-15));
    }

    #[test]
    fn planar_locus_is_equidistant() {
        let a2 = Point::new(1.0 / 3.0, 1.0 / 5.0, 0.0);
        let a3 = Point::new(0.5, -2.0 / 7.0, 0.0);
        for z in [-1.0, -0.25, 0.0, 0.6, 1.0] {
            let c = planar_locus_point(a2, a3, z).unwrap();
            assert!(pair_residual(Point::ORIGIN, a2, c).unwrap().abs() < 1e-12);
            assert!(pair_residual(Point::ORIGIN, a3, c).unwrap().abs() < 1e-12);
            // Independent check with the polynomial forms.
            assert!(level_pair_polynomial(a2, c).unwrap().abs() < 1e-12);
            assert!(level_pair_polynomial(a3, c).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn planar_locus_rejects_collinear() {
        let err = planar_locus_point(Point::new(1.0, 1.0, 0.0), Point::new(2.0, 2.0, 0.0), 0.3);
        assert!(matches!(err, Err(SolError::DegenerateTriangle(_))));
    }

    #[test]
    fn numeric_locus_tracks_closed_form() {
        let a2 = Point::new(1.0 / 3.0, 1.0 / 5.0, 0.0);
        let a3 = Point::new(0.5, -2.0 / 7.0, 0.0);
        let res = equidistant_locus(Point::ORIGIN, a2, a3, (-1.0, 1.0), 21).unwrap();
        assert!(res.omitted.is_empty());
        assert_eq!(res.locus.points.len(), 21);
        for p in &res.locus.points {
            let c = planar_locus_point(a2, a3, p.z).unwrap();
            assert!(p.max_norm_diff(&c) < 1e-8, "{p:?} vs {c:?}");
        }
        assert!(res.max_third_residual <= LOCUS_TOLERANCE);
    }

    #[test]
    fn spatial_locus_points_are_equidistant() {
        let a2 = Point::new(2.0, 1.0, -0.75);
        let a3 = Point::new(1.0, -0.5, 2.0 / 3.0);
        let res = equidistant_locus(Point::ORIGIN, a2, a3, (-0.5, 1.0), 16).unwrap();
        assert!(!res.is_empty());
        assert!(res.locus.parameterization.windows(2).all(|w| w[0] < w[1]));
        for p in &res.locus.points {
            let d1 = translation_distance(Point::ORIGIN, *p).unwrap();
            assert!((d1 - translation_distance(a2, *p).unwrap()).abs() <= 1e-6);
            assert!((d1 - translation_distance(a3, *p).unwrap()).abs() <= 1e-6);
        }
    }

    #[test]
    fn vertical_bisector_mesh_passes_midpoint_level() {
        let region = Region::around(Point::ORIGIN, 2.0).unwrap();
        let mesh = bisector_mesh(
            Point::ORIGIN,
            Point::new(0.0, 0.0, 2.0),
            &region,
            &Resolution::new(21, 21, 21).unwrap(),
        )
        .unwrap();
        assert!(!mesh.is_empty());
        assert!(mesh.max_abs_attribution() <= 1e-10);
        assert!(mesh.vertices.iter().any(|v| v.z == 1.0));
    }

    #[test]
    fn planar_pair_mesh_slice_is_euclidean_line() {
        let p2 = Point::new(1.0, 1.0, 0.0);
        let region = Region::from_bounds([-2.0, 2.0, -2.0, 2.0, -1.0, 1.0]).unwrap();
        let mesh = bisector_mesh(
            Point::ORIGIN,
            p2,
            &region,
            &Resolution::new(25, 25, 11).unwrap(),
        )
        .unwrap();
        let base: Vec<_> = mesh.vertices.iter().filter(|v| v.z == 0.0).collect();
        assert!(base.len() > 5);
        for v in base {
            assert!(base_plane_line(p2, *v).abs() < 1e-10);
        }
    }

    #[test]
    fn mesh_of_translated_pair_is_on_bisector() {
        let p1 = Point::new(0.2, -0.1, 0.3);
        let p2 = Point::new(-0.8, 0.9, 0.8);
        let region = Region::around(Point::new(-0.3, 0.4, 0.55), 1.2).unwrap();
        let mesh = bisector_mesh(p1, p2, &region, &Resolution::new(15, 15, 9).unwrap()).unwrap();
        assert!(!mesh.is_empty());
        for v in &mesh.vertices {
            assert!(bisector_membership(p1, p2, *v, 1e-8).unwrap());
        }
    }
}
