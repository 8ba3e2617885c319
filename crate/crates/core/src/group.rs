//! Group law, isometries and metric of Sol.
//!
//! Points are stored affinely as `(x, y, z)`; the homogeneous leading `1` of
//! the projective model is implicit. Isometries are 4×4 matrices acting on
//! row vectors `(1, x, y, z)` from the right, so `p ↦ (1, p) · M`, and the
//! composition "first `A`, then `B`" is the matrix product `A · B`.
//!
//! The group law is
//!
//! ```text
//! (a, b, c) · (x, y, z) = (x + a e^{-z}, y + b e^{z}, z + c)
//! ```
//!
//! and the left-invariant metric is `ds² = e^{2z} dx² + e^{-2z} dy² + dz²`.
//!
//! # Stabilizer enumeration
//!
//! The stabilizer of the origin is dihedral of order 8, generated by
//! `g1: (x, y, z) ↦ (x, -y, z)` and `g2: (x, y, z) ↦ (y, x, -z)`.
//! [`stabilizer_element`] uses the fixed order
//!
//! | index | element       | action on `(x, y, z)` |
//! |-------|---------------|-----------------------|
//! | 0     | `Id`          | `( x,  y,  z)`        |
//! | 1     | `g1`          | `( x, -y,  z)`        |
//! | 2     | `g2`          | `( y,  x, -z)`        |
//! | 3     | `g1 g2`       | `(-y,  x, -z)`        |
//! | 4     | `(g1 g2)^2`   | `(-x, -y,  z)`        |
//! | 5     | `(g1 g2)^3`   | `( y, -x, -z)`        |
//! | 6     | `g1 (g1 g2)^2`| `(-x,  y,  z)`        |
//! | 7     | `g2 (g1 g2)^2`| `(-y, -x, -z)`        |
//!
//! Indices 0, 3, 4, 5 form the rotation subgroup of order 4.

use nalgebra::{Matrix3, Matrix4, RowVector4};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SolError};

/// Largest `|z|` for which `e^{±z}` (and `e^{±2z}`) are evaluated.
pub const OVERFLOW_LIMIT: f64 = 700.0;

/// Default max-norm tolerance for treating two points as equal.
pub const POINT_TOLERANCE: f64 = 1e-9;

/// Number of elements in the stabilizer of the origin.
pub const STABILIZER_ORDER: usize = 8;

/// `e^z`, or [`SolError::DomainOverflow`] when `|z|` exceeds [`OVERFLOW_LIMIT`].
pub(crate) fn exp_checked(z: f64) -> Result<f64> {
    if !z.is_finite() {
        return Err(SolError::Domain(format!("non-finite exponent {z}")));
    }
    if z.abs() > OVERFLOW_LIMIT {
        return Err(SolError::DomainOverflow {
            z,
            limit: OVERFLOW_LIMIT,
        });
    }
    Ok(z.exp())
}

fn check_level(z: f64) -> Result<()> {
    exp_checked(z).map(|_| ())
}

/// A point of Sol in affine model coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point {
    pub const ORIGIN: Point = Point {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Like [`Point::new`] but rejects non-finite coordinates.
    pub fn checked(x: f64, y: f64, z: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() && z.is_finite() {
            Ok(Self { x, y, z })
        } else {
            Err(SolError::DegenerateInput(format!(
                "non-finite coordinates ({x}, {y}, {z})"
            )))
        }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn is_origin(&self) -> bool {
        self.x == 0.0 && self.y == 0.0 && self.z == 0.0
    }

    /// Max-norm of the coordinate difference.
    pub fn max_norm_diff(&self, other: &Point) -> f64 {
        (self.x - other.x)
            .abs()
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }

    /// Euclidean distance in the model (not a Sol distance).
    pub fn model_distance(&self, other: &Point) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn approx_eq(&self, other: &Point, tol: f64) -> bool {
        self.max_norm_diff(other) <= tol
    }
}

impl From<[f64; 3]> for Point {
    fn from(c: [f64; 3]) -> Self {
        Point::new(c[0], c[1], c[2])
    }
}

/// Tangent vector in the model coordinate frame.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TangentVector {
    pub u: f64,
    pub v: f64,
    pub w: f64,
}

impl TangentVector {
    pub const fn new(u: f64, v: f64, w: f64) -> Self {
        Self { u, v, w }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.u, self.v, self.w]
    }

    /// Unit direction with longitude `phi` and altitude `theta`.
    pub fn from_angles(phi: f64, theta: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self::new(ct * cp, ct * sp, st)
    }
}

/// Diagonal metric tensor at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricTensor {
    pub g11: f64,
    pub g22: f64,
    pub g33: f64,
}

impl MetricTensor {
    pub fn apply(&self, a: &TangentVector, b: &TangentVector) -> f64 {
        self.g11 * a.u * b.u + self.g22 * a.v * b.v + self.g33 * a.w * b.w
    }
}

/// A collineation of the model in affine form, acting on rows from the right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolIsometry {
    m: Matrix4<f64>,
}

impl SolIsometry {
    pub fn identity() -> Self {
        Self {
            m: Matrix4::identity(),
        }
    }

    /// Wraps a matrix after checking the affine form (first column `(1, 0, 0, 0)ᵀ`).
    pub fn from_matrix(m: Matrix4<f64>) -> Result<Self> {
        let affine = m[(0, 0)] == 1.0 && m[(1, 0)] == 0.0 && m[(2, 0)] == 0.0 && m[(3, 0)] == 0.0;
        if !affine {
            return Err(SolError::Domain(
                "isometry matrix must have first column (1, 0, 0, 0)".into(),
            ));
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(SolError::Domain(
                "isometry matrix has non-finite entries".into(),
            ));
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.m
    }

    /// Lower-right 3×3 block.
    pub fn linear_block(&self) -> Matrix3<f64> {
        self.m.fixed_view::<3, 3>(1, 1).into_owned()
    }

    /// The isometry "first `self`, then `next`".
    pub fn then(&self, next: &SolIsometry) -> SolIsometry {
        SolIsometry { m: self.m * next.m }
    }

    pub fn inverse(&self) -> Result<SolIsometry> {
        let inv = self
            .m
            .try_inverse()
            .ok_or_else(|| SolError::Domain("singular isometry matrix".into()))?;
        // Re-pin the affine column against round-off.
        let mut m = inv;
        m[(0, 0)] = 1.0;
        m[(1, 0)] = 0.0;
        m[(2, 0)] = 0.0;
        m[(3, 0)] = 0.0;
        Ok(SolIsometry { m })
    }

    pub fn apply(&self, p: Point) -> Point {
        apply_isometry(self, p)
    }
}

/// Group product `p · q`.
pub fn sol_multiply(p: Point, q: Point) -> Result<Point> {
    let em = exp_checked(-q.z)?;
    let ep = exp_checked(q.z)?;
    Ok(Point::new(q.x + p.x * em, q.y + p.y * ep, q.z + p.z))
}

/// Group inverse `(-x e^{z}, -y e^{-z}, -z)`.
pub fn sol_inverse(p: Point) -> Result<Point> {
    let ep = exp_checked(p.z)?;
    let em = exp_checked(-p.z)?;
    Ok(Point::new(-p.x * ep, -p.y * em, -p.z))
}

/// Conjugate `by⁻¹ · p · by`; the third coordinate of `p` is preserved.
pub fn sol_conjugate(p: Point, by: Point) -> Result<Point> {
    check_level(p.z)?;
    let ez = exp_checked(by.z)?;
    let emz = exp_checked(-by.z)?;
    let x = -by.x * (-p.z).exp_m1() + p.x * emz;
    let y = -by.y * p.z.exp_m1() + p.y * ez;
    Ok(Point::new(x, y, p.z))
}

/// Translation `p' ↦ p' · p` carrying the origin to `p`.
pub fn translation_isometry(p: Point) -> Result<SolIsometry> {
    let em = exp_checked(-p.z)?;
    let ep = exp_checked(p.z)?;
    #[rustfmt::skip]
    let m = Matrix4::new(
        1.0, p.x, p.y, p.z,
        0.0, em,  0.0, 0.0,
        0.0, 0.0, ep,  0.0,
        0.0, 0.0, 0.0, 1.0,
    );
    Ok(SolIsometry { m })
}

/// Closed-form inverse of [`translation_isometry`].
pub fn translation_isometry_inverse(p: Point) -> Result<SolIsometry> {
    let em = exp_checked(-p.z)?;
    let ep = exp_checked(p.z)?;
    #[rustfmt::skip]
    let m = Matrix4::new(
        1.0, -p.x * ep, -p.y * em, -p.z,
        0.0, ep,        0.0,       0.0,
        0.0, 0.0,       em,        0.0,
        0.0, 0.0,       0.0,       1.0,
    );
    Ok(SolIsometry { m })
}

/// Image of `x` under the inverse translation of `p`: `((x-a)e^{c}, (y-b)e^{-c}, z-c)`.
///
/// Equivalent to `apply_isometry(&translation_isometry_inverse(p)?, x)` without
/// building the matrix.
pub fn translate_to_origin(p: Point, x: Point) -> Result<Point> {
    let ep = exp_checked(p.z)?;
    let em = exp_checked(-p.z)?;
    Ok(Point::new((x.x - p.x) * ep, (x.y - p.y) * em, x.z - p.z))
}

/// Image of `x` under the translation of `p`: `x · p`.
pub fn translate_from_origin(p: Point, x: Point) -> Result<Point> {
    sol_multiply(x, p)
}

fn block_diag(l: Matrix3<f64>) -> Matrix4<f64> {
    let mut m = Matrix4::identity();
    m.fixed_view_mut::<3, 3>(1, 1).copy_from(&l);
    m
}

fn generator_one() -> Matrix3<f64> {
    Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, -1.0, 1.0))
}

#[rustfmt::skip]
fn generator_two() -> Matrix3<f64> {
    Matrix3::new(
        0.0, 1.0, 0.0,
        1.0, 0.0, 0.0,
        0.0, 0.0, -1.0,
    )
}

/// One of the eight origin-fixing isometries, in the order documented at module level.
pub fn stabilizer_element(index: usize) -> Result<SolIsometry> {
    let g1 = generator_one();
    let g2 = generator_two();
    let r = g1 * g2;
    let l = match index {
        0 => Matrix3::identity(),
        1 => g1,
        2 => g2,
        3 => r,
        4 => r * r,
        5 => r * r * r,
        6 => g1 * r * r,
        7 => g2 * r * r,
        _ => {
            return Err(SolError::Domain(format!(
                "stabilizer index {index} out of range 0..{STABILIZER_ORDER}"
            )))
        }
    };
    Ok(SolIsometry { m: block_diag(l) })
}

/// All eight stabilizer elements in index order.
pub fn stabilizer_elements() -> Vec<SolIsometry> {
    (0..STABILIZER_ORDER)
        .map(|i| stabilizer_element(i).expect("index in range"))
        .collect()
}

/// `(1, p) · M`, renormalised on the leading coordinate.
pub fn apply_isometry(iso: &SolIsometry, p: Point) -> Point {
    let row = RowVector4::new(1.0, p.x, p.y, p.z) * iso.m;
    let h = row[0];
    Point::new(row[1] / h, row[2] / h, row[3] / h)
}

/// Metric tensor `diag(e^{2z}, e^{-2z}, 1)` at `p`.
pub fn metric_at(p: Point) -> Result<MetricTensor> {
    check_level(p.z)?;
    Ok(MetricTensor {
        g11: (2.0 * p.z).exp(),
        g22: (-2.0 * p.z).exp(),
        g33: 1.0,
    })
}

/// Inner product of two tangent vectors based at `at`.
pub fn inner_product(va: TangentVector, vb: TangentVector, at: Point) -> Result<f64> {
    Ok(metric_at(at)?.apply(&va, &vb))
}
