//! Translation spheres and balls.
//!
//! The sphere of radius `r` about the origin is the image of
//! `(φ, θ) ↦ curve_point((φ, θ, r), r)`. Its sections by the planes
//! `z = r sinθ` are ellipses with semi-axes
//!
//! ```text
//! k1 = |cotθ (e^{-r sinθ} - 1)|,   k2 = |cotθ (e^{r sinθ} - 1)|
//! ```
//!
//! and the ball volume is
//!
//! ```text
//! Vol(r) = 4π ∫_0^r ∫_{-π/2}^{π/2} cosθ (cosh(ρ sinθ) - 1) / sin²θ dθ dρ.
//! ```

use std::cell::Cell;
use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::curves::{curve_point, CurveParams};
use crate::error::{Result, SolError};
use crate::group::{translate_from_origin, Point};
use crate::mesh::TriangleMesh;
use crate::quadrature::{integrate, QuadOptions};

/// `|ρ sinθ|` below which the volume integrand uses its series.
pub const SERIES_THRESHOLD: f64 = 1e-4;
/// Relative tolerance of [`ball_volume`].
pub const VOLUME_TOLERANCE: f64 = 1e-10;

/// Sphere of positive radius about a center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereSpec {
    pub radius: f64,
    pub center: Point,
}

impl SphereSpec {
    pub fn new(radius: f64, center: Point) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(SolError::Domain(format!(
                "radius {radius} must be positive"
            )));
        }
        if !center.is_finite() {
            return Err(SolError::DegenerateInput(format!(
                "non-finite center {center:?}"
            )));
        }
        Ok(Self { radius, center })
    }

    pub fn at_origin(radius: f64) -> Result<Self> {
        Self::new(radius, Point::ORIGIN)
    }
}

/// Point of the origin sphere of radius `r` with longitude `phi` and altitude `theta`.
pub fn sphere_point(r: f64, phi: f64, theta: f64) -> Result<Point> {
    if !(r > 0.0) {
        return Err(SolError::Domain(format!("radius {r} must be positive")));
    }
    let params = CurveParams::new(phi, theta, r)?;
    curve_point(&params, r)
}

/// Section of the origin sphere by the plane `z = r sinθ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionEllipse {
    pub theta: f64,
    pub z_level: f64,
    /// Semi-axis along `x`.
    pub k1: f64,
    /// Semi-axis along `y`.
    pub k2: f64,
}

/// `|cotθ (e^{s r sinθ} - 1)|` for `s = ±1`, with the `θ → 0` limit `r`.
fn semiaxis(r: f64, theta: f64, sign: f64) -> f64 {
    let st = theta.sin();
    let k = sign * r * st;
    if k.abs() < 1e-8 {
        r * theta.cos() * (1.0 + 0.5 * k)
    } else {
        (theta.cos() * k.exp_m1() / st).abs()
    }
}

pub fn section_semiaxes(r: f64, theta: f64) -> Result<SectionEllipse> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(SolError::Domain(format!("radius {r} must be positive")));
    }
    if !(theta.abs() <= FRAC_PI_2) {
        return Err(SolError::Domain(format!(
            "altitude {theta} outside [-pi/2, pi/2]"
        )));
    }
    crate::group::Point::checked(0.0, 0.0, r)?;
    let z_level = r * theta.sin();
    if theta.abs() == FRAC_PI_2 {
        return Ok(SectionEllipse {
            theta,
            z_level,
            k1: 0.0,
            k2: 0.0,
        });
    }
    Ok(SectionEllipse {
        theta,
        z_level,
        k1: semiaxis(r, theta, -1.0),
        k2: semiaxis(r, theta, 1.0),
    })
}

/// Longitudes of a mesh ring, all in `(-π, π]`.
fn ring_longitudes(n_phi: usize) -> Vec<f64> {
    (0..n_phi)
        .map(|i| PI - 2.0 * PI * i as f64 / n_phi as f64)
        .collect()
}

/// Closed parametric mesh of the sphere: `n_theta - 1` rings of `n_phi`
/// vertices plus the two poles joined by triangle fans.
pub fn sphere_mesh(spec: &SphereSpec, n_phi: usize, n_theta: usize) -> Result<TriangleMesh> {
    if n_phi < 3 || n_theta < 3 {
        return Err(SolError::Domain(format!(
            "sphere resolution must be at least 3x3, got {n_phi}x{n_theta}"
        )));
    }
    let r = spec.radius;
    let place = |p: Point| translate_from_origin(spec.center, p);
    let phis = ring_longitudes(n_phi);
    let mut vertices = vec![place(sphere_point(r, 0.0, -FRAC_PI_2)?)?];
    for j in 1..n_theta {
        let theta = -FRAC_PI_2 + PI * j as f64 / n_theta as f64;
        for &phi in &phis {
            vertices.push(place(sphere_point(r, phi, theta)?)?);
        }
    }
    vertices.push(place(sphere_point(r, 0.0, FRAC_PI_2)?)?);

    let rings = n_theta - 1;
    let top = vertices.len() - 1;
    let at = |ring: usize, i: usize| 1 + ring * n_phi + i % n_phi;
    let mut triangles = Vec::with_capacity(2 * n_phi * rings);
    for i in 0..n_phi {
        triangles.push([0, at(0, i), at(0, i + 1)]);
    }
    for ring in 0..rings - 1 {
        for i in 0..n_phi {
            let (a, b) = (at(ring, i), at(ring, i + 1));
            let (c, d) = (at(ring + 1, i), at(ring + 1, i + 1));
            triangles.push([a, c, b]);
            triangles.push([b, c, d]);
        }
    }
    for i in 0..n_phi {
        triangles.push([top, at(rings - 1, i + 1), at(rings - 1, i)]);
    }
    let attribution = vec![0.0; vertices.len()];
    let mesh = TriangleMesh {
        vertices,
        triangles,
        attribution,
    };
    mesh.validate()?;
    Ok(mesh)
}

/// Inner integrand `cosθ (cosh(ρ sinθ) - 1) / sin²θ`.
pub fn volume_integrand(rho: f64, theta: f64) -> f64 {
    let st = theta.sin();
    let u = rho * st;
    if u.abs() < SERIES_THRESHOLD {
        0.5 * rho * rho * theta.cos() * (1.0 + u * u / 12.0)
    } else {
        let s = (0.5 * u).sinh();
        theta.cos() * 2.0 * s * s / (st * st)
    }
}

/// Ball volume with its quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub radius: f64,
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Volume of the translation ball of radius `r` by nested adaptive quadrature.
///
/// `r = 0` gives 0; negative or non-finite radii are rejected.
pub fn ball_volume(r: f64) -> Result<VolumeEstimate> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(SolError::Domain(format!(
            "radius {r} must be finite and >= 0"
        )));
    }
    if r == 0.0 {
        return Ok(VolumeEstimate {
            radius: r,
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    crate::group::Point::checked(0.0, 0.0, r)?;
    let inner_opts = QuadOptions {
        rel_tol: 1e-13,
        ..QuadOptions::default()
    };
    let outer_opts = QuadOptions {
        rel_tol: VOLUME_TOLERANCE,
        ..QuadOptions::default()
    };
    let inner_rel = Cell::new(0.0f64);
    let evals = Cell::new(0usize);
    let failed = Cell::new(None);
    let outer = integrate(
        |rho| match integrate(
            |t| volume_integrand(rho, t),
            -FRAC_PI_2,
            FRAC_PI_2,
            &inner_opts,
        ) {
            Ok(q) => {
                if q.value != 0.0 {
                    inner_rel.set(inner_rel.get().max(q.error / q.value.abs()));
                }
                evals.set(evals.get() + q.evaluations);
                q.value
            }
            Err(e) => {
                failed.set(Some(e));
                f64::NAN
            }
        },
        0.0,
        r,
        &outer_opts,
    );
    if let Some(e) = failed.take() {
        return Err(e);
    }
    let outer = outer?;
    let value = 4.0 * PI * outer.value;
    Ok(VolumeEstimate {
        radius: r,
        value,
        error: 4.0 * PI * outer.error + inner_rel.get() * value.abs(),
        evaluations: evals.get(),
    })
}
