//! Translation curves and the translation distance.
//!
//! A translation curve from the origin with unit initial direction
//! `(cosθ cosφ, cosθ sinφ, sinθ)` is
//!
//! ```text
//! x(s) = -cotθ cosφ (e^{-s sinθ} - 1)
//! y(s) =  cotθ sinφ (e^{ s sinθ} - 1)
//! z(s) =  s sinθ
//! ```
//!
//! degenerating to the straight line `(s cosφ, s sinφ, 0)` when `θ = 0`. Curves
//! through other points are translates of these. The translation distance of
//! two points is the arc length of the curve joining them.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SolError};
use crate::group::{exp_checked, translate_from_origin, translate_to_origin, Point, TangentVector};
use crate::solve::{damped_newton, NewtonOptions};

/// Longitude, altitude and arc length of a translation curve from the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveParams {
    /// Longitude in `(-π, π]`.
    pub phi: f64,
    /// Altitude in `[-π/2, π/2]`.
    pub theta: f64,
    /// Arc length, `t >= 0`.
    pub t: f64,
}

impl CurveParams {
    pub fn new(phi: f64, theta: f64, t: f64) -> Result<Self> {
        if !(phi > -PI && phi <= PI) {
            return Err(SolError::Domain(format!(
                "longitude {phi} outside (-pi, pi]"
            )));
        }
        if !(-FRAC_PI_2..=FRAC_PI_2).contains(&theta) {
            return Err(SolError::Domain(format!(
                "altitude {theta} outside [-pi/2, pi/2]"
            )));
        }
        if !(t >= 0.0 && t.is_finite()) {
            return Err(SolError::Domain(format!(
                "arc length {t} must be finite and >= 0"
            )));
        }
        Ok(Self { phi, theta, t })
    }

    /// Unit initial tangent at the origin.
    pub fn direction(&self) -> TangentVector {
        TangentVector::from_angles(self.phi, self.theta)
    }

    /// Curve point at arc length `self.t`.
    pub fn endpoint(&self) -> Result<Point> {
        curve_point(self, self.t)
    }
}

/// A translation segment from `start` to `end`; `params` describe the segment
/// after moving `start` to the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSegment {
    pub start: Point,
    pub params: CurveParams,
    pub end: Point,
}

impl CurveSegment {
    pub fn between(start: Point, end: Point) -> Result<Self> {
        let params = curve_params(translate_to_origin(start, end)?)?;
        Ok(Self { start, params, end })
    }

    pub fn length(&self) -> f64 {
        self.params.t
    }

    /// Point at arc length `s` from `start`.
    pub fn point_at(&self, s: f64) -> Result<Point> {
        translate_from_origin(self.start, curve_point(&self.params, s)?)
    }
}

/// Sampled curve.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Polyline {
    pub points: Vec<Point>,
}

/// `(e^{s w} - 1) / w`, continuous through `w = 0` where it equals `s`.
pub(crate) fn expm1_ratio(s: f64, w: f64) -> Result<f64> {
    let k = s * w;
    exp_checked(k)?;
    if k.abs() < 1e-8 {
        Ok(s * (1.0 + 0.5 * k))
    } else {
        Ok(k.exp_m1() / w)
    }
}

/// Point at arc length `s` on the translation curve from the origin with the given direction.
pub fn curve_point(params: &CurveParams, s: f64) -> Result<Point> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(SolError::Domain(format!(
            "arc length {s} must be finite and >= 0"
        )));
    }
    let theta = params.theta;
    if theta.abs() == FRAC_PI_2 {
        return Ok(Point::new(0.0, 0.0, s * theta.signum()));
    }
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = params.phi.sin_cos();
    Ok(Point::new(
        ct * cp * expm1_ratio(s, -st)?,
        ct * sp * expm1_ratio(s, st)?,
        s * st,
    ))
}

fn normalize_phi(phi: f64) -> f64 {
    if phi <= -PI {
        phi + 2.0 * PI
    } else if phi > PI {
        phi - 2.0 * PI
    } else {
        phi
    }
}

/// `arccot` folded into `(-π/2, π/2]`; the `(0, π)` branch differs by `π` on negatives.
fn arccot_principal(v: f64) -> f64 {
    if v == 0.0 {
        FRAC_PI_2
    } else {
        (1.0 / v).atan()
    }
}

struct Candidate {
    phi: f64,
    theta: f64,
    t: f64,
}

impl Candidate {
    fn as_params(&self) -> Option<CurveParams> {
        CurveParams::new(normalize_phi(self.phi), self.theta, self.t).ok()
    }
}

/// Case `b != 0, c != 0`: `φ = arccot(-(a/b)(e^c-1)/(e^{-c}-1))`, both `(0, π)` and
/// `(-π, 0)` representatives, then `θ = arccot(b / (sinφ (e^c-1)))`, `t = c / sinθ`.
fn general_candidates(a: f64, b: f64, c: f64) -> Vec<Candidate> {
    let em1 = c.exp_m1();
    let cot_phi = -(a / b) * em1 / (-c).exp_m1();
    // arccot on (0, π): sinφ > 0, cosφ has the sign of the argument.
    let norm = cot_phi.hypot(1.0);
    let (sin0, cos0) = (1.0 / norm, cot_phi / norm);
    let phi0 = sin0.atan2(cos0);
    [(phi0, sin0), (phi0 - PI, -sin0)]
        .into_iter()
        .map(|(phi, sin_phi)| {
            let theta = arccot_principal(b / (sin_phi * em1));
            Candidate {
                phi,
                theta,
                t: c / theta.sin(),
            }
        })
        .collect()
}

/// Case `b = 0, c != 0`: `φ ∈ {0, π}`, `θ = arccot(∓a / (e^{-c}-1))`.
fn in_xz_plane_candidates(a: f64, c: f64) -> Vec<Candidate> {
    let em1 = (-c).exp_m1();
    [(0.0, -1.0), (PI, 1.0)]
        .into_iter()
        .map(|(phi, sign)| {
            let theta = arccot_principal(sign * a / em1);
            Candidate {
                phi,
                theta,
                t: c / theta.sin(),
            }
        })
        .collect()
}

fn roundtrip_error(params: &CurveParams, p: Point) -> f64 {
    curve_point(params, params.t)
        .map(|q| q.max_norm_diff(&p))
        .unwrap_or(f64::INFINITY)
}

/// Parameters `(φ, θ, t)` of the translation curve from the origin to `p`.
///
/// The analytic branches are selected by a forward roundtrip; if neither
/// reproduces `p`, the best candidate is polished by a damped Newton solve in
/// `(φ, θ)`.
pub fn curve_params(p: Point) -> Result<CurveParams> {
    if !p.is_finite() {
        return Err(SolError::DegenerateInput(format!("non-finite point {p:?}")));
    }
    if p.is_origin() {
        return Err(SolError::DegenerateInput(
            "curve parameters of the origin are undefined".into(),
        ));
    }
    let Point { x: a, y: b, z: c } = p;
    exp_checked(c)?;

    if c == 0.0 {
        // arccos(a / √(a²+b²)) carrying the sign of b
        let t = a.hypot(b);
        return Ok(CurveParams {
            phi: normalize_phi(b.atan2(a)),
            theta: 0.0,
            t,
        });
    }
    if a == 0.0 && b == 0.0 {
        return Ok(CurveParams {
            phi: 0.0,
            theta: FRAC_PI_2.copysign(c),
            t: c.abs(),
        });
    }

    let candidates = if b != 0.0 {
        general_candidates(a, b, c)
    } else {
        in_xz_plane_candidates(a, c)
    };
    let tol = crate::group::POINT_TOLERANCE * a.abs().max(b.abs()).max(c.abs()).max(1.0);

    let mut best: Option<(CurveParams, f64)> = None;
    for cand in &candidates {
        if !(cand.t > 0.0) {
            continue;
        }
        if let Some(params) = cand.as_params() {
            let err = roundtrip_error(&params, p);
            if best.is_none_or(|(_, e)| err < e) {
                best = Some((params, err));
            }
        }
    }
    if let Some((params, err)) = best {
        if err <= tol {
            return Ok(params);
        }
    }

    if let Some(refined) = refine(p, best.map(|(params, _)| params)) {
        if roundtrip_error(&refined, p) <= tol {
            return Ok(refined);
        }
    }
    Err(SolError::BranchResolution {
        point: p,
        candidates: candidates.iter().map(|c| [c.phi, c.theta, c.t]).collect(),
        best_error: best.map_or(f64::INFINITY, |(_, e)| e),
    })
}

/// Newton polish on `(φ, θ)` with `t = c / sinθ`, so only `x` and `y` are matched.
fn refine(p: Point, seed: Option<CurveParams>) -> Option<CurveParams> {
    let (phi0, theta0) = match seed {
        Some(s) => (s.phi, s.theta),
        None => (
            p.y.atan2(p.x),
            (p.z / p.model_distance(&Point::ORIGIN)).asin(),
        ),
    };
    let c = p.z;
    let residual = |v: &[f64; 2]| -> Result<[f64; 2]> {
        let s = v[1].sin();
        if s == 0.0 || s.signum() != c.signum() {
            return Err(SolError::Domain("altitude sign mismatch".into()));
        }
        let params = CurveParams {
            phi: v[0],
            theta: v[1].clamp(-FRAC_PI_2, FRAC_PI_2),
            t: c / s,
        };
        let q = curve_point(&params, params.t)?;
        Ok([q.x - p.x, q.y - p.y])
    };
    let opts = NewtonOptions {
        tolerance: 1e-13,
        ..NewtonOptions::default()
    };
    let rep = damped_newton(residual, [phi0, theta0], &opts);
    let theta = rep.solution[1].clamp(-FRAC_PI_2, FRAC_PI_2);
    let params = CurveParams {
        phi: normalize_phi(rep.solution[0]),
        theta,
        t: c / theta.sin(),
    };
    (params.t > 0.0 && params.t.is_finite()).then_some(params)
}

/// Translation distance `d(a, b)`: arc length of the translation curve from `a` to `b`.
pub fn translation_distance(a: Point, b: Point) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let moved = translate_to_origin(a, b)?;
    if moved.is_origin() {
        return Ok(0.0);
    }
    Ok(curve_params(moved)?.t)
}

/// `samples` points along the translation curve from `a` to `b`, endpoints included.
pub fn curve_segment(a: Point, b: Point, samples: usize) -> Result<Polyline> {
    if samples < 2 {
        return Err(SolError::Domain(format!(
            "need at least 2 samples, got {samples}"
        )));
    }
    if a == b {
        return Err(SolError::DegenerateInput(
            "segment endpoints coincide".into(),
        ));
    }
    let seg = CurveSegment::between(a, b)?;
    let last = samples - 1;
    let mut points = Vec::with_capacity(samples);
    for k in 0..samples {
        let p = match k {
            0 => a,
            k if k == last => b,
            k => seg.point_at(seg.length() * k as f64 / last as f64)?,
        };
        points.push(p);
    }
    Ok(Polyline { points })
}
