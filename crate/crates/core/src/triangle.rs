//! Translation triangles: sides, interior angles and equilateral vertices.
//!
//! Sides are translation curve segments. The interior angle at a vertex is the
//! angle between the outgoing unit tangents of the two sides, measured after
//! translating the vertex to the origin where the metric is Euclidean.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::{curve_params, translation_distance};
use crate::error::{Result, SolError};
use crate::group::{translate_to_origin, Point, TangentVector};
use crate::mesh::linspace;
use crate::solve::{damped_newton, jacobian_conditioning, NewtonOptions, SolveReport};

/// Smallest accepted gap between a vertex and the curve through the other two.
pub const COLLINEARITY_TOLERANCE: f64 = 1e-9;
/// Sides closer than this count as equal.
pub const SIDE_TOLERANCE: f64 = 1e-9;
/// Angles closer than this count as equal.
pub const ANGLE_TOLERANCE: f64 = 1e-6;

/// Outgoing unit tangent at `from` of the translation curve towards `to`, pulled back to the origin.
pub fn outgoing_tangent(from: Point, to: Point) -> Result<TangentVector> {
    let moved = translate_to_origin(from, to)?;
    if moved.is_origin() {
        return Err(SolError::DegenerateTriangle(format!(
            "{from:?} and {to:?} coincide"
        )));
    }
    Ok(curve_params(moved)?.direction())
}

/// Euclidean angle between two vectors in `[0, π]`.
pub(crate) fn vector_angle(u: TangentVector, v: TangentVector) -> f64 {
    let (a, b) = (u.to_array(), v.to_array());
    let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let cross = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    let cn = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
    cn.atan2(dot)
}

/// How far `c` is from lying on the translation curve through `a` and `b`.
///
/// Measured at `a` as `min(d(a,b), d(a,c)) · min(ω, π - ω)` with `ω` the
/// angle between the tangents towards `b` and `c`; zero when the three points
/// share a curve.
pub fn collinearity_margin(a: Point, b: Point, c: Point) -> Result<f64> {
    let ab = translation_distance(a, b)?;
    let ac = translation_distance(a, c)?;
    if ab == 0.0 || ac == 0.0 {
        return Ok(0.0);
    }
    let w = vector_angle(outgoing_tangent(a, b)?, outgoing_tangent(a, c)?);
    Ok(ab.min(ac) * w.min(PI - w))
}

/// Three vertices joined by translation curve segments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TranslationTriangle {
    pub a1: Point,
    pub a2: Point,
    pub a3: Point,
}

impl TranslationTriangle {
    /// Checks that the vertices are distinct and not on one translation curve.
    pub fn new(a1: Point, a2: Point, a3: Point) -> Result<Self> {
        let v = [a1, a2, a3];
        if v.iter().any(|p| !p.is_finite()) {
            return Err(SolError::DegenerateTriangle("non-finite vertex".into()));
        }
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            if v[i] == v[j] {
                return Err(SolError::DegenerateTriangle(format!(
                    "vertices {} and {} coincide",
                    i + 1,
                    j + 1
                )));
            }
        }
        let margin = collinearity_margin(a1, a2, a3)?;
        if !(margin > COLLINEARITY_TOLERANCE) {
            return Err(SolError::DegenerateTriangle(format!(
                "vertices lie on one translation curve (margin {margin:e})"
            )));
        }
        Ok(Self { a1, a2, a3 })
    }

    pub fn vertices(&self) -> [Point; 3] {
        [self.a1, self.a2, self.a3]
    }
}

/// `a_k = d(A_i, A_j)` with `k` the vertex not on the side.
pub fn side_lengths(tri: &TranslationTriangle) -> Result<[f64; 3]> {
    Ok([
        translation_distance(tri.a2, tri.a3)?,
        translation_distance(tri.a1, tri.a3)?,
        translation_distance(tri.a1, tri.a2)?,
    ])
}

/// Interior angles `ω_1, ω_2, ω_3` at the vertices.
pub fn interior_angles(tri: &TranslationTriangle) -> Result<[f64; 3]> {
    let v = tri.vertices();
    let mut out = [0.0; 3];
    for (i, w) in out.iter_mut().enumerate() {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        *w = vector_angle(outgoing_tangent(v[i], v[j])?, outgoing_tangent(v[i], v[k])?);
    }
    Ok(out)
}

pub fn angle_sum(tri: &TranslationTriangle) -> Result<f64> {
    Ok(interior_angles(tri)?.iter().sum())
}

/// Summary of a triangle's metric data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangleReport {
    pub sides: [f64; 3],
    pub angles: [f64; 3],
    pub angle_sum: f64,
    /// `inequality_flags[k]`: the two sides other than `a_k` sum to at least `a_k`.
    pub inequality_flags: [bool; 3],
    pub isosceles_sides: bool,
    pub isosceles_angles: bool,
}

fn has_equal_pair(v: &[f64; 3], tol: f64) -> bool {
    (v[0] - v[1]).abs() <= tol || (v[0] - v[2]).abs() <= tol || (v[1] - v[2]).abs() <= tol
}

pub fn triangle_report(tri: &TranslationTriangle) -> Result<TriangleReport> {
    let sides = side_lengths(tri)?;
    let angles = interior_angles(tri)?;
    let total: f64 = sides.iter().sum();
    let inequality_flags = [0, 1, 2].map(|k| total - sides[k] >= sides[k]);
    Ok(TriangleReport {
        sides,
        angles,
        angle_sum: angles.iter().sum(),
        inequality_flags,
        isosceles_sides: has_equal_pair(&sides, SIDE_TOLERANCE),
        isosceles_angles: has_equal_pair(&angles, ANGLE_TOLERANCE),
    })
}

/// Third vertex of an equilateral triangle and the alternatives found.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilateralSolution {
    pub vertex: Point,
    pub side: f64,
    /// `[d(A1,A3) - side, d(A2,A3) - side]` at `vertex`.
    pub residual: [f64; 2],
    /// Other distinct solutions, in selection order.
    pub alternatives: Vec<Point>,
    pub report: SolveReport,
}

/// Grid of starting points per axis.
const EQUILATERAL_GRID: usize = 9;
/// Solutions closer than this are merged.
const SOLUTION_MERGE: f64 = 1e-6;

const CONTINUUM_CONDITIONING: f64 = 1e-6;

/// Moves a solution of a rank-deficient system to `z = 0` along its solution curve.
fn lowest_on_continuum<F>(f: &F, rep: SolveReport, opts: &NewtonOptions) -> SolveReport
where
    F: Fn(&[f64; 2]) -> Result<[f64; 2]>,
{
    let x = [rep.solution[0], rep.solution[1]];
    if jacobian_conditioning(f, x, opts.fd_step) > CONTINUUM_CONDITIONING {
        return rep;
    }
    let g = |v: &[f64; 2]| -> Result<[f64; 2]> { Ok([f(v)?[0], v[1]]) };
    let moved = damped_newton(g, x, opts);
    if !moved.converged {
        return rep;
    }
    let y = [moved.solution[0], moved.solution[1]];
    match f(&y) {
        Ok(r) if r.iter().all(|v| v.abs() <= opts.tolerance) => SolveReport {
            residual: r.to_vec(),
            residual_norm: r[0].abs().max(r[1].abs()),
            iterations: rep.iterations + moved.iterations,
            start_index: rep.start_index,
            ..moved
        },
        _ => rep,
    }
}

/// Solves `d(O, A3) = d(A2, A3) = d(O, A2)` for `A3 = (x3, y, z)`.
///
/// Newton runs from a 9×9 grid of `(y, z)` starts spanning twice the side
/// length around the origin. Distinct solutions are ordered by increasing
/// `|z|`, then decreasing `y`, then decreasing `z` (coordinates compared at the
/// merge tolerance); the first is returned. When the two equations are
/// dependent (for instance if the bisector of `O` and `A2` is the plane
/// `x = x3`) the solutions form a curve, and each is slid along it to the
/// point with `z = 0` when that exists.
pub fn solve_equilateral_vertex(a1: Point, a2: Point, x3: f64) -> Result<EquilateralSolution> {
    if !a1.is_origin() {
        return Err(SolError::Domain(format!(
            "first vertex must be the origin, got {a1:?}"
        )));
    }
    if a2.is_origin() || !a2.is_finite() || !x3.is_finite() {
        return Err(SolError::DegenerateInput(format!(
            "bad second vertex {a2:?} or x3 {x3}"
        )));
    }
    let side = translation_distance(a1, a2)?;
    let f = |v: &[f64; 2]| -> Result<[f64; 2]> {
        let p = Point::new(x3, v[0], v[1]);
        Ok([
            translation_distance(a1, p)? - side,
            translation_distance(a2, p)? - side,
        ])
    };
    let axis = linspace(-2.0 * side, 2.0 * side, EQUILATERAL_GRID);
    let starts: Vec<[f64; 2]> = axis
        .iter()
        .flat_map(|&y| axis.iter().map(move |&z| [y, z]))
        .collect();
    let opts = NewtonOptions::default();
    let reports: Vec<SolveReport> = starts
        .par_iter()
        .enumerate()
        .map(|(i, s)| SolveReport {
            start_index: i,
            ..damped_newton(f, *s, &opts)
        })
        .collect();

    let mut found: Vec<SolveReport> = Vec::new();
    for rep in reports.iter().filter(|r| r.converged) {
        let rep = lowest_on_continuum(&f, rep.clone(), &opts);
        let dup = found.iter().any(|q| {
            (q.solution[0] - rep.solution[0]).abs() < SOLUTION_MERGE
                && (q.solution[1] - rep.solution[1]).abs() < SOLUTION_MERGE
        });
        if !dup {
            found.push(rep);
        }
    }
    if found.is_empty() {
        let best = reports
            .iter()
            .map(|r| r.residual_norm)
            .fold(f64::INFINITY, f64::min);
        return Err(SolError::NoConvergence {
            attempts: starts.len(),
            best_residual: best,
            starts: starts.iter().map(|s| s.to_vec()).collect(),
        });
    }
    let key = |v: f64| (v / SOLUTION_MERGE).round();
    found.sort_by(|p, q| {
        key(p.solution[1].abs())
            .total_cmp(&key(q.solution[1].abs()))
            .then(key(q.solution[0]).total_cmp(&key(p.solution[0])))
            .then(key(q.solution[1]).total_cmp(&key(p.solution[1])))
    });
    let best = found.remove(0);
    let vertex = Point::new(x3, best.solution[0], best.solution[1]);
    Ok(EquilateralSolution {
        vertex,
        side,
        residual: [best.residual[0], best.residual[1]],
        alternatives: found
            .iter()
            .map(|r| Point::new(x3, r.solution[0], r.solution[1]))
            .collect(),
        report: best,
    })
}
