//! Translation tetrahedra and their circumscribed translation spheres.
//!
//! The circumcenter `C` is the common point of the bisectors of `(A1, Ai)`,
//! `i = 2, 3, 4`, found by Newton on the distance differences
//! `d(A1, C) - d(Ai, C)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::{curve_segment, translation_distance};
use crate::error::{Result, SolError};
use crate::group::{translate_from_origin, translate_to_origin, Point};
use crate::mesh::linspace;
use crate::solve::{damped_newton, NewtonOptions, SolveReport};
use crate::triangle::{collinearity_margin, COLLINEARITY_TOLERANCE};

/// Samples per edge polyline in the edge separation check.
pub const EDGE_SAMPLES: usize = 64;
/// Required gap between opposite edges.
pub const EDGE_SEPARATION_TOLERANCE: f64 = 1e-9;
/// Largest accepted `|d(Ai, C) - r|`.
pub const SPHERE_TOLERANCE: f64 = 1e-8;

const GRID: usize = 9;
const TRIPLES: [[usize; 3]; 4] = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
const EDGES: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];
/// Index pairs into `EDGES` of edges without a common vertex.
const OPPOSITE: [[usize; 2]; 3] = [[0, 5], [1, 4], [2, 3]];

/// Four vertices joined by translation curve segments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TranslationTetrahedron {
    pub vertices: [Point; 4],
}

/// Separate outcome of every tetrahedron invariant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TetraValidity {
    /// Smallest translation distance between two vertices.
    pub min_vertex_distance: f64,
    pub distinct: bool,
    /// Collinearity margin of each vertex triple, in the order 123, 124, 134, 234.
    pub triple_margins: [f64; 4],
    pub no_three_on_curve: bool,
    /// Sampled minimum gap of the three pairs of opposite edges (01|23, 02|13, 03|12).
    pub opposite_edge_gaps: [f64; 3],
    pub edges_disjoint: bool,
    pub valid: bool,
}

/// Closest distance between segments `p0p1` and `q0q1` in model coordinates.
fn segment_gap(p0: Point, p1: Point, q0: Point, q1: Point) -> f64 {
    let sub = |a: Point, b: Point| [a.x - b.x, a.y - b.y, a.z - b.z];
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let (d1, d2, r) = (sub(p1, p0), sub(q1, q0), sub(p0, q0));
    let (a, e, f) = (dot(d1, d1), dot(d2, d2), dot(d2, r));
    let (c, b) = (dot(d1, r), dot(d1, d2));
    let denom = a * e - b * b;
    let mut s = if denom > 1e-300 {
        ((b * f - c * e) / denom).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let mut t = if e > 0.0 { (b * s + f) / e } else { 0.0 };
    if t < 0.0 {
        t = 0.0;
        s = if a > 0.0 {
            (-c / a).clamp(0.0, 1.0)
        } else {
            0.0
        };
    } else if t > 1.0 {
        t = 1.0;
        s = if a > 0.0 {
            ((b - c) / a).clamp(0.0, 1.0)
        } else {
            0.0
        };
    }
    let gap = [
        r[0] + d1[0] * s - d2[0] * t,
        r[1] + d1[1] * s - d2[1] * t,
        r[2] + d1[2] * s - d2[2] * t,
    ];
    dot(gap, gap).sqrt()
}

fn polyline_gap(p: &[Point], q: &[Point]) -> f64 {
    let mut best = f64::INFINITY;
    for u in p.windows(2) {
        for v in q.windows(2) {
            best = best.min(segment_gap(u[0], u[1], v[0], v[1]));
        }
    }
    best
}

/// Measures every invariant of the tetrahedron; never fails on degenerate input.
pub fn validate_tetrahedron(tet: &TranslationTetrahedron) -> Result<TetraValidity> {
    let v = tet.vertices;
    if v.iter().any(|p| !p.is_finite()) {
        return Err(SolError::DegenerateInput(
            "non-finite tetrahedron vertex".into(),
        ));
    }
    let mut min_vertex_distance = f64::INFINITY;
    for [i, j] in EDGES {
        min_vertex_distance = min_vertex_distance.min(translation_distance(v[i], v[j])?);
    }
    let distinct = min_vertex_distance > 0.0;

    let mut triple_margins = [0.0; 4];
    let mut opposite_edge_gaps = [0.0; 3];
    if distinct {
        for (m, [i, j, k]) in triple_margins.iter_mut().zip(TRIPLES) {
            *m = collinearity_margin(v[i], v[j], v[k])?
                .min(collinearity_margin(v[j], v[k], v[i])?)
                .min(collinearity_margin(v[k], v[i], v[j])?);
        }
        let polys = EDGES
            .iter()
            .map(|&[i, j]| curve_segment(v[i], v[j], EDGE_SAMPLES).map(|p| p.points))
            .collect::<Result<Vec<_>>>()?;
        for (g, [e, f]) in opposite_edge_gaps.iter_mut().zip(OPPOSITE) {
            *g = polyline_gap(&polys[e], &polys[f]);
        }
    }
    let no_three_on_curve = distinct && triple_margins.iter().all(|&m| m > COLLINEARITY_TOLERANCE);
    let edges_disjoint = distinct
        && opposite_edge_gaps
            .iter()
            .all(|&g| g > EDGE_SEPARATION_TOLERANCE);
    Ok(TetraValidity {
        min_vertex_distance,
        distinct,
        triple_margins,
        no_three_on_curve,
        opposite_edge_gaps,
        edges_disjoint,
        valid: distinct && no_three_on_curve && edges_disjoint,
    })
}

impl TranslationTetrahedron {
    /// Builds a tetrahedron after checking every invariant.
    pub fn new(vertices: [Point; 4]) -> Result<Self> {
        let tet = Self { vertices };
        let check = validate_tetrahedron(&tet)?;
        if !check.valid {
            return Err(SolError::DegenerateTetrahedron(format!("{check:?}")));
        }
        Ok(tet)
    }
}

/// Translation sphere through the four vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circumsphere {
    pub center: Point,
    pub radius: f64,
    /// `|d(Ai, C) - radius|`.
    pub residuals: [f64; 4],
}

fn tetra_options() -> NewtonOptions {
    NewtonOptions {
        max_iterations: 100,
        ..NewtonOptions::default()
    }
}

/// Euclidean circumcenter of the vertices in model coordinates, if they span space.
fn euclidean_circumcenter(v: &[Point; 4]) -> Option<[f64; 3]> {
    let row = |p: Point| {
        [
            2.0 * (p.x - v[0].x),
            2.0 * (p.y - v[0].y),
            2.0 * (p.z - v[0].z),
        ]
    };
    let sq = |p: Point| p.x * p.x + p.y * p.y + p.z * p.z;
    let m = nalgebra::Matrix3::from_rows(&[
        nalgebra::RowVector3::from(row(v[1])),
        nalgebra::RowVector3::from(row(v[2])),
        nalgebra::RowVector3::from(row(v[3])),
    ]);
    let rhs = nalgebra::Vector3::new(
        sq(v[1]) - sq(v[0]),
        sq(v[2]) - sq(v[0]),
        sq(v[3]) - sq(v[0]),
    );
    let c = m.lu().solve(&rhs)?;
    c.iter().all(|x| x.is_finite()).then(|| [c[0], c[1], c[2]])
}

/// Starting points in the order they are tried: Euclidean circumcenter,
/// centroid, then a 9³ grid over the bounding box enlarged by half its size.
pub fn circumsphere_starts(tet: &TranslationTetrahedron) -> (Vec<[f64; 3]>, Vec<[f64; 3]>) {
    let v = &tet.vertices;
    let mut first = Vec::new();
    if let Some(c) = euclidean_circumcenter(v) {
        first.push(c);
    }
    let n = v.len() as f64;
    first.push([
        v.iter().map(|p| p.x).sum::<f64>() / n,
        v.iter().map(|p| p.y).sum::<f64>() / n,
        v.iter().map(|p| p.z).sum::<f64>() / n,
    ]);
    let axis = |get: fn(&Point) -> f64| {
        let lo = v.iter().map(get).fold(f64::INFINITY, f64::min);
        let hi = v.iter().map(get).fold(f64::NEG_INFINITY, f64::max);
        let pad = 0.25 * (hi - lo);
        linspace(lo - pad, hi + pad, GRID)
    };
    let (xs, ys, zs) = (axis(|p| p.x), axis(|p| p.y), axis(|p| p.z));
    let mut grid = Vec::with_capacity(GRID * GRID * GRID);
    for &x in &xs {
        for &y in &ys {
            for &z in &zs {
                grid.push([x, y, z]);
            }
        }
    }
    (first, grid)
}

/// Circumsphere found from the given starts.
///
/// Several spheres can pass through the same four vertices. Among the converged
/// starts the one with the smallest radius is kept, ties going to the earlier
/// start.
pub fn circumsphere_from(
    tet: &TranslationTetrahedron,
    starts: &[[f64; 3]],
) -> Result<(Circumsphere, SolveReport)> {
    let v = tet.vertices;
    let f = |c: &[f64; 3]| -> Result<[f64; 3]> {
        let p = Point::new(c[0], c[1], c[2]);
        let d0 = translation_distance(v[0], p)?;
        Ok([
            d0 - translation_distance(v[1], p)?,
            d0 - translation_distance(v[2], p)?,
            d0 - translation_distance(v[3], p)?,
        ])
    };
    let opts = tetra_options();
    let reports: Vec<SolveReport> = starts
        .par_iter()
        .enumerate()
        .map(|(i, s)| SolveReport {
            start_index: i,
            ..damped_newton(f, *s, &opts)
        })
        .collect();
    let mut best: Option<(Circumsphere, SolveReport)> = None;
    for rep in reports.iter().filter(|r| r.converged) {
        let center = Point::new(rep.solution[0], rep.solution[1], rep.solution[2]);
        let Ok(sphere) = sphere_at(&v, center) else {
            continue;
        };
        if best.as_ref().is_none_or(|(b, _)| sphere.radius < b.radius) {
            best = Some((sphere, rep.clone()));
        }
    }
    best.ok_or_else(|| SolError::NoConvergence {
        attempts: starts.len(),
        best_residual: reports
            .iter()
            .map(|r| r.residual_norm)
            .fold(f64::INFINITY, f64::min),
        starts: starts.iter().map(|s| s.to_vec()).collect(),
    })
}

fn sphere_at(v: &[Point; 4], center: Point) -> Result<Circumsphere> {
    let radius = translation_distance(v[0], center)?;
    let mut residuals = [0.0; 4];
    for (r, p) in residuals.iter_mut().zip(v) {
        *r = (translation_distance(*p, center)? - radius).abs();
    }
    if !(radius > 0.0) || residuals.iter().any(|r| !(*r <= SPHERE_TOLERANCE)) {
        return Err(SolError::Domain(format!(
            "sphere residuals {residuals:?} at {center:?}"
        )));
    }
    Ok(Circumsphere {
        center,
        radius,
        residuals,
    })
}

/// Circumscribed translation sphere of a valid tetrahedron.
///
/// The vertices are first moved so that `a1` is the origin, which makes the
/// result commute with left translations. All starts (Euclidean circumcenter,
/// centroid, grid) are solved and the smallest sphere is kept.
pub fn circumsphere(tet: &TranslationTetrahedron) -> Result<(Circumsphere, SolveReport)> {
    let check = validate_tetrahedron(tet)?;
    if !check.valid {
        return Err(SolError::DegenerateTetrahedron(format!("{check:?}")));
    }
    let a1 = tet.vertices[0];
    let mut moved = [Point::ORIGIN; 4];
    for (m, p) in moved.iter_mut().zip(&tet.vertices) {
        *m = translate_to_origin(a1, *p)?;
    }
    let reduced = TranslationTetrahedron { vertices: moved };
    let (first, grid) = circumsphere_starts(&reduced);
    let all: Vec<[f64; 3]> = first.iter().chain(grid.iter()).copied().collect();
    let (local, mut report) = circumsphere_from(&reduced, &all)?;
    let center = translate_from_origin(a1, local.center)?;
    report.solution = center.to_array().to_vec();
    Ok((sphere_at(&tet.vertices, center)?, report))
}
