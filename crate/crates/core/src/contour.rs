//! Zero sets of scalar fields by per-slice marching squares and slice stitching.
//!
//! Each `z` slice is contoured independently; every contour vertex sits on a
//! grid edge and is refined by a bracketed root search along that edge.
//! Contours of neighbouring slices are matched by proximity and joined by
//! triangle ribbons.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::group::Point;
use crate::mesh::{linspace, Region, Resolution, TriangleMesh};

/// Stopping threshold of the edge root search.
pub const EDGE_ROOT_TOLERANCE: f64 = 1e-12;
const EDGE_ROOT_ITERATIONS: usize = 200;

/// One contour line of a slice.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    pub points: Vec<Point>,
    pub values: Vec<f64>,
    pub closed: bool,
}

/// Grid edge id: `(0, i, j)` joins nodes `(i,j)-(i+1,j)`, `(1, i, j)` joins `(i,j)-(i,j+1)`.
type EdgeKey = (u8, usize, usize);

// Corner bits: 1 = (i,j), 2 = (i+1,j), 4 = (i+1,j+1), 8 = (i,j+1).
// Cell edges: 0 bottom, 1 right, 2 top, 3 left.
const SEGMENTS: [&[(usize, usize)]; 16] = [
    &[],
    &[(3, 0)],
    &[(0, 1)],
    &[(3, 1)],
    &[(1, 2)],
    &[], // saddle
    &[(0, 2)],
    &[(3, 2)],
    &[(2, 3)],
    &[(0, 2)],
    &[], // saddle
    &[(1, 2)],
    &[(1, 3)],
    &[(0, 1)],
    &[(3, 0)],
    &[],
];

fn cell_edge(i: usize, j: usize, e: usize) -> EdgeKey {
    match e {
        0 => (0, i, j),
        1 => (1, i + 1, j),
        2 => (0, i, j + 1),
        _ => (1, i, j),
    }
}

fn saddle_segments(case: usize, centre_inside: bool) -> [(usize, usize); 2] {
    match (case, centre_inside) {
        (5, true) | (10, false) => [(0, 1), (2, 3)],
        _ => [(3, 0), (1, 2)],
    }
}

/// Root of `f` on the segment `p0..p1` where `f(p0) = v0 > 0 >= v1 = f(p1)`.
fn edge_root<F: Fn(Point) -> f64>(f: &F, p0: Point, p1: Point, v0: f64, v1: f64) -> (Point, f64) {
    let at = |t: f64| {
        Point::new(
            p0.x + t * (p1.x - p0.x),
            p0.y + t * (p1.y - p0.y),
            p0.z + t * (p1.z - p0.z),
        )
    };
    if v1 == 0.0 {
        return (p1, 0.0);
    }
    // Illinois variant of regula falsi on t in [0, 1].
    let (mut a, mut b, mut fa, mut fb) = (0.0f64, 1.0f64, v0, v1);
    let mut side = 0i8;
    let mut best = if v0.abs() < v1.abs() {
        (0.0, v0)
    } else {
        (1.0, v1)
    };
    for _ in 0..EDGE_ROOT_ITERATIONS {
        let mut t = (a * fb - b * fa) / (fb - fa);
        if !(t > a && t < b) {
            t = 0.5 * (a + b);
        }
        let ft = f(at(t));
        if !ft.is_finite() {
            break;
        }
        if ft.abs() < best.1.abs() {
            best = (t, ft);
        }
        if ft.abs() <= EDGE_ROOT_TOLERANCE || b - a <= f64::EPSILON {
            break;
        }
        if ft > 0.0 {
            a = t;
            fa = ft;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        } else {
            b = t;
            fb = ft;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        }
    }
    (at(best.0), best.1)
}

/// Contours of `f = 0` on the slice at height `z` of the grid `xs × ys`.
///
/// Nodes where `f` is NaN disable the cells around them.
pub fn slice_contours<F>(f: &F, xs: &[f64], ys: &[f64], z: f64) -> Vec<Contour>
where
    F: Fn(Point) -> f64,
{
    let (nx, ny) = (xs.len(), ys.len());
    if nx < 2 || ny < 2 {
        return Vec::new();
    }
    let node = |i: usize, j: usize| Point::new(xs[i], ys[j], z);
    let values: Vec<f64> = (0..nx * ny).map(|k| f(node(k / ny, k % ny))).collect();
    let val = |i: usize, j: usize| values[i * ny + j];

    let mut vertex: BTreeMap<EdgeKey, (Point, f64)> = BTreeMap::new();
    let mut links: BTreeMap<EdgeKey, Vec<EdgeKey>> = BTreeMap::new();
    let mut root_on = |key: EdgeKey| -> (Point, f64) {
        *vertex.entry(key).or_insert_with(|| {
            let (d, i, j) = key;
            let (q0, q1) = if d == 0 {
                ((i, j), (i + 1, j))
            } else {
                ((i, j), (i, j + 1))
            };
            let (v0, v1) = (val(q0.0, q0.1), val(q1.0, q1.1));
            let (p0, p1) = (node(q0.0, q0.1), node(q1.0, q1.1));
            if v0 > 0.0 {
                edge_root(f, p0, p1, v0, v1)
            } else {
                edge_root(f, p1, p0, v1, v0)
            }
        })
    };

    for i in 0..nx - 1 {
        for j in 0..ny - 1 {
            let corners = [val(i, j), val(i + 1, j), val(i + 1, j + 1), val(i, j + 1)];
            if corners.iter().any(|v| !v.is_finite()) {
                continue;
            }
            let case =
                corners
                    .iter()
                    .enumerate()
                    .fold(0usize, |c, (k, &v)| if v > 0.0 { c | (1 << k) } else { c });
            let saddle;
            let segs: &[(usize, usize)] = if case == 5 || case == 10 {
                let centre = f(Point::new(
                    0.5 * (xs[i] + xs[i + 1]),
                    0.5 * (ys[j] + ys[j + 1]),
                    z,
                ));
                saddle = saddle_segments(case, centre > 0.0);
                &saddle
            } else {
                SEGMENTS[case]
            };
            for &(ea, eb) in segs {
                let (ka, kb) = (cell_edge(i, j, ea), cell_edge(i, j, eb));
                root_on(ka);
                root_on(kb);
                links.entry(ka).or_default().push(kb);
                links.entry(kb).or_default().push(ka);
            }
        }
    }
    chain(&links, &vertex)
}

fn chain(
    links: &BTreeMap<EdgeKey, Vec<EdgeKey>>,
    vertex: &BTreeMap<EdgeKey, (Point, f64)>,
) -> Vec<Contour> {
    let mut used: BTreeMap<EdgeKey, bool> = links.keys().map(|&k| (k, false)).collect();
    let mut out = Vec::new();
    let walk = |start: EdgeKey, used: &mut BTreeMap<EdgeKey, bool>| {
        let mut keys = vec![start];
        used.insert(start, true);
        let mut cur = start;
        while let Some(&next) = links[&cur].iter().find(|k| !used[*k]) {
            used.insert(next, true);
            keys.push(next);
            cur = next;
        }
        let closed = keys.len() > 2 && links[&cur].contains(&start);
        let (points, values) = keys.iter().map(|k| vertex[k]).unzip();
        Contour {
            points,
            values,
            closed,
        }
    };
    // Open chains start at their ends, then whatever remains is a loop.
    let ends: Vec<EdgeKey> = links
        .iter()
        .filter(|(_, v)| v.len() == 1)
        .map(|(k, _)| *k)
        .collect();
    for k in ends {
        if !used[&k] {
            out.push(walk(k, &mut used));
        }
    }
    let rest: Vec<EdgeKey> = links.keys().copied().collect();
    for k in rest {
        if !used[&k] {
            out.push(walk(k, &mut used));
        }
    }
    out
}

fn planar_gap(a: &Point, b: &Point) -> f64 {
    (a.x - b.x).hypot(a.y - b.y)
}

/// Mean nearest-point gap between two contours, symmetrized.
fn contour_gap(p: &Contour, q: &Contour) -> f64 {
    let one_way = |a: &Contour, b: &Contour| {
        a.points
            .iter()
            .map(|u| {
                b.points
                    .iter()
                    .map(|v| planar_gap(u, v))
                    .fold(f64::INFINITY, f64::min)
            })
            .sum::<f64>()
            / a.points.len() as f64
    };
    0.5 * (one_way(p, q) + one_way(q, p))
}

/// Triangle strip between two polylines given as global vertex indices.
fn ribbon(
    vertices: &[Point],
    lower: &[usize],
    upper: &[usize],
    closed: bool,
    triangles: &mut Vec<[usize; 3]>,
) {
    let (mut lower, mut upper) = (lower.to_vec(), upper.to_vec());
    if closed {
        // Rotate the upper loop so it starts nearest the lower start, and match orientation.
        let start = vertices[lower[0]];
        let k = (0..upper.len())
            .min_by(|&a, &b| {
                planar_gap(&vertices[upper[a]], &start)
                    .total_cmp(&planar_gap(&vertices[upper[b]], &start))
            })
            .unwrap_or(0);
        upper.rotate_left(k);
        let fwd = planar_gap(
            &vertices[upper[1 % upper.len()]],
            &vertices[lower[1 % lower.len()]],
        );
        let rev_idx = upper.len() - 1;
        let rev = planar_gap(&vertices[upper[rev_idx]], &vertices[lower[1 % lower.len()]]);
        if rev < fwd {
            upper[1..].reverse();
        }
        lower.push(lower[0]);
        upper.push(upper[0]);
    } else {
        let d_same = planar_gap(&vertices[lower[0]], &vertices[upper[0]])
            + planar_gap(
                &vertices[*lower.last().unwrap()],
                &vertices[*upper.last().unwrap()],
            );
        let d_flip = planar_gap(&vertices[lower[0]], &vertices[*upper.last().unwrap()])
            + planar_gap(&vertices[*lower.last().unwrap()], &vertices[upper[0]]);
        if d_flip < d_same {
            upper.reverse();
        }
    }
    let dist = |a: usize, b: usize| vertices[a].model_distance(&vertices[b]);
    let (mut i, mut j) = (0, 0);
    while i + 1 < lower.len() || j + 1 < upper.len() {
        let advance_lower = if i + 1 >= lower.len() {
            false
        } else if j + 1 >= upper.len() {
            true
        } else {
            dist(lower[i + 1], upper[j]) <= dist(lower[i], upper[j + 1])
        };
        if advance_lower {
            if lower[i] != lower[i + 1] {
                triangles.push([lower[i], lower[i + 1], upper[j]]);
            }
            i += 1;
        } else {
            if upper[j] != upper[j + 1] {
                triangles.push([lower[i], upper[j + 1], upper[j]]);
            }
            j += 1;
        }
    }
}

/// Zero set of `f` inside `region`, sampled at `resolution`.
///
/// Contours of consecutive slices are paired greedily by increasing mean gap
/// (each contour used at most once per neighbour, pairs further apart than
/// three cell diagonals rejected) and joined by ribbons. The per-vertex value
/// of `f` is stored as attribution.
pub fn extract_zero_set<F>(f: &F, region: &Region, resolution: &Resolution) -> TriangleMesh
where
    F: Fn(Point) -> f64 + Sync,
{
    let xs = linspace(region.min.x, region.max.x, resolution.nx);
    let ys = linspace(region.min.y, region.max.y, resolution.ny);
    let zs = linspace(region.min.z, region.max.z, resolution.nz);
    let slices: Vec<Vec<Contour>> = zs
        .par_iter()
        .map(|&z| slice_contours(f, &xs, &ys, z))
        .collect();

    let mut mesh = TriangleMesh::default();
    let mut indices: Vec<Vec<Vec<usize>>> = Vec::with_capacity(slices.len());
    for slice in &slices {
        let mut ids = Vec::with_capacity(slice.len());
        for c in slice {
            let start = mesh.vertices.len();
            mesh.vertices.extend_from_slice(&c.points);
            mesh.attribution.extend_from_slice(&c.values);
            ids.push((start..mesh.vertices.len()).collect());
        }
        indices.push(ids);
    }

    let cell = |v: &[f64]| if v.len() > 1 { v[1] - v[0] } else { 0.0 };
    let threshold = 3.0 * (cell(&xs).powi(2) + cell(&ys).powi(2) + cell(&zs).powi(2)).sqrt();
    for k in 0..slices.len().saturating_sub(1) {
        let (lo, hi) = (&slices[k], &slices[k + 1]);
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for (a, p) in lo.iter().enumerate() {
            for (b, q) in hi.iter().enumerate() {
                if p.closed != q.closed || p.points.len() < 2 || q.points.len() < 2 {
                    continue;
                }
                let gap = contour_gap(p, q);
                if gap <= threshold {
                    pairs.push((gap, a, b));
                }
            }
        }
        pairs.sort_by(|u, v| u.0.total_cmp(&v.0).then(u.1.cmp(&v.1)).then(u.2.cmp(&v.2)));
        let mut lo_used = vec![false; lo.len()];
        let mut hi_used = vec![false; hi.len()];
        for (_, a, b) in pairs {
            if lo_used[a] || hi_used[b] {
                continue;
            }
            lo_used[a] = true;
            hi_used[b] = true;
            ribbon(
                &mesh.vertices,
                &indices[k][a],
                &indices[k + 1][b],
                lo[a].closed,
                &mut mesh.triangles,
            );
        }
    }
    mesh
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_sphere(p: Point) -> f64 {
        1.0 - (p.x * p.x + p.y * p.y + p.z * p.z)
    }

    #[test]
    fn circle_slice_is_one_closed_loop() {
        let xs = linspace(-2.0, 2.0, 41);
        let ys = linspace(-2.0, 2.0, 41);
        let cs = slice_contours(&unit_sphere, &xs, &ys, 0.0);
        assert_eq!(cs.len(), 1);
        assert!(cs[0].closed);
        for p in &cs[0].points {
            assert!((p.x.hypot(p.y) - 1.0).abs() < 1e-11);
        }
    }

    #[test]
    fn line_slice_is_one_open_chain() {
        let f = |p: Point| p.x + 0.5 * p.y - 0.1;
        let xs = linspace(-1.0, 1.0, 17);
        let ys = linspace(-1.0, 1.0, 13);
        let cs = slice_contours(&f, &xs, &ys, 0.3);
        assert_eq!(cs.len(), 1);
        assert!(!cs[0].closed);
        assert!(cs[0].values.iter().all(|v| v.abs() <= EDGE_ROOT_TOLERANCE));
    }

    #[test]
    fn saddle_cells_keep_chains_manifold() {
        let f = |p: Point| p.x * p.y - 0.01;
        let xs = linspace(-1.0, 1.0, 20);
        let ys = linspace(-1.0, 1.0, 20);
        let cs = slice_contours(&f, &xs, &ys, 0.0);
        assert_eq!(cs.len(), 2);
    }

    #[test]
    fn sphere_zero_set_is_stitched() {
        let region = Region::from_bounds([-1.5, 1.5, -1.5, 1.5, -0.9, 0.9]).unwrap();
        let mesh = extract_zero_set(&unit_sphere, &region, &Resolution::new(31, 31, 10).unwrap());
        mesh.validate().unwrap();
        assert!(!mesh.is_empty());
        assert!(mesh.max_abs_attribution() <= 1e-10);
        // Open only at the top and bottom rings.
        let counts = mesh.edge_use_counts();
        let boundary = counts.values().filter(|&&c| c == 1).count();
        let ring = |z: f64| mesh.vertices.iter().filter(|v| v.z == z).count();
        assert_eq!(boundary, ring(-0.9) + ring(0.9));
        assert!(counts.values().all(|&c| c <= 2));
    }

    #[test]
    fn empty_when_surface_misses_region() {
        let region = Region::from_bounds([3.0, 4.0, 3.0, 4.0, 0.0, 1.0]).unwrap();
        let mesh = extract_zero_set(&unit_sphere, &region, &Resolution::new(5, 5, 3).unwrap());
        assert!(mesh.is_empty());
        assert!(mesh.vertices.is_empty());
    }

    #[test]
    fn output_is_schedule_independent() {
        let region = Region::from_bounds([-1.5, 1.5, -1.5, 1.5, -0.9, 0.9]).unwrap();
        let res = Resolution::new(21, 21, 8).unwrap();
        let a = extract_zero_set(&unit_sphere, &region, &res);
        let b = extract_zero_set(&unit_sphere, &region, &res);
        assert_eq!(a, b);
    }
}
