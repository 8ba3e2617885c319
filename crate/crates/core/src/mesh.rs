//! Triangle meshes and sampling boxes shared by the surface extractors.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SolError};
use crate::group::Point;

/// Indexed triangle mesh with one scalar attribute per vertex.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TriangleMesh {
    pub vertices: Vec<Point>,
    pub triangles: Vec<[usize; 3]>,
    /// Per-vertex residual of the defining equation (0 for exact parametric meshes).
    pub attribution: Vec<f64>,
}

impl TriangleMesh {
    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// Checks that every triangle index refers to a vertex and the attribute count matches.
    pub fn validate(&self) -> Result<()> {
        if self.attribution.len() != self.vertices.len() {
            return Err(SolError::Domain(format!(
                "{} attributes for {} vertices",
                self.attribution.len(),
                self.vertices.len()
            )));
        }
        let n = self.vertices.len();
        if let Some(t) = self.triangles.iter().find(|t| t.iter().any(|&i| i >= n)) {
            return Err(SolError::Domain(format!(
                "triangle {t:?} indexes past {n} vertices"
            )));
        }
        Ok(())
    }

    /// Number of triangles using each undirected edge.
    pub fn edge_use_counts(&self) -> BTreeMap<(usize, usize), usize> {
        let mut counts = BTreeMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *counts.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        counts
    }

    /// True when every edge is shared by exactly two triangles.
    pub fn is_closed(&self) -> bool {
        !self.triangles.is_empty() && self.edge_use_counts().values().all(|&c| c == 2)
    }

    pub fn max_abs_attribution(&self) -> f64 {
        self.attribution.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Axis-aligned box `[x0, x1] × [y0, y1] × [z0, z1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub min: Point,
    pub max: Point,
}

impl Region {
    pub fn new(min: Point, max: Point) -> Result<Self> {
        let ok =
            min.is_finite() && max.is_finite() && min.x < max.x && min.y < max.y && min.z <= max.z;
        if !ok {
            return Err(SolError::Domain(format!(
                "empty or invalid region {min:?}..{max:?}"
            )));
        }
        Ok(Self { min, max })
    }

    /// From `[x0, x1, y0, y1, z0, z1]`.
    pub fn from_bounds(b: [f64; 6]) -> Result<Self> {
        Self::new(Point::new(b[0], b[2], b[4]), Point::new(b[1], b[3], b[5]))
    }

    /// Cube of half-width `h` around `c`.
    pub fn around(c: Point, h: f64) -> Result<Self> {
        Self::new(
            Point::new(c.x - h, c.y - h, c.z - h),
            Point::new(c.x + h, c.y + h, c.z + h),
        )
    }
}

/// Sample counts per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
}

impl Resolution {
    pub fn new(nx: usize, ny: usize, nz: usize) -> Result<Self> {
        if nx < 2 || ny < 2 || nz < 2 {
            return Err(SolError::Domain(format!(
                "resolution must be >= 2 per axis, got {nx}x{ny}x{nz}"
            )));
        }
        Ok(Self { nx, ny, nz })
    }
}

/// `n` evenly spaced values from `a` to `b`, both included.
pub(crate) fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|k| {
                if k == n - 1 {
                    b
                } else {
                    a + (b - a) * k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}
