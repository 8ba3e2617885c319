//! Computational kernel for Sol geometry built on translation curves.
//!
//! * [`group`]: group law, isometries, metric tensor
//! * [`curves`]: translation curves, inverse parameters, translation distance
//! * [`bisector`]: equidistant surfaces, surface meshes, equidistant loci
//! * [`triangle`]: side lengths, interior angles, equilateral vertices
//! * [`tetra`]: circumscribed translation spheres of tetrahedra
//! * [`ball`]: translation spheres, plane sections, ball volume
//!
//! Distances are always translation distances; geodesics are not modelled.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ball;
pub mod bisector;
pub mod contour;
pub mod curves;
pub mod error;
pub mod group;
pub mod mesh;
pub mod quadrature;
pub mod solve;
pub mod tetra;
pub mod triangle;

pub use error::{Result, SolError};
pub use group::{Point, TangentVector};
pub use mesh::{Region, Resolution, TriangleMesh};
