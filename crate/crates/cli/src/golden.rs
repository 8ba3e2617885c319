//! The reference table: worked examples recomputed and compared with their printed values.

use std::f64::consts::PI;

use serde::Serialize;
use solgeom::ball::{sphere_mesh, SphereSpec};
use solgeom::bisector::{equidistant_locus, planar_locus_point};
use solgeom::curves::translation_distance;
use solgeom::tetra::{circumsphere, TranslationTetrahedron};
use solgeom::triangle::{solve_equilateral_vertex, triangle_report, TranslationTriangle};
use solgeom::{Point, Result, TriangleMesh};

/// Tolerances of the table. Printed values carry five decimals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub distance: f64,
    pub center: f64,
    pub angle: f64,
    pub angle_sum: f64,
    pub locus: f64,
    pub sphere: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            distance: 1e-4,
            center: 1e-4,
            angle: 1e-3,
            angle_sum: 2e-3,
            locus: 1e-8,
            sphere: 1e-9,
        }
    }
}

/// One compared quantity. `expected = None` marks a yes/no check whose
/// `computed` value is 1 or 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub item: u32,
    pub name: String,
    pub computed: f64,
    pub expected: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub tolerances: Tolerances,
    pub rows: Vec<Row>,
    pub all_pass: bool,
}

/// Meshes and polylines behind the table, for export.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifacts {
    pub sphere: TriangleMesh,
    pub planar_locus: Vec<Point>,
}

struct Rows(Vec<Row>);

impl Rows {
    fn value(&mut self, item: u32, name: &str, computed: f64, expected: f64, tol: f64) {
        self.0.push(Row {
            item,
            name: name.into(),
            computed,
            expected: Some(expected),
            tolerance: Some(tol),
            pass: (computed - expected).abs() <= tol,
        });
    }

    fn check(&mut self, item: u32, name: &str, ok: bool) {
        self.0.push(Row {
            item,
            name: name.into(),
            computed: f64::from(u8::from(ok)),
            expected: None,
            tolerance: None,
            pass: ok,
        });
    }

    fn bound(&mut self, item: u32, name: &str, computed: f64, tol: f64) {
        self.0.push(Row {
            item,
            name: name.into(),
            computed,
            expected: Some(0.0),
            tolerance: Some(tol),
            pass: computed <= tol,
        });
    }
}

/// Recomputes every reference quantity.
pub fn reproduce(tol: &Tolerances) -> Result<(Table, Artifacts)> {
    let mut rows = Rows(Vec::new());
    let o = Point::ORIGIN;

    // 1. Distances of a triangle violating the triangle inequality.
    let (a2, a3) = (Point::new(-1.0, 2.0, 1.0), Point::new(0.75, 0.75, 0.5));
    let d12 = translation_distance(o, a2)?;
    let d13 = translation_distance(o, a3)?;
    let d23 = translation_distance(a2, a3)?;
    rows.value(1, "d(A1,A2)", d12, 2.20396, tol.distance);
    rows.value(1, "d(A1,A3)", d13, 1.22167, tol.distance);
    rows.value(1, "d(A2,A3)", d23, 3.74623, tol.distance);
    rows.check(1, "d(A1,A2)+d(A1,A3) < d(A2,A3)", d12 + d13 < d23);

    // 2. Equilateral triangle.
    let b2 = Point::new(2.0, 1.0, -0.75);
    let eq = solve_equilateral_vertex(o, b2, 1.0)?;
    rows.value(2, "equilateral y3", eq.vertex.y, 1.46717, tol.distance);
    rows.value(2, "equilateral z3", eq.vertex.z, 1.04627, tol.distance);
    rows.value(2, "equilateral side", eq.side, 2.09436, tol.distance);

    // 3. Its interior angles.
    let rep = triangle_report(&TranslationTriangle::new(o, b2, eq.vertex)?)?;
    for (i, want) in [0.94694, 1.04250, 1.44910].into_iter().enumerate() {
        rows.value(
            3,
            &format!("angle w{}", i + 1),
            rep.angles[i],
            want,
            tol.angle,
        );
    }
    rows.value(3, "angle sum", rep.angle_sum, 3.43854, tol.angle_sum);
    rows.check(3, "angle sum > pi", rep.angle_sum > PI);
    rows.check(3, "isosceles sides", rep.isosceles_sides);
    rows.check(3, "angles not isosceles", !rep.isosceles_angles);

    // 4. Circumspheres of two tetrahedra sharing a face.
    let s3 = 3f64.sqrt();
    let face = [
        o,
        Point::new(s3 / 8.0, 0.125, 0.025),
        Point::new(0.125, s3 / 8.0, -0.025),
    ];
    let cases = [
        (
            "first",
            Point::new(0.05, 0.15, 0.2),
            [0.08198, 0.10540, 0.06319],
            0.14688,
        ),
        (
            "second",
            Point::new(-0.15, -0.15, 0.3),
            [0.04904, 0.17721, 0.32593],
            0.36332,
        ),
    ];
    for (label, a4, center, radius) in cases {
        let tet = TranslationTetrahedron::new([face[0], face[1], face[2], a4])?;
        let (s, _) = circumsphere(&tet)?;
        for (k, axis) in ["x", "y", "z"].into_iter().enumerate() {
            rows.value(
                4,
                &format!("{label} circumcenter {axis}"),
                s.center.to_array()[k],
                center[k],
                tol.center,
            );
        }
        rows.value(
            4,
            &format!("{label} circumradius"),
            s.radius,
            radius,
            tol.distance,
        );
        let worst = s.residuals.iter().cloned().fold(0.0, f64::max);
        rows.bound(4, &format!("{label} vertex distance residual"), worst, 1e-8);
    }

    // 5. Equidistant locus of a base-plane triangle against its closed form.
    let (c2, c3) = (
        Point::new(1.0 / 3.0, 0.2, 0.0),
        Point::new(0.5, -2.0 / 7.0, 0.0),
    );
    let locus = equidistant_locus(o, c2, c3, (-1.0, 1.0), 41)?;
    let mut dev = if locus.omitted.is_empty() {
        0.0f64
    } else {
        f64::INFINITY
    };
    for p in &locus.locus.points {
        dev = dev.max(planar_locus_point(c2, c3, p.z)?.max_norm_diff(p));
    }
    rows.bound(5, "planar locus vs closed form", dev, tol.locus);

    // 6. Sphere of radius 5/2.
    let sphere = sphere_mesh(&SphereSpec::at_origin(2.5)?, 96, 48)?;
    let mut err = 0.0f64;
    for v in &sphere.vertices {
        err = err.max((translation_distance(o, *v)? - 2.5).abs());
    }
    rows.bound(6, "sphere mesh radius error", err, tol.sphere);
    rows.check(6, "sphere mesh closed", sphere.is_closed());

    let all_pass = rows.0.iter().all(|r| r.pass);
    Ok((
        Table {
            tolerances: *tol,
            rows: rows.0,
            all_pass,
        },
        Artifacts {
            sphere,
            planar_locus: locus.locus.points,
        },
    ))
}
