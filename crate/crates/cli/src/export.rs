//! Text mesh files (`v x y z` / `f i j k`, 1-based) and polyline arrays.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use solgeom::{Point, TriangleMesh};

/// Renders `mesh` as text: one `v` line per vertex with 17 significant digits,
/// one `f` line per triangle, LF line ends.
pub fn mesh_to_text(mesh: &TriangleMesh) -> String {
    let mut out = String::with_capacity(64 * mesh.vertices.len() + 32 * mesh.triangles.len());
    for v in &mesh.vertices {
        let _ = writeln!(out, "v {:.16e} {:.16e} {:.16e}", v.x, v.y, v.z);
    }
    for t in &mesh.triangles {
        let _ = writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
    }
    out
}

/// Writes `mesh` to `path`; an empty mesh is refused.
pub fn export_mesh(mesh: &TriangleMesh, path: &Path) -> io::Result<()> {
    if mesh.is_empty() {
        return Err(io::Error::new(
            io::ErrorKind::InvalidInput,
            "refusing to export an empty mesh",
        ));
    }
    std::fs::write(path, mesh_to_text(mesh))
}

/// Reads `v` and `f` lines back. Comments, blank lines and other records are
/// skipped; `f` entries may carry `/texture/normal` suffixes.
pub fn parse_mesh_text(text: &str) -> Result<TriangleMesh, String> {
    let mut mesh = TriangleMesh::default();
    for (n, line) in text.lines().enumerate() {
        let mut it = line.split_whitespace();
        match it.next() {
            Some("v") => {
                let c: Vec<f64> = it
                    .take(3)
                    .map(|s| s.parse::<f64>().map_err(|e| format!("line {}: {e}", n + 1)))
                    .collect::<Result<_, _>>()?;
                if c.len() != 3 {
                    return Err(format!("line {}: vertex needs 3 coordinates", n + 1));
                }
                mesh.vertices.push(Point::new(c[0], c[1], c[2]));
                mesh.attribution.push(0.0);
            }
            Some("f") => {
                let idx: Vec<usize> = it
                    .map(|s| {
                        let head = s.split('/').next().unwrap_or(s);
                        match head.parse::<usize>() {
                            Ok(i) if i >= 1 => Ok(i - 1),
                            _ => Err(format!("line {}: bad face index {s:?}", n + 1)),
                        }
                    })
                    .collect::<Result<_, _>>()?;
                if idx.len() != 3 {
                    return Err(format!("line {}: only triangles are supported", n + 1));
                }
                mesh.triangles.push([idx[0], idx[1], idx[2]]);
            }
            _ => {}
        }
    }
    mesh.validate().map_err(|e| e.to_string())?;
    Ok(mesh)
}

/// Points as `[x, y, z]` arrays.
pub fn polyline_arrays(points: &[Point]) -> Vec<[f64; 3]> {
    points.iter().map(|p| p.to_array()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_triangle() -> TriangleMesh {
        TriangleMesh {
            vertices: vec![
                Point::new(0.1, -2.0 / 3.0, 1e-300),
                Point::new(std::f64::consts::PI, 7.0, -0.0),
                Point::new(1.0 / 7.0, 123456.789, -5e-17),
            ],
            triangles: vec![[0, 1, 2]],
            attribution: vec![0.0; 3],
        }
    }

    #[test]
    fn single_triangle_layout() {
        let text = mesh_to_text(&one_triangle());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[..3].iter().all(|l| l.starts_with("v ")));
        assert_eq!(lines[3], "f 1 2 3");
        assert!(text.ends_with('\n') && !text.contains('\r'));
    }

    #[test]
    fn roundtrip_is_bit_exact() {
        let m = one_triangle();
        let back = parse_mesh_text(&mesh_to_text(&m)).unwrap();
        assert_eq!(back.triangles, m.triangles);
        for (a, b) in back.vertices.iter().zip(&m.vertices) {
            assert_eq!(a.x.to_bits(), b.x.to_bits());
            assert_eq!(a.y.to_bits(), b.y.to_bits());
            assert_eq!(a.z.to_bits(), b.z.to_bits());
        }
    }

    #[test]
    fn parser_accepts_common_variants() {
        let m = parse_mesh_text("# c\nv 0 0 0\nv 1 0 0\nv 0 1 0\nvn 0 0 1\nf 1//1 2//1 3//1\n")
            .unwrap();
        assert_eq!(m.triangles, vec![[0, 1, 2]]);
        assert!(parse_mesh_text("v 0 0 0\nf 1 2 3\n").is_err());
        assert!(parse_mesh_text("v 0 0\n").is_err());
    }
}
