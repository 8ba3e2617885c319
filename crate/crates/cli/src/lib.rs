//! Command-line adapter over the `solgeom` kernel.
//!
//! Every subcommand maps its arguments onto one library call and serializes
//! the result. Numeric values pass through unchanged.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod export;
pub mod golden;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use solgeom::ball::{ball_volume, section_semiaxes, sphere_mesh, SphereSpec};
use solgeom::bisector::{bisector_mesh, equidistant_locus, pair_residual};
use solgeom::curves::{curve_params, curve_segment, translation_distance};
use solgeom::tetra::{circumsphere, validate_tetrahedron, TranslationTetrahedron};
use solgeom::triangle::{solve_equilateral_vertex, triangle_report, TranslationTriangle};
use solgeom::{Point, Region, Resolution, SolError, TriangleMesh};

/// Exit status of a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit status for unparseable or invalid input.
pub const EXIT_PARSE: i32 = 2;
/// Exit status when an iterative solve does not converge.
pub const EXIT_NO_CONVERGENCE: i32 = 3;
/// Exit status for file system failures.
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "solgeom",
    version,
    about = "Translation distances, bisectors and spheres in Sol geometry"
)]
pub struct Cli {
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Output format; `mesh-text` applies to mesh-producing commands.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    MeshText,
}

/// Points given as `x,y,z` arguments, or read from a JSON file of `[x, y, z]` arrays.
#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[arg(value_name = "X,Y,Z")]
    pub points: Vec<String>,

    /// JSON file holding an array of `[x, y, z]` points.
    #[arg(long, value_name = "FILE")]
    pub points_file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Translation distance between two points.
    Dist(PointArgs),
    /// Direction angles and length of the translation curve from the origin.
    Params(PointArgs),
    /// Sampled translation segment between two points.
    Curve {
        #[command(flatten)]
        points: PointArgs,
        #[arg(long, default_value_t = 65)]
        samples: usize,
    },
    /// Mesh of the bisector surface of two points.
    Bisector {
        #[command(flatten)]
        points: PointArgs,
        /// Box `x0,x1,y0,y1,z0,z1`; defaults to a cube around both points.
        #[arg(long, allow_hyphen_values = true)]
        region: Option<String>,
        /// Grid nodes per axis `nx,ny,nz`.
        #[arg(long, default_value = "41,41,41")]
        resolution: String,
        /// Vertex membership tolerance reported in the summary.
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
    /// Points equidistant from three vertices, one per sampled height.
    Locus {
        #[command(flatten)]
        points: PointArgs,
        /// Height range `z0,z1`.
        #[arg(long, allow_hyphen_values = true, default_value = "-1,1")]
        z_range: String,
        #[arg(long, default_value_t = 41)]
        samples: usize,
    },
    /// Sides, angles and inequality flags of a triangle.
    Triangle(PointArgs),
    /// Third vertex `(x3, y, z)` of an equilateral triangle with the origin and A2.
    Equilateral {
        #[command(flatten)]
        points: PointArgs,
        #[arg(long, allow_hyphen_values = true)]
        x3: f64,
    },
    /// Circumscribed sphere of a tetrahedron.
    Circumsphere(PointArgs),
    /// Parametric mesh of a sphere.
    Sphere {
        #[arg(allow_hyphen_values = true)]
        radius: f64,
        #[arg(long, allow_hyphen_values = true, default_value = "0,0,0")]
        center: String,
        /// Longitude count; the altitude count is half of it.
        #[arg(long, default_value_t = 64)]
        samples: usize,
        /// Also report the plane-section ellipse at this altitude.
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<f64>,
    },
    /// Volume of the ball of the given radius.
    BallVolume {
        #[arg(allow_hyphen_values = true)]
        radius: f64,
    },
    /// Recompute the reference table.
    ReproducePaper {
        /// Directory for the meshes and polylines behind the table.
        #[arg(long)]
        artifacts: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Numeric(#[from] SolError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Numeric(
                SolError::NoConvergence { .. } | SolError::BranchResolution { .. },
            ) => EXIT_NO_CONVERGENCE,
            CliError::Numeric(_) => EXIT_PARSE,
            CliError::Io { .. } => EXIT_IO,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Numeric(SolError::NoConvergence { .. }) => "no_convergence",
            CliError::Numeric(SolError::BranchResolution { .. }) => "branch_resolution",
            CliError::Numeric(SolError::DomainOverflow { .. }) => "domain_overflow",
            CliError::Numeric(SolError::Domain(_)) => "domain",
            CliError::Numeric(SolError::DegenerateInput(_)) => "degenerate_input",
            CliError::Numeric(SolError::DegenerateTriangle(_)) => "degenerate_triangle",
            CliError::Numeric(SolError::DegenerateTetrahedron(_)) => "degenerate_tetrahedron",
            CliError::Io { .. } => "io",
        }
    }

    /// Machine-readable error document.
    pub fn to_json(&self) -> Value {
        let mut body = json!({ "kind": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() });
        if let CliError::Numeric(SolError::NoConvergence {
            attempts,
            best_residual,
            ..
        }) = self
        {
            body["attempts"] = json!(attempts);
            body["best_residual"] = json!(best_residual);
        }
        json!({ "error": body })
    }
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Parses a number, also accepting `p/q`.
pub fn parse_real(s: &str) -> Result<f64, CliError> {
    let s = s.trim();
    let bad = || CliError::Parse(format!("not a number: {s:?}"));
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let (p, q): (f64, f64) = (
                p.trim().parse().map_err(|_| bad())?,
                q.trim().parse().map_err(|_| bad())?,
            );
            if q == 0.0 {
                return Err(bad());
            }
            p / q
        }
        None => s.parse().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// Parses `n` comma-separated numbers.
pub fn parse_list(s: &str, n: usize) -> Result<Vec<f64>, CliError> {
    let v: Vec<f64> = s.split(',').map(parse_real).collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(CliError::Parse(format!(
            "expected {n} comma-separated values, got {s:?}"
        )));
    }
    Ok(v)
}

/// Parses `x,y,z`.
pub fn parse_point(s: &str) -> Result<Point, CliError> {
    let v = parse_list(s, 3)?;
    Ok(Point::new(v[0], v[1], v[2]))
}

impl PointArgs {
    /// Resolves the points and checks their count.
    pub fn resolve(&self, n: usize) -> Result<Vec<Point>, CliError> {
        let mut pts: Vec<Point> = self
            .points
            .iter()
            .map(|s| parse_point(s))
            .collect::<Result<_, _>>()?;
        if let Some(path) = &self.points_file {
            let text = std::fs::read_to_string(path).map_err(io_error(path))?;
            let arr: Vec<[f64; 3]> = serde_json::from_str(&text)
                .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
            pts.extend(arr.into_iter().map(|[x, y, z]| Point::new(x, y, z)));
        }
        if pts.len() != n {
            return Err(CliError::Parse(format!(
                "expected {n} point(s), got {}",
                pts.len()
            )));
        }
        Ok(pts)
    }
}

/// Result of a command, ready to be written.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Json(Value),
    Text(String),
}

impl Output {
    /// Final text with a trailing newline.
    pub fn render(&self) -> String {
        match self {
            Output::Json(v) => {
                let mut s = serde_json::to_string_pretty(v).unwrap_or_else(|_| "null".into());
                s.push('\n');
                s
            }
            Output::Text(t) => t.clone(),
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn mesh_json(mesh: &TriangleMesh) -> Value {
    json!({
        "vertices": export::polyline_arrays(&mesh.vertices),
        "triangles": mesh.triangles,
    })
}

fn mesh_output(format: Format, mesh: &TriangleMesh, summary: Value) -> Output {
    match format {
        Format::MeshText => Output::Text(export::mesh_to_text(mesh)),
        Format::Json => {
            let mut v = summary;
            v["mesh"] = mesh_json(mesh);
            Output::Json(v)
        }
    }
}

fn json_only(format: Format, name: &str) -> Result<(), CliError> {
    match format {
        Format::Json => Ok(()),
        Format::MeshText => Err(CliError::Parse(format!("{name} does not produce a mesh"))),
    }
}

fn default_region(p1: Point, p2: Point) -> Result<Region, CliError> {
    let c = Point::new(
        0.5 * (p1.x + p2.x),
        0.5 * (p1.y + p2.y),
        0.5 * (p1.z + p2.z),
    );
    Ok(Region::around(c, p1.max_norm_diff(&p2).max(1.5))?)
}

/// Runs one parsed command.
pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let fmt = cli.format;
    match &cli.command {
        Command::Dist(p) => {
            json_only(fmt, "dist")?;
            let v = p.resolve(2)?;
            Ok(Output::Json(
                json!({ "distance": translation_distance(v[0], v[1])? }),
            ))
        }
        Command::Params(p) => {
            json_only(fmt, "params")?;
            let v = p.resolve(1)?;
            Ok(Output::Json(to_json(&curve_params(v[0])?)))
        }
        Command::Curve { points, samples } => {
            json_only(fmt, "curve")?;
            let v = points.resolve(2)?;
            let line = curve_segment(v[0], v[1], *samples)?;
            Ok(Output::Json(json!({
                "length": translation_distance(v[0], v[1])?,
                "points": export::polyline_arrays(&line.points),
            })))
        }
        Command::Bisector {
            points,
            region,
            resolution,
            tolerance,
        } => {
            let v = points.resolve(2)?;
            let region = match region {
                Some(s) => {
                    let b = parse_list(s, 6)?;
                    Region::from_bounds([b[0], b[1], b[2], b[3], b[4], b[5]])?
                }
                None => default_region(v[0], v[1])?,
            };
            let r = parse_list(resolution, 3)?;
            let count = |x: f64| -> Result<usize, CliError> {
                if x.fract() == 0.0 && x >= 0.0 {
                    Ok(x as usize)
                } else {
                    Err(CliError::Parse(format!(
                        "resolution must be whole numbers, got {resolution:?}"
                    )))
                }
            };
            let res = Resolution::new(count(r[0])?, count(r[1])?, count(r[2])?)?;
            if !(*tolerance > 0.0) {
                return Err(CliError::Parse(format!(
                    "tolerance must be positive, got {tolerance}"
                )));
            }
            let mesh = bisector_mesh(v[0], v[1], &region, &res)?;
            let mut worst = 0.0f64;
            for p in &mesh.vertices {
                worst = worst.max(pair_residual(v[0], v[1], *p)?.abs());
            }
            let summary = json!({
                "vertex_count": mesh.vertices.len(),
                "triangle_count": mesh.triangles.len(),
                "max_vertex_residual": worst,
                "tolerance": tolerance,
                "within_tolerance": worst <= *tolerance,
            });
            Ok(mesh_output(fmt, &mesh, summary))
        }
        Command::Locus {
            points,
            z_range,
            samples,
        } => {
            json_only(fmt, "locus")?;
            let v = points.resolve(3)?;
            let z = parse_list(z_range, 2)?;
            let res = equidistant_locus(v[0], v[1], v[2], (z[0], z[1]), *samples)?;
            Ok(Output::Json(json!({
                "points": export::polyline_arrays(&res.locus.points),
                "heights": res.locus.parameterization,
                "omitted": res.omitted,
                "max_third_residual": res.max_third_residual,
            })))
        }
        Command::Triangle(p) => {
            json_only(fmt, "triangle")?;
            let v = p.resolve(3)?;
            let rep = triangle_report(&TranslationTriangle::new(v[0], v[1], v[2])?)?;
            Ok(Output::Json(to_json(&rep)))
        }
        Command::Equilateral { points, x3 } => {
            json_only(fmt, "equilateral")?;
            let v = points.resolve(1)?;
            let sol = solve_equilateral_vertex(Point::ORIGIN, v[0], *x3)?;
            let rep = triangle_report(&TranslationTriangle::new(Point::ORIGIN, v[0], sol.vertex)?)?;
            let mut out = to_json(&sol);
            out["triangle"] = to_json(&rep);
            Ok(Output::Json(out))
        }
        Command::Circumsphere(p) => {
            json_only(fmt, "circumsphere")?;
            let v = p.resolve(4)?;
            let tet = TranslationTetrahedron::new([v[0], v[1], v[2], v[3]])?;
            let (sphere, report) = circumsphere(&tet)?;
            Ok(Output::Json(json!({
                "center": sphere.center,
                "radius": sphere.radius,
                "residuals": sphere.residuals,
                "solve": report,
                "validity": validate_tetrahedron(&tet)?,
            })))
        }
        Command::Sphere {
            radius,
            center,
            samples,
            theta,
        } => {
            let spec = SphereSpec::new(*radius, parse_point(center)?)?;
            let mesh = sphere_mesh(&spec, *samples, (*samples / 2).max(3))?;
            let mut summary = json!({
                "radius": spec.radius,
                "center": spec.center,
                "vertex_count": mesh.vertices.len(),
                "triangle_count": mesh.triangles.len(),
                "closed": mesh.is_closed(),
            });
            if let Some(t) = theta {
                summary["section"] = to_json(&section_semiaxes(*radius, *t)?);
            }
            Ok(mesh_output(fmt, &mesh, summary))
        }
        Command::BallVolume { radius } => {
            json_only(fmt, "ball-volume")?;
            Ok(Output::Json(to_json(&ball_volume(*radius)?)))
        }
        Command::ReproducePaper { artifacts } => {
            json_only(fmt, "reproduce-paper")?;
            let (table, art) = golden::reproduce(&golden::Tolerances::default())?;
            if let Some(dir) = artifacts {
                write_artifacts(dir, &art)?;
            }
            Ok(Output::Json(to_json(&table)))
        }
    }
}

/// Writes the reference meshes and polylines into `dir`.
fn write_artifacts(dir: &Path, art: &golden::Artifacts) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(io_error(dir))?;
    let o = Point::ORIGIN;
    let skew = bisector_mesh(
        o,
        Point::new(-1.0, 1.0, 0.5),
        &Region::from_bounds([-2.0, 2.0, -2.0, 2.0, -1.5, 1.5])?,
        &Resolution::new(61, 61, 41)?,
    )?;
    let vertical = bisector_mesh(
        o,
        Point::new(0.0, 0.0, 2.0),
        &Region::around(o, 1.5)?,
        &Resolution::new(41, 41, 41)?,
    )?;
    let spatial = equidistant_locus(
        o,
        Point::new(2.0, 1.0, -0.75),
        Point::new(1.0, -0.5, 2.0 / 3.0),
        (-1.0, 1.0),
        81,
    )?;
    let meshes = [
        ("sphere_r2.5.obj", &art.sphere),
        ("bisector_skew.obj", &skew),
        ("bisector_vertical.obj", &vertical),
    ];
    for (name, mesh) in meshes {
        let path = dir.join(name);
        export::export_mesh(mesh, &path).map_err(io_error(&path))?;
    }
    let lines = [
        ("locus_planar.json", &art.planar_locus),
        ("locus_spatial.json", &spatial.locus.points),
    ];
    for (name, pts) in lines {
        let path = dir.join(name);
        let text = serde_json::to_string(&export::polyline_arrays(pts)).unwrap_or_default();
        std::fs::write(&path, text + "\n").map_err(io_error(&path))?;
    }
    Ok(())
}

/// Shields comma lists with a leading minus (`-1,2,0.5`) from being read as
/// short flags. The added space is trimmed again by [`parse_real`].
fn shield_negative_lists(arg: std::ffi::OsString) -> std::ffi::OsString {
    match arg.to_str() {
        Some(s)
            if s.contains(',')
                && s.strip_prefix('-')
                    .is_some_and(|r| r.starts_with(|c: char| c.is_ascii_digit() || c == '.')) =>
        {
            format!(" {s}").into()
        }
        _ => arg,
    }
}

/// Parses `args`, runs the command and writes its output.
///
/// Returns the exit status and the text meant for standard output.
pub fn main_with_args<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args.into_iter().map(|a| shield_negative_lists(a.into()))) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (EXIT_OK, e.to_string());
            }
            let err = CliError::Parse(e.render().to_string().trim_end().to_string());
            return (err.exit_code(), Output::Json(err.to_json()).render());
        }
    };
    let result = run(&cli).and_then(|out| {
        let text = out.render();
        match &cli.output {
            Some(path) => {
                std::fs::write(path, &text).map_err(io_error(path))?;
                Ok(String::new())
            }
            None => Ok(text),
        }
    });
    match result {
        Ok(text) => (EXIT_OK, text),
        Err(e) => (e.exit_code(), Output::Json(e.to_json()).render()),
    }
}
