//! JSON shape and density files, and SVG polar plots.
//!
//! Shape files are tagged by `"type"`:
//!
//! ```json
//! {"type": "polygon2", "vertices": [[x, y], ...]}
//! {"type": "polytope", "dim": 3, "vertices": [[x, y, z], ...]}
//! {"type": "radius_profile", "coeffs": [[k, re, im], ...]}
//! ```
//!
//! Density files are `{"coeffs": [[k, re, im], ...], "epsilon": e}`.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alexandrov::FourierDensity;
use crate::error::GeometryError;
use crate::fourier::FourierSeries;
use crate::polygon::{Point2, Polygon2};
use crate::polytope::PolytopeN;
use crate::profile::RadiusProfile;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("schema violation at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl IoError {
    /// Stable short name for machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            IoError::Schema { .. } => "schema",
            IoError::Geometry(GeometryError::OriginNotInterior) => "origin-not-interior",
            IoError::Geometry(GeometryError::InvalidBody(_)) => "invalid-body",
            IoError::Geometry(GeometryError::Domain(_)) => "domain",
            IoError::Geometry(_) => "geometry",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ShapeFile {
    Polygon2 { vertices: Vec<[f64; 2]> },
    Polytope { dim: usize, vertices: Vec<Vec<f64>> },
    RadiusProfile { coeffs: Vec<(i64, f64, f64)> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityFile {
    pub coeffs: Vec<(i64, f64, f64)>,
    pub epsilon: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Polygon(Polygon2),
    Polytope(PolytopeN),
    Profile(RadiusProfile),
}

impl Shape {
    pub fn kind(&self) -> &'static str {
        match self {
            Shape::Polygon(_) => "polygon2",
            Shape::Polytope(_) => "polytope",
            Shape::Profile(_) => "radius_profile",
        }
    }

    /// Any two-dimensional polytope as a polygon.
    pub fn as_polygon(&self) -> Option<Polygon2> {
        match self {
            Shape::Polygon(p) => Some(p.clone()),
            Shape::Polytope(p) if p.dim() == 2 => p.to_polygon().ok(),
            _ => None,
        }
    }

    pub fn as_polytope(&self) -> Option<PolytopeN> {
        match self {
            Shape::Polygon(p) => Some(PolytopeN::from_polygon(p)),
            Shape::Polytope(p) => Some(p.clone()),
            Shape::Profile(_) => None,
        }
    }

    /// Same body up to vertex order (coefficient equality for profiles).
    pub fn same_body(&self, other: &Shape, tol: f64) -> bool {
        match (self, other) {
            (Shape::Profile(a), Shape::Profile(b)) => {
                let n = a.series().max_degree().max(b.series().max_degree()) as i64;
                (0..=n).all(|k| (a.series().coeff(k) - b.series().coeff(k)).norm() <= tol)
            }
            (Shape::Profile(_), _) | (_, Shape::Profile(_)) => false,
            _ => self
                .as_polytope()
                .zip(other.as_polytope())
                .is_some_and(|(a, b)| a.same_vertices(&b, tol)),
        }
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, IoError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| IoError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

fn from_value<T: for<'de> Deserialize<'de>>(value: serde_json::Value) -> Result<T, IoError> {
    serde_path_to_error::deserialize(value).map_err(|e| IoError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolygonFields {
    vertices: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolytopeFields {
    dim: usize,
    vertices: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileFields {
    coeffs: Vec<(i64, f64, f64)>,
}

/// Reads a shape file. The tag is dispatched by hand so that schema errors in
/// the body report their field path.
fn parse_shape_file(text: &str) -> Result<ShapeFile, IoError> {
    let mut value: serde_json::Value = parse(text)?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| schema(".", "expected a JSON object"))?;
    let tag = match obj.remove("type") {
        Some(serde_json::Value::String(t)) => t,
        Some(_) => return Err(schema("type", "expected a string")),
        None => return Err(schema("type", "missing field `type`")),
    };
    Ok(match tag.as_str() {
        "polygon2" => {
            let f: PolygonFields = from_value(value)?;
            ShapeFile::Polygon2 { vertices: f.vertices }
        }
        "polytope" => {
            let f: PolytopeFields = from_value(value)?;
            ShapeFile::Polytope {
                dim: f.dim,
                vertices: f.vertices,
            }
        }
        "radius_profile" => {
            let f: ProfileFields = from_value(value)?;
            ShapeFile::RadiusProfile { coeffs: f.coeffs }
        }
        other => {
            return Err(schema(
                "type",
                format!("unknown shape type `{other}` (expected polygon2, polytope or radius_profile)"),
            ))
        }
    })
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

pub fn parse_shape(text: &str) -> Result<Shape, IoError> {
    match parse_shape_file(text)? {
        ShapeFile::Polygon2 { vertices } => Ok(Shape::Polygon(Polygon2::new(vertices)?)),
        ShapeFile::Polytope { dim, vertices } => {
            if dim == 0 {
                return Err(schema("dim", "dimension must be positive"));
            }
            if let Some(i) = vertices.iter().position(|v| v.len() != dim) {
                return Err(schema(
                    format!("vertices[{i}]"),
                    format!("expected {dim} coordinates, got {}", vertices[i].len()),
                ));
            }
            let count = vertices.len();
            let poly = PolytopeN::from_vertices(vertices)?;
            if poly.vertices().len() != count {
                return Err(GeometryError::InvalidBody(format!(
                    "{} of {count} vertices are not extreme points",
                    count - poly.vertices().len()
                ))
                .into());
            }
            Ok(Shape::Polytope(poly))
        }
        ShapeFile::RadiusProfile { coeffs } => Ok(Shape::Profile(RadiusProfile::new(
            FourierSeries::from_triples(&coeffs)?,
        )?)),
    }
}

pub fn shape_to_file(shape: &Shape) -> ShapeFile {
    match shape {
        Shape::Polygon(p) => ShapeFile::Polygon2 {
            vertices: p.vertices().to_vec(),
        },
        Shape::Polytope(p) => ShapeFile::Polytope {
            dim: p.dim(),
            vertices: p.vertices().to_vec(),
        },
        Shape::Profile(p) => ShapeFile::RadiusProfile {
            coeffs: p.series().to_triples(),
        },
    }
}

pub fn shape_to_json(shape: &Shape) -> String {
    serde_json::to_string_pretty(&shape_to_file(shape)).expect("shape serializes")
}

pub fn parse_density(text: &str) -> Result<FourierDensity, IoError> {
    let file: DensityFile = parse(text)?;
    Ok(FourierDensity::new(
        FourierSeries::from_triples(&file.coeffs)?,
        file.epsilon,
    )?)
}

pub fn density_to_json(density: &FourierDensity) -> String {
    serde_json::to_string_pretty(&DensityFile {
        coeffs: density.phi().to_triples(),
        epsilon: density.epsilon(),
    })
    .expect("density serializes")
}

/// Static SVG of closed curves given in the plane, scaled to fit.
/// Each curve is `(stroke colour, points)`.
pub fn svg_curves(curves: &[(&str, Vec<Point2>)], size: f64) -> String {
    let extent = curves
        .iter()
        .flat_map(|(_, pts)| pts.iter())
        .map(|p| p[0].abs().max(p[1].abs()))
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let half = size / 2.0;
    let s = 0.9 * half / extent;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(
        out,
        r##"<line x1="0" y1="{half}" x2="{size}" y2="{half}" stroke="#ccc"/><line x1="{half}" y1="0" x2="{half}" y2="{size}" stroke="#ccc"/>"##
    );
    for (colour, pts) in curves {
        let mut d = String::new();
        for p in pts {
            let _ = write!(d, "{:.3},{:.3} ", half + s * p[0], half - s * p[1]);
        }
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#,
            d.trim_end()
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Polar plot of `r(θ)` with the unit circle for reference.
pub fn svg_polar_plot(profile: &RadiusProfile, samples: usize, size: f64) -> String {
    let curve = |f: &dyn Fn(f64) -> f64| -> Vec<Point2> {
        (0..samples)
            .map(|j| {
                let t = TAU * j as f64 / samples as f64;
                let r = f(t);
                [r * t.cos(), r * t.sin()]
            })
            .collect()
    };
    svg_curves(
        &[
            ("#999", curve(&|_| 1.0)),
            ("#c03", curve(&|t| profile.r(t))),
        ],
        size,
    )
}
