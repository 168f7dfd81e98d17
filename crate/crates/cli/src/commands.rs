use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use selfmetric::alexandrov::{self, Sign};
use selfmetric::center::optimal_center_2d_from;
use selfmetric::conjecture::{self, SearchConfig};
use selfmetric::io::{self as sio, Shape};
use selfmetric::perimeter::{
    busemann_perimeter_polygon, kgon_self_perimeter, self_perimeter_polygon, self_perimeter_smooth,
};
use selfmetric::selfvolume::{self_volume_with, SelfVolumeOptions};
use selfmetric::{shapes, BarycentricPoint, GeometryError, Perimeter2Result, Polygon2, PolytopeN};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::{SignArg, VariantArg};

/// Everything a command produces; written only after the command succeeds.
pub struct Artifacts {
    main: Vec<u8>,
    extra: Vec<(PathBuf, Vec<u8>)>,
}

impl Artifacts {
    fn new(main: Vec<u8>) -> Self {
        Self {
            main,
            extra: Vec::new(),
        }
    }

    pub fn write(self, out: Option<&Path>) -> Result<(), CliError> {
        for (path, bytes) in &self.extra {
            write_file(path, bytes)?;
        }
        match out {
            Some(path) => write_file(path, &self.main),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(&self.main)
                    .and_then(|_| stdout.flush())
                    .map_err(|source| CliError::File {
                        path: "<stdout>".into(),
                        source,
                    })
            }
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::File {
        path: path.display().to_string(),
        source,
    })
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::File {
        path: path.display().to_string(),
        source,
    })
}

fn load_shape(path: &Path) -> Result<Shape, CliError> {
    Ok(sio::parse_shape(&read_file(path)?)?)
}

fn body_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "body".into())
}

fn csv_bytes<R: Serialize>(rows: &[R]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|source| CliError::File {
        path: "<buffer>".into(),
        source,
    })?;
    Ok(w.into_inner().expect("buffer flushed"))
}

fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("result serializes");
    v.push(b'\n');
    v
}

fn polygon_of(shape: &Shape) -> Result<Polygon2, CliError> {
    shape.as_polygon().ok_or_else(|| {
        CliError::Config(format!("expected a planar polygon, got a {}", shape.kind()))
    })
}

#[derive(Serialize)]
struct PerimeterRow {
    body_id: String,
    variant: &'static str,
    method: &'static str,
    value: f64,
    nodes: Option<usize>,
}

fn perimeter_row(id: &str, r: Perimeter2Result) -> PerimeterRow {
    PerimeterRow {
        body_id: id.to_string(),
        variant: r.variant.as_str(),
        method: r.method.as_str(),
        value: r.value,
        nodes: r.node_count,
    }
}

/// Cartesian center, or barycentric weights on a triangle's vertices.
fn resolve_center(
    poly: &Polygon2,
    center: Option<&[f64]>,
    barycentric: bool,
) -> Result<[f64; 2], CliError> {
    let Some(c) = center else {
        if barycentric {
            return Err(CliError::Config("--barycentric needs --center".into()));
        }
        return Ok([0.0, 0.0]);
    };
    if !barycentric {
        if c.len() != 2 {
            return Err(CliError::Config(format!(
                "--center needs 2 coordinates, got {}",
                c.len()
            )));
        }
        return Ok([c[0], c[1]]);
    }
    if poly.len() != 3 {
        return Err(CliError::Config(
            "--barycentric applies to triangles only".into(),
        ));
    }
    let mut w = c.to_vec();
    match w.len() {
        2 => w.push(1.0 - w[0] - w[1]),
        3 => {}
        n => {
            return Err(CliError::Config(format!(
                "--barycentric needs 2 or 3 weights, got {n}"
            )))
        }
    }
    let bary = BarycentricPoint::new(w)?;
    let verts: Vec<Vec<f64>> = poly.vertices().iter().map(|v| v.to_vec()).collect();
    let p = bary.to_cartesian(&verts)?;
    Ok([p[0], p[1]])
}

pub fn perimeter(
    cfg: &RunConfig,
    center: Option<&[f64]>,
    barycentric: bool,
    variant: VariantArg,
) -> Result<Artifacts, CliError> {
    let path = &cfg.inputs[0];
    let id = body_id(path);
    let shape = load_shape(path)?;
    let mut rows = Vec::new();
    match &shape {
        Shape::Profile(profile) => {
            if center.is_some_and(|c| c.iter().any(|x| *x != 0.0)) {
                return Err(CliError::Config(
                    "smooth profiles are evaluated about the origin only".into(),
                ));
            }
            if variant == VariantArg::Busemann {
                return Err(CliError::Config(
                    "the busemann variant is computed for polygons only".into(),
                ));
            }
            rows.push(perimeter_row(&id, self_perimeter_smooth(profile, cfg.nodes)?));
        }
        _ => {
            let poly = polygon_of(&shape)?;
            let p = resolve_center(&poly, center, barycentric)?;
            if !poly.contains_strictly(p) {
                return Err(GeometryError::OriginNotInterior.into());
            }
            if matches!(variant, VariantArg::Directed | VariantArg::Both) {
                rows.push(perimeter_row(&id, self_perimeter_polygon(&poly, p)?));
            }
            if matches!(variant, VariantArg::Busemann | VariantArg::Both) {
                rows.push(perimeter_row(&id, busemann_perimeter_polygon(&poly, p)?));
            }
        }
    }
    Ok(Artifacts::new(csv_bytes(&rows)?))
}

#[derive(Serialize)]
struct VolumeReport {
    body_id: String,
    value: f64,
    dim: usize,
    facets: Vec<selfmetric::selfvolume::FacetContribution>,
}

pub fn volume(
    cfg: &RunConfig,
    center: Option<&[f64]>,
    breakdown: Option<&Path>,
) -> Result<Artifacts, CliError> {
    let path = &cfg.inputs[0];
    let shape = load_shape(path)?;
    let mut poly = shape.as_polytope().ok_or_else(|| {
        CliError::Config("self-volume needs a polygon or polytope".into())
    })?;
    if let Some(c) = center {
        if c.len() != poly.dim() {
            return Err(CliError::Config(format!(
                "--center needs {} coordinates, got {}",
                poly.dim(),
                c.len()
            )));
        }
        poly = poly.translated(&c.iter().map(|x| -x).collect::<Vec<_>>())?;
    }
    let r = self_volume_with(&poly, SelfVolumeOptions { max_dim: cfg.max_dim })?;
    let mut artifacts = Artifacts::new(json_bytes(&VolumeReport {
        body_id: body_id(path),
        value: r.value,
        dim: r.dim,
        facets: r.facet_contributions.clone(),
    }));
    if let Some(b) = breakdown {
        artifacts
            .extra
            .push((b.to_path_buf(), csv_bytes(&r.facet_contributions)?));
    }
    Ok(artifacts)
}

#[derive(Serialize)]
struct CenterRow {
    seed: u64,
    optimum_x: f64,
    optimum_y: f64,
    value: f64,
    iterations: usize,
}

pub fn center(cfg: &RunConfig, variant: VariantArg, restarts: usize) -> Result<Artifacts, CliError> {
    let variant = match variant {
        VariantArg::Directed => selfmetric::Variant::Directed,
        VariantArg::Busemann => selfmetric::Variant::Busemann,
        VariantArg::Both => {
            return Err(CliError::Config(
                "center takes --variant directed or busemann".into(),
            ))
        }
    };
    if restarts == 0 {
        return Err(CliError::Config("--restarts must be positive".into()));
    }
    let poly = polygon_of(&load_shape(&cfg.inputs[0])?)?;
    let rows: Vec<CenterRow> = (0..restarts as u64)
        .into_par_iter()
        .map(|i| {
            let seed = cfg.seed.wrapping_add(i);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let start = shapes::random_interior_point(&mut rng, &poly);
            let r = optimal_center_2d_from(&poly, variant, start)?;
            Ok(CenterRow {
                seed,
                optimum_x: r.optimum[0],
                optimum_y: r.optimum[1],
                value: r.value,
                iterations: r.iterations,
            })
        })
        .collect::<Result<_, CliError>>()?;
    Ok(Artifacts::new(csv_bytes(&rows)?))
}

#[derive(Serialize)]
struct KgonRow {
    k: usize,
    closed_form: f64,
    polygon_exact: f64,
    abs_diff: f64,
}

pub fn kgon_table(cfg: &RunConfig, k_min: usize, k_max: usize) -> Result<Artifacts, CliError> {
    if k_min < 3 || k_max < k_min || k_max > 100_000 {
        return Err(CliError::Config(format!(
            "need 3 <= k-min <= k-max <= 100000, got {k_min}..{k_max}"
        )));
    }
    let rows: Vec<KgonRow> = (k_min..=k_max)
        .into_par_iter()
        .map(|k| {
            let closed_form = kgon_self_perimeter(k)?;
            let polygon_exact =
                self_perimeter_polygon(&shapes::regular_polygon(k, 1.0), [0.0, 0.0])?.value;
            Ok(KgonRow {
                k,
                closed_form,
                polygon_exact,
                abs_diff: (closed_form - polygon_exact).abs(),
            })
        })
        .collect::<Result<_, CliError>>()?;
    if let Some(bad) = rows.iter().find(|r| r.abs_diff > cfg.tolerance) {
        return Err(GeometryError::Invariant(format!(
            "k = {}: closed form and polygon sum differ by {:e}",
            bad.k, bad.abs_diff
        ))
        .into());
    }
    Ok(Artifacts::new(csv_bytes(&rows)?))
}

#[derive(Serialize)]
struct AlexandrovReport {
    epsilon: f64,
    sign: Sign,
    phi0: f64,
    residual: f64,
    nodes: usize,
    kmax: usize,
    radius_coeffs: Vec<(i64, f64, f64)>,
    warnings: Vec<String>,
    svg: String,
}

pub fn alexandrov(
    cfg: &RunConfig,
    epsilon: Option<f64>,
    sign: SignArg,
    kmax: usize,
    svg_path: Option<&Path>,
) -> Result<Artifacts, CliError> {
    let mut density = sio::parse_density(&read_file(&cfg.inputs[0])?)?;
    if let Some(e) = epsilon {
        density = density.with_epsilon(e)?;
    }
    let sign = match sign {
        SignArg::Plus => Sign::Plus,
        SignArg::Minus => Sign::Minus,
    };
    let r = alexandrov::reconstruct(&density, sign, cfg.nodes, kmax)?;
    let svg = sio::svg_polar_plot(&r.radius, 720, 400.0);
    let mut artifacts = Artifacts::new(json_bytes(&AlexandrovReport {
        epsilon: r.epsilon,
        sign: r.sign,
        phi0: r.phi0,
        residual: r.residual,
        nodes: r.nodes,
        kmax,
        radius_coeffs: r.radius.series().to_triples(),
        warnings: r.warnings,
        svg: svg.clone(),
    }));
    if let Some(p) = svg_path {
        artifacts.extra.push((p.to_path_buf(), svg.into_bytes()));
    }
    Ok(artifacts)
}

#[derive(Serialize)]
struct InvarianceRow {
    trial: usize,
    det: f64,
    original: f64,
    transformed: f64,
    abs_diff: f64,
    within_tolerance: bool,
}

pub fn invariance_check(cfg: &RunConfig, trials: usize) -> Result<Artifacts, CliError> {
    let shape = load_shape(&cfg.inputs[0])?;
    let poly: PolytopeN = shape.as_polytope().ok_or_else(|| {
        CliError::Config("invariance check needs a polygon or polytope".into())
    })?;
    let opts = SelfVolumeOptions { max_dim: cfg.max_dim };
    let original = self_volume_with(&poly, opts)?.value;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let matrices: Vec<Vec<Vec<f64>>> = (0..trials)
        .map(|_| shapes::random_matrix(&mut rng, poly.dim()))
        .collect();
    let rows: Vec<InvarianceRow> = matrices
        .par_iter()
        .enumerate()
        .map(|(trial, m)| {
            let image = poly.affine_image(m)?;
            let transformed = self_volume_with(&image, opts)?.value;
            let abs_diff = (transformed - original).abs();
            Ok(InvarianceRow {
                trial,
                det: selfmetric::linalg::determinant(m),
                original,
                transformed,
                abs_diff,
                within_tolerance: abs_diff <= cfg.tolerance * original.abs().max(1.0),
            })
        })
        .collect::<Result<_, CliError>>()?;
    Ok(Artifacts::new(csv_bytes(&rows)?))
}

pub fn conjecture_search(cfg: &RunConfig, search: SearchConfig) -> Result<Artifacts, CliError> {
    if search.dim > cfg.max_dim {
        return Err(GeometryError::DimensionTooLarge {
            dim: search.dim,
            max: cfg.max_dim,
        }
        .into());
    }
    let report = conjecture::conjecture_search(&search)?;
    Ok(Artifacts::new(json_bytes(&report)))
}
