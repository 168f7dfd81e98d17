//! Convex polytopes in `R^n` given by their vertices.
//!
//! Facets (outward normal, offset, measure, vertex set) are derived from the
//! vertex list by the hull; the vertex representation is the only input.

use crate::error::{GeometryError, Result};
use crate::hull::convex_hull;
use crate::linalg::{
    centroid, determinant, dot, lift, norm, normalized, orthogonal_complement, project, sub,
};
use crate::polygon::Polygon2;

/// Upper bound on the vertex count of a Cartesian product.
pub const MAX_PRODUCT_VERTICES: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    /// Outward unit normal.
    pub normal: Vec<f64>,
    /// `<normal, x>` for `x` on the facet; positive iff the origin is on the inner side.
    pub offset: f64,
    /// `(dim-1)`-dimensional measure.
    pub measure: f64,
    /// Indices into [`PolytopeN::vertices`].
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolytopeN {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    facets: Vec<Facet>,
    tolerance: f64,
}

/// A central section together with the orthonormal basis (in the parent's
/// coordinates) in which the section is expressed.
#[derive(Debug, Clone)]
pub struct Section {
    pub polytope: PolytopeN,
    pub basis: Vec<Vec<f64>>,
}

/// Lebesgue volume of a point set's hull; degenerate sets report zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeResult {
    pub value: f64,
    pub degenerate: bool,
}

impl PolytopeN {
    /// Builds the polytope spanned by `points`. Non-extreme points are discarded.
    pub fn from_vertices(points: Vec<Vec<f64>>) -> Result<Self> {
        let hull = convex_hull(&points)?;
        let mut remap = vec![usize::MAX; points.len()];
        let mut vertices = Vec::with_capacity(hull.vertices.len());
        for (k, &i) in hull.vertices.iter().enumerate() {
            remap[i] = k;
            vertices.push(points[i].clone());
        }
        let facets = hull
            .facets
            .into_iter()
            .map(|f| Facet {
                normal: f.normal,
                offset: f.offset,
                measure: f.measure,
                vertices: f.vertices.iter().map(|&i| remap[i]).collect(),
            })
            .collect();
        Ok(Self {
            dim: hull.dim,
            vertices,
            facets,
            tolerance: hull.tolerance,
        })
    }

    pub fn from_polygon(poly: &Polygon2) -> Self {
        let n = poly.len();
        let vertices: Vec<Vec<f64>> = poly.vertices().iter().map(|v| v.to_vec()).collect();
        let facets = (0..n)
            .map(|i| Facet {
                normal: poly.edge_normal(i).to_vec(),
                offset: poly.edge_offset(i),
                measure: poly.edge_length(i),
                vertices: vec![i, (i + 1) % n],
            })
            .collect();
        let reach = vertices.iter().map(|v| norm(v)).fold(0.0, f64::max);
        Self {
            dim: 2,
            vertices,
            facets,
            tolerance: crate::hull::RELATIVE_TOLERANCE * reach.max(poly.diameter()),
        }
    }

    /// Counter-clockwise polygon for a two-dimensional polytope.
    pub fn to_polygon(&self) -> Result<Polygon2> {
        if self.dim != 2 {
            return Err(GeometryError::Domain(format!(
                "polytope has dimension {}, not 2",
                self.dim
            )));
        }
        Polygon2::from_points(
            &self
                .vertices
                .iter()
                .map(|v| [v[0], v[1]])
                .collect::<Vec<_>>(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Minimum slack `offset - <normal, p>` over facets; positive inside.
    pub fn depth(&self, p: &[f64]) -> f64 {
        self.facets
            .iter()
            .map(|f| f.offset - dot(&f.normal, p))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains_strictly(&self, p: &[f64]) -> bool {
        self.depth(p) > self.tolerance
    }

    pub fn origin_is_interior(&self) -> bool {
        self.facets.iter().all(|f| f.offset > self.tolerance)
    }

    pub fn ensure_origin_interior(&self) -> Result<()> {
        if self.origin_is_interior() {
            Ok(())
        } else {
            Err(GeometryError::OriginNotInterior)
        }
    }

    /// Exit distance of the ray `p + t v`; `v` need not be unit.
    pub fn ray_exit(&self, p: &[f64], v: &[f64]) -> Result<(f64, usize)> {
        if p.len() != self.dim || v.len() != self.dim {
            return Err(GeometryError::Domain("dimension mismatch".into()));
        }
        if norm(v) == 0.0 || !norm(v).is_finite() {
            return Err(GeometryError::Domain("ray direction is zero".into()));
        }
        if !self.contains_strictly(p) {
            return Err(GeometryError::Domain("center is not strictly interior".into()));
        }
        let mut best = (f64::INFINITY, usize::MAX);
        for (i, f) in self.facets.iter().enumerate() {
            let rate = dot(&f.normal, v);
            if rate <= 0.0 {
                continue;
            }
            let t = (f.offset - dot(&f.normal, p)) / rate;
            if t < best.0 {
                best = (t, i);
            }
        }
        if best.0.is_finite() {
            Ok(best)
        } else {
            Err(GeometryError::Invariant("ray does not leave the polytope".into()))
        }
    }

    pub fn support(&self, direction: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| dot(v, direction))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Lebesgue measure, by pyramids over the facets from the vertex centroid.
    pub fn volume(&self) -> f64 {
        if self.dim == 1 {
            return self.facets.iter().map(|f| f.offset).sum();
        }
        let c = centroid(&self.vertices);
        self.facets
            .iter()
            .map(|f| (f.offset - dot(&f.normal, &c)) * f.measure)
            .sum::<f64>()
            / self.dim as f64
    }

    pub fn is_centrally_symmetric(&self, tol: f64) -> bool {
        let scale = self.vertices.iter().map(|v| norm(v)).fold(0.0, f64::max);
        self.vertices.iter().all(|v| {
            self.vertices
                .iter()
                .any(|w| v.iter().zip(w).all(|(a, b)| (a + b).abs() <= tol * scale.max(1.0)))
        })
    }

    /// Pairs of vertices forming edges of the polytope.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        match self.dim {
            1 => vec![(0, 1)],
            2 => self
                .facets
                .iter()
                .map(|f| (f.vertices[0].min(f.vertices[1]), f.vertices[0].max(f.vertices[1])))
                .collect(),
            d => {
                let nv = self.vertices.len();
                let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nv];
                let mut member = vec![vec![false; nv]; self.facets.len()];
                for (fi, f) in self.facets.iter().enumerate() {
                    for &v in &f.vertices {
                        incident[v].push(fi);
                        member[fi][v] = true;
                    }
                }
                let mut edges = Vec::new();
                for u in 0..nv {
                    for w in u + 1..nv {
                        let common: Vec<usize> = incident[u]
                            .iter()
                            .filter(|f| incident[w].contains(f))
                            .copied()
                            .collect();
                        if common.len() < d - 1 {
                            continue;
                        }
                        // the face spanned by u, w is the intersection of these facets
                        let shared = (0..nv)
                            .filter(|&x| common.iter().all(|&f| member[f][x]))
                            .count();
                        if shared == 2 {
                            edges.push((u, w));
                        }
                    }
                }
                edges
            }
        }
    }

    /// Intersection with the hyperplane through the origin orthogonal to `normal`,
    /// expressed in an orthonormal basis of that hyperplane.
    pub fn central_section(&self, normal: &[f64]) -> Result<Section> {
        if self.dim < 2 {
            return Err(GeometryError::Domain("cannot section a segment".into()));
        }
        if normal.len() != self.dim {
            return Err(GeometryError::Domain("normal has wrong dimension".into()));
        }
        let nu = normalized(normal)
            .ok_or_else(|| GeometryError::Domain("section normal is zero".into()))?;
        self.ensure_origin_interior()?;
        let basis = orthogonal_complement(std::slice::from_ref(&nu), self.dim);
        let heights: Vec<f64> = self.vertices.iter().map(|v| dot(v, &nu)).collect();
        let tol = self.tolerance;
        let mut points: Vec<Vec<f64>> = Vec::new();
        for (v, h) in self.vertices.iter().zip(&heights) {
            if h.abs() <= tol {
                points.push(project(v, &basis));
            }
        }
        for (u, w) in self.edges() {
            let (hu, hw) = (heights[u], heights[w]);
            if (hu > tol && hw < -tol) || (hu < -tol && hw > tol) {
                let t = hu / (hu - hw);
                let x: Vec<f64> = self.vertices[u]
                    .iter()
                    .zip(&self.vertices[w])
                    .map(|(a, b)| a + t * (b - a))
                    .collect();
                points.push(project(&x, &basis));
            }
        }
        if points.len() < self.dim {
            return Err(GeometryError::Degenerate(format!(
                "section has {} points in dimension {}",
                points.len(),
                self.dim - 1
            )));
        }
        let polytope = PolytopeN::from_vertices(points)?;
        Ok(Section { polytope, basis })
    }

    pub fn translated(&self, d: &[f64]) -> Result<Self> {
        Self::from_vertices(
            self.vertices
                .iter()
                .map(|v| v.iter().zip(d).map(|(a, b)| a + b).collect())
                .collect(),
        )
    }

    /// Image under the linear map `x -> M x` (`matrix` is row-major).
    pub fn affine_image(&self, matrix: &[Vec<f64>]) -> Result<Self> {
        if matrix.len() != self.dim || matrix.iter().any(|r| r.len() != self.dim) {
            return Err(GeometryError::Domain("matrix has wrong shape".into()));
        }
        let det = determinant(matrix);
        if det.abs() <= 1e-12 || !det.is_finite() {
            return Err(GeometryError::Domain(format!("singular matrix (det {det:e})")));
        }
        Self::from_vertices(
            self.vertices
                .iter()
                .map(|v| matrix.iter().map(|row| dot(row, v)).collect())
                .collect(),
        )
    }

    pub fn cartesian_product(&self, other: &PolytopeN) -> Result<Self> {
        let count = self.vertices.len().saturating_mul(other.vertices.len());
        if count > MAX_PRODUCT_VERTICES {
            return Err(GeometryError::Domain(format!(
                "product would have {count} vertices (limit {MAX_PRODUCT_VERTICES})"
            )));
        }
        self.ensure_origin_interior()?;
        other.ensure_origin_interior()?;
        let mut points = Vec::with_capacity(count);
        for u in &self.vertices {
            for w in &other.vertices {
                let mut p = u.clone();
                p.extend_from_slice(w);
                points.push(p);
            }
        }
        Self::from_vertices(points)
    }

    /// Polar body `{x : <x, y> <= 1 for y in self}`; its vertices are `normal / offset`.
    pub fn polar(&self) -> Result<Self> {
        self.ensure_origin_interior()?;
        Self::from_vertices(
            self.facets
                .iter()
                .map(|f| f.normal.iter().map(|x| x / f.offset).collect())
                .collect(),
        )
    }

    /// Vertex-set equality up to ordering, within `tol`.
    pub fn same_vertices(&self, other: &PolytopeN, tol: f64) -> bool {
        self.dim == other.dim
            && self.vertices.len() == other.vertices.len()
            && self.vertices.iter().all(|v| {
                other
                    .vertices
                    .iter()
                    .any(|w| norm(&sub(v, w)) <= tol)
            })
    }
}

/// Volume of the hull of `points`, or zero with the degenerate flag set.
pub fn lebesgue_volume(points: &[Vec<f64>]) -> VolumeResult {
    match PolytopeN::from_vertices(points.to_vec()) {
        Ok(p) => VolumeResult {
            value: p.volume(),
            degenerate: false,
        },
        Err(_) => VolumeResult {
            value: 0.0,
            degenerate: true,
        },
    }
}

/// Maps section coordinates back to the parent space.
pub fn lift_from_section(section: &Section, y: &[f64]) -> Vec<f64> {
    lift(y, &section.basis)
}
