//! Convex polygons in the plane.

use crate::error::{GeometryError, Result};
use crate::hull::{convex_hull, RELATIVE_TOLERANCE};

pub type Point2 = [f64; 2];

#[inline]
pub(crate) fn cross(a: Point2, b: Point2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub(crate) fn dot2(a: Point2, b: Point2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
fn sub2(a: Point2, b: Point2) -> Point2 {
    [a[0] - b[0], a[1] - b[1]]
}

/// A strictly convex polygon with counter-clockwise vertex order.
///
/// Edge `i` runs from vertex `i` to vertex `i + 1`. Its outward normal and support
/// offset are cached so ray casting is a single pass over the edges.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon2 {
    vertices: Vec<Point2>,
    normals: Vec<Point2>,
    offsets: Vec<f64>,
    lengths: Vec<f64>,
}

/// Direction in which the boundary is traversed by the directed perimeter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    #[default]
    CounterClockwise,
    Clockwise,
}

impl Polygon2 {
    /// Validates a counter-clockwise, strictly convex vertex list.
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(GeometryError::InvalidBody(format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if vertices.iter().flatten().any(|x| !x.is_finite()) {
            return Err(GeometryError::InvalidBody("non-finite coordinate".into()));
        }
        let n = vertices.len();
        let scale = vertices
            .iter()
            .map(|v| v[0].abs().max(v[1].abs()))
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let mut signed_area = 0.0;
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            let turn = cross(sub2(b, a), sub2(c, b));
            if turn <= RELATIVE_TOLERANCE * scale * scale {
                return Err(GeometryError::InvalidBody(format!(
                    "vertices {}..{} are not a strict counter-clockwise turn",
                    i,
                    (i + 2) % n
                )));
            }
            signed_area += cross(a, b);
        }
        if signed_area <= 0.0 {
            return Err(GeometryError::InvalidBody(
                "polygon is not counter-clockwise".into(),
            ));
        }
        // a star polygon passes the local turn test; total turning must be 2π
        let mut turning = 0.0;
        for i in 0..n {
            let e0 = sub2(vertices[(i + 1) % n], vertices[i]);
            let e1 = sub2(vertices[(i + 2) % n], vertices[(i + 1) % n]);
            turning += cross(e0, e1).atan2(dot2(e0, e1));
        }
        if (turning - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(GeometryError::InvalidBody("polygon winds more than once".into()));
        }
        let mut normals = Vec::with_capacity(n);
        let mut offsets = Vec::with_capacity(n);
        let mut lengths = Vec::with_capacity(n);
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let e = sub2(b, a);
            let len = e[0].hypot(e[1]);
            let nrm = [e[1] / len, -e[0] / len];
            normals.push(nrm);
            offsets.push(0.5 * (dot2(nrm, a) + dot2(nrm, b)));
            lengths.push(len);
        }
        Ok(Self {
            vertices,
            normals,
            offsets,
            lengths,
        })
    }

    /// Convex hull of arbitrary points, as a counter-clockwise polygon.
    pub fn from_points(points: &[Point2]) -> Result<Self> {
        let pts: Vec<Vec<f64>> = points.iter().map(|p| p.to_vec()).collect();
        let hull = convex_hull(&pts)?;
        Self::new(hull.vertices.iter().map(|&i| points[i]).collect())
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge_length(&self, i: usize) -> f64 {
        self.lengths[i]
    }

    /// Unit tangent of edge `i` in counter-clockwise traversal.
    pub fn edge_direction(&self, i: usize) -> Point2 {
        let a = self.vertices[i];
        let b = self.vertices[(i + 1) % self.len()];
        let len = self.lengths[i];
        [(b[0] - a[0]) / len, (b[1] - a[1]) / len]
    }

    pub fn edge_normal(&self, i: usize) -> Point2 {
        self.normals[i]
    }

    pub fn edge_offset(&self, i: usize) -> f64 {
        self.offsets[i]
    }

    pub fn area(&self) -> f64 {
        let n = self.len();
        0.5 * (0..n)
            .map(|i| cross(self.vertices[i], self.vertices[(i + 1) % n]))
            .sum::<f64>()
    }

    pub fn vertex_centroid(&self) -> Point2 {
        let n = self.len() as f64;
        let s = self
            .vertices
            .iter()
            .fold([0.0, 0.0], |acc, v| [acc[0] + v[0], acc[1] + v[1]]);
        [s[0] / n, s[1] / n]
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max((a[0] - b[0]).hypot(a[1] - b[1]));
            }
        }
        d
    }

    /// Signed distance from `p` to the boundary, positive inside.
    pub fn depth(&self, p: Point2) -> f64 {
        self.normals
            .iter()
            .zip(&self.offsets)
            .map(|(n, h)| h - dot2(*n, p))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains_strictly(&self, p: Point2) -> bool {
        self.depth(p) > RELATIVE_TOLERANCE * self.diameter()
    }

    /// Exit distance and exit edge of the ray `p + t v`, `t > 0`.
    ///
    /// `v` need not be normalized; the distance is measured in units of `|v|`.
    /// When the ray leaves through a vertex, the edge starting at that vertex is
    /// reported (edges are half-open, `[v_i, v_{i+1})`).
    pub fn ray_exit(&self, p: Point2, v: Point2) -> Result<(f64, usize)> {
        if !(v[0].is_finite() && v[1].is_finite()) || (v[0] == 0.0 && v[1] == 0.0) {
            return Err(GeometryError::Domain("ray direction is zero".into()));
        }
        if !self.contains_strictly(p) {
            return Err(GeometryError::Domain(format!(
                "center ({}, {}) is not strictly interior",
                p[0], p[1]
            )));
        }
        let mut best = (f64::INFINITY, usize::MAX);
        for i in 0..self.len() {
            let rate = dot2(self.normals[i], v);
            if rate <= 0.0 {
                continue;
            }
            let t = (self.offsets[i] - dot2(self.normals[i], p)) / rate;
            if t < best.0 {
                best = (t, i);
            }
        }
        if !best.0.is_finite() {
            return Err(GeometryError::Invariant("ray does not leave the polygon".into()));
        }
        // Resolve the half-open convention: if the exit point is the end vertex of
        // the chosen edge, report the following edge instead.
        let (t, i) = best;
        let hit = [p[0] + t * v[0], p[1] + t * v[1]];
        let n = self.len();
        let next = (i + 1) % n;
        let end = self.vertices[next];
        let tol = RELATIVE_TOLERANCE * self.diameter();
        if (hit[0] - end[0]).hypot(hit[1] - end[1]) <= tol && dot2(self.normals[next], v) > 0.0 {
            return Ok((t, next));
        }
        Ok((t, i))
    }

    pub fn translated(&self, d: Point2) -> Self {
        Self::new(
            self.vertices
                .iter()
                .map(|v| [v[0] + d[0], v[1] + d[1]])
                .collect(),
        )
        .expect("translation preserves convexity")
    }

    /// Image under the linear map with row-major matrix `m`.
    pub fn linear_image(&self, m: [[f64; 2]; 2]) -> Result<Self> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det.abs() <= 1e-12 {
            return Err(GeometryError::Domain("singular linear map".into()));
        }
        let mut verts: Vec<Point2> = self
            .vertices
            .iter()
            .map(|v| {
                [
                    m[0][0] * v[0] + m[0][1] * v[1],
                    m[1][0] * v[0] + m[1][1] * v[1],
                ]
            })
            .collect();
        if det < 0.0 {
            verts.reverse();
        }
        Self::new(verts)
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        self.linear_image([[s, 0.0], [0.0, s]])
    }
}
