//! Small dense vector helpers on `&[f64]`.
//!
//! Polytopes of arbitrary dimension store points as `Vec<f64>`; these helpers keep
//! the geometry code free of index arithmetic. Determinants go through nalgebra.

use nalgebra::DMatrix;

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[inline]
pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

#[inline]
pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// `a + s * b`
#[inline]
pub fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn normalized(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm(a);
    if n > 0.0 && n.is_finite() {
        Some(scale(a, 1.0 / n))
    } else {
        None
    }
}

pub fn centroid(points: &[Vec<f64>]) -> Vec<f64> {
    let dim = points[0].len();
    let mut c = vec![0.0; dim];
    for p in points {
        for (ci, pi) in c.iter_mut().zip(p) {
            *ci += pi;
        }
    }
    let inv = 1.0 / points.len() as f64;
    c.iter_mut().for_each(|x| *x *= inv);
    c
}

pub fn determinant(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    if n == 0 {
        return 1.0;
    }
    DMatrix::from_fn(n, n, |i, j| rows[i][j]).determinant()
}

/// Generalized cross product of `d - 1` vectors in `R^d`.
///
/// The result is orthogonal to every input and its length is the
/// `(d-1)`-volume of the parallelotope they span.
pub fn generalized_cross(vectors: &[Vec<f64>]) -> Vec<f64> {
    let d = vectors.len() + 1;
    let mut out = vec![0.0; d];
    for (k, o) in out.iter_mut().enumerate() {
        let minor: Vec<Vec<f64>> = vectors
            .iter()
            .map(|v| {
                v.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != k)
                    .map(|(_, x)| *x)
                    .collect()
            })
            .collect();
        let sign = if (k + d + 1).is_multiple_of(2) { 1.0 } else { -1.0 };
        *o = sign * determinant(&minor);
    }
    out
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `(k)`-volume of the simplex spanned by `k + 1` points in `R^d`, `k <= d`,
/// from the Gram determinant of its edge vectors.
pub fn simplex_measure(points: &[Vec<f64>]) -> f64 {
    let k = points.len() - 1;
    if k == 0 {
        return 1.0;
    }
    let edges: Vec<Vec<f64>> = points[1..].iter().map(|p| sub(p, &points[0])).collect();
    let gram = DMatrix::from_fn(k, k, |i, j| dot(&edges[i], &edges[j]));
    gram.determinant().max(0.0).sqrt() / factorial(k)
}

/// Orthonormal basis of the orthogonal complement of `span(normals)` in `R^d`.
///
/// Modified Gram–Schmidt with pivoting: candidates are the standard basis vectors,
/// and at each step the candidate with the largest residual is taken. The output
/// is deterministic for a given input.
pub fn orthogonal_complement(normals: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    let mut span: Vec<Vec<f64>> = Vec::new();
    for n in normals {
        let mut r = n.clone();
        for s in &span {
            let c = dot(&r, s);
            r = axpy(&r, -c, s);
        }
        if let Some(u) = normalized(&r) {
            if norm(&r) > 1e-12 {
                span.push(u);
            }
        }
    }
    let target = dim - span.len();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(target);
    let mut used = vec![false; dim];
    while basis.len() < target {
        let mut best: Option<(usize, Vec<f64>, f64)> = None;
        for (i, taken) in used.iter().enumerate() {
            if *taken {
                continue;
            }
            let mut r = vec![0.0; dim];
            r[i] = 1.0;
            for s in span.iter().chain(basis.iter()) {
                let c = dot(&r, s);
                r = axpy(&r, -c, s);
            }
            // second pass keeps the residual orthogonal to working precision
            for s in span.iter().chain(basis.iter()) {
                let c = dot(&r, s);
                r = axpy(&r, -c, s);
            }
            let len = norm(&r);
            if best.as_ref().is_none_or(|b| len > b.2) {
                best = Some((i, r, len));
            }
        }
        let (i, r, len) = best.expect("complement has a candidate");
        used[i] = true;
        basis.push(scale(&r, 1.0 / len));
    }
    basis
}

/// Projection onto a basis: coordinates `<x, b_j>`.
pub fn project(x: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    basis.iter().map(|b| dot(x, b)).collect()
}

/// Inverse of [`project`]: `sum_j y_j b_j`.
pub fn lift(y: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let dim = basis[0].len();
    let mut out = vec![0.0; dim];
    for (yj, b) in y.iter().zip(basis) {
        for (o, bi) in out.iter_mut().zip(b) {
            *o += yj * bi;
        }
    }
    out
}
