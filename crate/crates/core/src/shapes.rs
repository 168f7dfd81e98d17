//! Standard and random test bodies.

use std::collections::HashMap;
use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{determinant, normalized};
use crate::polygon::{Point2, Polygon2};
use crate::polytope::PolytopeN;

/// `[-1, 1]²`.
pub fn square() -> Polygon2 {
    Polygon2::new(vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]).expect("square")
}

/// Regular `k`-gon centered at the origin with a vertex on the positive x-axis.
pub fn regular_polygon(k: usize, circumradius: f64) -> Polygon2 {
    Polygon2::new(
        (0..k)
            .map(|j| {
                let t = TAU * j as f64 / k as f64;
                [circumradius * t.cos(), circumradius * t.sin()]
            })
            .collect(),
    )
    .expect("regular polygon")
}

pub fn triangle(a: Point2, b: Point2, c: Point2) -> crate::Result<Polygon2> {
    Polygon2::from_points(&[a, b, c])
}

/// `[-1, 1]^n`.
pub fn hypercube(n: usize) -> PolytopeN {
    let vertices = (0..1usize << n)
        .map(|mask| {
            (0..n)
                .map(|i| if mask >> i & 1 == 1 { 1.0 } else { -1.0 })
                .collect()
        })
        .collect();
    PolytopeN::from_vertices(vertices).expect("hypercube")
}

/// `[-half, half]` as a one-dimensional polytope.
pub fn interval(half: f64) -> PolytopeN {
    PolytopeN::from_vertices(vec![vec![-half], vec![half]]).expect("interval")
}

/// Simplex in `R^n` with vertices `e_1, …, e_n, −(1, …, 1)`; its centroid is the origin.
pub fn centered_simplex(n: usize) -> Vec<Vec<f64>> {
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    v.push(vec![-1.0; n]);
    v
}

/// Polyhedron inscribed in the unit sphere: the icosahedron with each face
/// split `levels` times into four. `levels = 2` gives 320 faces.
pub fn icosphere(levels: usize) -> PolytopeN {
    let g = 0.5 * (1.0 + 5f64.sqrt());
    let mut points: Vec<Vec<f64>> = Vec::new();
    for &a in &[-1.0, 1.0] {
        for &b in &[-g, g] {
            points.push(vec![0.0, a, b]);
            points.push(vec![a, b, 0.0]);
            points.push(vec![b, 0.0, a]);
        }
    }
    let mut points: Vec<Vec<f64>> = points.iter().map(|p| normalized(p).unwrap()).collect();
    let ico = PolytopeN::from_vertices(points.clone()).expect("icosahedron");
    // hull indices refer to its own vertex list
    points = ico.vertices().to_vec();
    let mut faces: Vec<[usize; 3]> = ico
        .facets()
        .iter()
        .map(|f| [f.vertices[0], f.vertices[1], f.vertices[2]])
        .collect();
    for _ in 0..levels {
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |a: usize, b: usize, points: &mut Vec<Vec<f64>>| -> usize {
            let key = (a.min(b), a.max(b));
            *midpoint.entry(key).or_insert_with(|| {
                let m: Vec<f64> = points[a].iter().zip(&points[b]).map(|(x, y)| x + y).collect();
                points.push(normalized(&m).unwrap());
                points.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for [a, b, c] in faces {
            let ab = mid(a, b, &mut points);
            let bc = mid(b, c, &mut points);
            let ca = mid(c, a, &mut points);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    PolytopeN::from_vertices(points).expect("icosphere")
}

/// Hull of `count` uniform points on the unit circle with jittered angles.
pub fn random_convex_polygon<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Polygon2 {
    loop {
        let mut angles: Vec<f64> = (0..count).map(|_| rng.random::<f64>() * TAU).collect();
        angles.sort_by(f64::total_cmp);
        let pts: Vec<Point2> = angles
            .iter()
            .map(|t| {
                let r = 0.5 + rng.random::<f64>();
                [r * t.cos(), r * t.sin()]
            })
            .collect();
        if let Ok(p) = Polygon2::from_points(&pts) {
            if p.contains_strictly([0.0, 0.0]) && p.area() > 0.05 {
                return p;
            }
        }
    }
}

/// Centrally symmetric polygon: hull of `pairs` random points and their negatives.
pub fn random_ccs_polygon<R: Rng + ?Sized>(rng: &mut R, pairs: usize) -> Polygon2 {
    loop {
        let mut pts: Vec<Point2> = Vec::with_capacity(2 * pairs);
        for _ in 0..pairs {
            let p = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            pts.push(p);
            pts.push([-p[0], -p[1]]);
        }
        if let Ok(p) = Polygon2::from_points(&pts) {
            if p.area() > 0.05 {
                return p;
            }
        }
    }
}

/// Centrally symmetric polytope in `R^dim` from `pairs` Gaussian points and their negatives.
pub fn random_ccs_polytope<R: Rng + ?Sized>(rng: &mut R, dim: usize, pairs: usize) -> PolytopeN {
    loop {
        let mut pts: Vec<Vec<f64>> = Vec::with_capacity(2 * pairs);
        for _ in 0..pairs {
            let p: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
            pts.push(p.iter().map(|x| -x).collect());
            pts.push(p);
        }
        if let Ok(p) = PolytopeN::from_vertices(pts) {
            if p.origin_is_interior() && p.volume() > 0.05 {
                return p;
            }
        }
    }
}

/// Random polytope in `R^dim` containing the origin, from Gaussian points.
pub fn random_polytope<R: Rng + ?Sized>(rng: &mut R, dim: usize, count: usize) -> PolytopeN {
    loop {
        let pts: Vec<Vec<f64>> = (0..count)
            .map(|_| (0..dim).map(|_| rng.sample(StandardNormal)).collect())
            .collect();
        if let Ok(p) = PolytopeN::from_vertices(pts) {
            if p.depth(&vec![0.0; dim]) > 0.05 {
                return p;
            }
        }
    }
}

/// Random simplex vertices in `R^n`, well away from degenerate.
pub fn random_simplex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Vec<f64>> {
    loop {
        let v: Vec<Vec<f64>> = (0..=n)
            .map(|_| (0..n).map(|_| rng.sample(StandardNormal)).collect())
            .collect();
        let edges: Vec<Vec<f64>> = v[1..]
            .iter()
            .map(|p| p.iter().zip(&v[0]).map(|(a, b)| a - b).collect())
            .collect();
        if determinant(&edges).abs() > 0.2 {
            return v;
        }
    }
}

/// Random `n×n` matrix with singular values kept away from zero.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Vec<f64>> {
    loop {
        let m: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.random_range(-2.0..2.0)).collect())
            .collect();
        let sv = nalgebra::DMatrix::from_fn(n, n, |i, j| m[i][j]).singular_values();
        let (lo, hi) = (sv.min(), sv.max());
        if lo > 0.2 && hi / lo < 20.0 {
            return m;
        }
    }
}

/// Random point strictly inside `poly`: a random convex combination of its
/// vertices, pulled toward the vertex centroid.
pub fn random_interior_point<R: Rng + ?Sized>(rng: &mut R, poly: &Polygon2) -> Point2 {
    let c = poly.vertex_centroid();
    loop {
        let w: Vec<f64> = poly
            .vertices()
            .iter()
            .map(|_| -rng.random::<f64>().ln())
            .collect();
        let s: f64 = w.iter().sum();
        let mut p = [0.0, 0.0];
        for (wi, v) in w.iter().zip(poly.vertices()) {
            p[0] += wi / s * v[0];
            p[1] += wi / s * v[1];
        }
        let shrink = 0.98;
        let p = [
            c[0] + shrink * (p[0] - c[0]),
            c[1] + shrink * (p[1] - c[1]),
        ];
        if poly.contains_strictly(p) {
            return p;
        }
    }
}
