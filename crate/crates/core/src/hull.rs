//! Convex hulls of finite point sets in any dimension.
//!
//! Dimension 1 and 2 use direct algorithms (extremes, monotone chain). Dimension
//! three and up use an incremental beneath–beyond construction over a simplicial
//! boundary; coplanar boundary simplices are then merged into true facets, and
//! hull points that are not extreme (lying inside an edge or facet) are dropped
//! from the facet vertex sets.

use std::collections::HashMap;

use crate::error::{GeometryError, Result};
use crate::linalg::{
    axpy, centroid, dot, factorial, generalized_cross, norm, normalized, sub,
};

/// Relative tolerance for coplanarity and collinearity tests.
pub const RELATIVE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct HullFacet {
    /// Outward unit normal.
    pub normal: Vec<f64>,
    /// Support value `<normal, x>` on the facet.
    pub offset: f64,
    /// `(d-1)`-dimensional measure of the facet.
    pub measure: f64,
    /// Extreme input points lying on the facet (indices into the input).
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Hull {
    pub dim: usize,
    /// Extreme points, as indices into the input. In two dimensions they are in
    /// counter-clockwise order.
    pub vertices: Vec<usize>,
    pub facets: Vec<HullFacet>,
    /// Absolute tolerance used for the construction.
    pub tolerance: f64,
}

fn tolerance_for(points: &[Vec<f64>]) -> f64 {
    let dim = points[0].len();
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for p in points {
        for i in 0..dim {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    let diag: f64 = lo.iter().zip(&hi).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt();
    let reach = points.iter().map(|p| norm(p)).fold(0.0, f64::max);
    RELATIVE_TOLERANCE * diag.max(reach).max(f64::MIN_POSITIVE)
}

pub fn convex_hull(points: &[Vec<f64>]) -> Result<Hull> {
    if points.is_empty() {
        return Err(GeometryError::InvalidBody("empty point set".into()));
    }
    let dim = points[0].len();
    if dim == 0 {
        return Err(GeometryError::InvalidBody("zero-dimensional points".into()));
    }
    if points.iter().any(|p| p.len() != dim) {
        return Err(GeometryError::InvalidBody("points of mixed dimension".into()));
    }
    if points.iter().flatten().any(|x| !x.is_finite()) {
        return Err(GeometryError::InvalidBody("non-finite coordinate".into()));
    }
    let tol = tolerance_for(points);
    match dim {
        1 => hull_1d(points, tol),
        2 => hull_2d(points, tol),
        _ => hull_nd(points, tol),
    }
}

fn hull_1d(points: &[Vec<f64>], tol: f64) -> Result<Hull> {
    let (mut lo, mut hi) = (0, 0);
    for (i, p) in points.iter().enumerate() {
        if p[0] < points[lo][0] {
            lo = i;
        }
        if p[0] > points[hi][0] {
            hi = i;
        }
    }
    if points[hi][0] - points[lo][0] <= tol {
        return Err(GeometryError::Degenerate("segment has zero length".into()));
    }
    Ok(Hull {
        dim: 1,
        vertices: vec![lo, hi],
        facets: vec![
            HullFacet {
                normal: vec![-1.0],
                offset: -points[lo][0],
                measure: 1.0,
                vertices: vec![lo],
            },
            HullFacet {
                normal: vec![1.0],
                offset: points[hi][0],
                measure: 1.0,
                vertices: vec![hi],
            },
        ],
        tolerance: tol,
    })
}

#[inline]
fn cross2(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain; collinear points are dropped.
fn hull_2d(points: &[Vec<f64>], tol: f64) -> Result<Hull> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| {
        points[i][0]
            .total_cmp(&points[j][0])
            .then(points[i][1].total_cmp(&points[j][1]))
    });
    order.dedup_by(|a, b| {
        let (p, q) = (&points[*a], &points[*b]);
        (p[0] - q[0]).abs() <= tol && (p[1] - q[1]).abs() <= tol
    });
    if order.len() < 3 {
        return Err(GeometryError::Degenerate("fewer than three distinct points".into()));
    }
    // |cross| is an area; compare against tol times a length.
    let span = {
        let a = &points[order[0]];
        let b = &points[*order.last().unwrap()];
        norm(&sub(a, b)).max(tol)
    };
    let area_tol = tol * span;
    let mut chain: Vec<usize> = Vec::with_capacity(2 * order.len());
    for pass in 0..2 {
        let start = chain.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(order.iter())
        } else {
            Box::new(order.iter().rev())
        };
        for &i in iter {
            while chain.len() >= start + 2 {
                let n = chain.len();
                if cross2(&points[chain[n - 2]], &points[chain[n - 1]], &points[i]) <= area_tol {
                    chain.pop();
                } else {
                    break;
                }
            }
            chain.push(i);
        }
        chain.pop();
    }
    if chain.len() < 3 {
        return Err(GeometryError::Degenerate("points are collinear".into()));
    }
    let n = chain.len();
    let mut facets = Vec::with_capacity(n);
    for k in 0..n {
        let (a, b) = (&points[chain[k]], &points[chain[(k + 1) % n]]);
        let e = sub(b, a);
        let len = norm(&e);
        let normal = vec![e[1] / len, -e[0] / len];
        let offset = 0.5 * (dot(&normal, a) + dot(&normal, b));
        facets.push(HullFacet {
            normal,
            offset,
            measure: len,
            vertices: vec![chain[k], chain[(k + 1) % n]],
        });
    }
    Ok(Hull {
        dim: 2,
        vertices: chain,
        facets,
        tolerance: tol,
    })
}

#[derive(Debug, Clone)]
struct Simplex {
    indices: Vec<usize>,
    normal: Vec<f64>,
    offset: f64,
    measure: f64,
}

fn make_simplex(points: &[Vec<f64>], indices: Vec<usize>, interior: &[f64]) -> Result<Simplex> {
    let base = &points[indices[0]];
    let edges: Vec<Vec<f64>> = indices[1..].iter().map(|&i| sub(&points[i], base)).collect();
    let cross = generalized_cross(&edges);
    let len = norm(&cross);
    let mut normal = normalized(&cross)
        .ok_or_else(|| GeometryError::Invariant("degenerate boundary simplex".into()))?;
    let mut offset = indices.iter().map(|&i| dot(&normal, &points[i])).sum::<f64>()
        / indices.len() as f64;
    if dot(&normal, interior) > offset {
        normal.iter_mut().for_each(|x| *x = -*x);
        offset = -offset;
    }
    let measure = len / factorial(indices.len() - 1);
    Ok(Simplex {
        indices,
        normal,
        offset,
        measure,
    })
}

/// Distance of `p` from the affine span of `basis` anchored at `origin`.
fn residual(p: &[f64], origin: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut r = sub(p, origin);
    for _ in 0..2 {
        for b in basis {
            let c = dot(&r, b);
            r = axpy(&r, -c, b);
        }
    }
    r
}

fn hull_nd(points: &[Vec<f64>], tol: f64) -> Result<Hull> {
    let dim = points[0].len();
    // initial simplex: greedy farthest-from-affine-span
    let first = (0..points.len())
        .min_by(|&i, &j| points[i][0].total_cmp(&points[j][0]))
        .unwrap();
    let mut chosen = vec![first];
    let mut basis: Vec<Vec<f64>> = Vec::new();
    while chosen.len() < dim + 1 {
        let mut best = (usize::MAX, 0.0);
        for (i, p) in points.iter().enumerate() {
            let r = norm(&residual(p, &points[first], &basis));
            if r > best.1 {
                best = (i, r);
            }
        }
        if best.1 <= tol {
            return Err(GeometryError::Degenerate(format!(
                "points span only {} dimensions of {}",
                chosen.len() - 1,
                dim
            )));
        }
        let r = residual(&points[best.0], &points[first], &basis);
        basis.push(normalized(&r).unwrap());
        chosen.push(best.0);
    }
    let simplex_points: Vec<Vec<f64>> = chosen.iter().map(|&i| points[i].clone()).collect();
    let interior = centroid(&simplex_points);

    let mut simplices: Vec<Simplex> = Vec::new();
    for skip in 0..=dim {
        let idx: Vec<usize> = chosen
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != skip)
            .map(|(_, &i)| i)
            .collect();
        simplices.push(make_simplex(points, idx, &interior)?);
    }

    let mut rest: Vec<usize> = (0..points.len()).filter(|i| !chosen.contains(i)).collect();
    rest.sort_by(|&i, &j| {
        let di = norm(&sub(&points[i], &interior));
        let dj = norm(&sub(&points[j], &interior));
        dj.total_cmp(&di).then(i.cmp(&j))
    });

    for q in rest {
        let p = &points[q];
        let visible: Vec<bool> = simplices
            .iter()
            .map(|s| dot(&s.normal, p) - s.offset > tol)
            .collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        // horizon = ridges belonging to exactly one visible simplex
        let mut ridges: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut ridge_order: Vec<Vec<usize>> = Vec::new();
        for (s, _) in simplices.iter().zip(&visible).filter(|(_, v)| **v) {
            for skip in 0..s.indices.len() {
                let mut ridge: Vec<usize> = s
                    .indices
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &i)| i)
                    .collect();
                ridge.sort_unstable();
                let e = ridges.entry(ridge.clone()).or_insert(0);
                if *e == 0 {
                    ridge_order.push(ridge);
                }
                *e += 1;
            }
        }
        let mut kept: Vec<Simplex> = simplices
            .into_iter()
            .zip(&visible)
            .filter(|(_, v)| !**v)
            .map(|(s, _)| s)
            .collect();
        for ridge in ridge_order {
            if ridges[&ridge] == 1 {
                let mut idx = ridge;
                idx.push(q);
                kept.push(make_simplex(points, idx, &interior)?);
            }
        }
        simplices = kept;
    }

    merge_simplices(points, simplices, dim, tol)
}

fn merge_simplices(
    points: &[Vec<f64>],
    simplices: Vec<Simplex>,
    dim: usize,
    tol: f64,
) -> Result<Hull> {
    struct Group {
        normal_sum: Vec<f64>,
        normal: Vec<f64>,
        offset: f64,
        measure: f64,
        members: Vec<usize>,
    }
    let mut groups: Vec<Group> = Vec::new();
    for s in &simplices {
        let found = groups.iter_mut().find(|g| {
            dot(&g.normal, &s.normal) > 1.0 - 1e-10 && (g.offset - s.offset).abs() <= 10.0 * tol
        });
        match found {
            Some(g) => {
                g.normal_sum = axpy(&g.normal_sum, s.measure, &s.normal);
                g.measure += s.measure;
                g.members.extend(&s.indices);
            }
            None => groups.push(Group {
                normal_sum: s.normal.iter().map(|x| x * s.measure).collect(),
                normal: s.normal.clone(),
                offset: s.offset,
                measure: s.measure,
                members: s.indices.clone(),
            }),
        }
    }
    for g in &mut groups {
        g.members.sort_unstable();
        g.members.dedup();
        g.normal = normalized(&g.normal_sum).unwrap_or_else(|| g.normal.clone());
        g.offset = g.members.iter().map(|&i| dot(&g.normal, &points[i])).sum::<f64>()
            / g.members.len() as f64;
    }

    // a boundary point is extreme iff the normals of its facets span R^d
    let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
    for (gi, g) in groups.iter().enumerate() {
        for &i in &g.members {
            incident.entry(i).or_default().push(gi);
        }
    }
    let mut extreme: Vec<usize> = incident
        .iter()
        .filter(|(_, gs)| {
            let normals: Vec<&Vec<f64>> = gs.iter().map(|&g| &groups[g].normal).collect();
            normal_rank(&normals) == dim
        })
        .map(|(&i, _)| i)
        .collect();
    extreme.sort_unstable();

    let facets = groups
        .into_iter()
        .map(|g| HullFacet {
            vertices: g
                .members
                .into_iter()
                .filter(|i| extreme.binary_search(i).is_ok())
                .collect(),
            normal: g.normal,
            offset: g.offset,
            measure: g.measure,
        })
        .collect();
    Ok(Hull {
        dim,
        vertices: extreme,
        facets,
        tolerance: tol,
    })
}

fn normal_rank(normals: &[&Vec<f64>]) -> usize {
    let mut span: Vec<Vec<f64>> = Vec::new();
    for n in normals {
        let mut r = (*n).clone();
        for _ in 0..2 {
            for s in &span {
                let c = dot(&r, s);
                r = axpy(&r, -c, s);
            }
        }
        let len = norm(&r);
        if len > 1e-7 {
            span.push(r.iter().map(|x| x / len).collect());
        }
    }
    span.len()
}
