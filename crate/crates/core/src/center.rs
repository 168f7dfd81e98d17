//! Minimizing the self-perimeter and self-volume over the reference point.
//!
//! Both planar functionals are convex in the interior and blow up at the
//! boundary. They have kinks wherever a ray from the center passes through a
//! vertex, so the planar solver is a cutting-plane method rather than a
//! gradient descent.

use rand::Rng;
use serde::Serialize;

use crate::error::{GeometryError, Result};
use crate::nelder_mead::{self, NelderMeadOptions};
use crate::perimeter::{polygon_perimeter, Variant};
use crate::polygon::{Point2, Polygon2};
use crate::polytope::PolytopeN;
use crate::selfvolume::{self_volume_at, simplex_minimum};
use crate::shapes::random_interior_point;

pub const MAX_ITERATIONS: usize = 10_000;
pub const STEP_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CenterVariant {
    Directed,
    Busemann,
    SimplexClosedForm,
    SelfVolume,
}

impl From<Variant> for CenterVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Directed => CenterVariant::Directed,
            Variant::Busemann => CenterVariant::Busemann,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CenterResult {
    /// Cartesian, except for [`CenterVariant::SimplexClosedForm`] where it holds
    /// barycentric weights.
    pub optimum: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub variant: CenterVariant,
    pub convergence_norm: f64,
}

fn objective(poly: &Polygon2, variant: Variant) -> impl Fn(&[f64]) -> f64 + '_ {
    move |p: &[f64]| polygon_perimeter(poly, [p[0], p[1]], variant).unwrap_or(f64::INFINITY)
}

/// Minimizer of the self-perimeter, started from the vertex centroid.
pub fn optimal_center_2d(poly: &Polygon2, variant: Variant) -> Result<CenterResult> {
    optimal_center_2d_from(poly, variant, poly.vertex_centroid())
}

/// Ellipsoid method on the convex functional, cutting with exact subgradients
/// (or with a violated edge when the center leaves the polygon), followed by a
/// Nelder–Mead polish.
pub fn optimal_center_2d_from(
    poly: &Polygon2,
    variant: Variant,
    start: Point2,
) -> Result<CenterResult> {
    if !poly.contains_strictly(start) {
        return Err(GeometryError::Domain("start point is not interior".into()));
    }
    let diam = poly.diameter();
    let cut = ellipsoid(poly, variant, start, diam)?;
    let f = objective(poly, variant);
    let polish = nelder_mead::minimize(
        &f,
        &cut.x,
        NelderMeadOptions {
            step: (1e3 * cut.axis).max(1e-9 * diam),
            xtol: 1e-13 * diam,
            max_iter: MAX_ITERATIONS,
            restarts: 2,
        },
    );
    let (x, value) = if polish.value < cut.value {
        (polish.x, polish.value)
    } else {
        (cut.x, cut.value)
    };
    Ok(CenterResult {
        optimum: x,
        value,
        iterations: cut.iterations + polish.iterations,
        variant: variant.into(),
        convergence_norm: cut.axis,
    })
}

/// Value and a subgradient of the functional at an interior point.
///
/// Each directed term is `L/r` with `r = (b − <n, p>)/<n, t>` on the exit edge,
/// a maximum of convex pieces, so the active piece's gradient is a subgradient.
fn value_and_subgradient(poly: &Polygon2, variant: Variant, p: Point2) -> Result<(f64, Point2)> {
    let mut value = 0.0;
    let mut g = [0.0; 2];
    if !poly.contains_strictly(p) {
        return Err(GeometryError::Domain("center is not strictly interior".into()));
    }
    // the exact minimizing edge, with no vertex tie-breaking
    let rate = |v: Point2| -> Result<(f64, Point2)> {
        let mut best = (f64::INFINITY, [0.0; 2]);
        for e in 0..poly.len() {
            let n = poly.edge_normal(e);
            let s = n[0] * v[0] + n[1] * v[1];
            if s > 0.0 {
                let r = (poly.edge_offset(e) - n[0] * p[0] - n[1] * p[1]) / s;
                if r < best.0 {
                    best = (r, [n[0] / s, n[1] / s]);
                }
            }
        }
        if best.0.is_finite() {
            Ok(best)
        } else {
            Err(GeometryError::Invariant("ray does not leave the polygon".into()))
        }
    };
    for i in 0..poly.len() {
        let len = poly.edge_length(i);
        let t = poly.edge_direction(i);
        match variant {
            Variant::Directed => {
                let (r, dr) = rate(t)?;
                value += len / r;
                g[0] += len / (r * r) * dr[0];
                g[1] += len / (r * r) * dr[1];
            }
            Variant::Busemann => {
                let (rf, df) = rate(t)?;
                let (rb, db) = rate([-t[0], -t[1]])?;
                let c = rf + rb;
                value += 2.0 * len / c;
                let w = 2.0 * len / (c * c);
                g[0] += w * (df[0] + db[0]);
                g[1] += w * (df[1] + db[1]);
            }
        }
    }
    Ok((value, g))
}

struct Cut {
    x: Vec<f64>,
    value: f64,
    iterations: usize,
    /// Largest semi-axis of the final ellipsoid.
    axis: f64,
}

fn ellipsoid(poly: &Polygon2, variant: Variant, start: Point2, diam: f64) -> Result<Cut> {
    let mut c = start;
    // E = {c + A u : |u| ≤ 1}, initially a disk holding the polygon
    let mut a = [[2.0 * diam, 0.0], [0.0, 2.0 * diam]];
    let mut best: Option<(f64, Point2)> = None;
    let tol = STEP_TOLERANCE * diam;
    // n/√(n²−1) and 1 − √((n−1)/(n+1)) for n = 2
    let grow = 2.0 / 3f64.sqrt();
    let shrink = 1.0 - (1.0f64 / 3.0).sqrt();
    for it in 0..MAX_ITERATIONS {
        let axis = largest_singular_value(&a);
        if axis <= tol {
            let (value, x) = best.expect("center visits the interior");
            return Ok(Cut { x: x.to_vec(), value, iterations: it, axis });
        }
        let g = if poly.contains_strictly(c) {
            let (value, g) = value_and_subgradient(poly, variant, c)?;
            if best.is_none_or(|(b, _)| value <= b) {
                best = Some((value, c));
            }
            if g[0] == 0.0 && g[1] == 0.0 {
                return Ok(Cut { x: c.to_vec(), value, iterations: it, axis: 0.0 });
            }
            g
        } else {
            let e = (0..poly.len())
                .max_by(|&i, &j| {
                    let slack = |k: usize| {
                        let n = poly.edge_normal(k);
                        n[0] * c[0] + n[1] * c[1] - poly.edge_offset(k)
                    };
                    slack(i).total_cmp(&slack(j))
                })
                .expect("polygon has edges");
            poly.edge_normal(e)
        };
        // u = Aᵀg / |Aᵀg|
        let atg = [a[0][0] * g[0] + a[1][0] * g[1], a[0][1] * g[0] + a[1][1] * g[1]];
        let norm = atg[0].hypot(atg[1]);
        if !(norm > 0.0) {
            break;
        }
        let u = [atg[0] / norm, atg[1] / norm];
        let au = [a[0][0] * u[0] + a[0][1] * u[1], a[1][0] * u[0] + a[1][1] * u[1]];
        c = [c[0] - au[0] / 3.0, c[1] - au[1] / 3.0];
        for i in 0..2 {
            for j in 0..2 {
                a[i][j] = grow * (a[i][j] - shrink * au[i] * u[j]);
            }
        }
    }
    match best {
        Some((value, x)) => Err(GeometryError::NoConvergence {
            iterations: MAX_ITERATIONS,
            best_point: x.to_vec(),
            best_value: value,
        }),
        None => Err(GeometryError::Invariant("ellipsoid never met the interior".into())),
    }
}

fn largest_singular_value(a: &[[f64; 2]; 2]) -> f64 {
    let m00 = a[0][0] * a[0][0] + a[0][1] * a[0][1];
    let m11 = a[1][0] * a[1][0] + a[1][1] * a[1][1];
    let m01 = a[0][0] * a[1][0] + a[0][1] * a[1][1];
    let tr = m00 + m11;
    let disc = (0.25 * (m00 - m11).powi(2) + m01 * m01).sqrt();
    (0.5 * tr + disc).sqrt()
}

/// Minimum directed self-perimeter and whether it is at most 9.
pub fn grunbaum_bound_check(poly: &Polygon2) -> Result<(f64, bool)> {
    let r = optimal_center_2d(poly, Variant::Directed)?;
    Ok((r.value, r.value <= 9.0 + 1e-6))
}

/// The simplex self-volume is minimized at the centroid with value `(n+1)ⁿ/n!`.
pub fn optimal_simplex_center(n: usize) -> CenterResult {
    CenterResult {
        optimum: vec![1.0 / (n + 1) as f64; n + 1],
        value: simplex_minimum(n),
        iterations: 0,
        variant: CenterVariant::SimplexClosedForm,
        convergence_norm: 0.0,
    }
}

/// Minimizer of the recursive self-volume over interior points, by Nelder–Mead
/// from the vertex centroid.
pub fn optimal_center_volume(poly: &PolytopeN) -> Result<CenterResult> {
    let c = crate::linalg::centroid(poly.vertices());
    let depth = poly.depth(&c);
    if !(depth > 0.0) {
        return Err(GeometryError::Degenerate("vertex centroid is not interior".into()));
    }
    let f = |p: &[f64]| {
        if poly.depth(p) <= poly.tolerance() {
            return f64::INFINITY;
        }
        self_volume_at(poly, p).unwrap_or(f64::INFINITY)
    };
    let r = nelder_mead::minimize(
        f,
        &c,
        NelderMeadOptions {
            step: 0.1 * depth,
            xtol: 1e-9 * depth,
            max_iter: MAX_ITERATIONS,
            restarts: 4,
        },
    );
    if !r.converged {
        return Err(GeometryError::NoConvergence {
            iterations: r.iterations,
            best_point: r.x,
            best_value: r.value,
        });
    }
    Ok(CenterResult {
        optimum: r.x,
        value: r.value,
        iterations: r.iterations,
        variant: CenterVariant::SelfVolume,
        convergence_norm: r.diameter,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub trials: usize,
    pub violations: usize,
    /// Smallest observed `(f(p₁) + f(p₂))/2 − f(midpoint)`.
    pub min_margin: f64,
}

/// Samples pairs of interior points and counts failures of strict midpoint
/// convexity, `f(mid) < (f(p₁) + f(p₂))/2 − 1e−12`.
pub fn convexity_probe<R: Rng + ?Sized>(
    poly: &Polygon2,
    variant: Variant,
    trials: usize,
    rng: &mut R,
) -> ProbeReport {
    let mut violations = 0;
    let mut min_margin = f64::INFINITY;
    let diam = poly.diameter();
    for _ in 0..trials {
        let (p1, p2) = loop {
            let a = random_interior_point(rng, poly);
            let b = random_interior_point(rng, poly);
            if (a[0] - b[0]).hypot(a[1] - b[1]) > 1e-3 * diam {
                break (a, b);
            }
        };
        let mid = [0.5 * (p1[0] + p2[0]), 0.5 * (p1[1] + p2[1])];
        let margin = match (
            polygon_perimeter(poly, p1, variant),
            polygon_perimeter(poly, p2, variant),
            polygon_perimeter(poly, mid, variant),
        ) {
            (Ok(a), Ok(b), Ok(m)) => 0.5 * (a + b) - m,
            _ => f64::NEG_INFINITY,
        };
        min_margin = min_margin.min(margin);
        if margin <= 1e-12 {
            violations += 1;
        }
    }
    ProbeReport {
        trials,
        violations,
        min_margin,
    }
}
