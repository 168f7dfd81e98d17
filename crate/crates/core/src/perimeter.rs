//! Planar self-perimeters.
//!
//! For a polygon `K` and an interior point `p`, the directed self-perimeter is
//! `Σ_i L_i / r_{K,p}(τ_i)`, with `τ_i` the unit tangent of edge `i` in the
//! traversal direction. The Busemann variant replaces the forward radius by half
//! the chord: `Σ_i 2 L_i / c_{K,p}(τ_i)`. For smooth profiles the directed
//! perimeter is `∫ √(r² + r'²) / r(φ + α(φ)) dφ`, where `α = atan2(r, r')` is
//! the angle between the radial direction and the tangent.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::barycentric::BarycentricPoint;
use crate::error::{GeometryError, Result};
use crate::fourier::grid;
use crate::polygon::{Orientation, Point2, Polygon2};
use crate::profile::RadiusProfile;

/// Minimum quadrature resolution for smooth profiles.
pub const MIN_NODES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Directed,
    Busemann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    PolygonExact,
    Quadrature,
    ClosedForm,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Directed => "directed",
            Variant::Busemann => "busemann",
        }
    }
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::PolygonExact => "polygon-exact",
            Method::Quadrature => "quadrature",
            Method::ClosedForm => "closed-form",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Perimeter2Result {
    pub value: f64,
    pub variant: Variant,
    pub method: Method,
    pub node_count: Option<usize>,
}

/// Directed self-perimeter about `center`, traversing the boundary counter-clockwise.
pub fn self_perimeter_polygon(poly: &Polygon2, center: Point2) -> Result<Perimeter2Result> {
    self_perimeter_polygon_oriented(poly, center, Orientation::CounterClockwise)
}

pub fn self_perimeter_polygon_oriented(
    poly: &Polygon2,
    center: Point2,
    orientation: Orientation,
) -> Result<Perimeter2Result> {
    let sign = match orientation {
        Orientation::CounterClockwise => 1.0,
        Orientation::Clockwise => -1.0,
    };
    let mut value = 0.0;
    for i in 0..poly.len() {
        let t = poly.edge_direction(i);
        let (r, _) = poly.ray_exit(center, [sign * t[0], sign * t[1]])?;
        value += poly.edge_length(i) / r;
    }
    Ok(Perimeter2Result {
        value,
        variant: Variant::Directed,
        method: Method::PolygonExact,
        node_count: None,
    })
}

pub fn busemann_perimeter_polygon(poly: &Polygon2, center: Point2) -> Result<Perimeter2Result> {
    let mut value = 0.0;
    for i in 0..poly.len() {
        let t = poly.edge_direction(i);
        let (fwd, _) = poly.ray_exit(center, t)?;
        let (back, _) = poly.ray_exit(center, [-t[0], -t[1]])?;
        value += 2.0 * poly.edge_length(i) / (fwd + back);
    }
    Ok(Perimeter2Result {
        value,
        variant: Variant::Busemann,
        method: Method::PolygonExact,
        node_count: None,
    })
}

/// Either variant by value; the objective for center optimization.
pub fn polygon_perimeter(poly: &Polygon2, center: Point2, variant: Variant) -> Result<f64> {
    Ok(match variant {
        Variant::Directed => self_perimeter_polygon(poly, center)?.value,
        Variant::Busemann => busemann_perimeter_polygon(poly, center)?.value,
    })
}

/// Integrand `√(r² + r'²) / r(φ + atan2(r, r'))` at `φ`.
pub fn smooth_integrand(profile: &RadiusProfile, phi: f64) -> f64 {
    let r = profile.r(phi);
    let d = profile.dr(phi);
    let alpha = r.atan2(d);
    r.hypot(d) / profile.r(phi + alpha)
}

/// Trapezoid quadrature of the smooth-profile integral on `nodes` uniform nodes.
pub fn self_perimeter_smooth(profile: &RadiusProfile, nodes: usize) -> Result<Perimeter2Result> {
    if nodes < MIN_NODES {
        return Err(GeometryError::Domain(format!(
            "quadrature needs at least {MIN_NODES} nodes, got {nodes}"
        )));
    }
    let thetas = grid(nodes);
    if let Some(t) = thetas.iter().find(|&&t| !(profile.r(t) > 0.0)) {
        return Err(GeometryError::Domain(format!(
            "radius is not positive at θ = {t}"
        )));
    }
    let h = 2.0 * PI / nodes as f64;
    let value = h * thetas.iter().map(|&t| smooth_integrand(profile, t)).sum::<f64>();
    Ok(Perimeter2Result {
        value,
        variant: Variant::Directed,
        method: Method::Quadrature,
        node_count: Some(nodes),
    })
}

/// Closed form for the regular `k`-gon about its center.
pub fn kgon_self_perimeter(k: usize) -> Result<f64> {
    if k < 3 {
        return Err(GeometryError::Domain(format!("k-gon needs k >= 3, got {k}")));
    }
    let kf = k as f64;
    let a = PI / kf;
    Ok(match k % 4 {
        0 => 2.0 * kf * a.tan(),
        2 => 2.0 * kf * a.sin(),
        _ => 2.0 * kf * a.tan() * (a / 2.0).cos(),
    })
}

/// Directed and Busemann perimeters of a triangle about the point with the
/// given barycentric coordinates: `Σ 1/λ_i` and `2 Σ 1/(1 − λ_i)`.
pub fn triangle_perimeters(bary: &BarycentricPoint) -> Result<(f64, f64)> {
    let w = bary.weights();
    if w.len() != 3 {
        return Err(GeometryError::Domain(format!(
            "triangle needs 3 barycentric weights, got {}",
            w.len()
        )));
    }
    let directed: f64 = w.iter().map(|l| 1.0 / l).sum();
    let busemann: f64 = 2.0 * w.iter().map(|l| 1.0 / (1.0 - l)).sum::<f64>();
    let slack = 1e-12 * directed;
    if !(9.0 - slack <= busemann && busemann <= directed + slack) {
        return Err(GeometryError::Invariant(format!(
            "9 <= {busemann} <= {directed} fails"
        )));
    }
    Ok((directed, busemann))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::FourierSeries;
    use crate::shapes;

    #[test]
    fn square_and_hexagon() {
        let sq = shapes::square();
        assert!((self_perimeter_polygon(&sq, [0.0, 0.0]).unwrap().value - 8.0).abs() < 1e-12);
        let hex = shapes::regular_polygon(6, 1.0);
        assert!((self_perimeter_polygon(&hex, [0.0, 0.0]).unwrap().value - 6.0).abs() < 1e-12);
    }

    #[test]
    fn triangle_closed_forms() {
        let (d, b) = triangle_perimeters(&BarycentricPoint::new(vec![0.5, 0.25, 0.25]).unwrap())
            .unwrap();
        assert!((d - 10.0).abs() < 1e-14);
        assert!((b - 28.0 / 3.0).abs() < 1e-14);
        let (d, b) = triangle_perimeters(&BarycentricPoint::centroid(3)).unwrap();
        assert!((d - 9.0).abs() < 1e-14 && (b - 9.0).abs() < 1e-14);
    }

    #[test]
    fn triangle_polygon_matches_closed_form() {
        let verts = vec![vec![0.0, 0.0], vec![3.0, 0.5], vec![1.0, 2.0]];
        let tri = Polygon2::new(verts.iter().map(|v| [v[0], v[1]]).collect()).unwrap();
        let bary = BarycentricPoint::new(vec![0.2, 0.5, 0.3]).unwrap();
        let p = bary.to_cartesian(&verts).unwrap();
        let (d, b) = triangle_perimeters(&bary).unwrap();
        assert!((self_perimeter_polygon(&tri, [p[0], p[1]]).unwrap().value - d).abs() < 1e-12);
        assert!((busemann_perimeter_polygon(&tri, [p[0], p[1]]).unwrap().value - b).abs() < 1e-12);
    }

    #[test]
    fn kgon_values() {
        assert!((kgon_self_perimeter(4).unwrap() - 8.0).abs() < 1e-14);
        assert!((kgon_self_perimeter(6).unwrap() - 6.0).abs() < 1e-14);
        let five = 10.0 * (PI / 5.0).tan() * (PI / 10.0).cos();
        assert!((kgon_self_perimeter(5).unwrap() - five).abs() < 1e-14);
        assert!((five - 6.90983).abs() < 1e-5);
        assert!(kgon_self_perimeter(2).is_err());
    }

    #[test]
    fn disk_quadrature() {
        let disk = RadiusProfile::circle(1.0).unwrap();
        let p = self_perimeter_smooth(&disk, 512).unwrap();
        assert!((p.value - 2.0 * PI).abs() < 1e-10);
        assert!(self_perimeter_smooth(&disk, 32).is_err());
    }

    #[test]
    fn near_circle_lies_in_golab_range() {
        let prof =
            RadiusProfile::new(FourierSeries::constant(1.0).add(&FourierSeries::cosine(4, 0.01)))
                .unwrap();
        let v = self_perimeter_smooth(&prof, 1024).unwrap().value;
        assert!(v > 6.0 && v < 8.0, "{v}");
    }

    #[test]
    fn clockwise_traversal_of_symmetric_body_is_unchanged() {
        let hex = shapes::regular_polygon(6, 1.0);
        let p = [0.0, 0.0];
        let ccw = self_perimeter_polygon(&hex, p).unwrap().value;
        let cw = self_perimeter_polygon_oriented(&hex, p, Orientation::Clockwise)
            .unwrap()
            .value;
        assert!((ccw - cw).abs() < 1e-12);
    }
}
