//! Radius, chord, support and polar evaluation shared by all body representations.

use crate::error::{GeometryError, Result};
use crate::linalg::{norm, normalized, scale};
use crate::polygon::Polygon2;
use crate::polytope::PolytopeN;
use crate::profile::RadiusProfile;

pub trait ConvexBody {
    fn dim(&self) -> usize;

    /// Exit distance along the ray `center + t·u` with `u = direction/|direction|`.
    fn radius_unit(&self, center: &[f64], unit: &[f64]) -> Result<f64>;

    fn support_unit(&self, unit: &[f64]) -> f64;

    fn is_centrally_symmetric(&self, tol: f64) -> bool;

    /// `sup{t : center + t·u ∈ K}` for the unit vector `u` along `direction`.
    fn radius(&self, center: &[f64], direction: &[f64]) -> Result<f64> {
        let u = unit(self.dim(), center, direction)?;
        self.radius_unit(center, &u)
    }

    /// Length of the chord through `center` parallel to `direction`.
    fn chord_length(&self, center: &[f64], direction: &[f64]) -> Result<f64> {
        let u = unit(self.dim(), center, direction)?;
        Ok(self.radius_unit(center, &u)? + self.radius_unit(center, &scale(&u, -1.0))?)
    }

    /// `h(z) = max_{x∈K} <x, z>`.
    fn support(&self, direction: &[f64]) -> Result<f64> {
        if direction.len() != self.dim() {
            return Err(GeometryError::Domain("direction has wrong dimension".into()));
        }
        let n = norm(direction);
        let u = normalized(direction)
            .ok_or_else(|| GeometryError::Domain("direction is zero".into()))?;
        Ok(n * self.support_unit(&u))
    }

    /// Radius function of the polar body, `1 / h(u)`.
    fn polar_radius(&self, direction: &[f64]) -> Result<f64> {
        let u = normalized(direction)
            .ok_or_else(|| GeometryError::Domain("direction is zero".into()))?;
        let h = self.support(&u)?;
        if h <= 0.0 {
            return Err(GeometryError::OriginNotInterior);
        }
        Ok(1.0 / h)
    }

    /// Gauge `inf{t > 0 : v/t ∈ K}` about the origin.
    fn gauge(&self, v: &[f64]) -> Result<f64> {
        let n = norm(v);
        if n == 0.0 {
            return Ok(0.0);
        }
        let origin = vec![0.0; self.dim()];
        Ok(n / self.radius(&origin, v)?)
    }
}

fn unit(dim: usize, center: &[f64], direction: &[f64]) -> Result<Vec<f64>> {
    if center.len() != dim || direction.len() != dim {
        return Err(GeometryError::Domain(format!(
            "expected {dim}-dimensional center and direction"
        )));
    }
    normalized(direction).ok_or_else(|| GeometryError::Domain("direction is zero".into()))
}

impl ConvexBody for Polygon2 {
    fn dim(&self) -> usize {
        2
    }

    fn radius_unit(&self, center: &[f64], unit: &[f64]) -> Result<f64> {
        Ok(self.ray_exit([center[0], center[1]], [unit[0], unit[1]])?.0)
    }

    fn support_unit(&self, unit: &[f64]) -> f64 {
        self.vertices()
            .iter()
            .map(|v| v[0] * unit[0] + v[1] * unit[1])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn is_centrally_symmetric(&self, tol: f64) -> bool {
        PolytopeN::from_polygon(self).is_centrally_symmetric(tol)
    }
}

impl ConvexBody for PolytopeN {
    fn dim(&self) -> usize {
        PolytopeN::dim(self)
    }

    fn radius_unit(&self, center: &[f64], unit: &[f64]) -> Result<f64> {
        Ok(self.ray_exit(center, unit)?.0)
    }

    fn support_unit(&self, unit: &[f64]) -> f64 {
        self.support(unit)
    }

    fn is_centrally_symmetric(&self, tol: f64) -> bool {
        PolytopeN::is_centrally_symmetric(self, tol)
    }
}

impl ConvexBody for RadiusProfile {
    fn dim(&self) -> usize {
        2
    }

    fn radius_unit(&self, center: &[f64], unit: &[f64]) -> Result<f64> {
        self.ray_exit([center[0], center[1]], [unit[0], unit[1]])
    }

    fn support_unit(&self, unit: &[f64]) -> f64 {
        self.support([unit[0], unit[1]])
    }

    fn is_centrally_symmetric(&self, tol: f64) -> bool {
        RadiusProfile::is_centrally_symmetric(self, tol)
    }
}
