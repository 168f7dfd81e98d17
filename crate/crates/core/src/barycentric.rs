use nalgebra::{DMatrix, DVector};

use crate::error::{GeometryError, Result};

/// Strictly positive weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct BarycentricPoint {
    weights: Vec<f64>,
}

impl BarycentricPoint {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(GeometryError::Domain(
                "barycentric point needs at least two weights".into(),
            ));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return Err(GeometryError::Domain(format!(
                "barycentric weight {w} is not strictly positive"
            )));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(GeometryError::Domain(format!(
                "barycentric weights sum to {sum}, not 1"
            )));
        }
        Ok(Self { weights })
    }

    /// Rescales positive weights to unit sum.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !(sum > 0.0) {
            return Err(GeometryError::Domain("weights have nonpositive sum".into()));
        }
        Self::new(weights.into_iter().map(|w| w / sum).collect())
    }

    pub fn centroid(count: usize) -> Self {
        Self {
            weights: vec![1.0 / count as f64; count],
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn to_cartesian(&self, vertices: &[Vec<f64>]) -> Result<Vec<f64>> {
        if vertices.len() != self.weights.len() {
            return Err(GeometryError::Domain(format!(
                "{} weights for {} vertices",
                self.weights.len(),
                vertices.len()
            )));
        }
        let dim = vertices[0].len();
        let mut p = vec![0.0; dim];
        for (w, v) in self.weights.iter().zip(vertices) {
            for (pi, vi) in p.iter_mut().zip(v) {
                *pi += w * vi;
            }
        }
        Ok(p)
    }

    /// Barycentric coordinates of `p` in the simplex with the given `n + 1` vertices.
    pub fn from_cartesian(vertices: &[Vec<f64>], p: &[f64]) -> Result<Self> {
        let n = p.len();
        if vertices.len() != n + 1 || vertices.iter().any(|v| v.len() != n) {
            return Err(GeometryError::Domain("simplex needs n + 1 vertices in R^n".into()));
        }
        // rows: coordinates, plus the affine constraint Σλ = 1
        let a = DMatrix::from_fn(n + 1, n + 1, |i, j| if i < n { vertices[j][i] } else { 1.0 });
        let mut rhs = DVector::from_element(n + 1, 1.0);
        for i in 0..n {
            rhs[i] = p[i];
        }
        let lambda = a
            .lu()
            .solve(&rhs)
            .ok_or_else(|| GeometryError::Degenerate("simplex is flat".into()))?;
        let weights: Vec<f64> = lambda.iter().copied().collect();
        let sum: f64 = weights.iter().sum();
        Self::new(weights.into_iter().map(|w| w / sum).collect())
    }
}
