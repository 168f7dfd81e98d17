//! Smooth star-shaped planar bodies given by a Fourier radius function about the origin.

use std::f64::consts::TAU;

use crate::error::{GeometryError, Result};
use crate::fourier::{grid, FourierSeries};

/// Grid used for positivity and convexity checks.
pub const CHECK_NODES: usize = 2048;

/// `r(θ) = Σ c_k e^{ikθ}`, the distance from the origin to the boundary in direction θ.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusProfile {
    series: FourierSeries,
}

impl RadiusProfile {
    /// Rejects profiles that are not positive on the check grid. Convexity is
    /// not enforced here; see [`RadiusProfile::convexity_margin`].
    pub fn new(series: FourierSeries) -> Result<Self> {
        let min = series
            .sample(CHECK_NODES)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if !(min > 0.0) {
            return Err(GeometryError::Domain(format!(
                "radius function is not positive (min {min:e})"
            )));
        }
        Ok(Self { series })
    }

    pub fn circle(radius: f64) -> Result<Self> {
        Self::new(FourierSeries::constant(radius))
    }

    pub fn series(&self) -> &FourierSeries {
        &self.series
    }

    pub fn r(&self, theta: f64) -> f64 {
        self.series.eval(theta)
    }

    pub fn dr(&self, theta: f64) -> f64 {
        self.series.derivative(theta)
    }

    /// Upper bound on `r` from the coefficient moduli.
    pub fn radius_bound(&self) -> f64 {
        self.series.mean().abs()
            + 2.0
                * self.series.coeffs()[1..]
                    .iter()
                    .map(|c| c.norm())
                    .sum::<f64>()
    }

    /// Minimum over the grid of `r² + 2r'² − r r''`, the curvature numerator of the polar curve.
    /// Nonnegative for convex bodies.
    pub fn convexity_margin(&self) -> f64 {
        grid(CHECK_NODES)
            .into_iter()
            .map(|t| {
                let r = self.series.eval(t);
                let d = self.series.derivative(t);
                let dd = self.series.second_derivative(t);
                r * r + 2.0 * d * d - r * dd
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_convex(&self) -> bool {
        self.convexity_margin() >= -1e-12 * self.radius_bound().powi(2)
    }

    pub fn is_centrally_symmetric(&self, tol: f64) -> bool {
        self.series.max_abs_where(|k| k % 2 == 1) <= tol
    }

    fn boundary_gap(&self, x: [f64; 2]) -> f64 {
        x[0].hypot(x[1]) - self.r(x[1].atan2(x[0]))
    }

    pub fn contains_strictly(&self, p: [f64; 2]) -> bool {
        self.boundary_gap(p) < -1e-12 * self.radius_bound()
    }

    /// Distance from `p` to the boundary along `v`, by bisection on the radial gap.
    pub fn ray_exit(&self, p: [f64; 2], v: [f64; 2]) -> Result<f64> {
        let len = v[0].hypot(v[1]);
        if !(len > 0.0 && len.is_finite()) {
            return Err(GeometryError::Domain("ray direction is zero".into()));
        }
        if !self.contains_strictly(p) {
            return Err(GeometryError::Domain("center is not strictly interior".into()));
        }
        if p == [0.0, 0.0] {
            return Ok(self.r(v[1].atan2(v[0])) / len);
        }
        let u = [v[0] / len, v[1] / len];
        let at = |t: f64| [p[0] + t * u[0], p[1] + t * u[1]];
        let mut lo = 0.0;
        let mut hi = 2.0 * self.radius_bound() + p[0].hypot(p[1]);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.boundary_gap(at(mid)) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= f64::EPSILON * hi {
                break;
            }
        }
        Ok(0.5 * (lo + hi) / len)
    }

    /// `max_θ r(θ) <(cos θ, sin θ), z>`: grid search refined by golden section.
    pub fn support(&self, z: [f64; 2]) -> f64 {
        let f = |t: f64| self.r(t) * (t.cos() * z[0] + t.sin() * z[1]);
        let nodes = grid(CHECK_NODES);
        let (best, _) = nodes
            .iter()
            .map(|&t| (t, f(t)))
            .fold((0.0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
        let h = TAU / CHECK_NODES as f64;
        let (x, _) = golden_max(f, best - h, best + h, 1e-13);
        f(x).max(f(best))
    }
}

/// Golden-section search for the maximum of a unimodal function on `[a, b]`.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}
