//! Planar inverse problem for the self-surface measure.
//!
//! Given a zero-mean log-density `φ` and a small `ε`, find a centrally
//! symmetric body whose self-surface measure is `e^{ε(φ+φ₀)} dθ`. Writing
//! `ζ = ln r = ε^{1/2} ζ₁ + ε ζ₂ + …`:
//!
//! * `φ₀` balances the 4-fold part `φ^(p)` of `φ` so that `ζ₁` is periodic;
//! * `ζ₁' = ± sgn(φ^(p) + φ₀) √((2/3)|φ^(p) + φ₀|)`;
//! * `ζ₂` solves `L ζ₂ = φ^(u)` with `L ζ(θ) = ζ(θ) − ζ(θ + π/2)`, whose
//!   spectrum is `1 − e^{ikπ/2}` and whose kernel is the 4-fold harmonics.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::fourier::{grid, FourierSeries};
use crate::perimeter::smooth_integrand;
use crate::polytope::PolytopeN;
use crate::profile::RadiusProfile;
use crate::selfvolume::self_volume_recursive;

pub const DEFAULT_NODES: usize = 4096;
pub const DEFAULT_KMAX: usize = 64;
/// Nodes on each side of a sign change of `φ^(p) + φ₀` left out of the residual.
pub const CUSP_EXCLUSION: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Target log-density `φ` (zero mean) and perturbation scale `ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierDensity {
    phi: FourierSeries,
    epsilon: f64,
}

impl FourierDensity {
    pub fn new(phi: FourierSeries, epsilon: f64) -> Result<Self> {
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(GeometryError::Domain(format!("epsilon must be >= 0, got {epsilon}")));
        }
        if phi.mean().abs() > 1e-12 {
            return Err(GeometryError::Domain(format!(
                "density must have zero mean, got {}",
                phi.mean()
            )));
        }
        Ok(Self { phi, epsilon })
    }

    pub fn phi(&self) -> &FourierSeries {
        &self.phi
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        Self::new(self.phi.clone(), epsilon)
    }

    /// True when only even harmonics are present, i.e. the target is π-periodic.
    pub fn is_centrally_symmetric(&self, tol: f64) -> bool {
        self.phi.max_abs_where(|k| k % 2 == 1) <= tol
    }
}

fn is_four_fold(k: usize) -> bool {
    k.is_multiple_of(4)
}

/// `(φ^(p), φ^(u))`: the nonzero multiples of 4 and the rest.
pub fn split_harmonics(phi: &FourierSeries) -> (FourierSeries, FourierSeries) {
    (
        phi.filter(|k| k > 0 && is_four_fold(k)),
        phi.filter(|k| !is_four_fold(k)),
    )
}

/// Samples of a 4-fold series on `nodes` nodes (a multiple of 4). The first
/// quarter is evaluated and tiled, so the samples are exactly π/2-periodic.
/// Values at rounding level are set to zero: `√|·|` would amplify them.
pub fn sample_four_fold(series: &FourierSeries, nodes: usize) -> Vec<f64> {
    let mut quarter: Vec<f64> = grid(nodes)[..nodes / 4].iter().map(|&t| series.eval(t)).collect();
    let scale = quarter.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    quarter
        .iter_mut()
        .filter(|x| x.abs() <= 1e-13 * scale)
        .for_each(|x| *x = 0.0);
    quarter.iter().cycle().take(nodes).copied().collect()
}

/// Self-surface density `√(r² + r'²) / r(θ + atan2(r, r'))` on `nodes` uniform nodes.
pub fn forward_measure(profile: &RadiusProfile, nodes: usize) -> Result<Vec<f64>> {
    grid(nodes)
        .into_iter()
        .map(|t| {
            if profile.r(t) > 0.0 {
                Ok(smooth_integrand(profile, t))
            } else {
                Err(GeometryError::Domain(format!("radius is not positive at θ = {t}")))
            }
        })
        .collect()
}

/// `Γ(γ) = ∫ sgn(φ^(p) − γ) √|φ^(p) − γ|` by the trapezoid rule on the given samples.
pub fn gamma(phi_p_samples: &[f64], g: f64) -> f64 {
    let h = TAU / phi_p_samples.len() as f64;
    h * phi_p_samples
        .iter()
        .map(|s| {
            let d = s - g;
            d.signum() * d.abs().sqrt()
        })
        .sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Phi0 {
    pub value: f64,
    /// Set when `φ^(p) ≡ 0`, where the leading order is undefined.
    pub degenerate: bool,
    /// `|∫ sgn(φ^(p) + φ₀) √|φ^(p) + φ₀||` at the returned value.
    pub defect: f64,
}

/// Unique `φ₀` with `∫ sgn(φ^(p) + φ₀) √|φ^(p) + φ₀| dθ = 0`, by bisection on `Γ`.
pub fn solve_phi0(phi_p: &FourierSeries, nodes: usize) -> Result<Phi0> {
    if nodes < 4 || !nodes.is_multiple_of(4) {
        return Err(GeometryError::Domain(format!("nodes must be a multiple of 4, got {nodes}")));
    }
    if phi_p.max_abs_where(|k| !(k > 0 && is_four_fold(k))) > 0.0 {
        return Err(GeometryError::Domain(
            "shift equation takes only nonzero multiples of 4".into(),
        ));
    }
    if phi_p.is_zero(0.0) {
        return Ok(Phi0 {
            value: 0.0,
            degenerate: true,
            defect: 0.0,
        });
    }
    let samples = sample_four_fold(phi_p, nodes);
    let lo0 = samples.iter().copied().fold(f64::INFINITY, f64::min) - 1.0;
    let hi0 = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 1.0;
    let (mut lo, mut hi) = (lo0, hi0);
    // Γ decreases in γ: positive at lo, negative at hi
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let v = gamma(&samples, mid);
        if v.abs() < 1e-14 || hi - lo <= 4.0 * f64::EPSILON * mid.abs().max(1.0) {
            break;
        }
        if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let phi0 = -mid;
    let shifted: Vec<f64> = samples.iter().map(|s| s + phi0).collect();
    let defect = gamma(&shifted, 0.0).abs();
    if defect >= 1e-10 {
        return Err(GeometryError::Phi0Inconsistency { defect });
    }
    Ok(Phi0 {
        value: phi0,
        degenerate: false,
        defect,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeadingOrder {
    pub phi0: f64,
    /// `ζ₁'` on the grid.
    pub derivative: Vec<f64>,
    /// `ζ₁` on the grid, zero mean.
    pub zeta1: Vec<f64>,
    /// `|ζ₁(2π) − ζ₁(0)|` before periodization.
    pub periodicity_defect: f64,
}

/// `ζ₁` from its derivative by cumulative trapezoid, normalized to zero mean.
pub fn leading_order(density: &FourierDensity, sign: Sign, nodes: usize) -> Result<LeadingOrder> {
    let (phi_p, _) = split_harmonics(density.phi());
    let phi0 = solve_phi0(&phi_p, nodes)?;
    if phi0.degenerate {
        return Err(GeometryError::Domain(
            "the 4-fold part of the density vanishes".into(),
        ));
    }
    let s = sign.factor();
    let derivative: Vec<f64> = sample_four_fold(&phi_p, nodes)
        .into_iter()
        .map(|p| {
            let g = p + phi0.value;
            s * g.signum() * ((2.0 / 3.0) * g.abs()).sqrt()
        })
        .collect();
    let h = TAU / nodes as f64;
    let mut zeta1 = Vec::with_capacity(nodes);
    let mut acc = 0.0;
    for j in 0..nodes {
        zeta1.push(acc);
        acc += 0.5 * h * (derivative[j] + derivative[(j + 1) % nodes]);
    }
    let periodicity_defect = acc.abs();
    if periodicity_defect > 1e-6 {
        return Err(GeometryError::Phi0Inconsistency {
            defect: periodicity_defect,
        });
    }
    let mean = zeta1.iter().sum::<f64>() / nodes as f64;
    zeta1.iter_mut().for_each(|z| *z -= mean);
    Ok(LeadingOrder {
        phi0: phi0.value,
        derivative,
        zeta1,
        periodicity_defect,
    })
}

/// `1 − e^{ikπ/2}`.
pub fn l_eigenvalue(k: i64) -> Complex64 {
    Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, k as f64 * FRAC_PI_2)
}

/// Exact eigenvalue for integer `k`, avoiding rounding in `e^{ikπ/2}`.
fn l_eigenvalue_exact(k: usize) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(0.0, 0.0),
        1 => Complex64::new(1.0, -1.0),
        2 => Complex64::new(2.0, 0.0),
        _ => Complex64::new(1.0, 1.0),
    }
}

/// `L ζ(θ) = ζ(θ) − ζ(θ + π/2)` in coefficient space.
pub fn apply_l(zeta: &FourierSeries) -> FourierSeries {
    FourierSeries::new(
        zeta.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| c * l_eigenvalue_exact(k))
            .collect(),
    )
}

/// Inverse of `L` on the complement of its kernel; the kernel component is zero.
pub fn invert_l(rhs: &FourierSeries) -> Result<FourierSeries> {
    if let Some(k) = (0..=rhs.max_degree())
        .find(|&k| is_four_fold(k) && rhs.coeff(k as i64).norm() > 0.0)
    {
        return Err(GeometryError::Invariant(format!(
            "harmonic {k} lies in the kernel of L"
        )));
    }
    Ok(FourierSeries::new(
        rhs.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if is_four_fold(k) {
                    Complex64::new(0.0, 0.0)
                } else {
                    c / l_eigenvalue_exact(k)
                }
            })
            .collect(),
    ))
}

/// `ζ₂ = Σ_{k∉4ℤ} φ_k e^{ikθ} / (1 − e^{ikπ/2})`.
pub fn second_order(density: &FourierDensity) -> Result<FourierSeries> {
    let (_, phi_u) = split_harmonics(density.phi());
    invert_l(&phi_u)
}

#[derive(Debug, Clone)]
pub struct ReconstructionResult {
    pub epsilon: f64,
    pub sign: Sign,
    pub phi0: f64,
    pub nodes: usize,
    /// `ζ₁` on the grid.
    pub zeta1: Vec<f64>,
    pub zeta2: FourierSeries,
    pub radius: RadiusProfile,
    /// `sup |ln μ − ε(φ + φ₀)|` away from the cusps of `ζ₁'`.
    pub residual: f64,
    pub warnings: Vec<String>,
}

/// `r = exp(ε^{1/2} ζ₁ + ε ζ₂)`, projected onto `kmax` harmonics, and its residual.
pub fn reconstruct(
    density: &FourierDensity,
    sign: Sign,
    nodes: usize,
    kmax: usize,
) -> Result<ReconstructionResult> {
    if nodes < 64 || !nodes.is_multiple_of(4) {
        return Err(GeometryError::Domain(format!(
            "nodes must be a multiple of 4 and at least 64, got {nodes}"
        )));
    }
    let eps = density.epsilon();
    let lead = leading_order(density, sign, nodes)?;
    let zeta2 = second_order(density)?;
    let z2 = zeta2.sample(nodes);
    let log_r: Vec<f64> = lead
        .zeta1
        .iter()
        .zip(&z2)
        .map(|(a, b)| eps.sqrt() * a + eps * b)
        .collect();
    let samples: Vec<f64> = log_r.iter().map(|x| x.exp()).collect();
    let radius = RadiusProfile::new(FourierSeries::from_samples(&samples, kmax))?;
    let mut warnings = Vec::new();
    if !radius.is_convex() {
        warnings.push(format!(
            "reconstructed body is not convex on the check grid (margin {:e})",
            radius.convexity_margin()
        ));
    }
    let mu = forward_measure(&radius, nodes)?;
    let phi = density.phi().sample(nodes);
    let (phi_p, _) = split_harmonics(density.phi());
    let g: Vec<f64> = sample_four_fold(&phi_p, nodes).iter().map(|p| p + lead.phi0).collect();
    let excluded = cusp_mask(&g, CUSP_EXCLUSION);
    let residual = (0..nodes)
        .filter(|&j| !excluded[j])
        .map(|j| (mu[j].ln() - eps * (phi[j] + lead.phi0)).abs())
        .fold(0.0, f64::max);
    Ok(ReconstructionResult {
        epsilon: eps,
        sign,
        phi0: lead.phi0,
        nodes,
        zeta1: lead.zeta1,
        zeta2,
        radius,
        residual,
        warnings,
    })
}

/// Marks `width` nodes on each side of every sign change of `g` (cyclically).
fn cusp_mask(g: &[f64], width: usize) -> Vec<bool> {
    let n = g.len();
    let mut mask = vec![false; n];
    for j in 0..n {
        let a = g[j];
        let b = g[(j + 1) % n];
        if a == 0.0 || (a > 0.0) != (b > 0.0) {
            for off in 0..width {
                mask[(j + n - off) % n] = true;
                mask[(j + 1 + off) % n] = true;
            }
        }
    }
    mask
}

/// Least-squares slope of `ln residual` against `ln ε`.
pub fn log_log_slope(epsilons: &[f64], residuals: &[f64]) -> f64 {
    let xs: Vec<f64> = epsilons.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = residuals.iter().map(|r| r.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForwardCell {
    pub facet: usize,
    /// `ω^(n−1)(S_F) / ℋ_{n−1}(S_F)`
    pub coefficient: f64,
    pub facet_measure: f64,
    /// `coefficient · facet_measure`, the mass of the facet's solid-angle cell.
    pub mass: f64,
}

/// Self-surface measure of a polytope pushed to the sphere: on the cell of
/// directions hitting facet `F` the density is
/// `ω(S_F)/ℋ(S_F) · r^{n−1} / <θ, ν_F>` with respect to surface measure.
#[derive(Debug, Clone)]
pub struct GeneralForward {
    polytope: PolytopeN,
    pub cells: Vec<ForwardCell>,
    pub total_mass: f64,
}

pub fn general_n_forward(poly: &PolytopeN) -> Result<GeneralForward> {
    let sv = self_volume_recursive(poly)?;
    let cells: Vec<ForwardCell> = sv
        .facet_contributions
        .iter()
        .map(|c| ForwardCell {
            facet: c.facet,
            coefficient: c.section_self_volume / c.section_measure,
            facet_measure: c.measure,
            mass: c.contribution,
        })
        .collect();
    let total_mass = cells.iter().map(|c| c.mass).sum();
    Ok(GeneralForward {
        polytope: poly.clone(),
        cells,
        total_mass,
    })
}

impl GeneralForward {
    /// Density at the unit direction `theta`.
    pub fn density_at(&self, theta: &[f64]) -> Result<f64> {
        let origin = vec![0.0; self.polytope.dim()];
        let (r, facet) = self.polytope.ray_exit(&origin, theta)?;
        let nu = &self.polytope.facets()[facet].normal;
        let cos = crate::linalg::dot(theta, nu);
        Ok(self.cells[facet].coefficient * r.powi(self.polytope.dim() as i32 - 1) / cos)
    }
}
