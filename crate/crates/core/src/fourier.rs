//! Real-valued trigonometric series `f(θ) = Σ_{|k|<=K} c_k e^{ikθ}` with
//! `c_{-k} = conj(c_k)`; only `c_0..c_K` are stored.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{GeometryError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    coeffs: Vec<Complex64>,
}

/// Uniform grid `θ_j = 2πj/n`.
pub fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| TAU * j as f64 / n as f64).collect()
}

impl FourierSeries {
    /// From nonnegative-index coefficients; the imaginary part of `c_0` is dropped.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        coeffs[0].im = 0.0;
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::new(vec![])
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![Complex64::new(c, 0.0)])
    }

    /// `amplitude · cos(kθ)`.
    pub fn cosine(k: usize, amplitude: f64) -> Self {
        let mut s = Self::zero();
        if k == 0 {
            s.coeffs[0].re = amplitude;
        } else {
            s.set(k, Complex64::new(amplitude / 2.0, 0.0));
        }
        s
    }

    /// `amplitude · sin(kθ)`.
    pub fn sine(k: usize, amplitude: f64) -> Self {
        let mut s = Self::zero();
        if k > 0 {
            s.set(k, Complex64::new(0.0, -amplitude / 2.0));
        }
        s
    }

    /// From `(k, re, im)` triples. Negative indices must agree with the
    /// conjugate of their positive partner when both are given.
    pub fn from_triples(triples: &[(i64, f64, f64)]) -> Result<Self> {
        let kmax = triples.iter().map(|t| t.0.unsigned_abs()).max().unwrap_or(0) as usize;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); kmax + 1];
        let mut seen = vec![false; kmax + 1];
        for &(k, re, im) in triples {
            if !re.is_finite() || !im.is_finite() {
                return Err(GeometryError::InvalidBody(format!(
                    "coefficient {k} is not finite"
                )));
            }
            let c = if k < 0 {
                Complex64::new(re, -im)
            } else {
                Complex64::new(re, im)
            };
            let idx = k.unsigned_abs() as usize;
            if idx == 0 && im.abs() > 1e-12 {
                return Err(GeometryError::InvalidBody(
                    "constant coefficient must be real".into(),
                ));
            }
            if seen[idx] {
                if (coeffs[idx] - c).norm() > 1e-12 * (1.0 + c.norm()) {
                    return Err(GeometryError::InvalidBody(format!(
                        "coefficients ±{idx} are not conjugate"
                    )));
                }
            } else {
                coeffs[idx] = c;
                seen[idx] = true;
            }
        }
        Ok(Self::new(coeffs))
    }

    /// `(k, re, im)` for `k = 0..=K`.
    pub fn to_triples(&self) -> Vec<(i64, f64, f64)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| (k as i64, c.re, c.im))
            .collect()
    }

    pub fn max_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        let idx = k.unsigned_abs() as usize;
        match self.coeffs.get(idx) {
            Some(c) if k < 0 => c.conj(),
            Some(c) => *c,
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn set(&mut self, k: usize, c: Complex64) {
        if k >= self.coeffs.len() {
            self.coeffs.resize(k + 1, Complex64::new(0.0, 0.0));
        }
        self.coeffs[k] = if k == 0 { Complex64::new(c.re, 0.0) } else { c };
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// Value of the `m`-th derivative at `θ`.
    pub fn eval_derivative(&self, theta: f64, m: u32) -> f64 {
        let mut sum = if m == 0 { self.coeffs[0].re } else { 0.0 };
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            let kf = k as f64;
            let e = Complex64::from_polar(1.0, kf * theta);
            let factor = Complex64::new(0.0, kf).powu(m);
            sum += 2.0 * (factor * c * e).re;
        }
        sum
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.eval_derivative(theta, 0)
    }

    pub fn derivative(&self, theta: f64) -> f64 {
        self.eval_derivative(theta, 1)
    }

    pub fn second_derivative(&self, theta: f64) -> f64 {
        self.eval_derivative(theta, 2)
    }

    /// Samples on `n` uniform nodes.
    pub fn sample(&self, n: usize) -> Vec<f64> {
        self.sample_derivative(n, 0)
    }

    pub fn sample_derivative(&self, n: usize, m: u32) -> Vec<f64> {
        grid(n)
            .into_iter()
            .map(|t| self.eval_derivative(t, m))
            .collect()
    }

    /// Discrete Fourier projection of uniform samples onto degrees `0..=kmax`.
    pub fn from_samples(samples: &[f64], kmax: usize) -> Self {
        let n = samples.len();
        let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let inv = 1.0 / n as f64;
        let top = kmax.min((n.saturating_sub(1)) / 2);
        Self::new(buf[..=top].iter().map(|c| c * inv).collect())
    }

    /// Keeps the coefficients whose index satisfies `keep`; others become zero.
    pub fn filter(&self, keep: impl Fn(usize) -> bool) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if keep(k) { *c } else { Complex64::new(0.0, 0.0) })
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|k| self.coeff(k as i64) + other.coeff(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Largest coefficient modulus over indices selected by `which`.
    pub fn max_abs_where(&self, which: impl Fn(usize) -> bool) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(k, _)| which(*k))
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs_where(|_| true) <= tol
    }
}
