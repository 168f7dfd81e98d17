//! Recursive self-volume of polytopes.
//!
//! With `ω^(1) = 2`, the self-volume of a `k`-dimensional polytope `B` is
//!
//! `ω^(k)(B) = (1/k) Σ_F ℋ_{k−1}(F) · ω^(k−1)(S_F) / ℋ_{k−1}(S_F)`
//!
//! where `F` runs over the facets and `S_F` is the central section of `B`
//! orthogonal to the facet normal. Sections are cached by the subspace they
//! span in the top-level coordinates, since many facet chains reach the same
//! subspace. Top-level facets are evaluated in parallel, each with its own
//! cache, so results do not depend on thread scheduling.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::barycentric::BarycentricPoint;
use crate::error::{GeometryError, Result};
use crate::linalg::{factorial, lift};
use crate::polytope::PolytopeN;

/// Default upper bound on the recursion dimension.
pub const DEFAULT_MAX_DIM: usize = 5;

/// Sections with measure below this are rejected.
pub const MIN_SECTION_MEASURE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FacetContribution {
    pub facet: usize,
    pub measure: f64,
    pub section_measure: f64,
    pub section_self_volume: f64,
    /// `measure · section_self_volume / section_measure`
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfVolumeResult {
    pub value: f64,
    pub dim: usize,
    pub facet_contributions: Vec<FacetContribution>,
}

#[derive(Debug, Clone, Copy)]
pub struct SelfVolumeOptions {
    pub max_dim: usize,
}

impl Default for SelfVolumeOptions {
    fn default() -> Self {
        Self {
            max_dim: DEFAULT_MAX_DIM,
        }
    }
}

struct Ctx {
    memo: HashMap<Vec<i64>, f64>,
    top_dim: usize,
}

/// Self-volume about the origin, which must be strictly interior.
pub fn self_volume_recursive(poly: &PolytopeN) -> Result<SelfVolumeResult> {
    self_volume_with(poly, SelfVolumeOptions::default())
}

pub fn self_volume_with(poly: &PolytopeN, opts: SelfVolumeOptions) -> Result<SelfVolumeResult> {
    let dim = poly.dim();
    if dim > opts.max_dim {
        return Err(GeometryError::DimensionTooLarge {
            dim,
            max: opts.max_dim,
        });
    }
    poly.ensure_origin_interior()?;
    if dim == 1 {
        return Ok(SelfVolumeResult {
            value: 2.0,
            dim,
            facet_contributions: Vec::new(),
        });
    }
    let identity: Vec<Vec<f64>> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let facet_contributions: Vec<FacetContribution> = poly
        .facets()
        .par_iter()
        .enumerate()
        .map(|(i, f)| {
            let mut ctx = Ctx {
                memo: HashMap::new(),
                top_dim: dim,
            };
            let (section_self_volume, section_measure) =
                section_terms(poly, &f.normal, &identity, &[i], &mut ctx)?;
            Ok(FacetContribution {
                facet: i,
                measure: f.measure,
                section_measure,
                section_self_volume,
                contribution: f.measure * section_self_volume / section_measure,
            })
        })
        .collect::<Result<_>>()?;
    let value = facet_contributions.iter().map(|c| c.contribution).sum::<f64>() / dim as f64;
    Ok(SelfVolumeResult {
        value,
        dim,
        facet_contributions,
    })
}

/// Self-volume of `poly` about `center` (translated to the origin first).
pub fn self_volume_at(poly: &PolytopeN, center: &[f64]) -> Result<f64> {
    let shifted = poly.translated(&center.iter().map(|x| -x).collect::<Vec<_>>())?;
    Ok(self_volume_recursive(&shifted)?.value)
}

/// `(ω, ℋ)` of the central section of `poly` orthogonal to `normal`.
/// `frame` holds the basis of `poly`'s ambient space in top-level coordinates.
fn section_terms(
    poly: &PolytopeN,
    normal: &[f64],
    frame: &[Vec<f64>],
    chain: &[usize],
    ctx: &mut Ctx,
) -> Result<(f64, f64)> {
    let section = poly.central_section(normal).map_err(|e| match e {
        GeometryError::Degenerate(_) => GeometryError::DegenerateSection {
            chain: chain.to_vec(),
            measure: 0.0,
        },
        other => other,
    })?;
    let measure = section.polytope.volume();
    if !(measure >= MIN_SECTION_MEASURE) {
        return Err(GeometryError::DegenerateSection {
            chain: chain.to_vec(),
            measure,
        });
    }
    // section basis expressed in top-level coordinates
    let sub_frame: Vec<Vec<f64>> = section
        .basis
        .iter()
        .map(|b| lift(b, frame))
        .collect();
    let omega = omega(&section.polytope, &sub_frame, chain, ctx)?;
    Ok((omega, measure))
}

fn omega(poly: &PolytopeN, frame: &[Vec<f64>], chain: &[usize], ctx: &mut Ctx) -> Result<f64> {
    let k = poly.dim();
    if k == 1 {
        return Ok(2.0);
    }
    let key = subspace_key(frame, ctx.top_dim);
    if let Some(v) = ctx.memo.get(&key) {
        return Ok(*v);
    }
    let mut sum = 0.0;
    let mut next_chain = chain.to_vec();
    next_chain.push(0);
    for (i, f) in poly.facets().iter().enumerate() {
        *next_chain.last_mut().unwrap() = i;
        let (w, h) = section_terms(poly, &f.normal, frame, &next_chain, ctx)?;
        sum += f.measure * w / h;
    }
    let value = sum / k as f64;
    ctx.memo.insert(key, value);
    Ok(value)
}

/// Quantized orthogonal projector onto `span(frame)`; independent of the basis chosen.
fn subspace_key(frame: &[Vec<f64>], dim: usize) -> Vec<i64> {
    let mut key = Vec::with_capacity(dim * (dim + 1) / 2);
    for i in 0..dim {
        for j in i..dim {
            let p: f64 = frame.iter().map(|b| b[i] * b[j]).sum();
            key.push((p * 1e9).round() as i64);
        }
    }
    key
}

/// `2ⁿ`, the self-volume of any parallelotope.
pub fn hypercube_self_volume(n: u32) -> f64 {
    2f64.powi(n as i32)
}

/// Self-volume of a Cartesian product: the product of the factors' self-volumes.
pub fn product_self_volume(a: &SelfVolumeResult, b: &SelfVolumeResult) -> f64 {
    a.value * b.value
}

/// Closed form for the `n`-simplex about the point with barycentric coordinates `bary`:
/// `(2/n!) Σ Π_{m=1}^{n−1} 1/(1 − Σ_{r≤m} λ_{k_r})` over ordered tuples of
/// `n − 1` distinct indices.
pub fn simplex_self_volume(n: usize, bary: &BarycentricPoint) -> Result<f64> {
    let w = bary.weights();
    if w.len() != n + 1 {
        return Err(GeometryError::Domain(format!(
            "{}-simplex needs {} weights, got {}",
            n,
            n + 1,
            w.len()
        )));
    }
    if n == 0 {
        return Err(GeometryError::Domain("simplex dimension must be at least 1".into()));
    }
    fn walk(w: &[f64], used: &mut [bool], depth: usize, partial: f64, prod: f64) -> f64 {
        if depth == 0 {
            return prod;
        }
        let mut total = 0.0;
        for i in 0..w.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            let s = partial + w[i];
            total += walk(w, used, depth - 1, s, prod / (1.0 - s));
            used[i] = false;
        }
        total
    }
    let mut used = vec![false; n + 1];
    Ok(2.0 / factorial(n) * walk(w, &mut used, n - 1, 0.0, 1.0))
}

/// `(n+1)ⁿ / n!`, the minimum over interior points of the simplex self-volume.
pub fn simplex_minimum(n: usize) -> f64 {
    ((n + 1) as f64).powi(n as i32) / factorial(n)
}
