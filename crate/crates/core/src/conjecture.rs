//! Exploratory search for extreme self-volumes among centrally symmetric polytopes.
//!
//! Random symmetric polytopes (hulls of `±p_i`) are improved by hill climbing:
//! one pair `±p_i` is perturbed at a time and the move is kept if the self-volume
//! moves in the requested direction. Nothing here is asserted; the report only
//! compares what was found against the cube (conjectured maximum `2ⁿ`) and
//! products of hexagons (conjectured minimum `3^k` in dimension `2k`, `2·3^k`
//! in dimension `2k + 1`).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{GeometryError, Result};
use crate::polytope::PolytopeN;
use crate::selfvolume::self_volume_recursive;

pub const MAX_SEARCH_DIM: usize = 4;

#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    pub dim: usize,
    /// Number of `±p` pairs per polytope.
    pub pairs: usize,
    pub restarts: usize,
    pub steps: usize,
    pub step_size: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            dim: 2,
            pairs: 5,
            restarts: 4,
            steps: 200,
            step_size: 0.1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub dim: usize,
    pub max_found: f64,
    pub min_found: f64,
    pub conjectured_max: f64,
    pub conjectured_min: f64,
    pub evaluations: usize,
    /// Candidates rejected because the hull or a section was degenerate.
    pub degeneracies: usize,
    pub max_vertices: Vec<Vec<f64>>,
    pub min_vertices: Vec<Vec<f64>>,
}

pub fn conjectured_extremes(dim: usize) -> (f64, f64) {
    let max = 2f64.powi(dim as i32);
    let k = (dim / 2) as i32;
    let min = if dim.is_multiple_of(2) {
        3f64.powi(k)
    } else {
        2.0 * 3f64.powi(k)
    };
    (min, max)
}

struct Search<'a> {
    cfg: &'a SearchConfig,
    rng: ChaCha8Rng,
    evaluations: usize,
    degeneracies: usize,
}

impl Search<'_> {
    fn evaluate(&mut self, pairs: &[Vec<f64>]) -> Option<f64> {
        self.evaluations += 1;
        let mut pts = Vec::with_capacity(2 * pairs.len());
        for p in pairs {
            pts.push(p.clone());
            pts.push(p.iter().map(|x| -x).collect());
        }
        let result = PolytopeN::from_vertices(pts).and_then(|poly| self_volume_recursive(&poly));
        match result {
            Ok(r) => Some(r.value),
            Err(_) => {
                self.degeneracies += 1;
                None
            }
        }
    }

    fn random_pairs(&mut self) -> Vec<Vec<f64>> {
        (0..self.cfg.pairs)
            .map(|_| {
                (0..self.cfg.dim)
                    .map(|_| self.rng.sample(StandardNormal))
                    .collect()
            })
            .collect()
    }

    /// Hill climb; `sign = 1` maximizes, `-1` minimizes.
    fn climb(&mut self, sign: f64) -> Option<(f64, Vec<Vec<f64>>)> {
        let mut pairs = self.random_pairs();
        let mut value = loop {
            if let Some(v) = self.evaluate(&pairs) {
                break v;
            }
            pairs = self.random_pairs();
        };
        for _ in 0..self.cfg.steps {
            let i = self.rng.random_range(0..pairs.len());
            let mut trial = pairs.clone();
            for x in trial[i].iter_mut() {
                let z: f64 = self.rng.sample(StandardNormal);
                *x += self.cfg.step_size * z;
            }
            if let Some(v) = self.evaluate(&trial) {
                if sign * (v - value) > 0.0 {
                    value = v;
                    pairs = trial;
                }
            }
        }
        Some((value, pairs))
    }
}

/// Deterministic for a given configuration.
pub fn conjecture_search(cfg: &SearchConfig) -> Result<SearchReport> {
    if cfg.dim == 0 || cfg.dim > MAX_SEARCH_DIM {
        return Err(GeometryError::Domain(format!(
            "search dimension must be in 1..={MAX_SEARCH_DIM}, got {}",
            cfg.dim
        )));
    }
    if cfg.pairs < cfg.dim {
        return Err(GeometryError::Domain(format!(
            "need at least {} pairs in dimension {}",
            cfg.dim, cfg.dim
        )));
    }
    let mut s = Search {
        cfg,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        evaluations: 0,
        degeneracies: 0,
    };
    let mut best_max: Option<(f64, Vec<Vec<f64>>)> = None;
    let mut best_min: Option<(f64, Vec<Vec<f64>>)> = None;
    for _ in 0..cfg.restarts.max(1) {
        if let Some(hi) = s.climb(1.0) {
            if best_max.as_ref().is_none_or(|b| hi.0 > b.0) {
                best_max = Some(hi);
            }
        }
        if let Some(lo) = s.climb(-1.0) {
            if best_min.as_ref().is_none_or(|b| lo.0 < b.0) {
                best_min = Some(lo);
            }
        }
    }
    let (max_found, max_vertices) = best_max.expect("at least one climb");
    let (min_found, min_vertices) = best_min.expect("at least one climb");
    let (conjectured_min, conjectured_max) = conjectured_extremes(cfg.dim);
    Ok(SearchReport {
        dim: cfg.dim,
        max_found,
        min_found,
        conjectured_max,
        conjectured_min,
        evaluations: s.evaluations,
        degeneracies: s.degeneracies,
        max_vertices,
        min_vertices,
    })
}
