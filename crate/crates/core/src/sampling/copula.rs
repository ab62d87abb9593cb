//! Almost-independent samples from the product-perturbation copula
//! `C(u) = prod u_i + prod f(u_i)` with `f(u) = eps * u * (1 - u)`.
//!
//! Its density is `1 + prod eps * (1 - 2 u_i)`, so the relative deviation from
//! independence is bounded by `alpha_n = eps^n`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Seed;
use crate::{Error, Result};

/// Largest `n` accepted by the grid check.
pub const MAX_GRID_VARIABLES: usize = 6;
const MAX_GRID_POINTS: u64 = 50_000_000;

/// Common one-dimensional marginal, given by its inverse CDF.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Marginal {
    Uniform { lo: f64, hi: f64 },
    Exponential { rate: f64 },
}

impl Marginal {
    pub fn inverse_cdf(&self, u: f64) -> f64 {
        match *self {
            Marginal::Uniform { lo, hi } => lo + u * (hi - lo),
            Marginal::Exponential { rate } => -(1.0 - u).ln() / rate,
        }
    }
}

impl Default for Marginal {
    fn default() -> Self {
        Marginal::Uniform { lo: 0.0, hi: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FgmCopulaSpec {
    pub n: usize,
    pub eps: f64,
    pub marginal: Marginal,
}

impl FgmCopulaSpec {
    pub fn new(n: usize, eps: f64, marginal: Marginal) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("sample size must be positive".into()));
        }
        if !(0.0..1.0).contains(&eps) {
            return Err(Error::InvalidParameter(format!("eps must lie in [0, 1), got {eps}")));
        }
        Ok(FgmCopulaSpec { n, eps, marginal })
    }

    /// `f(u) = eps * u * (1 - u)`; vanishes at 0 and 1.
    pub fn perturbation(&self, u: f64) -> f64 {
        self.eps * u * (1.0 - u)
    }

    pub fn perturbation_derivative(&self, u: f64) -> f64 {
        self.eps * (1.0 - 2.0 * u)
    }

    /// The copula itself.
    pub fn cdf(&self, u: &[f64]) -> f64 {
        u.iter().product::<f64>() + u.iter().map(|&v| self.perturbation(v)).product::<f64>()
    }

    /// Joint density of the uniforms: `1 + prod f'(u_i)`.
    pub fn density(&self, u: &[f64]) -> f64 {
        1.0 + u.iter().map(|&v| self.perturbation_derivative(v)).product::<f64>()
    }

    /// Dependence level `alpha_n = eps^n`.
    pub fn alpha_n(&self) -> f64 {
        self.eps.powi(self.n as i32)
    }

    /// Upper bound of the density, used as the rejection envelope.
    pub fn density_bound(&self) -> f64 {
        1.0 + self.alpha_n()
    }

    /// One rejection proposal; on acceptance `u` holds a copula draw.
    pub fn propose<R: Rng + ?Sized>(&self, rng: &mut R, u: &mut [f64]) -> bool {
        for v in u.iter_mut() {
            *v = rng.random::<f64>();
        }
        rng.random::<f64>() * self.density_bound() < self.density(u)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AiSample {
    /// Marginal-scale values `F^{-1}(U_i)`.
    pub values: Vec<f64>,
    pub uniforms: Vec<f64>,
    pub proposals: u64,
}

/// Draws one dependent vector `(X_1, ..., X_n)` by rejection from the copula density.
pub fn sample_ai_fgm(spec: &FgmCopulaSpec, seed: Seed) -> AiSample {
    let mut rng = seed.rng();
    let mut u = vec![0.0; spec.n];
    let mut proposals = 0;
    loop {
        proposals += 1;
        if spec.propose(&mut rng, &mut u) {
            break;
        }
    }
    let values = u.iter().map(|&v| spec.marginal.inverse_cdf(v)).collect();
    AiSample { values, uniforms: u, proposals }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AiBoundReport {
    /// Max over the grid of `|f_joint / prod f_marginal - 1|`.
    pub alpha_hat: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Evaluates the density-ratio deviation on a tensor grid with `grid_per_axis`
/// points per axis (endpoints included) and compares it with `eps^n`.
pub fn ai_bound_check(spec: &FgmCopulaSpec, grid_per_axis: usize) -> Result<AiBoundReport> {
    if spec.n > MAX_GRID_VARIABLES {
        return Err(Error::InvalidParameter(format!(
            "grid check supports n <= {MAX_GRID_VARIABLES}, got {}",
            spec.n
        )));
    }
    if grid_per_axis < 2 {
        return Err(Error::InvalidParameter("grid needs at least 2 points per axis".into()));
    }
    let total = (grid_per_axis as u64).checked_pow(spec.n as u32).unwrap_or(u64::MAX);
    if total > MAX_GRID_POINTS {
        return Err(Error::InvalidParameter(format!("grid of {total} points is too large")));
    }
    let axis: Vec<f64> = (0..grid_per_axis).map(|k| k as f64 / (grid_per_axis - 1) as f64).collect();
    let mut idx = vec![0usize; spec.n];
    let mut u = vec![0.0; spec.n];
    let mut alpha_hat = 0.0f64;
    'grid: loop {
        for (v, &k) in u.iter_mut().zip(&idx) {
            *v = axis[k];
        }
        // Marginals of the copula are uniform, so the product of marginal densities is 1.
        alpha_hat = alpha_hat.max((spec.density(&u) - 1.0).abs());
        for k in idx.iter_mut() {
            *k += 1;
            if *k < grid_per_axis {
                continue 'grid;
            }
            *k = 0;
        }
        break;
    }
    let bound = spec.alpha_n();
    Ok(AiBoundReport { alpha_hat, bound, pass: alpha_hat <= bound + 1e-9 })
}
