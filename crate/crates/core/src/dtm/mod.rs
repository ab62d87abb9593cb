//! Distance to an empirical measure, threshold denoising and the
//! denoise-then-decide pipeline.
//!
//! For the uniform measure on `n` atoms, `delta_m(x)` is the distance from `x`
//! to its `(floor(m n) + 1)`-th nearest atom, and the distance to measure
//!
//! ```text
//! d_{mu,m0}(x) = ( (1/m0) * integral_0^m0 delta_m(x)^2 dm )^(1/2)
//! ```
//!
//! is a weighted mean of squared nearest-neighbour distances. With
//! `k0 = m0 n` the `floor(k0)` nearest atoms get weight `1/k0` and the next one
//! gets the leftover `(k0 - floor(k0)) / k0`, so fractional `k0` never needs rounding.

mod denoise;
mod pipeline;
mod schedule;

use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{KdTree, PointCloud};
use crate::{Error, Result};

pub use denoise::{denoise, DenoiseResult};
pub use pipeline::{denoise_and_decide, denoise_and_decide_with, PipelineDecision, PipelineOutcome};
pub use schedule::{validate_schedule, ConditionCheck, ScheduleExponents, ScheduleReport};

/// `k0` values within this distance of an integer take the closed-form path.
const INTEGER_K0_TOL: f64 = 1e-9;

/// Uniform empirical measure `(1/n) sum_p delta_p` with a neighbour index.
#[derive(Debug, Clone)]
pub struct EmpiricalMeasure {
    support: PointCloud,
    tree: KdTree,
}

impl EmpiricalMeasure {
    pub fn new(support: PointCloud) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::EmptyCloud);
        }
        let tree = KdTree::new(&support);
        Ok(EmpiricalMeasure { support, tree })
    }

    pub fn support(&self) -> &PointCloud {
        &self.support
    }

    /// Number of atoms; each carries mass `1/n`.
    pub fn n(&self) -> usize {
        self.support.len()
    }

    fn check_query(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.support.dim() {
            return Err(Error::DimensionMismatch { expected: self.support.dim(), found: x.len() });
        }
        Ok(())
    }

    fn sorted_sq_distances(&self, x: &[f64], k: usize) -> Vec<f64> {
        self.tree.knn(x, k).into_iter().map(|nb| nb.distance * nb.distance).collect()
    }
}

/// Mass parameter of the distance to measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DtmParams {
    pub m0: f64,
}

impl DtmParams {
    pub fn new(m0: f64) -> Result<Self> {
        if !(m0 > 0.0 && m0 <= 1.0) {
            return Err(Error::InvalidParameter(format!("m0 must lie in (0, 1], got {m0}")));
        }
        Ok(DtmParams { m0 })
    }

    /// `k0 = m0 * n`, not necessarily an integer.
    pub fn k0(&self, n: usize) -> f64 {
        self.m0 * n as f64
    }
}

/// `inf { r > 0 : mu(closed ball(x, r)) > m }`.
pub fn delta_m(mu: &EmpiricalMeasure, x: &[f64], m: f64) -> Result<f64> {
    mu.check_query(x)?;
    if !(0.0..1.0).contains(&m) {
        return Err(Error::InvalidParameter(format!("mass m must lie in [0, 1), got {m}")));
    }
    let k = ((m * mu.n() as f64).floor() as usize + 1).min(mu.n());
    Ok(mu.tree.knn(x, k)[k - 1].distance)
}

/// Closed form for integer `k0`: root mean square of the `k0` nearest distances.
pub fn dtm_integer_k(sorted_sq: &[f64], k0: usize) -> f64 {
    (sorted_sq[..k0].iter().sum::<f64>() / k0 as f64).sqrt()
}

/// Exact piecewise integral for any `k0 > 0`; needs `ceil(k0)` sorted squared distances.
pub fn dtm_fractional_k(sorted_sq: &[f64], k0: f64) -> f64 {
    let whole = k0.floor() as usize;
    let frac = k0 - whole as f64;
    let mut acc: f64 = sorted_sq[..whole].iter().sum();
    if frac > 0.0 {
        acc += frac * sorted_sq[whole];
    }
    (acc / k0).sqrt()
}

fn dtm_from_sorted(sorted_sq: &[f64], k0: f64) -> f64 {
    let rounded = k0.round();
    if rounded >= 1.0 && (k0 - rounded).abs() <= INTEGER_K0_TOL {
        dtm_integer_k(sorted_sq, rounded as usize)
    } else {
        dtm_fractional_k(sorted_sq, k0)
    }
}

fn neighbours_needed(k0: f64, n: usize) -> usize {
    let rounded = k0.round();
    let k = if (k0 - rounded).abs() <= INTEGER_K0_TOL { rounded } else { k0.ceil() };
    (k as usize).clamp(1, n)
}

/// Distance to measure `d_{mu,m0}(x)`.
pub fn dtm(mu: &EmpiricalMeasure, x: &[f64], params: &DtmParams) -> Result<f64> {
    mu.check_query(x)?;
    let k0 = params.k0(mu.n());
    let sq = mu.sorted_sq_distances(x, neighbours_needed(k0, mu.n()));
    Ok(dtm_from_sorted(&sq, k0))
}

/// [`dtm`] at every query point, in order.
pub fn dtm_batch(mu: &EmpiricalMeasure, queries: &PointCloud, params: &DtmParams) -> Result<Vec<f64>> {
    if queries.dim() != mu.support.dim() {
        return Err(Error::DimensionMismatch { expected: mu.support.dim(), found: queries.dim() });
    }
    let k0 = params.k0(mu.n());
    let k = neighbours_needed(k0, mu.n());
    Ok((0..queries.len())
        .into_par_iter()
        .map(|i| dtm_from_sorted(&mu.sorted_sq_distances(queries.point(i), k), k0))
        .collect())
}
