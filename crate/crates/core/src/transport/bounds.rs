use serde::Serialize;

use super::{w2_exact_small, DiscreteMeasure};
use crate::dtm::{dtm_batch, DtmParams, EmpiricalMeasure};
use crate::geometry::PointCloud;
use crate::{Error, Result};

/// `(1 - alpha) mu1 + alpha mu2`, merging atoms with identical coordinates.
pub fn mixture_measure(mu1: &DiscreteMeasure, mu2: &DiscreteMeasure, alpha: f64) -> Result<DiscreteMeasure> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    if mu1.dim() != mu2.dim() {
        return Err(Error::DimensionMismatch { expected: mu1.dim(), found: mu2.dim() });
    }
    let mut atoms = PointCloud::empty(mu1.dim());
    let mut weights: Vec<f64> = Vec::new();
    for (m, coef) in [(mu1, 1.0 - alpha), (mu2, alpha)] {
        if coef == 0.0 {
            continue;
        }
        for (p, w) in m.atoms().iter().zip(m.weights()) {
            match (0..atoms.len()).find(|&k| atoms.point(k) == p) {
                Some(k) => weights[k] += coef * w,
                None => {
                    atoms.push(p);
                    weights.push(coef * w);
                }
            }
        }
    }
    DiscreteMeasure::new(atoms, weights)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixtureBoundCheck {
    /// `W2(mu, (1 - alpha) mu1 + alpha mu2)^2`.
    pub lhs: f64,
    /// `(1 - alpha) W2(mu, mu1)^2 + alpha W2(mu, mu2)^2`.
    pub rhs: f64,
    pub margin: f64,
}

/// Convexity of `W2(mu, .)^2` along a mixture; `margin = rhs - lhs` should be `>= 0`.
pub fn check_mixture_bound(
    mu: &DiscreteMeasure,
    mu1: &DiscreteMeasure,
    mu2: &DiscreteMeasure,
    alpha: f64,
) -> Result<MixtureBoundCheck> {
    let mixed = mixture_measure(mu1, mu2, alpha)?;
    let (lhs_w, _) = w2_exact_small(mu, &mixed)?;
    let (w1, _) = w2_exact_small(mu, mu1)?;
    let (w2, _) = w2_exact_small(mu, mu2)?;
    let lhs = lhs_w * lhs_w;
    let rhs = (1.0 - alpha) * w1 * w1 + alpha * w2 * w2;
    Ok(MixtureBoundCheck { lhs, rhs, margin: rhs - lhs })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityCheck {
    /// `m0^(-1/2) W2(mu, nu)`.
    pub bound: f64,
    /// Max over the query grid of `|d_{mu,m0} - d_{nu,m0}|`; a lower bound of the sup norm.
    pub observed: f64,
    pub margin: f64,
}

/// Stability of the distance to measure under W2 perturbations, checked on a grid.
pub fn check_dtm_stability(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    m0: f64,
    query_grid: &PointCloud,
) -> Result<StabilityCheck> {
    if !mu.is_uniform() || !nu.is_uniform() {
        return Err(Error::InvalidParameter("stability check needs uniform-weight measures".into()));
    }
    let params = DtmParams::new(m0)?;
    let (w, _) = w2_exact_small(mu, nu)?;
    let emp_mu = EmpiricalMeasure::new(mu.atoms().clone())?;
    let emp_nu = EmpiricalMeasure::new(nu.atoms().clone())?;
    let a = dtm_batch(&emp_mu, query_grid, &params)?;
    let b = dtm_batch(&emp_nu, query_grid, &params)?;
    let observed = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let bound = w / m0.sqrt();
    Ok(StabilityCheck { bound, observed, margin: bound - observed })
}
