//! Exact Wasserstein-2 distances between small discrete measures, transport
//! plans and their mixtures, and numerical checks of the transport bounds used
//! by the denoising step.

mod bounds;
mod simplex;

use serde::Serialize;

use crate::geometry::{sq_dist, PointCloud};
use crate::{Error, Result};

pub use bounds::{check_dtm_stability, check_mixture_bound, mixture_measure, MixtureBoundCheck, StabilityCheck};

/// Largest `|mu| * |nu|` accepted by [`w2_exact_small`].
pub const EXACT_PAIR_CAP: usize = 4096;
const WEIGHT_SUM_TOL: f64 = 1e-12;
/// Tolerance for plan marginals.
pub const MARGINAL_TOL: f64 = 1e-9;

/// Finitely supported probability measure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteMeasure {
    #[serde(skip)]
    atoms: PointCloud,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(atoms: PointCloud, weights: Vec<f64>) -> Result<Self> {
        if atoms.len() != weights.len() {
            return Err(Error::InvalidParameter(format!(
                "{} atoms but {} weights",
                atoms.len(),
                weights.len()
            )));
        }
        if atoms.is_empty() {
            return Err(Error::EmptyCloud);
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidParameter("weights must be finite and nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidParameter(format!("weights sum to {total}, not 1")));
        }
        Ok(DiscreteMeasure { atoms, weights })
    }

    /// Mass `1/n` on each point.
    pub fn uniform(atoms: PointCloud) -> Result<Self> {
        let n = atoms.len();
        Self::new(atoms, vec![1.0 / n as f64; n])
    }

    /// Unit mass at a single point.
    pub fn dirac(point: &[f64]) -> Self {
        let atoms = PointCloud::from_points(point.len(), [point]).expect("finite point");
        DiscreteMeasure { atoms, weights: vec![1.0] }
    }

    pub fn atoms(&self) -> &PointCloud {
        &self.atoms
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

    pub fn dim(&self) -> usize {
        self.atoms.dim()
    }

    /// True when all weights agree with `1/n` to within `1e-12`.
    pub fn is_uniform(&self) -> bool {
        let w = 1.0 / self.len() as f64;
        self.weights.iter().all(|x| (x - w).abs() <= WEIGHT_SUM_TOL)
    }
}

/// A coupling of `source` and `target`, stored sparsely.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    pub entries: Vec<(usize, usize, f64)>,
    pub source: DiscreteMeasure,
    pub target: DiscreteMeasure,
}

impl TransportPlan {
    /// `(sum mass * |x - y|^2)^(1/2)`.
    pub fn cost(&self) -> f64 {
        self.squared_cost().sqrt()
    }

    pub fn squared_cost(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(i, j, m)| m * sq_dist(self.source.atoms.point(i), self.target.atoms.point(j)))
            .sum::<f64>()
            .max(0.0)
    }

    /// Largest absolute deviation of the row and column sums from the marginals.
    pub fn marginal_error(&self) -> f64 {
        let mut rows = vec![0.0; self.source.len()];
        let mut cols = vec![0.0; self.target.len()];
        for &(i, j, m) in &self.entries {
            rows[i] += m;
            cols[j] += m;
        }
        let dev = |sums: &[f64], w: &[f64]| sums.iter().zip(w).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        dev(&rows, &self.source.weights).max(dev(&cols, &self.target.weights))
    }

    pub fn satisfies_marginals(&self) -> bool {
        self.entries.iter().all(|e| e.2 >= 0.0) && self.marginal_error() <= MARGINAL_TOL
    }
}

/// Exact W2 on the line by monotone rearrangement of the quantile functions.
pub fn w2_1d(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<f64> {
    for m in [mu, nu] {
        if m.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: m.dim() });
        }
    }
    let sorted = |m: &DiscreteMeasure| {
        let mut v: Vec<(f64, f64)> = m.atoms.iter().map(|p| p[0]).zip(m.weights.iter().copied()).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v
    };
    let (a, b) = (sorted(mu), sorted(nu));
    let (mut i, mut j) = (0, 0);
    let (mut left_a, mut left_b) = (a[0].1, b[0].1);
    let mut total = 0.0;
    loop {
        let mass = left_a.min(left_b);
        total += mass * (a[i].0 - b[j].0).powi(2);
        left_a -= mass;
        left_b -= mass;
        if left_a <= left_b {
            i += 1;
            if i == a.len() {
                break;
            }
            left_a = a[i].1;
        } else {
            j += 1;
            if j == b.len() {
                break;
            }
            left_b = b[j].1;
        }
    }
    Ok(total.max(0.0).sqrt())
}

/// Exact W2 and an optimal plan via the transportation simplex.
pub fn w2_exact_small(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<(f64, TransportPlan)> {
    if mu.dim() != nu.dim() {
        return Err(Error::DimensionMismatch { expected: mu.dim(), found: nu.dim() });
    }
    let pairs = mu.len() * nu.len();
    if pairs > EXACT_PAIR_CAP {
        return Err(Error::SizeCapExceeded { pairs, cap: EXACT_PAIR_CAP });
    }
    let mut cost = Vec::with_capacity(pairs);
    for p in mu.atoms.iter() {
        for q in nu.atoms.iter() {
            cost.push(sq_dist(p, q));
        }
    }
    // Rescale the demand so both sides carry exactly the same total mass.
    let supply = mu.weights.clone();
    let ratio = supply.iter().sum::<f64>() / nu.weights.iter().sum::<f64>();
    let demand: Vec<f64> = nu.weights.iter().map(|w| w * ratio).collect();
    let (entries, _) = simplex::solve(&supply, &demand, &cost);
    let plan = TransportPlan { entries, source: mu.clone(), target: nu.clone() };
    Ok((plan.cost(), plan))
}

/// `(1 - alpha) p1 + alpha p2`, with the two targets merged on exact coordinate equality.
pub fn mix_plans(p1: &TransportPlan, p2: &TransportPlan, alpha: f64) -> Result<TransportPlan> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    if p1.source != p2.source {
        return Err(Error::MismatchedSources);
    }
    if p1.target.dim() != p2.target.dim() {
        return Err(Error::DimensionMismatch { expected: p1.target.dim(), found: p2.target.dim() });
    }
    let parts = [(p1, 1.0 - alpha), (p2, alpha)];
    let dim = p1.target.dim();
    let mut atoms = PointCloud::empty(dim);
    let mut weights: Vec<f64> = Vec::new();
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    let mut p1_atoms = 0;
    for (pi, &(plan, coef)) in parts.iter().enumerate() {
        if coef == 0.0 {
            continue;
        }
        let mut map = Vec::with_capacity(plan.target.len());
        for (j, q) in plan.target.atoms.iter().enumerate() {
            // Atoms of the second plan may coincide with atoms of the first.
            let existing = if pi == 1 { (0..p1_atoms).find(|&k| atoms.point(k) == q) } else { None };
            let idx = match existing {
                Some(k) => k,
                None => {
                    atoms.push(q);
                    weights.push(0.0);
                    weights.len() - 1
                }
            };
            weights[idx] += coef * plan.target.weights[j];
            map.push(idx);
        }
        if pi == 0 {
            p1_atoms = atoms.len();
        }
        for &(i, j, m) in &plan.entries {
            let jj = map[j];
            match entries.iter_mut().find(|e| e.0 == i && e.1 == jj) {
                Some(e) => e.2 += coef * m,
                None => entries.push((i, jj, coef * m)),
            }
        }
    }
    let target = DiscreteMeasure { atoms, weights };
    Ok(TransportPlan { entries, source: p1.source.clone(), target })
}

#[cfg(test)]
mod tests;
