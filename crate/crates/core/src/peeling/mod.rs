//! Boundary balls of a union of equal balls, its peeling, the interior decision
//! and the noise-radius estimator.
//!
//! A ball `B(X_i, r)` is a boundary ball when some point of its sphere lies
//! outside every *open* ball `B(X_j, r)`, `j != i`. The peeling is the union of
//! the remaining balls; an empty peeling is read as "empty interior".

mod arcs;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{maxmin_nn, sq_dist, unit_ball_volume, KdTree, Neighbor, PointCloud};
use crate::sampling::mix64;
use crate::{Error, Result};

pub use arcs::{ArcSet, ARC_MERGE_TOL};

/// Union of closed balls of a common radius centred at the sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct BallUnion {
    centers: PointCloud,
    radius: f64,
}

impl BallUnion {
    pub fn new(centers: PointCloud, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!("ball radius must be positive, got {radius}")));
        }
        if centers.is_empty() {
            return Err(Error::EmptyCloud);
        }
        Ok(BallUnion { centers, radius })
    }

    pub fn centers(&self) -> &PointCloud {
        &self.centers
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    /// Only a peeling can be empty.
    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// For each ball, the other centres at distance in `(0, 2r)`.
    fn overlapping(&self, tree: &KdTree, i: usize) -> Vec<Neighbor> {
        let two_r = 2.0 * self.radius;
        tree.within_sq_unordered(self.centers.point(i), two_r * two_r)
            .into_iter()
            .filter(|nb| nb.index != i && nb.distance > 0.0 && nb.distance < two_r)
            .collect()
    }
}

/// How boundary balls are found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BoundaryMethod {
    /// Exact arc coverage, planar clouds only.
    Exact2d,
    /// Uniform sphere sampling; a `true` flag is certain, a `false` flag may miss small gaps.
    MonteCarlo { samples: usize, seed: u64 },
}

impl BoundaryMethod {
    pub fn name(&self) -> &'static str {
        match self {
            BoundaryMethod::Exact2d => "exact2d",
            BoundaryMethod::MonteCarlo { .. } => "mc",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryClassification {
    /// `flags[i]` is true iff ball `i` is a boundary ball.
    pub flags: Vec<bool>,
    pub method: BoundaryMethod,
}

impl BoundaryClassification {
    pub fn boundary_indices(&self) -> Vec<usize> {
        self.flags.iter().enumerate().filter(|(_, &f)| f).map(|(i, _)| i).collect()
    }

    pub fn interior_indices(&self) -> Vec<usize> {
        self.flags.iter().enumerate().filter(|(_, &f)| !f).map(|(i, _)| i).collect()
    }
}

/// Half-width of the open arc of `dB(X_i, r)` covered by a ball whose centre is at distance `d`.
#[inline]
pub fn covered_half_width(d: f64, r: f64) -> f64 {
    (d / (2.0 * r)).acos()
}

/// Arcs of the circle `dB(X_i, r)` covered by the other open balls.
pub fn covered_arcs(u: &BallUnion, i: usize) -> ArcSet {
    let tree = KdTree::new(&u.centers);
    covered_arcs_with(u, &tree, i)
}

fn covered_arcs_with(u: &BallUnion, tree: &KdTree, i: usize) -> ArcSet {
    arcs_from(u, i, &u.overlapping(tree, i))
}

fn arcs_from(u: &BallUnion, i: usize, neighbors: &[Neighbor]) -> ArcSet {
    let c = u.centers.point(i);
    ArcSet::from_arcs(neighbors.iter().map(|nb| {
        let q = u.centers.point(nb.index);
        let dir = (q[1] - c[1]).atan2(q[0] - c[0]);
        (dir, covered_half_width(nb.distance, u.radius))
    }))
}

/// Squared-radius slack for [`clearly_uncovered`]. A point that clears every
/// neighbour by this relative margin sits inside an arc gap far wider than
/// [`ARC_MERGE_TOL`], so the shortcut never disagrees with the arc merge.
const SHORTCUT_MARGIN: f64 = 1e-9;

/// Tries a few sphere points (away from the neighbours' mean direction, then
/// the four axis directions) and reports whether one is outside every neighbour.
fn clearly_uncovered(u: &BallUnion, i: usize, neighbors: &[Neighbor]) -> bool {
    let c = u.centers.point(i);
    let r = u.radius;
    let limit = r * r * (1.0 + SHORTCUT_MARGIN);
    let (mut mx, mut my) = (0.0, 0.0);
    for nb in neighbors {
        let q = u.centers.point(nb.index);
        mx += (q[0] - c[0]) / nb.distance;
        my += (q[1] - c[1]) / nb.distance;
    }
    let norm = (mx * mx + my * my).sqrt();
    let away = if norm > 0.0 { Some([-mx / norm, -my / norm]) } else { None };
    let axes = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]];
    away.into_iter().chain(axes).any(|[dx, dy]| {
        let y = [c[0] + r * dx, c[1] + r * dy];
        neighbors.iter().all(|nb| sq_dist(&y, u.centers.point(nb.index)) >= limit)
    })
}

/// Exact boundary-ball classification in the plane.
pub fn boundary_balls_2d(u: &BallUnion) -> Result<BoundaryClassification> {
    if u.centers.dim() != 2 {
        return Err(Error::ExactRequires2d(u.centers.dim()));
    }
    let tree = KdTree::new(&u.centers);
    let flags = (0..u.len())
        .into_par_iter()
        .map(|i| {
            let neighbors = u.overlapping(&tree, i);
            clearly_uncovered(u, i, &neighbors) || !arcs_from(u, i, &neighbors).covers_full_circle()
        })
        .collect();
    Ok(BoundaryClassification { flags, method: BoundaryMethod::Exact2d })
}

/// Monte-Carlo boundary-ball classification in any dimension.
///
/// Ball `i` draws its sphere samples from its own stream derived from `(seed, i)`,
/// so the result does not depend on scheduling.
pub fn boundary_balls_mc(u: &BallUnion, sphere_samples: usize, seed: u64) -> Result<BoundaryClassification> {
    if sphere_samples == 0 {
        return Err(Error::InvalidParameter("sphere_samples must be at least 1".into()));
    }
    let tree = KdTree::new(&u.centers);
    let dim = u.centers.dim();
    let r = u.radius;
    let r_sq = r * r;
    let flags = (0..u.len())
        .into_par_iter()
        .map(|i| {
            let neighbors = u.overlapping(&tree, i);
            if neighbors.is_empty() {
                return true;
            }
            let c = u.centers.point(i);
            let mut rng = ChaCha8Rng::seed_from_u64(mix64(seed, i as u64));
            let mut y = vec![0.0; dim];
            for _ in 0..sphere_samples {
                random_direction(&mut rng, &mut y);
                for (yk, ck) in y.iter_mut().zip(c) {
                    *yk = ck + r * *yk;
                }
                let covered = neighbors.iter().any(|nb| sq_dist(&y, u.centers.point(nb.index)) < r_sq);
                if !covered {
                    return true;
                }
            }
            false
        })
        .collect();
    Ok(BoundaryClassification { flags, method: BoundaryMethod::MonteCarlo { samples: sphere_samples, seed } })
}

fn random_direction(rng: &mut ChaCha8Rng, out: &mut [f64]) {
    loop {
        for v in out.iter_mut() {
            *v = StandardNormal.sample(rng);
        }
        let norm = out.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-12 {
            out.iter_mut().for_each(|v| *v /= norm);
            return;
        }
    }
}

pub fn classify(u: &BallUnion, method: &BoundaryMethod) -> Result<BoundaryClassification> {
    match *method {
        BoundaryMethod::Exact2d => boundary_balls_2d(u),
        BoundaryMethod::MonteCarlo { samples, seed } => boundary_balls_mc(u, samples, seed),
    }
}

/// The sub-union of non-boundary balls. May be empty.
pub fn peel(u: &BallUnion, cls: &BoundaryClassification) -> Result<BallUnion> {
    if cls.flags.len() != u.len() {
        return Err(Error::ClassificationMismatch { expected: u.len(), found: cls.flags.len() });
    }
    Ok(BallUnion { centers: u.centers.select(&cls.interior_indices()), radius: u.radius })
}

/// Smallest admissible `beta` (exclusive) in dimension `d`: `6^(1/d)`.
pub fn beta_threshold(d: usize) -> f64 {
    6f64.powf(1.0 / d as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InteriorDecision {
    pub nonempty_interior: bool,
    /// `r_n = beta * max_i min_{j != i} |X_j - X_i|`.
    pub radius_used: f64,
    pub beta: f64,
    pub peel_size: usize,
    pub n: usize,
}

/// Decides whether the sampled set has nonempty interior by peeling the union
/// of balls of radius `beta * maxmin_nn(cloud)`.
pub fn decide_interior(cloud: &PointCloud, beta: f64, method: &BoundaryMethod) -> Result<InteriorDecision> {
    if cloud.len() < 2 {
        return Err(Error::DegenerateSample(cloud.len()));
    }
    let threshold = beta_threshold(cloud.dim());
    if !(beta > threshold) {
        return Err(Error::BetaBelowThreshold { beta, threshold });
    }
    let radius = beta * maxmin_nn(cloud)?;
    if radius == 0.0 {
        // Every point is duplicated: all balls coincide, none covers another's sphere.
        return Ok(InteriorDecision { nonempty_interior: false, radius_used: 0.0, beta, peel_size: 0, n: cloud.len() });
    }
    let u = BallUnion::new(cloud.clone(), radius)?;
    let cls = classify(&u, method)?;
    let peeled = peel(&u, &cls)?;
    Ok(InteriorDecision {
        nonempty_interior: !peeled.is_empty(),
        radius_used: radius,
        beta,
        peel_size: peeled.len(),
        n: cloud.len(),
    })
}

/// Radius rule for noisy supports: `rho_n = c (log n / n)^(1/d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseRadiusParams {
    pub c: f64,
    pub f0: f64,
    pub n: usize,
    pub d: usize,
    pub rho_n: f64,
}

impl NoiseRadiusParams {
    pub fn new(c: f64, f0: f64, n: usize, d: usize) -> Result<Self> {
        if !(f0 > 0.0) || d == 0 || n < 2 {
            return Err(Error::InvalidParameter(format!("need f0 > 0, d >= 1, n >= 2 (got f0={f0}, d={d}, n={n})")));
        }
        let min_c = Self::min_c(f0, d);
        if !(c > min_c) {
            return Err(Error::InvalidParameter(format!("c = {c} must exceed (6/(f0*omega_d))^(1/d) = {min_c}")));
        }
        let nf = n as f64;
        let rho_n = c * (nf.ln() / nf).powf(1.0 / d as f64);
        Ok(NoiseRadiusParams { c, f0, n, d, rho_n })
    }

    pub fn min_c(f0: f64, d: usize) -> f64 {
        (6.0 / (f0 * unit_ball_volume(d))).powf(1.0 / d as f64)
    }
}

/// Which indices enter the inner minimum of the radius estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum IndexConvention {
    /// `min_{j in I_bb}` with `j = i` allowed.
    #[default]
    Literal,
    /// `min_{j in I_bb, j != i}`; points whose only candidate is themselves are skipped.
    ExcludeSelf,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseRadiusEstimate {
    pub r_hat: f64,
    pub boundary_indices: Vec<usize>,
    pub rho_n: f64,
}

/// `R_hat = max_i min_{j in I_bb} |X_i - X_j|` with `I_bb` the boundary balls at radius `rho_n`.
pub fn estimate_noise_radius(
    cloud: &PointCloud,
    params: &NoiseRadiusParams,
    method: &BoundaryMethod,
    convention: IndexConvention,
) -> Result<NoiseRadiusEstimate> {
    if cloud.len() < 2 {
        return Err(Error::DegenerateSample(cloud.len()));
    }
    if params.d != cloud.dim() || params.n != cloud.len() {
        return Err(Error::InvalidParameter(format!(
            "params built for n={}, d={} but the cloud has n={}, d={}",
            params.n, params.d, cloud.len(), cloud.dim()
        )));
    }
    let u = BallUnion::new(cloud.clone(), params.rho_n)?;
    let boundary = classify(&u, method)?.boundary_indices();
    if boundary.is_empty() {
        return Err(Error::NoBoundaryBalls);
    }
    let sub = cloud.select(&boundary);
    let tree = KdTree::new(&sub);
    let r_hat = (0..cloud.len())
        .into_par_iter()
        .filter_map(|i| {
            let exclude = match convention {
                IndexConvention::Literal => None,
                IndexConvention::ExcludeSelf => boundary.binary_search(&i).ok(),
            };
            tree.nearest_excluding(cloud.point(i), exclude).map(|nb| nb.distance)
        })
        .reduce(|| 0.0, f64::max);
    Ok(NoiseRadiusEstimate { r_hat, boundary_indices: boundary, rho_n: params.rho_n })
}

#[cfg(test)]
mod tests;
