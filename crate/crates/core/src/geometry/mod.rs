//! Point-cloud primitives: exact neighbour queries, the max-min nearest-neighbour
//! statistic, Hausdorff distances and the reference annulus.

mod kdtree;

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use kdtree::{KdTree, Neighbor, MAX_TREE_DIM};

/// Squared Euclidean distance, summed in coordinate order.
#[inline]
pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    sq_dist(a, b).sqrt()
}

/// A finite, ordered set of points in R^d. Duplicates are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    /// Builds a cloud from flat row-major coordinates.
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidPoint(format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            )));
        }
        if let Some(pos) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidPoint(format!(
                "point {} has a non-finite coordinate",
                pos / dim
            )));
        }
        Ok(PointCloud { dim, coords })
    }

    pub fn from_points<P: AsRef<[f64]>>(dim: usize, points: impl IntoIterator<Item = P>) -> Result<Self> {
        let mut coords = Vec::new();
        for (i, p) in points.into_iter().enumerate() {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(Error::InvalidPoint(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            coords.extend_from_slice(p);
        }
        Self::new(dim, coords)
    }

    pub fn empty(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        PointCloud { dim, coords: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// Appends a point; panics on a dimension mismatch or non-finite coordinate.
    pub fn push(&mut self, p: &[f64]) {
        assert_eq!(p.len(), self.dim, "point dimension mismatch");
        assert!(p.iter().all(|c| c.is_finite()), "non-finite coordinate");
        self.coords.extend_from_slice(p);
    }

    /// Sub-cloud made of the given indices, in the given order.
    pub fn select(&self, indices: &[usize]) -> PointCloud {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        PointCloud { dim: self.dim, coords }
    }

    /// Applies `f` to every point.
    pub fn map_points(&self, mut f: impl FnMut(&[f64]) -> Vec<f64>) -> Result<PointCloud> {
        let mut coords = Vec::with_capacity(self.coords.len());
        for p in self.iter() {
            let q = f(p);
            if q.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, found: q.len() });
            }
            coords.extend(q);
        }
        PointCloud::new(self.dim, coords)
    }

    pub fn diameter(&self) -> f64 {
        let n = self.len();
        let mut best = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                best = best.max(dist(self.point(i), self.point(j)));
            }
        }
        best
    }
}

/// Volume of the unit ball of R^d.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitBallVolume {
    pub d: usize,
    pub value: f64,
}

impl UnitBallVolume {
    /// Uses the recursion omega_d = omega_{d-2} * 2 pi / d, seeded with omega_0 = 1 and omega_1 = 2.
    pub fn new(d: usize) -> Self {
        assert!(d > 0, "dimension must be positive");
        let mut value = if d.is_multiple_of(2) { 1.0 } else { 2.0 };
        let mut k = if d.is_multiple_of(2) { 2 } else { 3 };
        while k <= d {
            value *= 2.0 * PI / k as f64;
            k += 2;
        }
        UnitBallVolume { d, value }
    }
}

pub fn unit_ball_volume(d: usize) -> f64 {
    UnitBallVolume::new(d).value
}

/// Planar annulus `r_inner <= |p - center| <= r_outer`; a circle when the radii agree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingSpec {
    pub center: [f64; 2],
    pub r_inner: f64,
    pub r_outer: f64,
}

impl RingSpec {
    pub fn new(center: [f64; 2], r_inner: f64, r_outer: f64) -> Result<Self> {
        if !(r_inner >= 0.0 && r_outer > 0.0 && r_inner <= r_outer) || !r_outer.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "ring radii must satisfy 0 <= r_inner <= r_outer, got {r_inner}, {r_outer}"
            )));
        }
        if !center.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidParameter("ring center must be finite".into()));
        }
        Ok(RingSpec { center, r_inner, r_outer })
    }

    /// The origin-centred ring of width `epsilon` around the unit circle.
    pub fn centered(epsilon: f64) -> Self {
        Self::new([0.0, 0.0], 1.0 - epsilon / 2.0, 1.0 + epsilon / 2.0)
            .expect("epsilon must lie in [0, 2)")
    }

    pub fn epsilon(&self) -> f64 {
        self.r_outer - self.r_inner
    }

    pub fn area(&self) -> f64 {
        PI * (self.r_outer * self.r_outer - self.r_inner * self.r_inner)
    }
}

/// `max_i min_{j != i} |X_j - X_i|`.
pub fn maxmin_nn(cloud: &PointCloud) -> Result<f64> {
    if cloud.len() < 2 {
        return Err(Error::DegenerateSample(cloud.len()));
    }
    let tree = KdTree::new(cloud);
    Ok(maxmin_nn_with(cloud, &tree))
}

pub(crate) fn maxmin_nn_with(cloud: &PointCloud, tree: &KdTree) -> f64 {
    (0..cloud.len())
        .into_par_iter()
        .map(|i| {
            tree.nearest_excluding(cloud.point(i), Some(i))
                .expect("cloud has at least two points")
                .distance
        })
        .reduce(|| 0.0, f64::max)
}

/// The `k` nearest cloud points to `query`, by (distance, index).
pub fn knn(cloud: &PointCloud, query: &[f64], k: usize) -> Result<Vec<Neighbor>> {
    if query.len() != cloud.dim() {
        return Err(Error::DimensionMismatch { expected: cloud.dim(), found: query.len() });
    }
    if k == 0 || k > cloud.len() {
        return Err(Error::KOutOfRange { k, n: cloud.len() });
    }
    Ok(KdTree::new(cloud).knn(query, k))
}

fn directed_hausdorff(from: &PointCloud, to: &KdTree) -> f64 {
    (0..from.len())
        .into_par_iter()
        .map(|i| to.nearest_excluding(from.point(i), None).expect("nonempty").distance)
        .reduce(|| 0.0, f64::max)
}

/// Hausdorff distance between two finite point sets.
pub fn hausdorff_finite(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyCloud);
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let (ta, tb) = (KdTree::new(a), KdTree::new(b));
    Ok(directed_hausdorff(a, &tb).max(directed_hausdorff(b, &ta)))
}

/// Euclidean distance from `p` to the annulus.
pub fn dist_to_ring(p: &[f64], ring: &RingSpec) -> f64 {
    debug_assert_eq!(p.len(), 2);
    let rho = dist(p, &ring.center);
    if rho < ring.r_inner {
        ring.r_inner - rho
    } else if rho > ring.r_outer {
        rho - ring.r_outer
    } else {
        0.0
    }
}

/// Grid approximation of the Hausdorff distance between a cloud and an annulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HausdorffEstimate {
    pub value: f64,
    /// Adjacent grid points are at most this far apart, which bounds the
    /// discretisation error of the annulus-to-cloud term.
    pub grid_step: f64,
    pub grid_points: usize,
}

/// Polar product grid covering the annulus with spacing at most `grid_step`.
pub fn ring_grid(ring: &RingSpec, grid_step: f64) -> PointCloud {
    assert!(grid_step > 0.0, "grid step must be positive");
    let width = ring.epsilon();
    let radial = if width > 0.0 { (width / grid_step).ceil() as usize + 1 } else { 1 };
    let mut coords = Vec::new();
    for a in 0..radial {
        let r = if radial == 1 {
            ring.r_outer
        } else {
            ring.r_inner + width * a as f64 / (radial - 1) as f64
        };
        // The circumference at radius r, sampled so neighbouring arcs are <= grid_step.
        let angular = ((2.0 * PI * r / grid_step).ceil() as usize).max(1);
        for t in 0..angular {
            let theta = 2.0 * PI * t as f64 / angular as f64;
            coords.push(ring.center[0] + r * theta.cos());
            coords.push(ring.center[1] + r * theta.sin());
        }
    }
    PointCloud { dim: 2, coords }
}

pub fn hausdorff_cloud_to_ring(
    cloud: &PointCloud,
    ring: &RingSpec,
    grid_step: f64,
) -> Result<HausdorffEstimate> {
    if cloud.dim() != 2 {
        return Err(Error::RingIs2dOnly(cloud.dim()));
    }
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    if !(grid_step > 0.0) {
        return Err(Error::InvalidParameter("grid step must be positive".into()));
    }
    let grid = ring_grid(ring, grid_step);
    let tree = KdTree::new(cloud);
    let ring_to_cloud = directed_hausdorff(&grid, &tree);
    let cloud_to_ring = cloud.iter().map(|p| dist_to_ring(p, ring)).fold(0.0, f64::max);
    Ok(HausdorffEstimate {
        value: ring_to_cloud.max(cloud_to_ring),
        grid_step,
        grid_points: grid.len(),
    })
}
