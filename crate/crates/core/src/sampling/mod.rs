//! Seeded samplers: the reference annulus, the noisy mixture and the
//! almost-independent product-perturbation copula.

mod copula;
mod seed;

use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{PointCloud, RingSpec};
use crate::{Error, Result};

pub use copula::{ai_bound_check, sample_ai_fgm, AiBoundReport, AiSample, FgmCopulaSpec, Marginal};
pub use seed::{mix64, splitmix64, Purpose, Seed};

/// One uniform draw from the annulus (inverse CDF on the radius).
pub fn ring_point<R: Rng + ?Sized>(rng: &mut R, ring: &RingSpec) -> [f64; 2] {
    let theta = TAU * rng.random::<f64>();
    let r = if ring.r_inner == ring.r_outer {
        ring.r_outer
    } else {
        let (a, b) = (ring.r_inner * ring.r_inner, ring.r_outer * ring.r_outer);
        (a + rng.random::<f64>() * (b - a)).sqrt().clamp(ring.r_inner, ring.r_outer)
    };
    [ring.center[0] + r * theta.cos(), ring.center[1] + r * theta.sin()]
}

/// `n` i.i.d. uniform points on the annulus.
pub fn sample_ring(n: usize, ring: &RingSpec, seed: Seed) -> PointCloud {
    let mut rng = seed.rng();
    let mut coords = Vec::with_capacity(2 * n);
    for _ in 0..n {
        coords.extend(ring_point(&mut rng, ring));
    }
    PointCloud::new(2, coords).expect("ring samples are finite")
}

/// Axis-aligned box `[lo, hi]` in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseBox {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
}

impl NoiseBox {
    pub fn square(half_side: f64) -> Self {
        NoiseBox { lo: [-half_side; 2], hi: [half_side; 2] }
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        (0..2).all(|k| self.lo[k] <= p[k] && p[k] <= self.hi[k])
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 2] {
        [
            self.lo[0] + rng.random::<f64>() * (self.hi[0] - self.lo[0]),
            self.lo[1] + rng.random::<f64>() * (self.hi[1] - self.lo[1]),
        ]
    }
}

impl Default for NoiseBox {
    fn default() -> Self {
        NoiseBox::square(2.0)
    }
}

/// `(1 - alpha_n) * uniform(ring) + alpha_n * uniform(box)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureModel {
    pub ring: RingSpec,
    pub noise_box: NoiseBox,
    pub alpha_n: f64,
}

impl MixtureModel {
    pub fn new(ring: RingSpec, noise_box: NoiseBox, alpha_n: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha_n) {
            return Err(Error::InvalidParameter(format!("alpha_n must lie in [0, 1], got {alpha_n}")));
        }
        if !(noise_box.lo[0] < noise_box.hi[0] && noise_box.lo[1] < noise_box.hi[1]) {
            return Err(Error::InvalidParameter("noise box must have positive extent".into()));
        }
        let [cx, cy] = ring.center;
        let r = ring.r_outer;
        if !(noise_box.contains(&[cx - r, cy - r]) && noise_box.contains(&[cx + r, cy + r])) {
            return Err(Error::InvalidParameter("ring must lie inside the noise box".into()));
        }
        Ok(MixtureModel { ring, noise_box, alpha_n })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Manifold,
    Noise,
}

impl Origin {
    pub fn as_str(self) -> &'static str {
        match self {
            Origin::Manifold => "manifold",
            Origin::Noise => "noise",
        }
    }
}

/// A mixture draw with the true origin of each point (for evaluation only).
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureSample {
    pub cloud: PointCloud,
    pub labels: Vec<Origin>,
}

impl MixtureSample {
    pub fn noise_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l == Origin::Noise).count()
    }
}

pub fn sample_mixture(n: usize, model: &MixtureModel, seed: Seed) -> MixtureSample {
    let mut rng = seed.rng();
    let mut coords = Vec::with_capacity(2 * n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        if rng.random::<f64>() < model.alpha_n {
            coords.extend(model.noise_box.sample(&mut rng));
            labels.push(Origin::Noise);
        } else {
            coords.extend(ring_point(&mut rng, &model.ring));
            labels.push(Origin::Manifold);
        }
    }
    MixtureSample { cloud: PointCloud::new(2, coords).expect("finite samples"), labels }
}
