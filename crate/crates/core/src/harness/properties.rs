use rand::Rng;
use serde::Serialize;

use crate::dtm::{dtm, DtmParams, EmpiricalMeasure};
use crate::geometry::{hausdorff_cloud_to_ring, maxmin_nn, unit_ball_volume, PointCloud, RingSpec};
use crate::peeling::{estimate_noise_radius, BoundaryMethod, IndexConvention, NoiseRadiusParams};
use crate::sampling::{ai_bound_check, sample_ring, FgmCopulaSpec, Marginal, Purpose, Seed};
use crate::transport::{check_dtm_stability, check_mixture_bound, DiscreteMeasure};
use crate::Result;

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyCheck {
    pub name: String,
    pub pass: bool,
    pub trials: usize,
    /// Trials where the checked inequality held.
    pub successes: usize,
    /// Smallest slack seen across trials; negative means a violation.
    pub worst_margin: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub seed: u64,
    pub checks: Vec<PropertyCheck>,
}

impl PropertyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

const TAG_MAXMIN: u64 = 1;
const TAG_HAUSDORFF: u64 = 2;
const TAG_MIXTURE: u64 = 3;
const TAG_STABILITY: u64 = 4;
const TAG_NOISE_RADIUS: u64 = 5;

fn unit_disk() -> RingSpec {
    RingSpec::new([0.0, 0.0], 0.0, 1.0).expect("valid disk")
}

/// Uniform samples on the unit disk: is `maxmin_nn > (t log n / (n omega_2))^(1/2)` in every replicate?
pub fn maxmin_lower_bound_check(seed: Seed, sizes: &[usize], t: f64, replicates: usize) -> Result<PropertyCheck> {
    let disk = unit_disk();
    let omega = unit_ball_volume(2);
    let mut worst = f64::INFINITY;
    let mut successes = 0;
    for &n in sizes {
        let nf = n as f64;
        let threshold = (t * nf.ln() / (nf * omega)).sqrt();
        for r in 0..replicates {
            let cloud = sample_ring(n, &disk, seed.derive(n as u64, r as u64, Purpose::Property(TAG_MAXMIN)));
            let stat = maxmin_nn(&cloud)?;
            worst = worst.min(stat / threshold - 1.0);
            successes += usize::from(stat > threshold);
        }
    }
    let trials = sizes.len() * replicates;
    Ok(PropertyCheck {
        name: "maxmin_lower_bound".into(),
        pass: successes == trials,
        trials,
        successes,
        worst_margin: worst,
        detail: format!("t={t}, n in {sizes:?}, margin is stat/threshold - 1"),
    })
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) }
}

/// `(n / log n)^(1/2) d_H(X_n, disk)` stays within three times its value at the
/// smallest `n` (medians over replicates).
pub fn hausdorff_rate_check(seed: Seed, sizes: &[usize], replicates: usize, grid_step: f64) -> Result<PropertyCheck> {
    let disk = unit_disk();
    let mut medians = Vec::new();
    for &n in sizes {
        let nf = n as f64;
        let scale = (nf / nf.ln()).sqrt();
        let mut stats = Vec::with_capacity(replicates);
        for r in 0..replicates {
            let cloud = sample_ring(n, &disk, seed.derive(n as u64, r as u64, Purpose::Property(TAG_HAUSDORFF)));
            stats.push(scale * hausdorff_cloud_to_ring(&cloud, &disk, grid_step)?.value);
        }
        medians.push(median(&mut stats));
    }
    let limit = 3.0 * medians[0];
    let successes = medians.iter().filter(|&&m| m <= limit).count();
    let worst = medians.iter().map(|m| limit - m).fold(f64::INFINITY, f64::min);
    Ok(PropertyCheck {
        name: "hausdorff_rate".into(),
        pass: successes == medians.len(),
        trials: medians.len(),
        successes,
        worst_margin: worst,
        detail: format!("medians {medians:?} for n in {sizes:?}"),
    })
}

fn random_measure<R: Rng>(rng: &mut R, atoms: usize, span: f64) -> Result<DiscreteMeasure> {
    let coords: Vec<f64> = (0..2 * atoms).map(|_| span * rng.random::<f64>()).collect();
    let raw: Vec<f64> = (0..atoms).map(|_| 0.1 + rng.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    DiscreteMeasure::new(PointCloud::new(2, coords)?, raw.iter().map(|w| w / total).collect())
}

/// `W2(mu, mix)^2 <= (1 - alpha) W2(mu, mu1)^2 + alpha W2(mu, mu2)^2` on random 2-D instances.
pub fn mixture_bound_check(seed: Seed, instances: usize) -> Result<PropertyCheck> {
    let mut worst = f64::INFINITY;
    let mut successes = 0;
    for k in 0..instances {
        let mut rng = seed.derive(k as u64, 0, Purpose::Property(TAG_MIXTURE)).rng();
        let sizes: [usize; 3] = std::array::from_fn(|_| rng.random_range(1..=7));
        let mu = random_measure(&mut rng, sizes[0], 1.0)?;
        let mu1 = random_measure(&mut rng, sizes[1], 1.0)?;
        let mu2 = random_measure(&mut rng, sizes[2], 3.0)?;
        let alpha = rng.random::<f64>();
        let check = check_mixture_bound(&mu, &mu1, &mu2, alpha)?;
        worst = worst.min(check.margin);
        successes += usize::from(check.margin >= -1e-9);
    }
    Ok(PropertyCheck {
        name: "mixture_bound".into(),
        pass: successes == instances,
        trials: instances,
        successes,
        worst_margin: worst,
        detail: "margin = rhs - lhs, required >= -1e-9".into(),
    })
}

/// Grid covering `[-1, 2]^2` with the given step.
fn stability_grid(step: f64) -> PointCloud {
    let m = (3.0 / step).round() as usize + 1;
    let mut coords = Vec::with_capacity(2 * m * m);
    for a in 0..m {
        for b in 0..m {
            coords.push(-1.0 + a as f64 * step);
            coords.push(-1.0 + b as f64 * step);
        }
    }
    PointCloud::new(2, coords).expect("finite grid")
}

/// `sup |d_{mu,m0} - d_{nu,m0}| <= m0^(-1/2) W2(mu, nu)` on random 16-atom pairs.
pub fn dtm_stability_check(seed: Seed, instances: usize) -> Result<PropertyCheck> {
    let grid = stability_grid(0.1);
    let mut worst = f64::INFINITY;
    let mut successes = 0;
    for k in 0..instances {
        let mut rng = seed.derive(k as u64, 0, Purpose::Property(TAG_STABILITY)).rng();
        let a: Vec<f64> = (0..32).map(|_| rng.random::<f64>()).collect();
        let shift = 0.5 * rng.random::<f64>();
        let b: Vec<f64> = a.iter().map(|x| x + shift * (rng.random::<f64>() - 0.5)).collect();
        let m0 = rng.random_range(1..=16) as f64 / 16.0;
        let mu = DiscreteMeasure::uniform(PointCloud::new(2, a)?)?;
        let nu = DiscreteMeasure::uniform(PointCloud::new(2, b)?)?;
        let check = check_dtm_stability(&mu, &nu, m0, &grid)?;
        worst = worst.min(check.margin);
        successes += usize::from(check.margin >= -1e-9);
    }
    Ok(PropertyCheck {
        name: "dtm_stability".into(),
        pass: successes == instances,
        trials: instances,
        successes,
        worst_margin: worst,
        detail: "margin = m0^(-1/2) W2 - grid sup, required >= -1e-9".into(),
    })
}

/// Uniform samples on `ring` (a tube of half-width `(r_outer - r_inner) / 2`
/// around its mid circle): `|R_hat - half_width| <= 2 rho_n` in at least
/// `required_fraction` of the seeds.
pub fn noise_radius_check(
    seed: Seed,
    ring: &RingSpec,
    n: usize,
    seeds: usize,
    required_fraction: f64,
) -> Result<PropertyCheck> {
    let f0 = 1.0 / ring.area();
    let c = 1.05 * NoiseRadiusParams::min_c(f0, 2);
    let params = NoiseRadiusParams::new(c, f0, n, 2)?;
    let target = 0.5 * ring.epsilon();
    let mut worst = f64::INFINITY;
    let mut successes = 0;
    for s in 0..seeds {
        let cloud = sample_ring(n, ring, seed.derive(n as u64, s as u64, Purpose::Property(TAG_NOISE_RADIUS)));
        let est = estimate_noise_radius(&cloud, &params, &BoundaryMethod::Exact2d, IndexConvention::Literal)?;
        let margin = 2.0 * params.rho_n - (est.r_hat - target).abs();
        worst = worst.min(margin);
        successes += usize::from(margin >= 0.0);
    }
    Ok(PropertyCheck {
        name: "noise_radius".into(),
        pass: successes as f64 >= required_fraction * seeds as f64,
        trials: seeds,
        successes,
        worst_margin: worst,
        detail: format!("n={n}, rho_n={:.5}, c={c:.4}, need {required_fraction} of seeds", params.rho_n),
    })
}

/// Grid estimate of the dependence coefficient for the FGM example against `eps^n`.
pub fn ai_bound_property(eps: f64, n: usize, grid_per_axis: usize) -> Result<PropertyCheck> {
    let spec = FgmCopulaSpec::new(n, eps, Marginal::Uniform { lo: 0.0, hi: 1.0 })?;
    let report = ai_bound_check(&spec, grid_per_axis)?;
    Ok(PropertyCheck {
        name: "ai_bound".into(),
        pass: report.pass,
        trials: 1,
        successes: usize::from(report.pass),
        worst_margin: report.bound - report.alpha_hat,
        detail: format!("alpha_hat={}, bound={}", report.alpha_hat, report.bound),
    })
}

/// Distance to measure of the uniform measure on a grid point set equals the
/// distance to the set when `m0 <= 1/n`.
fn dtm_point_mass_check(seed: Seed) -> Result<PropertyCheck> {
    let mut rng = seed.derive(0, 0, Purpose::Property(6)).rng();
    let cloud = PointCloud::new(2, (0..40).map(|_| rng.random::<f64>()).collect())?;
    let measure = EmpiricalMeasure::new(cloud.clone())?;
    let params = DtmParams::new(1.0 / 40.0)?;
    let mut worst = f64::INFINITY;
    let mut successes = 0;
    for _ in 0..50 {
        let q = [2.0 * rng.random::<f64>() - 0.5, 2.0 * rng.random::<f64>() - 0.5];
        let nearest = cloud.iter().map(|p| crate::geometry::dist(p, &q)).fold(f64::INFINITY, f64::min);
        let value = dtm(&measure, &q, &params)?;
        let margin = 1e-12 - (value - nearest).abs();
        worst = worst.min(margin);
        successes += usize::from(margin >= 0.0);
    }
    Ok(PropertyCheck {
        name: "dtm_single_atom".into(),
        pass: successes == 50,
        trials: 50,
        successes,
        worst_margin: worst,
        detail: "m0 = 1/n reduces to the nearest-point distance".into(),
    })
}

/// Run every cross-module check at fixed, desk-scale sizes.
pub fn run_property_suite(seed: u64) -> Result<PropertyReport> {
    let s = Seed::new(seed);
    let tube = RingSpec::new([0.0, 0.0], 0.8, 1.2)?;
    let checks = vec![
        maxmin_lower_bound_check(s, &[500, 2000, 8000], 0.1, 20)?,
        hausdorff_rate_check(s, &[500, 2000, 8000], 5, 0.005)?,
        mixture_bound_check(s, 50)?,
        dtm_stability_check(s, 20)?,
        noise_radius_check(s, &tube, 5000, 10, 0.9)?,
        ai_bound_property(0.3, 3, 41)?,
        dtm_point_mass_check(s)?,
    ];
    Ok(PropertyReport { seed, checks })
}
