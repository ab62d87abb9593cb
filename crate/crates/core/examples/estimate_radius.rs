//! Estimate the half-width of a tube around the unit circle from its boundary balls.

use manifold_interior::geometry::RingSpec;
use manifold_interior::peeling::{estimate_noise_radius, BoundaryMethod, IndexConvention, NoiseRadiusParams};
use manifold_interior::sampling::{sample_ring, Seed};

fn main() -> manifold_interior::Result<()> {
    let tube = RingSpec::new([0.0, 0.0], 0.8, 1.2)?;
    let f0 = 1.0 / tube.area();
    let c = 1.05 * NoiseRadiusParams::min_c(f0, 2);
    for n in [1000, 2000, 5000] {
        let params = NoiseRadiusParams::new(c, f0, n, 2)?;
        let cloud = sample_ring(n, &tube, Seed::new(n as u64));
        let est = estimate_noise_radius(&cloud, &params, &BoundaryMethod::Exact2d, IndexConvention::Literal)?;
        println!(
            "n = {n:>5}: R_hat = {:.4} (true 0.2), rho_n = {:.4}, {} boundary balls",
            est.r_hat,
            est.rho_n,
            est.boundary_indices.len()
        );
    }
    Ok(())
}
