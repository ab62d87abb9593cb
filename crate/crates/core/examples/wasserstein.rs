//! Exact W2 between small discrete measures and the mixture bound on a toy case.

use manifold_interior::geometry::PointCloud;
use manifold_interior::transport::{check_mixture_bound, w2_1d, w2_exact_small, DiscreteMeasure};

fn main() -> manifold_interior::Result<()> {
    let mu = DiscreteMeasure::uniform(PointCloud::new(1, vec![0.0, 1.0, 3.0])?)?;
    let nu = DiscreteMeasure::new(PointCloud::new(1, vec![0.5, 2.0])?, vec![0.25, 0.75])?;
    let (w, plan) = w2_exact_small(&mu, &nu)?;
    println!("W2 by simplex = {w:.6}, by quantiles = {:.6}", w2_1d(&mu, &nu)?);
    for (i, j, mass) in &plan.entries {
        println!("  move {mass:.4} from {} to {}", mu.atoms().point(*i)[0], nu.atoms().point(*j)[0]);
    }

    let dirac = |x: f64| DiscreteMeasure::dirac(&[x]);
    for alpha in [0.1, 0.5, 0.9] {
        let c = check_mixture_bound(&dirac(0.0), &dirac(1.0), &dirac(2.0), alpha)?;
        println!("alpha = {alpha}: lhs {:.4} <= rhs {:.4}", c.lhs, c.rhs);
    }
    Ok(())
}
