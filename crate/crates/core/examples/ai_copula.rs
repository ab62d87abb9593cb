//! Sample a weakly dependent vector from an FGM-type copula and check its dependence bound.

use manifold_interior::sampling::{ai_bound_check, sample_ai_fgm, FgmCopulaSpec, Marginal, Seed};

fn main() -> manifold_interior::Result<()> {
    let spec = FgmCopulaSpec::new(3, 0.3, Marginal::Uniform { lo: 0.0, hi: 1.0 })?;
    let report = ai_bound_check(&spec, 21)?;
    println!("grid deviation {:.6}, bound eps^n = {:.6}", report.alpha_hat, report.bound);

    let mut proposals = 0;
    for k in 0..5 {
        let draw = sample_ai_fgm(&spec, Seed::new(k));
        proposals += draw.proposals;
        println!("{:?}", draw.values);
    }
    println!("{proposals} proposals for 5 draws (envelope {:.3})", spec.density_bound());
    Ok(())
}
