//! Peel a union of balls on a circle, an annulus and a disk, with both boundary tests.

use manifold_interior::geometry::RingSpec;
use manifold_interior::peeling::{decide_interior, BoundaryMethod};
use manifold_interior::sampling::{sample_ring, Seed};

fn main() -> manifold_interior::Result<()> {
    let shapes = [
        ("circle", RingSpec::centered(0.0)),
        ("annulus 0.9..1.1", RingSpec::centered(0.1)),
        ("unit disk", RingSpec::new([0.0, 0.0], 0.0, 1.0)?),
    ];
    let methods = [BoundaryMethod::Exact2d, BoundaryMethod::MonteCarlo { samples: 4000, seed: 7 }];
    for (name, ring) in shapes {
        let cloud = sample_ring(1000, &ring, Seed::new(11));
        for method in &methods {
            let d = decide_interior(&cloud, 2.5, method)?;
            println!(
                "{name:>17} {:>8}: r_n = {:.4}, {} balls left after peeling, interior {}",
                method.name(),
                d.radius_used,
                d.peel_size,
                if d.nonempty_interior { "nonempty" } else { "empty" }
            );
        }
    }
    Ok(())
}
