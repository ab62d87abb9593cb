//! Draw points from an annulus around the unit circle and print them as CSV.
//!
//! `cargo run --example sample_ring -- 200 0.1`

use manifold_interior::geometry::RingSpec;
use manifold_interior::io::write_cloud;
use manifold_interior::sampling::{sample_ring, Seed};

fn main() -> manifold_interior::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(200);
    let epsilon: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.0);
    let cloud = sample_ring(n, &RingSpec::centered(epsilon), Seed::new(1));
    write_cloud(std::io::stdout().lock(), &cloud)
}
