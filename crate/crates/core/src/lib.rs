//! Decide, from a finite sample, whether the interior of a compact set in R^d is empty.
//!
//! The crate is organised around the pieces of the decision procedure:
//!
//! * [`geometry`]: point clouds, exact nearest-neighbour search, the max-min
//!   nearest-neighbour statistic, Hausdorff distances and the reference annulus.
//! * [`peeling`]: boundary balls of a union of equal balls, its peeling, the
//!   interior decision and the noise-radius estimator.
//! * [`dtm`]: distance to an empirical measure, threshold denoising, schedule
//!   checks and the denoise-then-decide pipeline.
//! * [`transport`]: exact Wasserstein-2 oracles on small discrete measures and
//!   numerical checks of the transport bounds used by the denoising argument.
//! * [`sampling`]: seeded samplers for the annulus, the noisy mixture and the
//!   almost-independent copula model.
//! * [`harness`]: the Monte-Carlo experiment runner, reference tables and the
//!   property suite.
//! * [`cli`]: the `mi` command-line front end.
//!
//! ```
//! use manifold_interior::geometry::RingSpec;
//! use manifold_interior::peeling::{decide_interior, BoundaryMethod};
//! use manifold_interior::sampling::{sample_ring, Seed};
//!
//! let circle = RingSpec::centered(0.0);
//! let cloud = sample_ring(500, &circle, Seed::new(1));
//! let decision = decide_interior(&cloud, 2.5, &BoundaryMethod::Exact2d).unwrap();
//! assert!(!decision.nonempty_interior);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dtm;
mod error;
pub mod geometry;
pub mod harness;
pub mod io;
pub mod peeling;
pub mod sampling;
pub mod transport;

pub use error::{Error, Result};
