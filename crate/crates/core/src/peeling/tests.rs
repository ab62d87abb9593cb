use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::geometry::{dist, RingSpec};
use crate::sampling::{sample_ring, Seed};

fn cloud2(points: &[[f64; 2]]) -> PointCloud {
    PointCloud::from_points(2, points.iter()).unwrap()
}

fn hexagon(scale: f64) -> PointCloud {
    let mut pts = vec![[0.0, 0.0]];
    for k in 0..6 {
        let a = k as f64 * PI / 3.0;
        pts.push([scale * a.cos(), scale * a.sin()]);
    }
    cloud2(&pts)
}

/// Direction-sampling oracle: ball `i` is boundary iff one of `directions`
/// equally spaced points of its circle lies in no other open ball.
fn oracle_boundary(c: &PointCloud, r: f64, i: usize, directions: usize) -> bool {
    let center = c.point(i);
    let others: Vec<&[f64]> = (0..c.len()).filter(|&j| j != i).map(|j| c.point(j)).collect();
    let mut last = 0;
    for k in 0..directions {
        let t = TAU * k as f64 / directions as f64;
        let y = [center[0] + r * t.cos(), center[1] + r * t.sin()];
        if !others.is_empty() && dist(&y, others[last]) < r {
            continue;
        }
        match others.iter().position(|q| dist(&y, q) < r) {
            Some(j) => last = j,
            None => return true,
        }
    }
    false
}

#[test]
fn single_ball_is_boundary() {
    let u = BallUnion::new(cloud2(&[[0.3, -1.0]]), 0.5).unwrap();
    assert_eq!(boundary_balls_2d(&u).unwrap().flags, vec![true]);
    assert_eq!(boundary_balls_mc(&u, 10, 1).unwrap().flags, vec![true]);
}

#[test]
fn two_balls_are_both_boundary() {
    let u = BallUnion::new(cloud2(&[[0.0, 0.0], [1.0, 0.0]]), 1.0).unwrap();
    assert!((covered_half_width(1.0, 1.0) - PI / 3.0).abs() < 1e-15);
    assert_eq!(boundary_balls_2d(&u).unwrap().flags, vec![true, true]);
    let cls = boundary_balls_2d(&u).unwrap();
    assert!(peel(&u, &cls).unwrap().is_empty());
}

#[test]
fn hexagon_center_is_covered() {
    let c = hexagon(1.0);
    let u = BallUnion::new(c.clone(), 1.0).unwrap();
    let exact = boundary_balls_2d(&u).unwrap();
    let oracle: Vec<bool> = (0..7).map(|i| oracle_boundary(&c, 1.0, i, 100_000)).collect();
    assert_eq!(oracle, [false, true, true, true, true, true, true]);
    assert_eq!(exact.flags, oracle);
    assert_eq!(boundary_balls_mc(&u, 10_000, 5).unwrap().flags, oracle);

    let peeled = peel(&u, &exact).unwrap();
    assert_eq!(peeled.len(), 1);
    assert_eq!(peeled.centers().point(0), &[0.0, 0.0]);
    assert_eq!(peeled.radius(), 1.0);
}

#[test]
fn coincident_centers_do_not_cover_each_other() {
    let u = BallUnion::new(cloud2(&[[0.0, 0.0], [0.0, 0.0]]), 1.0).unwrap();
    assert_eq!(boundary_balls_2d(&u).unwrap().flags, vec![true, true]);
    // A duplicated hexagon centre is still covered by the ring of six.
    let mut c = hexagon(1.0);
    c.push(&[0.0, 0.0]);
    let cls = boundary_balls_2d(&BallUnion::new(c, 1.0).unwrap()).unwrap();
    assert!(!cls.flags[0] && !cls.flags[7]);
}

#[test]
fn touching_balls_do_not_cover() {
    // d = 2r contributes nothing; open balls.
    let pts = [[0.0, 0.0], [2.0, 0.0], [0.0, 2.0], [-2.0, 0.0], [0.0, -2.0]];
    let u = BallUnion::new(cloud2(&pts), 1.0).unwrap();
    assert!(covered_arcs(&u, 0).intervals().is_empty());
    assert!(boundary_balls_2d(&u).unwrap().flags[0]);
}

#[test]
fn exact_method_rejects_other_dimensions() {
    let c = PointCloud::new(3, vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
    let u = BallUnion::new(c, 1.0).unwrap();
    let err = boundary_balls_2d(&u).unwrap_err();
    assert!(err.to_string().contains("boundary_balls_mc"));
    assert!(boundary_balls_mc(&u, 100, 0).is_ok());
}

#[test]
fn ball_union_validation() {
    assert!(BallUnion::new(cloud2(&[[0.0, 0.0]]), 0.0).is_err());
    assert!(BallUnion::new(cloud2(&[[0.0, 0.0]]), f64::INFINITY).is_err());
    assert!(BallUnion::new(PointCloud::empty(2), 1.0).is_err());
    assert!(boundary_balls_mc(&BallUnion::new(hexagon(1.0), 1.0).unwrap(), 0, 0).is_err());
}

#[test]
fn peel_checks_lengths() {
    let u = BallUnion::new(hexagon(1.0), 1.0).unwrap();
    let cls = BoundaryClassification { flags: vec![true; 3], method: BoundaryMethod::Exact2d };
    assert!(matches!(peel(&u, &cls), Err(Error::ClassificationMismatch { expected: 7, found: 3 })));
    let all = BoundaryClassification { flags: vec![true; 7], method: BoundaryMethod::Exact2d };
    assert!(peel(&u, &all).unwrap().is_empty());
}

fn cuboctahedron() -> PointCloud {
    let mut coords = vec![0.0, 0.0, 0.0];
    let h = 1.0 / 2f64.sqrt();
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        for sa in [-h, h] {
            for sb in [-h, h] {
                let mut p = [0.0; 3];
                p[a] = sa;
                p[b] = sb;
                coords.extend(p);
            }
        }
    }
    PointCloud::new(3, coords).unwrap()
}

/// Fibonacci-lattice directions on the unit sphere.
fn sphere_directions(count: usize) -> impl Iterator<Item = [f64; 3]> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count).map(move |k| {
        let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
        let rho = (1.0 - z * z).sqrt();
        let t = golden * k as f64;
        [rho * t.cos(), rho * t.sin(), z]
    })
}

#[test]
fn cuboctahedron_center_is_covered_in_3d() {
    let c = cuboctahedron();
    assert_eq!(c.len(), 13);
    for i in 1..13 {
        assert!((dist(c.point(0), c.point(i)) - 1.0).abs() < 1e-15);
    }
    let oracle_covered = sphere_directions(1_000_000).all(|y| (1..13).any(|j| dist(&y, c.point(j)) < 1.0));
    assert!(oracle_covered);
    let cls = boundary_balls_mc(&BallUnion::new(c, 1.0).unwrap(), 100_000, 9).unwrap();
    assert!(!cls.flags[0]);
    assert!(cls.flags[1..].iter().all(|&f| f));
}

#[test]
fn mc_is_one_sided_against_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let (mut balls, mut agree) = (0, 0);
    for _ in 0..20 {
        let n = rng.random_range(20..120);
        let c = PointCloud::new(2, (0..2 * n).map(|_| rng.random::<f64>()).collect()).unwrap();
        let u = BallUnion::new(c.clone(), 2.5 * maxmin_nn(&c).unwrap()).unwrap();
        let exact = boundary_balls_2d(&u).unwrap();
        let mc = boundary_balls_mc(&u, 10_000, rng.random()).unwrap();
        for (e, m) in exact.flags.iter().zip(&mc.flags) {
            // A Monte-Carlo boundary flag is always certain.
            assert!(!(*m && !*e));
            balls += 1;
            agree += usize::from(e == m);
        }
    }
    assert!(agree as f64 >= 0.99 * balls as f64, "{agree}/{balls}");
}

#[test]
fn mc_is_deterministic_across_thread_counts() {
    let c = sample_ring(400, &RingSpec::centered(0.1), Seed::new(4));
    let u = BallUnion::new(c.clone(), 2.5 * maxmin_nn(&c).unwrap()).unwrap();
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let three = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let a = one.install(|| boundary_balls_mc(&u, 2_000, 99).unwrap());
    let b = three.install(|| boundary_balls_mc(&u, 2_000, 99).unwrap());
    assert_eq!(a, b);
}

#[test]
fn beta_threshold_values() {
    assert!((beta_threshold(2) - 6f64.sqrt()).abs() < 1e-15);
    assert_eq!(beta_threshold(1), 6.0);
    assert!(2.5 > beta_threshold(2));
}

#[test]
fn decide_rejects_small_beta_and_tiny_clouds() {
    let c = hexagon(1.0);
    let err = decide_interior(&c, 2.4, &BoundaryMethod::Exact2d).unwrap_err();
    assert!(err.to_string().contains("beta below theorem threshold"));
    assert!(decide_interior(&c, 6f64.sqrt(), &BoundaryMethod::Exact2d).is_err());
    assert!(matches!(
        decide_interior(&cloud2(&[[0.0, 0.0]]), 2.5, &BoundaryMethod::Exact2d),
        Err(Error::DegenerateSample(1))
    ));
}

#[test]
fn decide_hexagon_scaled_to_unit_radius() {
    let d = decide_interior(&hexagon(1.0 / 2.5), 2.5, &BoundaryMethod::Exact2d).unwrap();
    assert!((d.radius_used - 1.0).abs() < 1e-12);
    assert!(d.nonempty_interior);
    assert_eq!(d.peel_size, 1);
    assert_eq!(d.n, 7);
}

#[test]
fn decide_two_points_is_empty() {
    let d = decide_interior(&cloud2(&[[0.0, 0.0], [0.0, 1.0]]), 2.5, &BoundaryMethod::Exact2d).unwrap();
    assert!(!d.nonempty_interior);
    assert_eq!(d.peel_size, 0);
}

#[test]
fn decide_all_duplicates_is_empty() {
    let d = decide_interior(&cloud2(&[[1.0, 1.0]; 4]), 2.5, &BoundaryMethod::Exact2d).unwrap();
    assert!(!d.nonempty_interior);
    assert_eq!(d.radius_used, 0.0);
}

#[test]
fn circle_samples_give_empty_interior() {
    let circle = RingSpec::centered(0.0);
    let empty = (0..100)
        .filter(|&r| {
            let c = sample_ring(1000, &circle, Seed::new(21).derive(1000, r, crate::sampling::Purpose::Sample));
            !decide_interior(&c, 2.5, &BoundaryMethod::Exact2d).unwrap().nonempty_interior
        })
        .count();
    assert!(empty >= 95, "{empty}/100");
}

#[test]
fn thick_annulus_samples_give_nonempty_interior() {
    let ring = RingSpec::centered(0.1);
    let nonempty = (0..100)
        .filter(|&r| {
            let c = sample_ring(100, &ring, Seed::new(22).derive(100, r, crate::sampling::Purpose::Sample));
            decide_interior(&c, 2.5, &BoundaryMethod::Exact2d).unwrap().nonempty_interior
        })
        .count();
    assert!(nonempty >= 99, "{nonempty}/100");
}

#[test]
fn decision_survives_general_rotation_and_scaling() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let n = rng.random_range(10..80);
        let c = PointCloud::new(2, (0..2 * n).map(|_| rng.random::<f64>()).collect()).unwrap();
        let (t, s, dx) = (rng.random::<f64>() * TAU, 0.1 + 10.0 * rng.random::<f64>(), rng.random::<f64>());
        let moved = c.map_points(|p| vec![s * (t.cos() * p[0] - t.sin() * p[1]) + dx, s * (t.sin() * p[0] + t.cos() * p[1])]).unwrap();
        let a = decide_interior(&c, 2.5, &BoundaryMethod::Exact2d).unwrap();
        let b = decide_interior(&moved, 2.5, &BoundaryMethod::Exact2d).unwrap();
        assert_eq!(a.nonempty_interior, b.nonempty_interior);
    }
}

#[test]
fn noise_radius_literal_convention_on_sparse_cloud() {
    let c = cloud2(&[[0.0, 0.0], [10.0, 0.0], [0.0, 10.0]]);
    let params = NoiseRadiusParams { c: 1.0, f0: 1.0, n: 3, d: 2, rho_n: 1.0 };
    let lit = estimate_noise_radius(&c, &params, &BoundaryMethod::Exact2d, IndexConvention::Literal).unwrap();
    assert_eq!(lit.r_hat, 0.0);
    assert_eq!(lit.boundary_indices, vec![0, 1, 2]);
    let ex = estimate_noise_radius(&c, &params, &BoundaryMethod::Exact2d, IndexConvention::ExcludeSelf).unwrap();
    assert_eq!(ex.r_hat, 10.0);
}

#[test]
fn noise_radius_params() {
    let min_c = NoiseRadiusParams::min_c(1.0 / PI, 2);
    assert!((min_c - 6f64.sqrt()).abs() < 1e-12);
    assert!(NoiseRadiusParams::new(min_c, 1.0 / PI, 100, 2).is_err());
    let p = NoiseRadiusParams::new(3.0, 1.0 / PI, 100, 2).unwrap();
    assert!((p.rho_n - 3.0 * (100f64.ln() / 100.0).sqrt()).abs() < 1e-15);
    assert!(NoiseRadiusParams::new(3.0, 0.0, 100, 2).is_err());
    let c = hexagon(1.0);
    assert!(estimate_noise_radius(&c, &p, &BoundaryMethod::Exact2d, IndexConvention::Literal).is_err());
}

#[test]
fn noise_radius_of_unit_disk() {
    let disk = RingSpec::new([0.0, 0.0], 0.0, 1.0).unwrap();
    let f0 = 1.0 / PI;
    let params = NoiseRadiusParams::new(1.05 * NoiseRadiusParams::min_c(f0, 2), f0, 5000, 2).unwrap();
    let hits = (0..10)
        .filter(|&s| {
            let c = sample_ring(5000, &disk, Seed::new(30 + s));
            let est = estimate_noise_radius(&c, &params, &BoundaryMethod::Exact2d, IndexConvention::Literal).unwrap();
            (est.r_hat - 1.0).abs() <= 2.0 * params.rho_n
        })
        .count();
    assert!(hits >= 9, "{hits}/10");
}

fn arb_small_cloud() -> impl Strategy<Value = PointCloud> {
    (3usize..40).prop_flat_map(|n| {
        prop::collection::vec(-1.0f64..1.0, 2 * n).prop_map(|c| PointCloud::new(2, c).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn half_width_grows_with_radius(d in 0.01f64..5.0, r in 0.01f64..5.0, extra in 0.0f64..5.0) {
        prop_assume!(d < 2.0 * r);
        prop_assert!(covered_half_width(d, r + extra) >= covered_half_width(d, r));
    }

    #[test]
    fn exact_matches_direction_oracle(c in arb_small_cloud(), beta in 2.5f64..4.0) {
        let r = beta * maxmin_nn(&c).unwrap();
        prop_assume!(r > 0.0);
        let cls = boundary_balls_2d(&BallUnion::new(c.clone(), r).unwrap()).unwrap();
        for i in 0..c.len() {
            let oracle = oracle_boundary(&c, r, i, 20_000);
            // the oracle can miss a gap thinner than its spacing, never invent one
            if oracle {
                prop_assert!(cls.flags[i], "ball {} uncovered by the oracle", i);
            }
        }
    }

    #[test]
    fn peel_is_a_subset(c in arb_small_cloud()) {
        let r = 2.5 * maxmin_nn(&c).unwrap();
        prop_assume!(r > 0.0);
        let u = BallUnion::new(c.clone(), r).unwrap();
        let cls = boundary_balls_2d(&u).unwrap();
        let p = peel(&u, &cls).unwrap();
        prop_assert_eq!(p.len(), cls.interior_indices().len());
        for q in p.centers().iter() {
            prop_assert!(c.iter().any(|x| x == q));
        }
        if !p.is_empty() {
            let again = peel(&p, &boundary_balls_2d(&p).unwrap()).unwrap();
            prop_assert!(again.len() <= p.len());
        }
    }

    #[test]
    fn decision_invariant_under_exact_symmetries(c in arb_small_cloud(), k in 0u32..4, swap in any::<bool>(), e in -3i32..4) {
        let s = 2f64.powi(e);
        let moved = c.map_points(|p| {
            let (mut x, mut y) = (p[0], p[1]);
            for _ in 0..k {
                (x, y) = (-y, x);
            }
            if swap {
                (x, y) = (y, x);
            }
            vec![s * x, s * y]
        }).unwrap();
        let a = decide_interior(&c, 2.5, &BoundaryMethod::Exact2d).unwrap();
        let b = decide_interior(&moved, 2.5, &BoundaryMethod::Exact2d).unwrap();
        prop_assert_eq!(a.nonempty_interior, b.nonempty_interior);
        prop_assert_eq!(a.peel_size, b.peel_size);
    }
}
