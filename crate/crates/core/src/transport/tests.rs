use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::geometry::dist;

fn line_measure(xs: &[f64], ws: &[f64]) -> DiscreteMeasure {
    DiscreteMeasure::new(PointCloud::new(1, xs.to_vec()).unwrap(), ws.to_vec()).unwrap()
}

fn uniform2(points: &[[f64; 2]]) -> DiscreteMeasure {
    DiscreteMeasure::uniform(PointCloud::from_points(2, points.iter()).unwrap()).unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Between two uniform measures on `n` atoms an optimal plan is a permutation.
fn w2_by_enumeration(a: &PointCloud, b: &PointCloud) -> f64 {
    let n = a.len();
    permutations(n)
        .iter()
        .map(|p| (0..n).map(|i| dist(a.point(i), b.point(p[i])).powi(2)).sum::<f64>() / n as f64)
        .fold(f64::INFINITY, f64::min)
        .sqrt()
}

fn random_cloud(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> PointCloud {
    PointCloud::new(dim, (0..n * dim).map(|_| rng.random::<f64>()).collect()).unwrap()
}

fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| 0.05 + rng.random::<f64>()).collect();
    let s: f64 = raw.iter().sum();
    raw.iter().map(|w| w / s).collect()
}

#[test]
fn measure_validation() {
    let c = PointCloud::new(1, vec![0.0, 1.0]).unwrap();
    assert!(DiscreteMeasure::new(c.clone(), vec![0.5]).is_err());
    assert!(DiscreteMeasure::new(c.clone(), vec![0.7, 0.7]).is_err());
    assert!(DiscreteMeasure::new(c.clone(), vec![1.5, -0.5]).is_err());
    assert!(DiscreteMeasure::new(PointCloud::empty(1), vec![]).is_err());
    assert!(DiscreteMeasure::uniform(c).unwrap().is_uniform());
    assert!(!line_measure(&[0.0, 1.0], &[0.25, 0.75]).is_uniform());
}

#[test]
fn w2_1d_examples() {
    let d0 = DiscreteMeasure::dirac(&[0.0]);
    let d1 = DiscreteMeasure::dirac(&[1.0]);
    assert_eq!(w2_1d(&d0, &d1).unwrap(), 1.0);
    let a = line_measure(&[0.0, 2.0], &[0.5, 0.5]);
    let b = line_measure(&[1.0, 3.0], &[0.5, 0.5]);
    assert!((w2_1d(&a, &b).unwrap() - 1.0).abs() < 1e-15);
    let c = line_measure(&[3.0, -1.0, 0.5], &[0.2, 0.3, 0.5]);
    assert_eq!(w2_1d(&c, &c).unwrap(), 0.0);
    assert!(w2_1d(&uniform2(&[[0.0, 0.0]]), &d0).is_err());
}

#[test]
fn exact_matches_1d_quantile_coupling() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let (n, m) = (rng.random_range(1..12), rng.random_range(1..12));
        let a = DiscreteMeasure::new(random_cloud(&mut rng, n, 1), random_weights(&mut rng, n)).unwrap();
        let b = DiscreteMeasure::new(random_cloud(&mut rng, m, 1), random_weights(&mut rng, m)).unwrap();
        let (w, plan) = w2_exact_small(&a, &b).unwrap();
        assert!((w - w2_1d(&a, &b).unwrap()).abs() < 1e-9);
        assert!(plan.satisfies_marginals());
    }
}

#[test]
fn two_by_two_assignment() {
    let a = uniform2(&[[0.0, 0.0], [1.0, 0.0]]);
    let b = uniform2(&[[0.0, 1.0], [1.0, 1.0]]);
    let (w, plan) = w2_exact_small(&a, &b).unwrap();
    assert!((w - 1.0).abs() < 1e-12);
    let mut e: Vec<(usize, usize)> = plan.entries.iter().filter(|e| e.2 > 0.0).map(|e| (e.0, e.1)).collect();
    e.sort();
    assert_eq!(e, vec![(0, 0), (1, 1)]);
}

#[test]
fn equal_measures_have_diagonal_plan() {
    let a = uniform2(&[[0.0, 0.0], [1.0, 0.5], [3.0, -1.0]]);
    let (w, plan) = w2_exact_small(&a, &a).unwrap();
    assert_eq!(w, 0.0);
    assert!(plan.entries.iter().filter(|e| e.2 > 0.0).all(|e| e.0 == e.1));
}

#[test]
fn size_cap_is_enforced() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let a = DiscreteMeasure::uniform(random_cloud(&mut rng, 65, 2)).unwrap();
    let err = w2_exact_small(&a, &a).unwrap_err();
    assert!(matches!(err, Error::SizeCapExceeded { pairs: 4225, cap: 4096 }));
    assert!(err.to_string().contains("subsample"));
    let b = DiscreteMeasure::uniform(random_cloud(&mut rng, 64, 2)).unwrap();
    assert!(w2_exact_small(&b, &b).is_ok());
}

#[test]
fn exact_matches_permutation_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..40 {
        let n = rng.random_range(1..=6);
        let a = random_cloud(&mut rng, n, 2);
        let b = random_cloud(&mut rng, n, 2);
        let (w, plan) = w2_exact_small(&DiscreteMeasure::uniform(a.clone()).unwrap(), &DiscreteMeasure::uniform(b.clone()).unwrap()).unwrap();
        assert!((w - w2_by_enumeration(&a, &b)).abs() < 1e-9);
        assert!(plan.satisfies_marginals());
    }
}

#[test]
fn degenerate_supplies_are_solved() {
    // Equal partial sums make the northwest-corner start degenerate.
    let a = line_measure(&[0.0, 1.0, 2.0, 3.0], &[0.25; 4]);
    let b = line_measure(&[3.0, 2.0, 1.0, 0.0], &[0.25; 4]);
    let (w, plan) = w2_exact_small(&a, &b).unwrap();
    assert!(w.abs() < 1e-12);
    assert!(plan.satisfies_marginals());
}

fn hand_plan(target: &[f64], entries: Vec<(usize, usize, f64)>) -> TransportPlan {
    let source = line_measure(&[0.0, 1.0], &[0.5, 0.5]);
    let target = line_measure(target, &[0.5, 0.5]);
    TransportPlan { entries, source, target }
}

#[test]
fn mix_plan_endpoints() {
    let p1 = hand_plan(&[0.0, 2.0], vec![(0, 0, 0.5), (1, 1, 0.5)]);
    let p2 = hand_plan(&[5.0, 6.0], vec![(0, 1, 0.5), (1, 0, 0.5)]);
    assert_eq!(mix_plans(&p1, &p2, 0.0).unwrap(), p1);
    assert_eq!(mix_plans(&p1, &p2, 1.0).unwrap(), p2);
    assert!(mix_plans(&p1, &p2, 1.5).is_err());
}

#[test]
fn mix_plan_halves_and_unions() {
    let p1 = hand_plan(&[0.0, 2.0], vec![(0, 0, 0.5), (1, 1, 0.5)]);
    let p2 = hand_plan(&[2.0, 6.0], vec![(0, 1, 0.5), (1, 0, 0.5)]);
    let mixed = mix_plans(&p1, &p2, 0.5).unwrap();
    // target atoms 0, 2, 6 with 2 shared
    assert_eq!(mixed.target.atoms().coords(), &[0.0, 2.0, 6.0]);
    assert_eq!(mixed.target.weights(), &[0.25, 0.5, 0.25]);
    let mut e = mixed.entries.clone();
    e.sort_by_key(|a| (a.0, a.1));
    assert_eq!(e, vec![(0, 0, 0.25), (0, 2, 0.25), (1, 1, 0.5)]);
    assert!(mixed.satisfies_marginals());
}

#[test]
fn mix_plan_rejects_other_sources() {
    let p1 = hand_plan(&[0.0, 2.0], vec![(0, 0, 0.5), (1, 1, 0.5)]);
    let mut p2 = p1.clone();
    p2.source = line_measure(&[0.0, 1.5], &[0.5, 0.5]);
    assert!(matches!(mix_plans(&p1, &p2, 0.5), Err(Error::MismatchedSources)));
}

#[test]
fn mixture_bound_examples() {
    let mu = uniform2(&[[0.0, 0.0], [1.0, 1.0]]);
    let c = check_mixture_bound(&mu, &mu, &mu, 0.3).unwrap();
    assert!(c.margin.abs() < 1e-12);

    let d0 = DiscreteMeasure::dirac(&[0.0]);
    let d1 = DiscreteMeasure::dirac(&[1.0]);
    let d2 = DiscreteMeasure::dirac(&[2.0]);
    let c = check_mixture_bound(&d0, &d1, &d2, 0.5).unwrap();
    assert!((c.lhs - 2.5).abs() < 1e-12);
    assert!((c.rhs - 2.5).abs() < 1e-12);
    assert!(c.margin.abs() <= 1e-9);
    assert!(check_mixture_bound(&d0, &d1, &d2, -0.1).is_err());
}

#[test]
fn mixture_measure_merges_atoms() {
    let a = line_measure(&[0.0, 1.0], &[0.5, 0.5]);
    let b = line_measure(&[1.0, 2.0], &[0.5, 0.5]);
    let m = mixture_measure(&a, &b, 0.5).unwrap();
    assert_eq!(m.atoms().coords(), &[0.0, 1.0, 2.0]);
    assert_eq!(m.weights(), &[0.25, 0.5, 0.25]);
}

#[test]
fn stability_examples() {
    let mu = line_measure(&[0.0, 1.0], &[0.5, 0.5]);
    let grid = PointCloud::new(1, (0..=300).map(|k| -1.0 + 0.01 * k as f64).collect()).unwrap();
    let same = check_dtm_stability(&mu, &mu, 0.5, &grid).unwrap();
    assert_eq!(same.margin, 0.0);
    let nu = line_measure(&[0.0, 1.2], &[0.5, 0.5]);
    let c = check_dtm_stability(&mu, &nu, 0.5, &grid).unwrap();
    // W2 = sqrt(0.5 * 0.04); bound = W2 / sqrt(0.5) = 0.2
    assert!((c.bound - 0.2).abs() < 1e-12);
    assert!(c.margin >= 0.0, "{c:?}");
    assert!(check_dtm_stability(&line_measure(&[0.0, 1.0], &[0.3, 0.7]), &nu, 0.5, &grid).is_err());
}

#[test]
fn noise_insertion_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let n = rng.random_range(4..30);
        let k = rng.random_range(1..=n);
        let base = random_cloud(&mut rng, n, 2);
        let diam = base.diameter();
        let reach = 0.7;
        let mut coords = base.coords().to_vec();
        for i in 0..k {
            let t = rng.random::<f64>() * std::f64::consts::TAU;
            let s = rng.random::<f64>() * (reach + diam);
            coords[2 * i] += s * t.cos();
            coords[2 * i + 1] += s * t.sin();
        }
        let moved = PointCloud::new(2, coords).unwrap();
        let (w, _) = w2_exact_small(&DiscreteMeasure::uniform(base).unwrap(), &DiscreteMeasure::uniform(moved).unwrap()).unwrap();
        assert!(w <= (k as f64 / n as f64).sqrt() * (reach + diam) + 1e-12);
    }
}

fn arb_measure() -> impl Strategy<Value = DiscreteMeasure> {
    (1usize..7).prop_flat_map(|n| {
        (prop::collection::vec(-2.0f64..2.0, 2 * n), prop::collection::vec(0.05f64..1.0, n)).prop_map(|(c, w)| {
            let s: f64 = w.iter().sum();
            DiscreteMeasure::new(PointCloud::new(2, c).unwrap(), w.iter().map(|x| x / s).collect()).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn w2_is_a_metric(a in arb_measure(), b in arb_measure(), c in arb_measure()) {
        let (ab, plan) = w2_exact_small(&a, &b).unwrap();
        let (ba, _) = w2_exact_small(&b, &a).unwrap();
        let (bc, _) = w2_exact_small(&b, &c).unwrap();
        let (ac, _) = w2_exact_small(&a, &c).unwrap();
        let (aa, _) = w2_exact_small(&a, &a).unwrap();
        prop_assert!(ab >= 0.0);
        prop_assert!((ab - ba).abs() <= 1e-9);
        prop_assert!(ac <= ab + bc + 1e-9);
        prop_assert!(aa <= 1e-9);
        prop_assert!(plan.satisfies_marginals());
    }

    #[test]
    fn mixed_plan_cost_is_linear(a in arb_measure(), b in arb_measure(), c in arb_measure(), alpha in 0.0f64..=1.0) {
        let (_, p1) = w2_exact_small(&a, &b).unwrap();
        let (_, p2) = w2_exact_small(&a, &c).unwrap();
        let mixed = mix_plans(&p1, &p2, alpha).unwrap();
        let expect = (1.0 - alpha) * p1.squared_cost() + alpha * p2.squared_cost();
        prop_assert!((mixed.squared_cost() - expect).abs() <= 1e-9);
        prop_assert!(mixed.satisfies_marginals());
    }

    #[test]
    fn mixture_bound_holds(a in arb_measure(), b in arb_measure(), c in arb_measure(), alpha in 0.0f64..=1.0) {
        prop_assert!(check_mixture_bound(&a, &b, &c, alpha).unwrap().margin >= -1e-9);
    }
}
