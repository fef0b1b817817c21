use std::collections::BTreeMap;

use hjoints::entropy::{
    conditional_entropy, entropy, jensen_bound_check, loomis_whitney_check, shearer_check, uniform_bound_check,
    FiniteDistribution, JensenGap,
};
use hjoints::eta::{eta_multiplicity, log2_objective, DEFAULT_MAX_ITERS, DEFAULT_TOL};
use hjoints::hypergraph::{Hypergraph, WeightFunction};
use hjoints::rational::{int, ratio};
use hjoints::Error;
use proptest::prelude::*;

fn arb_law(atoms: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.0f64..1.0, atoms).prop_filter_map("nonzero mass", |v| {
        let s: f64 = v.iter().sum();
        (s > 1e-6).then(|| v.iter().map(|x| x / s).collect())
    })
}

/// `Σ_y p(y) H(X | Y = y)` computed from the conditional slices.
fn conditional_oracle(atoms: &[(usize, usize)], probs: &[f64]) -> f64 {
    let mut by_y: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for (&(_, y), &p) in atoms.iter().zip(probs) {
        by_y.entry(y).or_default().push(p);
    }
    by_y.values()
        .map(|ps| {
            let py: f64 = ps.iter().sum();
            if py == 0.0 {
                0.0
            } else {
                py * entropy(&ps.iter().map(|p| p / py).collect::<Vec<_>>())
            }
        })
        .sum()
}

fn pairs(a: usize, b: usize) -> Vec<(usize, usize)> {
    (0..a).flat_map(|x| (0..b).map(move |y| (x, y))).collect()
}

fn rainbow_triangle() -> Hypergraph {
    Hypergraph::from_masks(3, vec![0b011, 0b101, 0b110], vec![1, 2, 3])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn chain_rule(p in arb_law(12)) {
        let atoms = pairs(3, 4);
        let joint = FiniteDistribution::new(atoms.clone(), p.clone()).unwrap();
        let h_y = joint.map(|&(_, y)| y).entropy();
        let oracle = conditional_oracle(&atoms, &p);
        prop_assert!((conditional_entropy(&joint) - oracle).abs() < 1e-12);
        prop_assert!((joint.entropy() - (h_y + oracle)).abs() < 1e-12);
        prop_assert!(oracle <= joint.map(|&(x, _)| x).entropy() + 1e-12);
    }

    #[test]
    fn uniform_law_maximizes_entropy(p in arb_law(8)) {
        let x = FiniteDistribution::new((0..8).collect(), p).unwrap();
        let u = uniform_bound_check(&x);
        prop_assert!(u.slack >= -1e-12);
        prop_assert!(uniform_bound_check(&FiniteDistribution::uniform((0..8).collect::<Vec<_>>())).slack.abs() < 1e-12);
    }

    #[test]
    fn shearer_on_random_laws(p in arb_law(8)) {
        let atoms: Vec<Vec<usize>> = (0..8).map(|i| vec![i & 1, i >> 1 & 1, i >> 2 & 1]).collect();
        let joint = FiniteDistribution::new(atoms, p).unwrap();
        let subsets = vec![vec![1, 2], vec![1, 3], vec![2, 3]];
        let slack = shearer_check(&subsets, &[ratio(1, 2), ratio(1, 2), ratio(1, 2)], &joint).unwrap();
        prop_assert!(slack >= -1e-12);
    }

    #[test]
    fn objective_is_concave(a in arb_law(4), b in arb_law(4), t in 0.0f64..=1.0) {
        let h = rainbow_triangle();
        let w = WeightFunction::uniform(3, ratio(1, 2)).unwrap();
        let tuples = vec![vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]];
        let mix: Vec<f64> = a.iter().zip(&b).map(|(x, y)| t * x + (1.0 - t) * y).collect();
        let fa = log2_objective(&h, &w, &tuples, &a).unwrap();
        let fb = log2_objective(&h, &w, &tuples, &b).unwrap();
        let fm = log2_objective(&h, &w, &tuples, &mix).unwrap();
        prop_assert!(fm >= t * fa + (1.0 - t) * fb - 1e-12);
    }

    #[test]
    fn eta_is_at_least_one_and_optimal(picks in proptest::collection::btree_set((0usize..3, 0usize..3, 0usize..3), 1..=12), probe in arb_law(12)) {
        let h = rainbow_triangle();
        let w = WeightFunction::uniform(3, ratio(1, 2)).unwrap();
        let tuples: Vec<Vec<usize>> = picks.iter().map(|&(a, b, c)| vec![a, b, c]).collect();
        let r = eta_multiplicity(&h, &w, &tuples, DEFAULT_TOL, DEFAULT_MAX_ITERS).unwrap();
        prop_assert!(r.eta >= 1.0 - 1e-9);
        let mu: Vec<f64> = {
            let p = &probe[..tuples.len()];
            let s: f64 = p.iter().sum();
            if s > 0.0 { p.iter().map(|x| x / s).collect() } else { vec![1.0 / tuples.len() as f64; tuples.len()] }
        };
        prop_assert!(log2_objective(&h, &w, &tuples, &mu).unwrap() <= r.log2_eta + DEFAULT_TOL + 1e-9);
    }
}

#[test]
fn jensen_examples() {
    let x = vec![vec![0.5, 0.5], vec![1.0, 0.0]];
    let joint = FiniteDistribution::new(vec![(0, 0), (0, 1), (1, 0)], vec![0.25, 0.25, 0.5]).unwrap();
    match jensen_bound_check(&x, 1.0, &joint).unwrap() {
        JensenGap::Finite(g) => assert!(g >= -1e-12),
        JensenGap::Infinite => panic!("finite expected"),
    }
    let hits_zero = FiniteDistribution::new(vec![(1, 1), (0, 0)], vec![0.5, 0.5]).unwrap();
    assert_eq!(jensen_bound_check(&x, 1.0, &hits_zero).unwrap(), JensenGap::Infinite);
    let over = vec![vec![0.9, 0.9]];
    let j = FiniteDistribution::new(vec![(0, 0)], vec![1.0]).unwrap();
    assert_eq!(jensen_bound_check(&over, 1.0, &j).unwrap_err(), Error::RowSumExceedsA);
}

#[test]
fn loomis_whitney_on_a_cube() {
    let cube: Vec<Vec<usize>> = (0..8).map(|i| vec![i & 1, i >> 1 & 1, i >> 2 & 1]).collect();
    let subsets = vec![vec![1, 2], vec![1, 3], vec![2, 3]];
    let v = loomis_whitney_check(&cube, &subsets, &[ratio(1, 2), ratio(1, 2), ratio(1, 2)]).unwrap();
    // equality on a box: 8 = (4 * 4 * 4)^{1/2}
    assert!((v.lhs - v.rhs).abs() < 1e-9 * v.rhs.abs().max(1.0));
    assert!(v.holds_relative(1e-9));
    let thin = loomis_whitney_check(&cube, &subsets, &[ratio(1, 3), ratio(1, 3), ratio(1, 3)]);
    assert_eq!(thin.unwrap_err(), Error::NotCovering);
    let one = loomis_whitney_check(&cube, &[vec![1, 2, 3]], &[int(1)]).unwrap();
    assert!(one.holds_relative(1e-9));
}

#[test]
fn distribution_validation() {
    assert!(FiniteDistribution::new(vec![0, 1], vec![0.5, 0.6]).is_err());
    assert!(FiniteDistribution::new(vec![0, 1], vec![1.5, -0.5]).is_err());
    assert!(FiniteDistribution::new(vec![0], vec![0.5, 0.5]).is_err());
    assert!((entropy(&[0.5, 0.5, 0.0]) - 1.0).abs() < 1e-15);
}
