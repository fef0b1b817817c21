use hjoints::cover::{max_packing, rho_star, verify_cover};
use hjoints::hypergraph::{constant_c, full_mask, members, Hypergraph, WeightFunction};
use hjoints::rational::{int, ratio, to_f64, Rational};
use hjoints::Error;
use num_traits::{One, Zero};
use proptest::prelude::*;

/// Distinct nonempty proper edges covering `[d]`, one color each.
fn arb_hypergraph() -> impl Strategy<Value = Hypergraph> {
    (2usize..=6).prop_flat_map(|d| {
        let full = full_mask(d);
        proptest::collection::vec(1u64..full, 1..=7).prop_map(move |mut edges| {
            edges.sort_unstable();
            edges.dedup();
            let covered = edges.iter().fold(0, |a, e| a | e);
            for j in 1..=d {
                if covered >> (j - 1) & 1 == 0 {
                    let e = 1u64 << (j - 1);
                    if !edges.contains(&e) {
                        edges.push(e);
                    }
                }
            }
            let colors = (1..=edges.len()).collect();
            Hypergraph::from_masks(d, edges, colors)
        })
    })
}

fn arb_perm(d: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((1..=d).collect::<Vec<usize>>()).prop_shuffle()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// The constant straight from its product formula, in floating point.
fn constant_oracle(h: &Hypergraph, w: &WeightFunction) -> f64 {
    let sub = w.subtotals(h).unwrap();
    let mut c = factorial(h.d()).powf(to_f64(&w.total()) - 1.0);
    for col in 1..=h.num_colors() {
        let edges = h.edges_of_color(col);
        let k = h.d() - h.edge_size(edges[0]);
        let wb = to_f64(&sub[col - 1]);
        c *= (1.0 / factorial(k)).powf(wb);
        for e in edges {
            let we = to_f64(w.get(e));
            if we > 0.0 {
                c *= (we / wb).powf(we);
            }
        }
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cone_keeps_edges_colors_and_profile(h in arb_hypergraph(), t in 0usize..=3) {
        let c = h.cone(t).unwrap();
        prop_assert_eq!(c.d(), h.d() + t);
        prop_assert_eq!(c.num_edges(), h.num_edges());
        prop_assert_eq!(c.colors(), h.colors());
        for e in 0..c.num_edges() {
            for v in h.d() + 1..=h.d() + t {
                prop_assert!(c.edge(e) >> (v - 1) & 1 == 1);
            }
            prop_assert_eq!(c.edge_size(e), h.edge_size(e) + t);
        }
        let (ph, pc) = (h.validate_uniform_coloring().unwrap(), c.validate_uniform_coloring().unwrap());
        for col in 1..=h.num_colors() {
            prop_assert_eq!(ph.dim(col), pc.dim(col));
        }
    }

    #[test]
    fn cover_matches_its_dual(h in arb_hypergraph()) {
        let sol = rho_star(&h).unwrap();
        let (dual, y) = max_packing(&h).unwrap();
        prop_assert_eq!(&sol.value, &dual);
        prop_assert_eq!(sol.weights.total(), sol.value.clone());
        prop_assert!(verify_cover(&h, &sol.weights).unwrap().iter().all(|s| *s >= Rational::zero()));
        // y is a feasible packing
        for e in 0..h.num_edges() {
            let load = members(h.edge(e)).fold(Rational::zero(), |a, j| a + &y[j - 1]);
            prop_assert!(load <= Rational::one());
        }
        // each vertex needs weight 1 and an edge carries at most max|e| of it
        let max_size = (0..h.num_edges()).map(|e| h.edge_size(e)).max().unwrap();
        prop_assert!(sol.value >= ratio(h.d() as i64, max_size as i64));
    }

    #[test]
    fn cover_is_relabelling_invariant((h, perm) in arb_hypergraph().prop_flat_map(|h| { let d = h.d(); (Just(h), arb_perm(d)) })) {
        prop_assert_eq!(rho_star(&h).unwrap().value, rho_star(&h.relabel(&perm)).unwrap().value);
    }

    #[test]
    fn tight_covers_satisfy_the_dimension_identity(h in arb_hypergraph()) {
        let sol = rho_star(&h).unwrap();
        if sol.tight_vertices.len() == h.d() {
            let sub = sol.weights.subtotals(&h).unwrap();
            let profile = h.validate_uniform_coloring().unwrap();
            let lhs = (1..=h.num_colors())
                .fold(Rational::zero(), |a, c| a + &sub[c - 1] * int((h.d() - profile.dim(c)) as i64));
            prop_assert_eq!(lhs, int(h.d() as i64));
        }
    }

    #[test]
    fn constant_matches_product_formula(h in arb_hypergraph(), scale in 1i64..=3) {
        // the optimal cover scaled up stays covering
        let w0 = rho_star(&h).unwrap().weights;
        let w = WeightFunction::new(w0.weights().iter().map(|x| x * int(scale)).collect()).unwrap();
        let c = constant_c(&h, &w).unwrap();
        let oracle = constant_oracle(&h, &w);
        prop_assert!((c.value - oracle).abs() <= 1e-9 * oracle.max(1.0), "{} vs {}", c.value, oracle);
        prop_assert!((c.log2.to_f64() - oracle.log2()).abs() <= 1e-9);
    }
}

#[test]
fn regular_patterns_satisfy_the_dimension_identity() {
    for d in 3..=7 {
        let h = Hypergraph::complete_codim1(d);
        let w = WeightFunction::uniform(d, ratio(1, d as i64 - 1)).unwrap();
        let sub = w.subtotals(&h).unwrap();
        assert_eq!(&sub[0] * int(d as i64 - 1), int(d as i64));
    }
    let c5 = Hypergraph::cycle(5);
    let w = WeightFunction::uniform(5, ratio(1, 2)).unwrap();
    assert_eq!(&w.subtotals(&c5).unwrap()[0] * int(2), int(5));
}

#[test]
fn profile_examples() {
    assert_eq!(Hypergraph::complete_codim1(3).validate_uniform_coloring().unwrap().dim(1), 1);
    let flats = Hypergraph::new(6, &[vec![1, 2, 3, 4], vec![1, 2, 5, 6], vec![3, 4, 5, 6]], None).unwrap();
    assert_eq!(flats.validate_uniform_coloring().unwrap().dim(1), 2);
    let mixed = Hypergraph::new(3, &[vec![1, 2], vec![1, 2, 3]], Some(&[1, 1]));
    assert!(matches!(mixed.and_then(|h| h.validate_uniform_coloring()), Err(Error::MixedUniformity(1)) | Err(Error::Malformed(_))));
}

#[test]
fn cone_examples() {
    let c = Hypergraph::complete_codim1(3).cone(1).unwrap();
    let mut edges: Vec<Vec<usize>> = (0..3).map(|e| members(c.edge(e)).collect()).collect();
    edges.sort();
    assert_eq!(edges, vec![vec![1, 2, 4], vec![1, 3, 4], vec![2, 3, 4]]);
    let c4 = Hypergraph::complete_codim1(4).cone(1).unwrap();
    assert_eq!((c4.d(), c4.num_edges()), (5, 4));
    assert!((0..4).all(|e| c4.edge_size(e) == 4 && c4.edge(e) >> 4 & 1 == 1));
}

#[test]
fn constant_examples() {
    let k3 = Hypergraph::complete_codim1(3);
    let c = constant_c(&k3, &WeightFunction::uniform(3, ratio(1, 2)).unwrap()).unwrap();
    assert!((c.value - 2f64.sqrt() / 3.0).abs() < 1e-12);
    let two = Hypergraph::new(4, &[vec![1, 2], vec![3, 4]], Some(&[1, 2])).unwrap();
    let c2 = constant_c(&two, &WeightFunction::uniform(2, int(1)).unwrap()).unwrap();
    assert!((c2.value - 6.0).abs() < 1e-12);
    let thin = WeightFunction::uniform(3, ratio(1, 3)).unwrap();
    assert_eq!(constant_c(&k3, &thin).unwrap_err(), Error::NotCovering);
}

#[test]
fn cover_examples() {
    let single = Hypergraph::new(2, &[vec![1, 2]], None);
    // a single edge equal to the vertex set is rejected or solved with value 1
    if let Ok(h) = single {
        assert_eq!(rho_star(&h).unwrap().value, int(1));
    }
    let k3 = Hypergraph::complete_codim1(3);
    let s = verify_cover(&k3, &WeightFunction::uniform(3, ratio(1, 2)).unwrap()).unwrap();
    assert!(s.iter().all(|x| x.is_zero()));
    let s = verify_cover(&k3, &WeightFunction::uniform(3, ratio(1, 3)).unwrap()).unwrap();
    assert!(s.iter().all(|x| *x == ratio(-1, 3)));
    let m = Hypergraph::new(4, &[vec![1, 2], vec![3, 4]], Some(&[1, 2])).unwrap();
    let s = verify_cover(&m, &WeightFunction::new(vec![int(1), ratio(1, 2)]).unwrap()).unwrap();
    assert_eq!(s, vec![int(0), int(0), ratio(-1, 2), ratio(-1, 2)]);
    let iso = Hypergraph::new(3, &[vec![1, 2]], None).unwrap();
    assert_eq!(rho_star(&iso).unwrap_err(), Error::IsolatedVertex(3));
}
