use hjoints::extremal::{
    binom, colex_family, count_inducing_sets, k_subsets, kruskal_katona_count, lovasz_bound,
    partial_shadow_check, SimpleHypergraph,
};
use hjoints::hypergraph::{Hypergraph, WeightFunction, constant_c};
use hjoints::par::ExecMode;
use hjoints::rational::ratio;
use hjoints::search::{canonical_form, search_m, SearchConfig, SearchMode};
use proptest::prelude::*;

fn arb_host(k: usize, max_v: usize) -> impl Strategy<Value = SimpleHypergraph> {
    (k + 1..=max_v).prop_flat_map(move |v| {
        let all: Vec<u64> = k_subsets(v, k).collect();
        proptest::sample::subsequence(all.clone(), 0..=all.len())
            .prop_map(move |edges| SimpleHypergraph::new(v, edges).unwrap())
    })
}

fn with_perm(g: SimpleHypergraph) -> impl Strategy<Value = (SimpleHypergraph, Vec<usize>)> {
    let n = g.vertices();
    (Just(g), Just((1..=n).collect::<Vec<usize>>()).prop_shuffle())
}

/// Triangles by brute force over vertex triples.
fn triangles(g: &SimpleHypergraph) -> u64 {
    let has = |a: usize, b: usize| g.edges().contains(&(1u64 << (a - 1) | 1u64 << (b - 1)));
    let n = g.vertices();
    let mut c = 0;
    for a in 1..=n {
        for b in a + 1..=n {
            for d in b + 1..=n {
                c += (has(a, b) && has(a, d) && has(b, d)) as u64;
            }
        }
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn counts_ignore_labels((g, perm) in arb_host(2, 8).prop_flat_map(with_perm)) {
        let k3 = Hypergraph::complete_codim1(3);
        let moved = g.relabel(&perm);
        prop_assert_eq!(count_inducing_sets(&g, &k3, ExecMode::Parallel), count_inducing_sets(&moved, &k3, ExecMode::Sequential));
        prop_assert_eq!(canonical_form(&g), canonical_form(&moved));
    }

    #[test]
    fn triangle_count_matches_brute_force_and_the_constant(g in arb_host(2, 8)) {
        let k3 = Hypergraph::complete_codim1(3);
        let count = count_inducing_sets(&g, &k3, ExecMode::Parallel);
        prop_assert_eq!(count, triangles(&g));
        let c = constant_c(&k3, &WeightFunction::uniform(3, ratio(1, 2)).unwrap()).unwrap().value;
        prop_assert!(count as f64 <= c * (g.num_edges() as f64).powf(1.5) + 1e-9);
    }

    #[test]
    fn shadow_bound_holds(t in 0usize..=2, seed in any::<u64>()) {
        // random (2+t)-uniform host on up to 7 vertices
        let k = 2 + t;
        let all: Vec<u64> = k_subsets(7, k).collect();
        let edges: Vec<u64> = all.iter().enumerate().filter(|(i, _)| (seed >> (i % 64)) & 1 == 1).map(|(_, &e)| e).collect();
        let host = SimpleHypergraph::new(7, edges).unwrap();
        let r = partial_shadow_check(&host, 3, t, ExecMode::Parallel).unwrap();
        prop_assert!(r.pass, "{:?}", r);
        prop_assert_eq!(r.bound, lovasz_bound(host.num_edges() as u64, 3).bound);
    }
}

#[test]
fn kruskal_katona_identity() {
    for d in 3..=4 {
        for x in d..=d + 6 {
            let n = binom(x as u64, d as u64 - 1);
            assert_eq!(kruskal_katona_count(n as usize, d), binom(x as u64, d as u64), "x {x} d {d}");
            let lb = lovasz_bound(n, d);
            assert!((lb.x - x as f64).abs() < 1e-6);
            assert!((lb.bound - binom(x as u64, d as u64) as f64).abs() < 1e-6 * lb.bound.max(1.0));
        }
    }
}

#[test]
fn colex_prefixes_meet_the_bound() {
    for n in 1..=12 {
        let fam = colex_family(2, n);
        let r0 = partial_shadow_check(&fam, 3, 0, ExecMode::Sequential).unwrap();
        assert!(r0.pass);
        assert_eq!(r0.count, kruskal_katona_count(n, 3));
    }
    assert_eq!(colex_family(2, 4).edges(), &[0b0011, 0b0101, 0b0110, 0b1001]);
}

#[test]
fn exhaustive_search_agrees_with_colex_on_small_cases() {
    let k3 = Hypergraph::complete_codim1(3);
    for n in [3usize, 4, 6] {
        let cfg = SearchConfig { mode: SearchMode::Exhaustive, ..SearchConfig::default() };
        let r = search_m(&k3, n, 5, &cfg).unwrap();
        assert!(r.certified);
        assert_eq!(r.best_count, kruskal_katona_count(n, 3));
        assert_eq!(count_inducing_sets(&r.best_host, &k3, ExecMode::Sequential), r.best_count);
    }
}
