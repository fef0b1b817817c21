use std::collections::HashSet;

use hjoints::config::{generic_hyperplanes, generically_induced, JointsConfiguration};
use hjoints::extremal::{binom, SimpleHypergraph};
use hjoints::field::{Field, Gf61};
use hjoints::flat::Flat;
use hjoints::hypergraph::{Hypergraph, WeightFunction};
use hjoints::linalg::rank;
use hjoints::par::ExecMode;
use hjoints::rational::{int, ratio, Rational};
use hjoints::vanishing::{
    assemble_g_p, exponents_of_degree, functional_row, functional_table, hasse_derivative, lw_step_check,
    monotonicity_check, run_engine, shift_invariance_check, Chart, Handicap, MonomialIndex, Poly, VanishingSetup,
};
use hjoints::witness::DEFAULT_TRIALS;
use hjoints::Error;
use proptest::prelude::*;

fn q(v: i64) -> Rational {
    Rational::from_i64(v)
}

fn axis_lines(d: usize, at: &[Rational]) -> Vec<Flat<Rational>> {
    (0..d).map(|i| Flat::new(at.to_vec(), vec![(0..d).map(|j| q((i == j) as i64)).collect()])).collect()
}

#[test]
fn single_joint_takes_every_functional() {
    let h = Hypergraph::complete_codim1(3);
    let o = vec![q(0); 3];
    let cfg = JointsConfiguration::new(3, vec![axis_lines(3, &o)], vec![o]);
    let setup = VanishingSetup::prepare(&h, &cfg, 100, DEFAULT_TRIALS, 0, ExecMode::Sequential).unwrap();
    let w = WeightFunction::uniform(3, ratio(1, 2)).unwrap();
    for n in 0..=5 {
        let run = run_engine(&setup, &w, &Handicap::zero(1), n, ExecMode::Sequential).unwrap();
        for l in &run.ledgers {
            assert_eq!(l.b(0), Some(binom(n as u64 + 1, 1) as usize));
        }
        assert_eq!(run.param.sum, binom(n as u64 + 3, 3) as u128);
        assert!(run.lw[0].slack >= -1e-12);
    }
}

#[test]
fn two_joints_on_a_line() {
    // singleton edges {1}, {2} of one color: lines y = 0, x = 0, x = 1
    let h = Hypergraph::new(2, &[vec![1], vec![2]], None).unwrap();
    let horizontal = Flat::new(vec![q(0), q(0)], vec![vec![q(1), q(0)]]);
    let v0 = Flat::new(vec![q(0), q(0)], vec![vec![q(0), q(1)]]);
    let v1 = Flat::new(vec![q(1), q(0)], vec![vec![q(0), q(1)]]);
    let cfg = JointsConfiguration::new(2, vec![vec![horizontal.clone(), v0, v1]], vec![vec![q(0), q(0)], vec![q(1), q(0)]]);
    let setup = VanishingSetup::prepare(&h, &cfg, 100, DEFAULT_TRIALS, 0, ExecMode::Sequential).unwrap();
    assert_eq!(setup.num_joints(), 2);
    let line = setup.flats.iter().position(|f| *f == horizontal).unwrap();
    let w = WeightFunction::uniform(2, int(1)).unwrap();
    for n in 1..=6 {
        for a in [Handicap(vec![0, 0]), Handicap(vec![0, 2]), Handicap(vec![3, 0])] {
            let run = run_engine(&setup, &w, &a, n, ExecMode::Sequential).unwrap();
            let l = &run.ledgers[line];
            assert_eq!(l.total(), n + 1);
            assert_eq!(run.flat_sums.iter().filter(|(s, t)| s != t).count(), 0);
            assert!(run.param.sum >= binom(n as u64 + 2, 2) as u128);
        }
        // with no handicap the shared line splits as evenly as it can
        let run = run_engine(&setup, &w, &Handicap::zero(2), n, ExecMode::Sequential).unwrap();
        let l = &run.ledgers[line];
        let (b0, b1) = (l.b(0).unwrap(), l.b(1).unwrap());
        assert!(b0.abs_diff(b1) <= 1, "{b0} {b1}");
    }
}

#[test]
fn functional_rows_expand_translations() {
    // on the line x = p + u the functional for u^r reads C(j, r) p^{j - r}
    let n = 6;
    for p in [-2i64, 0, 3] {
        let line = Flat::new(vec![q(0)], vec![vec![q(1)]]);
        let chart = Chart { point: vec![q(p)], columns: vec![vec![q(1)]] };
        let index = MonomialIndex::new(1, n);
        for r in 0..=n as u32 {
            let row = functional_row(&line, &chart, &[r], n).unwrap();
            for (col, x) in row.iter().enumerate() {
                let j = index.monomial(col)[0];
                let expect = if j < r { q(0) } else { q(binom(j as u64, r as u64) as i64 * p.pow(j - r)) };
                assert_eq!(*x, expect, "p {p} r {r} j {j}");
            }
        }
    }
}

#[test]
fn functional_tables_are_square_and_invertible() {
    let plane = Flat::new(vec![q(1), q(2), q(3)], vec![vec![q(1), q(0), q(2)], vec![q(0), q(1), q(-1)]]);
    let p = vec![q(4), q(7), q(4)];
    assert!(plane.contains(&p));
    let chart = Chart { point: p, columns: vec![vec![q(1), q(1), q(1)], vec![q(2), q(-1), q(5)]] };
    assert!(chart.is_valid_for(&plane));
    for n in 0..=4 {
        let index = MonomialIndex::new(2, n);
        let t = functional_table(&plane, &chart, &index).unwrap();
        assert_eq!(t.len(), binom(n as u64 + 2, 2) as usize);
        assert_eq!(rank(&t), t.len());
    }
    let off = Chart { point: vec![q(0); 3], columns: chart.columns.clone() };
    assert!(functional_table(&plane, &off, &MonomialIndex::new(2, 1)).is_err());
}

fn arb_poly() -> impl Strategy<Value = Poly<Rational>> {
    proptest::collection::vec(((0u32..5, 0u32..5), -5i64..=5), 0..6)
        .prop_map(|t| Poly::from_terms(2, t.into_iter().map(|((a, b), c)| (vec![a, b], q(c)))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hasse_derivatives_compose(f in arb_poly(), a in (0u32..3, 0u32..3), b in (0u32..3, 0u32..3)) {
        let ab = vec![a.0 + b.0, a.1 + b.1];
        let lhs = hasse_derivative(&hasse_derivative(&f, &[a.0, a.1]), &[b.0, b.1]);
        let scale = q((binom(ab[0] as u64, a.0 as u64) * binom(ab[1] as u64, a.1 as u64)) as i64);
        let rhs = hasse_derivative(&f, &ab);
        let scaled = Poly::from_terms(2, rhs.terms().map(|(e, c)| (e.clone(), c.clone() * scale.clone())));
        prop_assert_eq!(lhs, scaled);
    }

    #[test]
    fn assembly_matches_brute_force(masks in proptest::collection::vec(any::<u8>(), 3), n in 0usize..=3) {
        // K_3 edges leave one coordinate each: G_{p,e} is a set of orders in one variable
        let h = Hypergraph::complete_codim1(3);
        let per_edge: Vec<Vec<Vec<u32>>> =
            masks.iter().map(|m| (0..=n as u32).filter(|r| m >> r & 1 == 1).map(|r| vec![r]).collect()).collect();
        let got: HashSet<Vec<u32>> = assemble_g_p(&h, &per_edge, n).into_iter().collect();
        let mut want = HashSet::new();
        for x in 0..=n as u32 {
            for y in 0..=n as u32 {
                for z in 0..=n as u32 {
                    if (x + y + z) as usize > n {
                        continue;
                    }
                    let g = [x, y, z];
                    let ok = (0..3).all(|e| {
                        let off: Vec<u32> = (0..3).filter(|j| h.edge(e) >> j & 1 == 0).map(|j| g[j]).collect();
                        per_edge[e].contains(&off)
                    });
                    if ok {
                        want.insert(g.to_vec());
                    }
                }
            }
        }
        prop_assert_eq!(got, want);
    }
}

#[test]
fn hasse_examples() {
    let f = Poly::from_terms(2, [(vec![2, 1], q(1)), (vec![0, 3], q(2))]);
    assert_eq!(hasse_derivative(&f, &[1, 1]), Poly::from_terms(2, [(vec![1, 0], q(2))]));
    assert_eq!(hasse_derivative(&f, &[0, 2]), Poly::from_terms(2, [(vec![0, 1], q(6))]));
    assert_eq!(exponents_of_degree(3, 1), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
}

#[test]
fn loomis_whitney_step_needs_a_cover() {
    let h = Hypergraph::complete_codim1(3);
    let thin = WeightFunction::uniform(3, ratio(1, 3)).unwrap();
    assert_eq!(lw_step_check(&h, &thin, 1, &[1, 1, 1], 2).unwrap_err(), Error::NotCovering);
    let w = WeightFunction::uniform(3, ratio(1, 2)).unwrap();
    assert!(matches!(lw_step_check(&h, &w, 1, &[1, 1], 2), Err(Error::SizeMismatch(_))));
    // all of G_p full: both sides equal 1
    let full = lw_step_check(&h, &w, 27, &[3, 3, 3], 2).unwrap();
    assert!((full.lhs - 1.0).abs() < 1e-12 && (full.rhs - 1.0).abs() < 1e-12);
}

fn generic_setup() -> VanishingSetup<Gf61> {
    let h = Hypergraph::complete_codim1(3);
    let fam = generic_hyperplanes::<Gf61>(4, 3, 7).unwrap();
    let cfg = generically_induced(&SimpleHypergraph::complete(4, 2), &h, &fam).unwrap();
    VanishingSetup::prepare(&h, &cfg, 1000, DEFAULT_TRIALS, 0, ExecMode::Parallel).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn engine_properties(alpha in proptest::collection::vec(-6i64..=6, 4), n in 1usize..=4, c in -4i64..=4, bump in 0usize..4) {
        let setup = generic_setup();
        let w = WeightFunction::uniform(3, ratio(1, 2)).unwrap();
        let a = Handicap(alpha);
        let run = run_engine(&setup, &w, &a, n, ExecMode::Parallel).unwrap();
        prop_assert!(run.flat_sums.iter().all(|(s, t)| s == t));
        prop_assert!(run.param.slack >= 0);
        prop_assert!(run.lw.iter().all(|x| x.slack >= -1e-9));
        let again = setup.build_ledgers(&a, n, ExecMode::Sequential).unwrap();
        prop_assert!(again.iter().zip(&run.ledgers).all(|(x, y)| x.digest() == y.digest()));
        prop_assert!(shift_invariance_check(&setup, &a, c, n, ExecMode::Parallel).unwrap());
        let mut raised = a.clone();
        raised.0[bump] += 2;
        prop_assert_eq!(monotonicity_check(&setup, &a, &raised, n, ExecMode::Parallel).unwrap().violations, 0);
    }
}
