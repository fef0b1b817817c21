//! Sequential against parallel on the three hot loops.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hjoints::config::{generic_hyperplanes, generically_induced};
use hjoints::extremal::{count_inducing_sets, SimpleHypergraph};
use hjoints::field::Gf61;
use hjoints::hypergraph::Hypergraph;
use hjoints::par::ExecMode;
use hjoints::vanishing::{Handicap, VanishingSetup};
use hjoints::witness::{detect_joints, DEFAULT_TRIALS};

const MODES: [(&str, ExecMode); 2] = [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)];

fn bench(c: &mut Criterion) {
    let k3 = Hypergraph::complete_codim1(3);

    let mut g = c.benchmark_group("count_inducing_sets");
    let host = SimpleHypergraph::complete(14, 2);
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::new(name, "K14"), &mode, |b, &m| b.iter(|| count_inducing_sets(&host, &k3, m)));
    }
    g.finish();

    let fam = generic_hyperplanes::<Gf61>(8, 3, 1).unwrap();
    let cfg = generically_induced(&SimpleHypergraph::complete(8, 2), &k3, &fam).unwrap();
    let mut g = c.benchmark_group("detect_joints");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::new(name, "m8"), &mode, |b, &m| {
            b.iter(|| detect_joints(&k3, &cfg, None, 1_000_000, DEFAULT_TRIALS, 0, m).unwrap())
        });
    }
    g.finish();

    let fam = generic_hyperplanes::<Gf61>(6, 3, 2).unwrap();
    let cfg = generically_induced(&SimpleHypergraph::complete(6, 2), &k3, &fam).unwrap();
    let setup = VanishingSetup::prepare(&k3, &cfg, 10_000, DEFAULT_TRIALS, 0, ExecMode::Parallel).unwrap();
    let alpha = Handicap((0..setup.num_joints() as i64).map(|i| i % 3).collect());
    let mut g = c.benchmark_group("build_ledgers");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::new(name, "m6n12"), &mode, |b, &m| b.iter(|| setup.build_ledgers(&alpha, 12, m).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
