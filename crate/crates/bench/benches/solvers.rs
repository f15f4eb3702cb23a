use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ssg_bench::{chain, random_fixtures, random_game};
use ssg_core::harness::{self, DEFAULT_PERIOD};
use ssg_core::oracle;

fn algorithms(c: &mut Criterion) {
    let game = random_game(3);
    let mut group = c.benchmark_group("algorithms");
    for alg in harness::ALGORITHMS {
        group.bench_with_input(BenchmarkId::from_parameter(alg), alg, |b, alg| {
            b.iter(|| harness::run_algorithm(&game, 2, alg, 0, DEFAULT_PERIOD).unwrap())
        });
    }
    group.finish();
}

fn chains(c: &mut Criterion) {
    let mut group = c.benchmark_group("chain");
    for r in [2, 4, 8] {
        let game = chain(r);
        group.bench_with_input(BenchmarkId::new("ijma", r), &game, |b, g| {
            b.iter(|| harness::run_algorithm(g, 2, "ijma", 0, DEFAULT_PERIOD).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("hk-all", r), &game, |b, g| {
            b.iter(|| harness::run_algorithm(g, 2, "hk-all", 0, DEFAULT_PERIOD).unwrap())
        });
    }
    group.finish();
}

fn oracles(c: &mut Criterion) {
    let fixtures = random_fixtures(4);
    c.bench_function("oracle_optimal", |b| {
        b.iter(|| {
            for inst in &fixtures {
                oracle::oracle_optimal(&inst.game, oracle::DEFAULT_CAP).unwrap();
            }
        })
    });
}

criterion_group!(benches, algorithms, chains, oracles);
criterion_main!(benches);
