use std::hint::black_box;

use budgetrf::forest::{grow_forest, grow_tree};
use budgetrf::impurity::impurity;
use budgetrf::oracle::{
    gen_redundant, gen_synthetic_1024, opt_max_cost, random_instance, InstanceLimits,
    RedundantConfig, SmallInstance,
};
use budgetrf::rng::{stream, Stream};
use budgetrf::tree::grow_all;
use budgetrf::{BudgetConfig, ClassCounts, GrowConfig, ImpuritySpec};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn impurities(c: &mut Criterion) {
    let counts = ClassCounts(vec![180, 40, 77, 3, 150, 96]);
    let mut g = c.benchmark_group("impurity");
    for spec in [
        ImpuritySpec::pairs(0),
        ImpuritySpec::pairs(8),
        ImpuritySpec::OffsetPairs { alpha: 8 },
        ImpuritySpec::Powers { l: 4 },
    ] {
        g.bench_function(spec.to_string(), |b| {
            b.iter(|| impurity(black_box(&spec), black_box(&counts)))
        });
    }
    g.finish();
}

fn trees(c: &mut Criterion) {
    let (synth, unit) = gen_synthetic_1024();
    c.bench_function("tree/synth1024-exhaustive", |b| {
        b.iter(|| {
            grow_all(
                &synth,
                &ImpuritySpec::pairs(0),
                &unit,
                &GrowConfig::exhaustive(),
                &mut stream(0, Stream::Tree, 0),
            )
            .unwrap()
        })
    });

    let mut g = c.benchmark_group("tree/redundant-random");
    for n in [500usize, 2000, 8000] {
        let (data, costs) = gen_redundant(
            1,
            &RedundantConfig {
                n,
                ..Default::default()
            },
        )
        .unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &data, |b, data| {
            b.iter(|| {
                grow_tree(
                    data,
                    &ImpuritySpec::pairs(4),
                    &costs,
                    &GrowConfig::default(),
                    0,
                    0,
                )
                .unwrap()
            })
        });
    }
    g.finish();
}

fn forests(c: &mut Criterion) {
    let (data, costs) = gen_redundant(
        2,
        &RedundantConfig {
            n: 2000,
            ..Default::default()
        },
    )
    .unwrap();
    let mut g = c.benchmark_group("forest/20-trees");
    g.sample_size(10);
    for threads in [1usize, 4] {
        let config = BudgetConfig {
            max_trees: 20,
            threads,
            ..Default::default()
        };
        g.bench_with_input(
            BenchmarkId::new("threads", threads),
            &config,
            |b, config| {
                b.iter(|| {
                    grow_forest(&data, &data, config, &ImpuritySpec::pairs(2), &costs).unwrap()
                })
            },
        );
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let mut rng = stream(0, Stream::Instance, 0);
    let small: Vec<SmallInstance> = (0..50)
        .map(|_| {
            random_instance(
                &mut rng,
                &InstanceLimits::default(),
                &ImpuritySpec::pairs(0),
            )
            .unwrap()
        })
        .collect();
    c.bench_function("oracle/50-small-instances", |b| {
        b.iter(|| small.iter().map(|i| opt_max_cost(i).unwrap()).sum::<f64>())
    });

    let (synth, unit) = gen_synthetic_1024();
    let inst = SmallInstance::new(synth, unit, ImpuritySpec::pairs(0)).unwrap();
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    g.bench_function("synth1024", |b| b.iter(|| opt_max_cost(&inst).unwrap()));
    g.finish();
}

criterion_group!(benches, impurities, trees, forests, oracle);
criterion_main!(benches);
