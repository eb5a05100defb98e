use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use nnet_bench::{circular, euclidean, SIZES};
use nnet_core::weights::{lambda_formula, nnls_fit};
use nnet_core::{run_neighbor_net, Rational, Scalar, WeightingScheme};

fn agglomeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("neighbor_net");
    for n in SIZES {
        let d = euclidean(n);
        for (name, scheme) in [
            ("balanced_tsp", WeightingScheme::BalancedTsp),
            ("balanced_tree", WeightingScheme::BALANCED_TREE),
            ("original", WeightingScheme::OriginalBm),
        ] {
            group.bench_with_input(BenchmarkId::new(name, n), &d, |b, d| {
                b.iter(|| run_neighbor_net(black_box(d), scheme).unwrap())
            });
        }
    }
    let exact = euclidean(20).map(|v| Rational::from_f64(*v));
    group.bench_function("balanced_tsp_rational/20", |b| {
        b.iter(|| run_neighbor_net(black_box(&exact), WeightingScheme::BalancedTsp).unwrap())
    });
    group.finish();
}

fn estimation(c: &mut Criterion) {
    let mut group = c.benchmark_group("split_weights");
    for n in [10, 20] {
        let d = circular(n);
        let ordering = run_neighbor_net(&d, WeightingScheme::BalancedTsp).unwrap().ordering;
        group.bench_with_input(BenchmarkId::new("formula", n), &d, |b, d| {
            b.iter(|| lambda_formula(black_box(d), &ordering).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("nnls", n), &d, |b, d| {
            b.iter(|| nnls_fit(black_box(d), &ordering, None).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, agglomeration, estimation);
criterion_main!(benches);
