use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pdo_core::diffop::{pairwise_commutators, parse_operator, ParseOptions};
use pdo_core::schur::{check_stability, glued_pair, SchurConfig};
use pdo_core::spectral::{graded_dims, GradedConfig, RingPresentation};
use pdo_core::{Strategy, Window};

const STRATEGIES: [(&str, Strategy); 2] = [
    ("sequential", Strategy::Sequential),
    ("parallel", Strategy::Parallel),
];

fn commutators(c: &mut Criterion) {
    let ops: Vec<_> = [
        "d2^2 - 2*inv((1-x2)^2)*E",
        "d1*d2 + inv(1-x2)*E*d1",
        "d2^3 - 3*inv((1-x2)^2)*E*d2 - 3*inv((1-x2)^3)*E",
    ]
    .iter()
    .map(|s| {
        parse_operator(
            s,
            ParseOptions {
                nvars: Some(2),
                precision: 8,
            },
        )
        .unwrap()
    })
    .collect();
    let mut g = c.benchmark_group("commutators");
    g.sample_size(10);
    for (name, s) in STRATEGIES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pairwise_commutators(&ops, s))
        });
    }
    g.finish();
}

fn filtration(c: &mut Criterion) {
    let gens = ["d2", "d1*d2 + d1^2", "d1^3 + d2^3"]
        .iter()
        .map(|s| {
            parse_operator(
                s,
                ParseOptions {
                    nvars: Some(2),
                    precision: 8,
                },
            )
            .unwrap()
        })
        .collect();
    let ring = RingPresentation::new(gens, Strategy::Sequential).unwrap();
    let mut g = c.benchmark_group("graded_dims");
    g.sample_size(10);
    for (name, s) in STRATEGIES {
        let cfg = GradedConfig {
            mmax: 30,
            strategy: s,
            ..GradedConfig::default()
        };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| graded_dims(&ring, &cfg).unwrap())
        });
    }
    g.finish();
}

fn stability(c: &mut Criterion) {
    let (a, w) = glued_pair(Window::default()).unwrap();
    let mut g = c.benchmark_group("schur_stability");
    g.sample_size(10);
    for (name, s) in STRATEGIES {
        let cfg = SchurConfig {
            strategy: s,
            ..SchurConfig::default()
        };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| check_stability(&a, &w, 16, &cfg).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, commutators, filtration, stability);
criterion_main!(benches);
