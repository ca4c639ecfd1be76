use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use canonlab::multiplication::mult_map;
use canonlab::verifier::corpus::binary_curve;
use canonlab::verifier::{run_corpus, CorpusSpec, Statement, VerifyConfig};
use canonlab::{sections_basis, BundleSpec, Execution};

const MODES: [Execution; 2] = [Execution::Sequential, Execution::Parallel];

fn multiplication(c: &mut Criterion) {
    let x = Arc::new(binary_curve(7, 0).unwrap());
    let w = sections_basis(&BundleSpec::canonical_power(&x, 1)).unwrap();
    let w3 = sections_basis(&BundleSpec::canonical_power(&x, 3)).unwrap();
    let mut group = c.benchmark_group("mu(omega, omega^3), binary g=7");
    for exec in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| mult_map(black_box(&w), black_box(&w3), exec).unwrap().rank())
        });
    }
    group.finish();
}

fn corpus(c: &mut Criterion) {
    let specs = [CorpusSpec::Binary { genus_min: 3, genus_max: 6 }];
    let statements = [Statement::ThmMain, Statement::PropKge4, Statement::Lem3conn];
    let mut group = c.benchmark_group("run_corpus, binary g=3..6");
    group.sample_size(10);
    for exec in MODES {
        let cfg = VerifyConfig { exec, ..VerifyConfig::default() };
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &cfg, |b, cfg| {
            b.iter(|| run_corpus(&specs, &statements, cfg).unwrap().summary.confirmed)
        });
    }
    group.finish();
}

criterion_group!(benches, multiplication, corpus);
criterion_main!(benches);
