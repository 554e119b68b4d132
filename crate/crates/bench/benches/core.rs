use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use glsnormal::constructor::{horizon, DEFAULT_N_CAP};
use glsnormal::discrepancy::BRUTE_FORCE_CAP;
use glsnormal::normality::normality_report;
use glsnormal::rational::survey_family;
use glsnormal::{
    brute_force_discrepancy, choose_cutoffs, extreme_discrepancy, z_digits, GlsSpec, PointSeq,
    PointSet,
};

fn discrepancy(c: &mut Criterion) {
    let seq = PointSeq::van_der_corput(3).unwrap();
    let mut group = c.benchmark_group("discrepancy");
    for n in [1_000u64, 10_000] {
        let ps = PointSet::new(seq.exact_prefix(n).unwrap()).unwrap();
        group.bench_with_input(BenchmarkId::new("extreme", n), &ps, |b, ps| {
            b.iter(|| extreme_discrepancy(black_box(ps)))
        });
    }
    let small = PointSet::new(seq.exact_prefix(200).unwrap()).unwrap();
    group.bench_function("brute_force/200", |b| {
        b.iter(|| brute_force_discrepancy(black_box(&small), BRUTE_FORCE_CAP).unwrap())
    });
    group.finish();
}

fn construction(c: &mut Criterion) {
    let seq = PointSeq::van_der_corput(2).unwrap();
    let binary = GlsSpec::b_adic(2).unwrap();
    let lueroth = GlsSpec::lueroth_classic();
    let mut group = c.benchmark_group("construction");
    group.sample_size(10);
    for (name, spec) in [("binary", &binary), ("lueroth", &lueroth)] {
        group.bench_function(BenchmarkId::new("choose_cutoffs_L6", name), |b| {
            b.iter(|| choose_cutoffs(spec, &seq, 6, horizon(4), DEFAULT_N_CAP).unwrap())
        });
    }
    let schedule = choose_cutoffs(&binary, &seq, 8, horizon(4), DEFAULT_N_CAP).unwrap();
    group.bench_function("z_digits/binary/20000", |b| {
        b.iter(|| z_digits(&binary, &seq, &schedule, 20_000).unwrap())
    });
    group.finish();
}

fn analysis(c: &mut Criterion) {
    let binary = GlsSpec::b_adic(2).unwrap();
    let seq = PointSeq::van_der_corput(2).unwrap();
    let schedule = choose_cutoffs(&binary, &seq, 8, horizon(4), DEFAULT_N_CAP).unwrap();
    let digits = z_digits(&binary, &seq, &schedule, 30_000).unwrap().digits;
    let mut group = c.benchmark_group("analysis");
    group.bench_function("normality_report/r3/30000", |b| {
        b.iter(|| normality_report(black_box(&digits), &binary, 3, None).unwrap())
    });
    let lueroth = GlsSpec::lueroth_classic();
    group.sample_size(10);
    group.bench_function("survey/3^6", |b| {
        b.iter(|| survey_family(&lueroth, 3, 6, false).unwrap())
    });
    group.finish();
}

criterion_group!(benches, discrepancy, construction, analysis);
criterion_main!(benches);
