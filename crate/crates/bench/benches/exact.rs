use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qnk::contfrac::{self, Ncf, Slope};
use qnk::{charvar, zlinalg};
use std::hint::black_box;

fn bench_expand(c: &mut Criterion) {
    let mut group = c.benchmark_group("contfrac_expand");
    for n in [200i64, 10_007, 1_000_003] {
        let s = Slope::new(n, n / 3 + 1).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &s, |b, s| b.iter(|| contfrac::expand(black_box(s))));
    }
    group.finish();
}

fn bench_smith(c: &mut Criterion) {
    let mut group = c.benchmark_group("smith_invariants");
    for g in [2usize, 4, 8, 16] {
        let entries: Vec<i64> = (0..g).map(|i| 2 + (i as i64 * 7) % 5).collect();
        let m = zlinalg::dmatrix(Ncf::from_i64(&entries).unwrap().entries()).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(g), &m, |b, m| {
            b.iter(|| zlinalg::smith_invariants(black_box(m)))
        });
    }
    group.finish();
}

fn bench_d_inverse(c: &mut Criterion) {
    let mut group = c.benchmark_group("d_inverse");
    for g in [2usize, 8, 16] {
        let f = Ncf::from_i64(&vec![3; g]).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(g), &f, |b, f| b.iter(|| zlinalg::d_inverse(black_box(f))));
    }
    group.finish();
}

fn bench_charvar(c: &mut Criterion) {
    let mut group = c.benchmark_group("charvar_report");
    for e in [vec![3, 3], vec![3, 2, 4, 2, 2, 2, 5], vec![2; 8]] {
        let f = Ncf::from_i64(&e).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(format!("{e:?}")), &f, |b, f| {
            b.iter(|| charvar::charvar_report(black_box(f)))
        });
    }
    group.bench_function("descent_exact_[2;6]", |b| {
        let f = Ncf::from_i64(&[2; 6]).unwrap();
        b.iter(|| charvar::descent_exact(black_box(&f)))
    });
    group.finish();
}

criterion_group!(benches, bench_expand, bench_smith, bench_d_inverse, bench_charvar);
criterion_main!(benches);
