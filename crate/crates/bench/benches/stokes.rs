use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dkz_core::formal::CoverPoint;
use dkz_core::*;
use std::hint::black_box;

fn ci(x: f64) -> Complex {
    Complex::new(0.0, x)
}

fn params(u: Vec<Complex>, kappa: f64) -> DkzParams {
    DkzParams::new(u, Complex::from(kappa), false).unwrap()
}

fn formal(c: &mut Criterion) {
    let ode = params(vec![ci(1.), ci(-1.)], 3.0).two_point_ode().unwrap();
    let mut g = c.benchmark_group("formal_series");
    for order in [8usize, 32, 64] {
        g.bench_with_input(BenchmarkId::from_parameter(order), &order, |b, &k| b.iter(|| formal_series(black_box(&ode), k).unwrap()));
    }
    g.finish();
    let fs = formal_series(&ode, 64).unwrap();
    c.bench_function("formal_evaluate_m2", |b| b.iter(|| fs.evaluate(black_box(CoverPoint::new(40.0, 0.3).unwrap()), 20).unwrap()));
}

fn stokes(c: &mut Criterion) {
    let mut g = c.benchmark_group("stokes_matrices");
    g.sample_size(10);
    for (name, p) in [
        ("m2", params(vec![ci(1.), ci(-1.)], 3.0)),
        ("m3", params(vec![ci(1.), ci(0.3), ci(-0.8)], 2.7)),
    ] {
        let ode = p.two_point_ode().unwrap();
        g.bench_function(name, |b| b.iter(|| stokes_matrices(black_box(&ode), &StokesOptions::default()).unwrap()));
    }
    g.finish();
}

fn braid(c: &mut Criterion) {
    let p = params(vec![ci(1.), ci(-1.)], 3.0);
    let sd = stokes_matrices(&p.two_point_ode().unwrap(), &StokesOptions::default()).unwrap();
    let r = sd.r_plus.clone().unwrap();
    c.bench_function("ybe_residual_m2", |b| b.iter(|| ybe_residual(black_box(&r), 2).unwrap()));
    let mut g = c.benchmark_group("braid_relations");
    for n in [3usize, 4, 6] {
        let rep = build_representation(&r, TensorSpace::new(2, n).unwrap()).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &rep, |b, rep| b.iter(|| braid_relation_residuals(black_box(rep)).unwrap()));
    }
    g.finish();
}

fn holonomy(c: &mut Criterion) {
    let p = params(vec![ci(1.), ci(-1.)], 3.0);
    let sd = stokes_matrices(&p.two_point_ode().unwrap(), &StokesOptions::default()).unwrap();
    let mut g = c.benchmark_group("holonomy_n3");
    g.sample_size(10);
    for s in [3.0, 12.0, 48.0] {
        g.bench_with_input(BenchmarkId::from_parameter(s), &s, |b, &s| {
            b.iter(|| holonomy_factorization_test(&p, 3, 1, black_box(s), &sd, &ToleranceSpec::default()).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, formal, stokes, braid, holonomy);
criterion_main!(benches);
