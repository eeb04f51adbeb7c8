use std::hint::black_box;

use camlab::displace::point_with_heights;
use camlab::{area, b_of_d, hamiltonian_flow, poisson_bracket, s_of_c, window, CouplingFunction, MomentSystem, SymplecticWeight};
use criterion::{criterion_group, criterion_main, Criterion};

fn areas(c: &mut Criterion) {
    c.bench_function("area(0.5, -0.25)", |b| b.iter(|| area(black_box(0.5), black_box(-0.25)).unwrap()));
    c.bench_function("area near pinched", |b| b.iter(|| area(black_box(0.5), black_box(-0.4999)).unwrap()));
    let s = s_of_c(-0.75).unwrap();
    c.bench_function("b_of_d", |b| b.iter(|| b_of_d(black_box(s), black_box(-0.6)).unwrap()));
}

fn windows(c: &mut Criterion) {
    let f = CouplingFunction::parse("0.5*z1*z2 + 0.1*z1^3").unwrap();
    c.bench_function("window", |b| b.iter(|| window(SymplecticWeight::UNIT, black_box(&f)).unwrap()));
}

fn dynamics(c: &mut Criterion) {
    let r = SymplecticWeight::new(2.0).unwrap();
    let sys = MomentSystem::coupled(r, 0.5);
    let p = point_with_heights(0.3, -0.2, 0.4, 1.1).unwrap();
    c.bench_function("bracket {J, H}", |b| {
        b.iter(|| poisson_bracket(&sys.j_field(), &sys.h_field(), black_box(&p), r).unwrap())
    });
    c.bench_function("flow H, t = 1", |b| {
        b.iter(|| hamiltonian_flow(&sys.h_field(), black_box(&p), r, 1.0, 1e-2).unwrap())
    });
}

criterion_group!(benches, areas, windows, dynamics);
criterion_main!(benches);
