//! Microbenchmarks of the exact-arithmetic kernels everything else is
//! built from: the simplex solve, Fourier–Motzkin projection, vertex
//! enumeration, and the minimal-time evaluator. Inputs come from the
//! seeded instance generator, so every run measures the same work.

use criterion::{criterion_group, criterion_main, Criterion};

use polylip::criteria::gen::InstanceGen;
use polylip::poly::convert::hrep_to_vrep;
use polylip::poly::fm::project_out;
use polylip::varfun::{distance, minimal_time};
use polylip::{HPolyhedron, Norm, Rat, VPolytope};

fn sets(seed: u64, count: usize, dim: usize) -> Vec<(HPolyhedron, Vec<Rat>)> {
    let mut gen = InstanceGen::new(seed);
    (0..count)
        .map(|_| gen.set_instance(dim, 6).expect("generator yields a set"))
        .collect()
}

fn lp_solve(c: &mut Criterion) {
    // Each distance evaluation under a polyhedral norm is one linear
    // program over the set plus norm epigraph rows.
    let instances = sets(101, 12, 3);
    let mut gen = InstanceGen::new(102);
    let queries: Vec<Vec<Rat>> = (0..instances.len()).map(|_| gen.point(3)).collect();
    c.bench_function("lp_distance_linf_dim3", |b| {
        b.iter(|| {
            for ((omega, _), x) in instances.iter().zip(&queries) {
                let v = distance(omega, x, Norm::LInf).expect("distance evaluates");
                std::hint::black_box(v);
            }
        })
    });
}

fn fourier_motzkin(c: &mut Criterion) {
    let instances = sets(201, 12, 4);
    c.bench_function("fourier_motzkin_eliminate_two_of_four", |b| {
        b.iter(|| {
            for (p, _) in &instances {
                let q = project_out(p, &[0, 2]).expect("projection exists");
                std::hint::black_box(q);
            }
        })
    });
}

fn vertex_enumeration(c: &mut Criterion) {
    let instances = sets(301, 10, 3);
    c.bench_function("hrep_to_vrep_dim3", |b| {
        b.iter(|| {
            for (p, _) in &instances {
                let v = hrep_to_vrep(p).expect("nonempty generated set");
                std::hint::black_box(v);
            }
        })
    });
}

fn minimal_time_eval(c: &mut Criterion) {
    let mut gen = InstanceGen::new(401);
    let mut cases: Vec<(VPolytope, HPolyhedron, Vec<Rat>)> = Vec::new();
    while cases.len() < 10 {
        let f = gen.polytope(2, 4, 0).expect("polytope");
        let (omega, _) = gen.set_instance(2, 5).expect("target");
        let x = gen.point(2);
        cases.push((f, omega, x));
    }
    c.bench_function("minimal_time_dim2", |b| {
        b.iter(|| {
            for (f, omega, x) in &cases {
                let t = minimal_time(f, omega, x).expect("evaluates");
                std::hint::black_box(t);
            }
        })
    });
}

criterion_group!(
    kernels,
    lp_solve,
    fourier_motzkin,
    vertex_enumeration,
    minimal_time_eval
);
criterion_main!(kernels);
