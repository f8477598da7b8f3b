use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use weilmc::gds::Gds;
use weilmc::hodge::HodgePackage;
use weilmc::mc::{exp_f_neumann, solve_mc};
use weilmc::models::{cartan, transgress};
use weilmc::LieAlgebra;
use weilmc_bench::{package, solved, ALGEBRAS};

fn hodge(c: &mut Criterion) {
    let mut group = c.benchmark_group("hodge_package");
    group.sample_size(10);
    for name in ALGEBRAS {
        let g = LieAlgebra::builtin(name).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(name), &g, |b, g| b.iter(|| HodgePackage::build(g).unwrap()));
    }
    group.finish();
}

fn solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_mc");
    for name in ALGEBRAS {
        let pkg = package(name);
        group.bench_with_input(BenchmarkId::from_parameter(name), &pkg, |b, pkg| b.iter(|| solve_mc(pkg).unwrap()));
    }
    group.finish();
}

fn neumann(c: &mut Criterion) {
    let mut group = c.benchmark_group("exp_f_neumann");
    for name in ALGEBRAS {
        let pkg = package(name);
        group.bench_with_input(BenchmarkId::from_parameter(name), &pkg, |b, pkg| b.iter(|| exp_f_neumann(pkg)));
    }
    group.finish();
}

fn models(c: &mut Criterion) {
    let mut group = c.benchmark_group("models");
    group.sample_size(10);
    let (pkg, mc) = solved("su2");
    let m = Gds::wedge_dual(pkg.algebra());
    for cutoff in [4, 6, 8] {
        group.bench_with_input(BenchmarkId::new("twist_su2", cutoff), &cutoff, |b, &d| {
            b.iter(|| cartan::twist_map(&m, &mc, &pkg, d).unwrap())
        });
    }
    let (pkg, mc) = solved("sl3");
    group.bench_function("transgress_sl3_d3", |b| b.iter(|| transgress::transgress(&mc, &pkg, 3).unwrap()));
    group.finish();
}

criterion_group!(benches, hodge, solve, neumann, models);
criterion_main!(benches);
