//! Parallel versus sequential mapping on the two heaviest workloads: minors of
//! the symbolic boundary measurement and DT periodicity on random configurations.

use std::collections::BTreeMap;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use dtlab::arith::det_cofactor;
use dtlab::bipartite::build_gamma0;
use dtlab::configuration::{subsets, Configuration, Genericity};
use dtlab::orientation::boundary_measurement;
use dtlab::par;
use dtlab::poly::SparsePoly;
use dtlab::verify::trial_rng;

fn minors(c: &mut Criterion) {
    let (m, n) = (3, 6);
    let g = build_gamma0(m, n).unwrap();
    let an = g.analyze().unwrap();
    let vals: BTreeMap<String, SparsePoly> = an.faces.iter().map(|f| (f.name.clone(), SparsePoly::var(&f.name))).collect();
    let mat = boundary_measurement(&g, &vals).unwrap();
    let sets = subsets(n, m);
    let minor = |s: &Vec<usize>| {
        let rows: Vec<Vec<SparsePoly>> = (0..m).map(|r| s.iter().map(|&k| mat[r][k - 1].clone()).collect()).collect();
        det_cofactor(&rows)
    };
    let mut group = c.benchmark_group("symbolic minors (3,6)");
    group.bench_function(BenchmarkId::new("map", "parallel feature"), |b| b.iter(|| par::map(&sets, minor)));
    group.bench_function(BenchmarkId::new("map_seq", "sequential"), |b| b.iter(|| par::map_seq(&sets, minor)));
    group.finish();
}

fn periodicity(c: &mut Criterion) {
    let (m, n) = (3, 7);
    let configs: Vec<Configuration> =
        (0..16).map(|k| Configuration::random(m, n, Genericity::Total, &mut trial_rng(1, k))).collect();
    let period = |c: &Configuration| {
        let mut x = c.clone();
        for _ in 0..2 * n {
            x = x.dt().unwrap().normalized();
        }
        x.equal_projective(c)
    };
    let mut group = c.benchmark_group("DT^2n on 16 configurations (3,7)");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("map", "parallel feature"), |b| b.iter(|| par::map(&configs, period)));
    group.bench_function(BenchmarkId::new("map_seq", "sequential"), |b| b.iter(|| par::map_seq(&configs, period)));
    group.finish();
}

criterion_group!(benches, minors, periodicity);
criterion_main!(benches);
