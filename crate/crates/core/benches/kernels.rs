//! Sequential versus parallel execution of the closure and exhaustive-check kernels.

use std::collections::HashMap;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ualg_core::algebra::closure::Limits;
use ualg_core::algebra::equations::check_suite_with;
use ualg_core::algebra::subuniverse::{is_subuniverse, CheckConfig};
use ualg_core::algebra::ProductView;
use ualg_core::constructions::{self, algebras, suites};
use ualg_core::maltsev::build_free_algebra;
use ualg_core::{Exec, Term};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn closure(c: &mut Criterion) {
    let mut group = c.benchmark_group("free_algebra");
    group.sample_size(10);
    let cases = [
        ("lattice_F4", vec![constructions::lattice2()], 4),
        ("nhalf4_F3", algebras::generators_nhalf(4).unwrap(), 3),
    ];
    for (name, gens, rank) in &cases {
        for (mode, exec) in MODES {
            let limits = Limits::default().with_exec(exec);
            group.bench_with_input(BenchmarkId::new(*name, mode), rank, |b, &k| {
                b.iter(|| build_free_algebra(gens, k, limits).unwrap().len())
            });
        }
    }
    group.finish();
}

fn exhaustive(c: &mut Criterion) {
    let mut group = c.benchmark_group("exhaustive_check");
    group.sample_size(10);
    let g = algebras::build_gnu(4).unwrap();
    let view = ProductView::power(&g, 4).unwrap();
    let b = algebras::subuniverse_b_power(4).unwrap();
    for (mode, exec) in MODES {
        let config = CheckConfig {
            exec,
            ..CheckConfig::default()
        };
        group.bench_function(BenchmarkId::new("subuniverse_B4", mode), |bch| {
            bch.iter(|| is_subuniverse(&view, &b, config).unwrap().is_closed())
        });
    }
    let gens = algebras::generators_nhalf(6).unwrap();
    let suite = suites::uu(6).unwrap();
    let binding = HashMap::from([("u".to_string(), Term::projection_app(algebras::U, 8))]);
    for (mode, exec) in MODES {
        group.bench_function(BenchmarkId::new("suite_uu6", mode), |bch| {
            bch.iter(|| check_suite_with(&gens, &suite, &binding, exec).unwrap().holds())
        });
    }
    group.finish();
}

criterion_group!(benches, closure, exhaustive);
criterion_main!(benches);
