use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use lore_bench::fixture;
use lore_core::{budgeted_step, full_step, DynamicsConfig, EvalCounter};

fn steps(c: &mut Criterion) {
    let cfg = DynamicsConfig::default();
    let mut group = c.benchmark_group("step");
    for n in [500, 1000] {
        let f = fixture(n, 0.05, 0.08);
        let active = f.router.current().unwrap();
        group.bench_with_input(BenchmarkId::new("full", n), &f, |b, f| {
            b.iter(|| full_step(black_box(&f.state), &f.graph, &cfg, &mut EvalCounter::default()))
        });
        group.bench_with_input(BenchmarkId::new("budgeted", n), &f, |b, f| {
            b.iter(|| {
                budgeted_step(black_box(&f.state), &f.graph, active, &cfg, None, &mut EvalCounter::default())
                    .unwrap()
            })
        });
    }
    group.finish();
}

fn refresh(c: &mut Criterion) {
    let mut group = c.benchmark_group("refresh");
    for n in [500, 1000] {
        let mut f = fixture(n, 0.05, 0.08);
        group.bench_function(BenchmarkId::new("lore", n), |b| {
            b.iter(|| {
                f.router
                    .route(black_box(&f.state), &f.graph, 10, &mut EvalCounter::default())
                    .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, steps, refresh);
criterion_main!(benches);
