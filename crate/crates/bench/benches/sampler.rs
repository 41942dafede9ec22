use criterion::{criterion_group, criterion_main, Criterion, Throughput};

use csgeom_core::sampler::{mc_volume, sample_in_ball};
use csgeom_core::space::{DomainSpec, SpaceSpec};
use csgeom_core::volume::BallQuery;
use csgeom_core::McConfig;

fn double_cone() -> SpaceSpec {
    SpaceSpec::new(vec![
        DomainSpec {
            name: "plane".into(),
            dimensions: vec!["d1".into(), "d2".into()],
        },
        DomainSpec {
            name: "axis".into(),
            dimensions: vec!["d3".into()],
        },
    ])
    .unwrap()
}

fn bench_mc_volume(c: &mut Criterion) {
    let spec = double_cone();
    let mut group = c.benchmark_group("mc_volume");
    let trials = 100_000u64;
    group.throughput(Throughput::Elements(trials));
    group.bench_function("double_cone_100k", |b| {
        b.iter(|| {
            let q = BallQuery::new(&spec, None, 1.0).unwrap();
            let cfg = McConfig::new(trials, 7, 8192).unwrap();
            mc_volume(&q, &cfg).unwrap().hits
        })
    });
    group.finish();
}

fn bench_sample_in_ball(c: &mut Criterion) {
    let spec = double_cone();
    let mut group = c.benchmark_group("sample_in_ball");
    let count = 10_000u64;
    group.throughput(Throughput::Elements(count));
    group.bench_function("double_cone_10k", |b| {
        b.iter(|| {
            let q = BallQuery::new(&spec, None, 1.0).unwrap();
            sample_in_ball(&q, count, 7).unwrap().len()
        })
    });
    group.finish();
}

criterion_group!(benches, bench_mc_volume, bench_sample_in_ball);
criterion_main!(benches);
