use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use nurbs_indicator::oracle::{points_in_polygon, polygonize};
use nurbs_indicator::{Classifier, ClassifyOptions};
use nurbs_indicator_bench::{all, SIZES};

fn polygon_vs_classifier(c: &mut Criterion) {
    for fx in all(4) {
        let poly = polygonize(&fx.curve, 1e-8).unwrap();
        let cls = Classifier::new(&fx.geom, &ClassifyOptions::default());
        let mut group = c.benchmark_group(format!("polygon/{}", fx.name));
        group.sample_size(10);
        for m in SIZES {
            let pts = fx.cloud(m);
            group.throughput(Throughput::Elements(m as u64));
            group.bench_with_input(BenchmarkId::new("classifier", m), &pts, |b, p| {
                b.iter(|| cls.classify_batch(p))
            });
            group.bench_with_input(BenchmarkId::new("ray-casting", m), &pts, |b, p| {
                b.iter(|| points_in_polygon(p, &poly.vertices))
            });
        }
        group.finish();
    }
}

fn flattening(c: &mut Criterion) {
    let fx = nurbs_indicator_bench::Fixture::new("circle", 1);
    let mut group = c.benchmark_group("polygonize/circle");
    group.sample_size(10);
    for eps in [1e-4, 1e-6, 1e-8] {
        group.bench_with_input(BenchmarkId::from_parameter(eps), &eps, |b, &e| {
            b.iter(|| polygonize(&fx.curve, e))
        });
    }
    group.finish();
}

criterion_group!(benches, polygon_vs_classifier, flattening);
criterion_main!(benches);
