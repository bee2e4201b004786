use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use germlab_bench::{fixture_text, prepared_set};
use germlab_core::cartanlab::{verify_conditional_expectation, GridModel, WeightFunction};
use germlab_core::convalg::verify_reduced_iso;
use germlab_core::pipeline::{run_pipeline, PipelineOptions};

fn pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    let opts = PipelineOptions::default();
    for name in ["z2-flip", "semilattice", "z4-groupoid", "interval-example"] {
        let text = fixture_text(name);
        group.bench_function(name, |b| b.iter(|| run_pipeline(name, black_box(&text), &opts).unwrap()));
    }
    group.finish();
}

fn gelfand(c: &mut Criterion) {
    let mut group = c.benchmark_group("gelfand");
    for p in prepared_set(3) {
        group.bench_function(&p.name, |b| b.iter(|| p.line.verify_gelfand_iso(black_box(&p.bundle), 100, 0)));
    }
    group.finish();
}

fn reduced_iso(c: &mut Criterion) {
    let mut group = c.benchmark_group("reduced_iso");
    group.sample_size(10);
    for p in prepared_set(3) {
        group.bench_function(&p.name, |b| {
            b.iter(|| verify_reduced_iso(black_box(&p.bundle), &p.line, 200, 0).unwrap())
        });
    }
    group.finish();
}

fn cartan(c: &mut Criterion) {
    let grid = GridModel::new(101).unwrap();
    let weight = WeightFunction::parse("1-x/2").unwrap();
    let mut group = c.benchmark_group("cartan");
    group.sample_size(10);
    group.bench_function("grid 101", |b| {
        b.iter(|| verify_conditional_expectation(black_box(&grid), &weight, "1-x/2", 100, 0).unwrap())
    });
    group.finish();
}

criterion_group!(benches, pipeline, gelfand, reduced_iso, cartan);
criterion_main!(benches);
