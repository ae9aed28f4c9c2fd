use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use maa_bench::{model_texts, pipeline, pipeline_stimulus, types, units};
use maa_core::exec::{enumerate_ts, run_ts, Policy};
use maa_core::syntax::parse_component_file;
use maa_core::{analyze, Profile};

fn parse(c: &mut Criterion) {
    let texts = model_texts();
    c.bench_function("parse corpus", |b| {
        b.iter(|| {
            for (path, text) in &texts {
                black_box(parse_component_file(text, path).unwrap());
            }
        })
    });
}

fn check(c: &mut Criterion) {
    let units = units(&["models/robot/FollowTheLeaderOnline.maa", "models/bumperbot/BumpControl.maa"]);
    let types = types();
    c.bench_function("check ts models", |b| b.iter(|| black_box(analyze(&units, &types, Profile::Ts))));
}

fn simulate(c: &mut Criterion) {
    let a = pipeline();
    let stim = pipeline_stimulus(&a, 1000);
    c.bench_function("pipeline 1000 cycles", |b| {
        b.iter(|| black_box(run_ts(&a.model, "Pipeline", &stim, stim.len(), Policy::FirstDeclared).unwrap()))
    });
    let short = pipeline_stimulus(&a, 20);
    c.bench_function("enumerate pipeline 20 cycles", |b| {
        b.iter(|| black_box(enumerate_ts(&a.model, "Pipeline", &short, short.len(), 64).unwrap()))
    });
}

criterion_group!(benches, parse, check, simulate);
criterion_main!(benches);
