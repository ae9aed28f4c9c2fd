//! Inputs shared by the benchmarks in `benches/`.

use std::fs;
use std::path::{Path, PathBuf};

use maa_core::exec::{parse_stimulus, PortValuation};
use maa_core::syntax::{parse_component_file, parse_types_file};
use maa_core::{analyze, Analysis, CompilationUnit, Profile, TypeDeclUnit};

pub const PIPELINE: &[&str] = &[
    "pipeline/Pipeline.maa",
    "pipeline/Producer.maa",
    "pipeline/Sink.maa",
    "models/Arbiter.maa",
];

pub fn corpus(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/corpus").join(rel)
}

pub fn read(rel: &str) -> String {
    fs::read_to_string(corpus(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

/// (file name, text) of every model in the clean corpus and the pipeline.
pub fn model_texts() -> Vec<(PathBuf, String)> {
    let mut out = Vec::new();
    for dir in ["models", "pipeline"] {
        for e in walk(&corpus(dir)) {
            if e.extension().is_some_and(|x| x == "maa") {
                let text = fs::read_to_string(&e).unwrap();
                out.push((e, text));
            }
        }
    }
    out
}

fn walk(dir: &Path) -> Vec<PathBuf> {
    let mut v = Vec::new();
    for e in fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            v.extend(walk(&p));
        } else {
            v.push(p);
        }
    }
    v.sort();
    v
}

pub fn types() -> Vec<TypeDeclUnit> {
    ["types/bumperbot.types", "types/robot.types"]
        .iter()
        .map(|rel| parse_types_file(&read(rel), Path::new(rel)).unwrap())
        .collect()
}

pub fn units(rels: &[&str]) -> Vec<CompilationUnit> {
    rels.iter().map(|r| parse_component_file(&read(r), Path::new(r)).unwrap()).collect()
}

pub fn pipeline() -> Analysis {
    analyze(&units(PIPELINE), &types(), Profile::Ts)
}

/// The pipeline stimulus repeated to `cycles` rows.
pub fn pipeline_stimulus(a: &Analysis, cycles: usize) -> Vec<PortValuation> {
    let rows = parse_stimulus(&read("pipeline/stimulus.tsv"), &a.model, "Pipeline").unwrap();
    rows.iter().cycle().take(cycles).cloned().collect()
}
