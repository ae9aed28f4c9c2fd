#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use maa_core::syntax::{parse_component_file, parse_types_file};
use maa_core::{analyze, Analysis, CompilationUnit, Profile, TypeDeclUnit};

pub mod props;

pub fn corpus(rel: &str) -> PathBuf {
    // via `core` so crates sharing this module find the same corpus
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/corpus").join(rel)
}

pub fn read(rel: &str) -> String {
    fs::read_to_string(corpus(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn unit(rel: &str) -> CompilationUnit {
    parse_component_file(&read(rel), Path::new(rel)).unwrap_or_else(|d| panic!("{rel}: {d:?}"))
}

pub fn types() -> Vec<TypeDeclUnit> {
    ["types/bumperbot.types", "types/robot.types"]
        .iter()
        .map(|rel| parse_types_file(&read(rel), Path::new(rel)).unwrap())
        .collect()
}

pub fn analyze_files(rels: &[&str], profile: Profile) -> Analysis {
    let units: Vec<CompilationUnit> = rels.iter().map(|r| unit(r)).collect();
    analyze(&units, &types(), profile)
}

/// The clean corpus, each entry with the profile it is written for.
pub const CLEAN: &[(&str, Profile)] = &[
    ("models/bumperbot/BumpControl.maa", Profile::Ts),
    ("models/robot/FollowTheLeaderOnline.maa", Profile::Ts),
    ("models/robot/ToastArmController.maa", Profile::Ed),
    ("models/IntegerBuffer1.maa", Profile::Generic),
    ("models/IntegerBuffer2.maa", Profile::Generic),
    ("models/IntegerBuffer3.maa", Profile::Generic),
    ("models/Echo1.maa", Profile::Generic),
    ("models/IntegerBuffer4.maa", Profile::Generic),
    ("models/IntegerBuffer5.maa", Profile::Generic),
    ("models/SmallNumbersBuffer.maa", Profile::Generic),
    ("models/ZeroBuffer.maa", Profile::Generic),
    ("models/IntegerDuplicator.maa", Profile::Generic),
    ("models/IntegerBuffer6.maa", Profile::Generic),
    ("models/Arbiter.maa", Profile::Generic),
];

/// A violation fixture: file, profile, whether the listed codes are
/// warnings (otherwise errors), and the expected (code, line) multiset.
pub struct Fixture {
    pub file: &'static str,
    pub profile: Profile,
    pub warnings: bool,
    pub expected: &'static [(&'static str, u32)],
}

const fn fx(
    file: &'static str,
    profile: Profile,
    warnings: bool,
    expected: &'static [(&'static str, u32)],
) -> Fixture {
    Fixture { file, profile, warnings, expected }
}

pub const FIXTURES: &[Fixture] = &[
    fx("IntegerBufferU1.maa", Profile::Generic, false, &[("U1", 7)]),
    fx("IntegerBufferU2.maa", Profile::Generic, false, &[("U2", 4), ("U2", 5)]),
    fx("IntegerBufferU3.maa", Profile::Generic, false, &[("U3", 6), ("U3", 9)]),
    fx("IntegerBufferC1.maa", Profile::Generic, true, &[("C1", 3)]),
    fx("IntegerBufferC2to4.maa", Profile::Generic, true, &[("C2", 3), ("C3", 5), ("C4", 6)]),
    fx("IntegerBufferR1.maa", Profile::Generic, false, &[("R1", 9), ("R1", 10)]),
    fx("IntegerBufferR2.maa", Profile::Generic, false, &[("R2", 6), ("R2", 6), ("R2", 6), ("R2", 6)]),
    fx("IntegerBufferT1.maa", Profile::Generic, false, &[("T1", 13), ("T1", 13)]),
    fx("IntegerBufferT2.maa", Profile::Generic, false, &[("T2", 3)]),
    fx("EchoT3.maa", Profile::Generic, false, &[("T3", 13), ("T3", 13)]),
    fx("IntegerBufferT4.maa", Profile::Generic, false, &[("T4", 7), ("T4", 13), ("T4", 13)]),
    fx("IntegerBufferT5.maa", Profile::Generic, false, &[("T5", 9), ("T5", 9)]),
    fx("IntegerBufferT6.maa", Profile::Generic, false, &[("T6", 10), ("T6", 10)]),
    fx("IntegerBufferT7.maa", Profile::Generic, false, &[("T7", 12), ("T7", 14)]),
    fx("IntegerBufferS1ts.maa", Profile::Ts, false, &[("S1TS", 7)]),
    fx("IntegerBufferS2TS.maa", Profile::Ts, false, &[("S2TS", 10)]),
    fx("InitialFib.maa", Profile::Ts, false, &[("S3TS", 9)]),
    fx("IntegerBufferS1ed.maa", Profile::Ed, false, &[("S1ED", 7)]),
    fx("Filter.maa", Profile::Ed, false, &[("S2ED", 11), ("S2ED", 13)]),
    fx("TemperatureMonitor.maa", Profile::Ed, false, &[("S3ED", 11)]),
];

impl Fixture {
    pub fn path(&self) -> String {
        format!("violations/{}", self.file)
    }

    /// Sorted (code, line) pairs of the channel this fixture is about.
    pub fn actual(&self) -> Vec<(String, u32)> {
        let a = analyze_files(&[&self.path()], self.profile);
        let mut v: Vec<(String, u32)> = a
            .diagnostics
            .iter()
            .filter(|d| d.is_error() != self.warnings)
            .map(|d| (d.code.as_str().to_string(), d.loc.line))
            .collect();
        v.sort();
        v
    }

    pub fn expected_sorted(&self) -> Vec<(String, u32)> {
        let mut v: Vec<(String, u32)> = self.expected.iter().map(|(c, l)| (c.to_string(), *l)).collect();
        v.sort();
        v
    }

    /// Warning fixtures must also be free of errors.
    pub fn stray_errors(&self) -> usize {
        if !self.warnings {
            return 0;
        }
        analyze_files(&[&self.path()], self.profile).diagnostics.iter().filter(|d| d.is_error()).count()
    }
}

/// Analyzes in-memory model texts, each named by a pseudo file name.
pub fn analyze_texts(texts: &[&str], profile: Profile) -> Analysis {
    let units: Vec<CompilationUnit> = texts
        .iter()
        .enumerate()
        .map(|(i, t)| parse_component_file(t, Path::new(&format!("inline{i}.maa"))).unwrap_or_else(|d| panic!("{d:?}\n{t}")))
        .collect();
    analyze(&units, &types(), profile)
}
