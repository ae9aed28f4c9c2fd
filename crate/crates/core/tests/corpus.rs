mod common;

use std::path::Path;

use common::{analyze_files, read, unit, CLEAN};
use maa_core::syntax::{parse_component_file, parse_types_file, pretty_print};
use maa_core::{analyze, check, Code, Profile};
use proptest::prelude::*;

const EXTRA: &[&str] = &[
    "pipeline/Pipeline.maa",
    "pipeline/Producer.maa",
    "pipeline/Sink.maa",
];

fn all_models() -> Vec<&'static str> {
    CLEAN.iter().map(|(f, _)| *f).chain(EXTRA.iter().copied()).collect()
}

#[test]
fn corpus_parses_without_syntax_errors() {
    for f in all_models() {
        unit(f);
    }
    common::types();
}

#[test]
fn corpus_round_trips() {
    for f in all_models() {
        let first = unit(f);
        let printed = pretty_print(&first);
        let second = parse_component_file(&printed, Path::new(f))
            .unwrap_or_else(|d| panic!("{f} reprint does not parse: {d:?}\n{printed}"));
        assert_eq!(first.strip_locations(), second.strip_locations(), "{f}");
        assert_eq!(printed, pretty_print(&second), "{f}: printing is not a fixpoint");
    }
}

#[test]
fn types_files_parse() {
    let t = common::types();
    let bot = &t[0];
    assert_eq!(bot.enums.len(), 2);
    assert_eq!(bot.enums[0].name, "MotorCmd");
    assert_eq!(bot.enums[0].literals, ["FORWARD", "BACKWARD", "STOP"]);
    assert_eq!(bot.enums[1].literals, ["SINGLE_DELAY", "DOUBLE_DELAY"]);
}

#[test]
fn clean_corpus_has_no_errors() {
    for (f, profile) in CLEAN {
        let a = analyze_files(&[f], *profile);
        let errors: Vec<_> = a.diagnostics.iter().filter(|d| d.is_error()).collect();
        assert!(errors.is_empty(), "{f}: {errors:?}");
    }
    let a = analyze_files(
        &["pipeline/Pipeline.maa", "pipeline/Producer.maa", "pipeline/Sink.maa", "models/Arbiter.maa"],
        Profile::Ts,
    );
    assert!(!a.has_errors(), "{:?}", a.diagnostics);
}

#[test]
fn bumper_control_is_silent_under_ts() {
    let a = analyze_files(&["models/bumperbot/BumpControl.maa"], Profile::Ts);
    assert!(a.diagnostics.is_empty(), "{:?}", a.diagnostics);
}

#[test]
fn profiles_only_add_rules() {
    let files: Vec<String> = CLEAN
        .iter()
        .map(|(f, _)| f.to_string())
        .chain(common::FIXTURES.iter().map(|f| f.path()))
        .collect();
    for f in &files {
        let units = vec![unit(f)];
        let (model, _) = maa_core::resolve(&units, &common::types());
        let generic = check(&model, Profile::Generic);
        for profile in [Profile::Ts, Profile::Ed] {
            let more = check(&model, profile);
            for d in &generic {
                assert!(more.contains(d), "{f}: {d} missing under {profile}");
            }
            assert!(
                more.iter().filter(|d| !generic.contains(d)).all(|d| matches!(
                    d.code,
                    Code::S1Ts | Code::S2Ts | Code::S3Ts | Code::S1Ed | Code::S2Ed | Code::S3Ed
                )),
                "{f}: {profile} adds a non-profile diagnostic"
            );
        }
    }
}

fn syntax_error_line(text: &str) -> u32 {
    match parse_component_file(text, Path::new("broken.maa")) {
        Ok(_) => panic!("corrupted text still parses:\n{text}"),
        Err(d) => {
            assert!(d.iter().all(|d| d.code == Code::Syn));
            d[0].loc.line
        }
    }
}

fn delete_token(text: &str, line: usize, token: &str) -> String {
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    lines[line] = lines[line].replacen(token, "", 1);
    lines.join("\n")
}

#[test]
fn syntax_errors_point_at_the_corrupted_line() {
    let mut checked = 0;
    for f in all_models() {
        let text = read(f);
        for (i, l) in text.lines().enumerate() {
            let t = l.trim_start();
            if let Some(rest) = t.strip_prefix("component ") {
                // the component name, or a subcomponent's type
                let name = rest.split(|c: char| !c.is_alphanumeric()).next().unwrap();
                assert_eq!(syntax_error_line(&delete_token(&text, i, name)), i as u32 + 1, "{f}:{}", i + 1);
                checked += 1;
            }
            if t.starts_with("state ") && t.contains(',') {
                assert_eq!(syntax_error_line(&delete_token(&text, i, ",")), i as u32 + 1, "{f}:{}", i + 1);
                checked += 1;
            }
            if t.starts_with("connect ") {
                assert_eq!(syntax_error_line(&delete_token(&text, i, "->")), i as u32 + 1, "{f}:{}", i + 1);
                checked += 1;
            }
        }
    }
    assert!(checked >= 20, "only {checked} corruptions exercised");
}

#[test]
fn missing_types_are_resolution_errors() {
    let u = unit("models/robot/FollowTheLeaderOnline.maa");
    let a = analyze(&[u], &[], Profile::Ts);
    assert!(a.diagnostics.iter().any(|d| d.code == Code::R0 && d.loc.line == 7));
}

#[test]
fn types_parse_error_is_syntax() {
    let err = parse_types_file("package p;\nenum E { A, }", Path::new("x.types")).unwrap_err();
    assert_eq!(err[0].code, Code::Syn);
    assert_eq!(err[0].loc.line, 2);
}

const BODY: &[&str] = &[
    "state A;",
    "state <<final>> B;",
    "initial A / o = 1;",
    "A -> B [i > 0] / o = i;",
    "B -> A i = -- / o = --;",
    "state C;",
    "C / o = 2 | 3;",
    "initial C;",
];

fn body_unit(lines: &[&str]) -> maa_core::CompilationUnit {
    let text = format!(
        "component P {{\n  port in Integer i, out Integer o;\n  automaton {{\n{}\n  }}\n}}\n",
        lines.join("\n")
    );
    parse_component_file(&text, Path::new("p.maa")).unwrap()
}

fn sorted_debug<T: std::fmt::Debug>(xs: &[T]) -> Vec<String> {
    let mut v: Vec<String> = xs.iter().map(|x| format!("{x:?}")).collect();
    v.sort();
    v
}

proptest! {
    #[test]
    fn automaton_statements_are_order_free(order in Just(BODY.to_vec()).prop_shuffle()) {
        let a = body_unit(BODY).strip_locations();
        let b = body_unit(&order).strip_locations();
        let (a, b) = (&a.component.automata[0], &b.component.automata[0]);
        prop_assert_eq!(sorted_debug(&a.states), sorted_debug(&b.states));
        prop_assert_eq!(sorted_debug(&a.initials), sorted_debug(&b.initials));
        prop_assert_eq!(sorted_debug(&a.transitions), sorted_debug(&b.transitions));
    }
}
