//! The semantic property suite, runnable from `#[test]`s and from the
//! acceptance harness alike. Every check uses a fixed RNG so failures
//! reproduce.

use maa_core::exec::{
    enabled, enumerate_ts, run_ed, run_ts, trace_tsv, Env, Event, ExecError, FirstDeclared, Policy, PortValuation,
    System, Trace,
};
use maa_core::model::Slot;
use maa_core::{Profile, ResolvedModel, Value};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRng, TestRunner};

use super::{analyze_files, analyze_texts};

fn follower() -> ResolvedModel {
    analyze_files(&["models/robot/FollowTheLeaderOnline.maa"], Profile::Ts).model
}

fn distance(m: &ResolvedModel, l: &str) -> Value {
    let q = m.enums.keys().find(|q| q.last() == Some("Distance")).unwrap().clone();
    Value::Enum { ty: q, lit: l.into() }
}

fn follower_row() -> impl Strategy<Value = (Option<bool>, Option<usize>)> + Clone {
    (proptest::option::of(any::<bool>()), proptest::option::of(0usize..2))
}

fn follower_rows(m: &ResolvedModel, rows: &[(Option<bool>, Option<usize>)]) -> Vec<PortValuation> {
    let lits = ["TOO_CLOSE", "TOO_FAR"];
    rows.iter()
        .map(|(lane, d)| {
            PortValuation::from([
                ("inLane".to_string(), lane.map(Value::Bool)),
                ("dist".to_string(), d.map(|i| distance(m, lits[i]))),
            ])
        })
        .collect()
}

fn outputs(t: &Trace) -> Vec<Vec<Option<Value>>> {
    t.records.iter().map(|r| r.outputs.clone()).collect()
}

/// A prefix, the cycle where two stimuli diverge, two different rows for
/// it, and independent continuations.
fn diverging<R: Clone + PartialEq + std::fmt::Debug>(
    row: impl Strategy<Value = R> + Clone,
) -> impl Strategy<Value = (Vec<R>, Vec<R>)> {
    (
        proptest::collection::vec(row.clone(), 0..6),
        (row.clone(), row.clone()).prop_filter("rows must differ", |(a, b)| a != b),
        proptest::collection::vec(row.clone(), 0..4),
        proptest::collection::vec(row, 0..4),
    )
        .prop_map(|(prefix, (a, b), ta, tb)| {
            let mut x = prefix.clone();
            x.push(a);
            x.extend(ta.iter().cloned());
            let mut y = prefix;
            y.push(b);
            y.extend(tb.iter().cloned());
            let n = x.len().max(y.len());
            (pad(x, n), pad(y, n))
        })
}

fn pad<R: Clone>(mut v: Vec<R>, n: usize) -> Vec<R> {
    while v.len() < n {
        let last = v.last().unwrap().clone();
        v.push(last);
    }
    v
}

fn divergence<R: PartialEq>(a: &[R], b: &[R]) -> usize {
    a.iter().zip(b).position(|(x, y)| x != y).unwrap()
}

// A generated three-state component with an Integer and a Boolean input.
#[derive(Debug, Clone)]
struct Gen {
    src: usize,
    tgt: usize,
    input: u8,
    k: i64,
    guard: u8,
    outs: Vec<u8>,
}

fn gen_transition() -> impl Strategy<Value = Gen> {
    (0usize..3, 0usize..3, 0u8..5, 0i64..3, 0u8..3, proptest::collection::vec(0u8..6, 0..3)).prop_map(
        |(src, tgt, input, k, guard, outs)| Gen { src, tgt, input, k, guard, outs },
    )
}

fn gen_model(ts: &[Gen]) -> String {
    let mut body = String::new();
    for g in ts {
        let input = match g.input {
            0 => String::new(),
            1 => format!(" {{i = {}}}", g.k),
            2 => " {i = --}".to_string(),
            3 => " {b = true}".to_string(),
            _ => format!(" {{b = false, i = {} | {}}}", g.k, g.k + 1),
        };
        let guard = match g.guard {
            0 => String::new(),
            1 => format!(" [i > {}]", g.k - 1),
            _ => format!(" [v < {}]", g.k + 1),
        };
        // forwarding `i` is only safe where `i` is known to be present
        let i_present = matches!(g.input, 1 | 4) || g.guard == 1;
        let mut outs: Vec<String> = Vec::new();
        let (mut o, mut v) = (false, false);
        for code in &g.outs {
            match code {
                0 if !o => { outs.push(format!("o = {}", g.k)); o = true; }
                1 if !o => { outs.push(format!("o = {} | {}", g.k, g.k + 5)); o = true; }
                2 if !o && i_present => { outs.push("o = i".into()); o = true; }
                3 if !v => { outs.push(format!("v = {}", g.k + 1)); v = true; }
                4 if !v && i_present => { outs.push("v = i".into()); v = true; }
                5 if !o => { outs.push("o = --".into()); o = true; }
                _ => {}
            }
        }
        let out = if outs.is_empty() { String::new() } else { format!(" / {{{}}}", outs.join(", ")) };
        body.push_str(&format!("    S{} -> S{}{guard}{input}{out};\n", g.src, g.tgt));
    }
    format!(
        "component R {{\n  port in Integer i, in Boolean b, out Integer o;\n  Integer v = 0;\n  automaton {{\n    state S0, S1, S2;\n    initial S0 / o = 0;\n{body}  }}\n}}\n"
    )
}

fn gen_row() -> impl Strategy<Value = (Option<i64>, Option<bool>)> + Clone {
    (proptest::option::of(0i64..4), proptest::option::of(any::<bool>()))
}

fn gen_rows(rows: &[(Option<i64>, Option<bool>)]) -> Vec<PortValuation> {
    rows.iter()
        .map(|(i, b)| {
            PortValuation::from([("i".to_string(), i.map(Value::Int)), ("b".to_string(), b.map(Value::Bool))])
        })
        .collect()
}

fn generated(ts: &[Gen]) -> ResolvedModel {
    let text = gen_model(ts);
    let a = analyze_texts(&[&text], Profile::Ts);
    assert!(!a.has_errors(), "{:?}\n{text}", a.diagnostics);
    a.model
}

/// Runs `test` on `cases` inputs drawn from `strategy`.
fn check<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    let rng = TestRng::deterministic_rng(config.rng_algorithm);
    TestRunner::new_with_rng(config, rng).run(&strategy, test).map_err(|e| e.to_string())
}

pub fn follower_is_strongly_causal(cases: u32) -> Result<(), String> {
    let m = follower();
    check(cases, diverging(follower_row()), |(x, y)| {
        let t = divergence(&x, &y);
        let n = x.len();
        let a = run_ts(&m, "FollowTheLeaderOnline", &follower_rows(&m, &x), n, Policy::FirstDeclared).unwrap();
        let b = run_ts(&m, "FollowTheLeaderOnline", &follower_rows(&m, &y), n, Policy::FirstDeclared).unwrap();
        prop_assert_eq!(&outputs(&a)[..=t], &outputs(&b)[..=t]);
        Ok(())
    })
}

pub fn generated_models_are_strongly_causal(cases: u32) -> Result<(), String> {
    let strategy = (proptest::collection::vec(gen_transition(), 1..7), diverging(gen_row()), any::<u64>());
    check(cases, strategy, |(ts, (x, y), seed)| {
        let m = generated(&ts);
        let t = divergence(&x, &y);
        let n = x.len();
        // equal seeds resolve the prefix's choices identically
        let a = run_ts(&m, "R", &gen_rows(&x), n, Policy::Seeded(seed)).unwrap();
        let b = run_ts(&m, "R", &gen_rows(&y), n, Policy::Seeded(seed)).unwrap();
        prop_assert_eq!(&outputs(&a)[..=t], &outputs(&b)[..=t]);
        Ok(())
    })
}

pub fn idle_completion_and_variable_preservation(cases: u32) -> Result<(), String> {
    let strategy = (proptest::collection::vec(gen_transition(), 1..7), proptest::collection::vec(gen_row(), 1..12));
    check(cases, strategy, |(ts, rows)| {
        let m = generated(&ts);
        let sys = System::new(&m, "R").unwrap();
        let c = &sys.instances[0].component;
        let mut st = sys.initial(&mut FirstDeclared).unwrap();
        for row in gen_rows(&rows) {
            let ext: Vec<Option<Value>> = sys.in_ports.iter().map(|(p, _)| row[p].clone()).collect();
            let inputs = sys.inputs_of(0, &st, &ext);
            let before = st.instances[0].clone();
            let en = enabled(c, before.state.unwrap(), Env { inputs: &inputs, vars: &before.vars }).unwrap();
            let next = sys.step_ts(&st, &ext, &mut FirstDeclared).unwrap();
            let after = &next.instances[0];
            if en.is_empty() {
                prop_assert_eq!(after, &before);
                prop_assert!(next.pending[0].iter().all(Option::is_none));
            } else {
                let fired = &c.transitions[en[0]];
                prop_assert_eq!(after.state, Some(fired.target));
                for (vi, old) in before.vars.iter().enumerate() {
                    if !fired.outputs.iter().any(|b| b.slot == Slot::Var(vi)) {
                        prop_assert_eq!(&after.vars[vi], old);
                    }
                }
            }
            st = next;
        }
        Ok(())
    })
}

/// Each cycle of a ts trace carries at most one message per out port, of
/// the port's type; a transition sending a sequence is refused at runtime.
pub fn at_most_one_message_per_port(cases: u32) -> Result<(), String> {
    let strategy = (proptest::collection::vec(gen_transition(), 1..7), proptest::collection::vec(gen_row(), 1..8), any::<u64>());
    check(cases, strategy, |(ts, rows, seed)| {
        let m = generated(&ts);
        let t = run_ts(&m, "R", &gen_rows(&rows), rows.len(), Policy::Seeded(seed)).unwrap();
        let ports = System::new(&m, "R").unwrap().out_ports;
        for r in &t.records {
            prop_assert_eq!(r.outputs.len(), ports.len());
            for (v, (_, ty)) in r.outputs.iter().zip(&ports) {
                prop_assert!(v.as_ref().is_none_or(|v| v.conforms_to(ty)));
            }
        }
        Ok(())
    })?;
    let text = "component Seq {\n  port out Integer o;\n  automaton {\n    state S;\n    initial S;\n    S / o = [1, 2];\n  }\n}\n";
    let a = analyze_texts(&[text], Profile::Ts);
    let err = run_ts(&a.model, "Seq", &[], 2, Policy::FirstDeclared).unwrap_err();
    let want = ExecError::AtCycle { cycle: 1, source: Box::new(ExecError::SequenceInTs { port: "o".into(), line: 6 }) };
    if err != want {
        return Err(format!("sequence run gave {err:?}"));
    }
    Ok(())
}

pub fn seeded_runs_are_reproducible_and_contained(cases: u32) -> Result<(), String> {
    let strategy = (proptest::collection::vec(gen_transition(), 1..5), proptest::collection::vec(gen_row(), 1..5), any::<u64>());
    check(cases, strategy, |(ts, rows, seed)| {
        let m = generated(&ts);
        let stim = gen_rows(&rows);
        let n = rows.len();
        let a = run_ts(&m, "R", &stim, n, Policy::Seeded(seed)).unwrap();
        let b = run_ts(&m, "R", &stim, n, Policy::Seeded(seed)).unwrap();
        prop_assert_eq!(trace_tsv(&a), trace_tsv(&b));
        match enumerate_ts(&m, "R", &stim, n, 4096) {
            Ok(all) => prop_assert!(all.contains(&a)),
            Err(e) => prop_assert_eq!(e, ExecError::BoundExceeded(4096)),
        }
        Ok(())
    })
}

pub fn every_event_is_consumed_once(cases: u32) -> Result<(), String> {
    let a = analyze_files(&["models/robot/ToastArmController.maa"], Profile::Ed);
    let q = a.model.enums.keys().find(|q| q.last() == Some("Request")).unwrap().clone();
    check(cases, proptest::collection::vec((any::<bool>(), 0usize..2), 0..20), |script| {
        let events: Vec<Event> = script
            .iter()
            .map(|(on_req, k)| if *on_req {
                Event { port: "req".into(), value: Value::Enum { ty: q.clone(), lit: ["PICK_UP_TOAST", "DROP_TOAST"][*k].into() } }
            } else {
                Event { port: "reset".into(), value: Value::Bool(*k == 0) }
            })
            .collect();
        let t = run_ed(&a.model, "ToastArmController", &events, Policy::FirstDeclared).unwrap();
        prop_assert_eq!(t.steps.len(), events.len());
        for (s, e) in t.steps.iter().zip(&events) {
            prop_assert_eq!(&s.event, e);
        }
        Ok(())
    })
}

// One `|` choice and one state with two enabled transitions.
const ORACLE: &str = "component Oracle {\n  port in Boolean go, out Integer out1;\n  automaton {\n    state A, B;\n    initial A;\n    A -> B go = true / out1 = 1 | 2;\n    A go = true / out1 = 3;\n    B -> A / out1 = 4;\n  }\n}\n";

/// FirstDeclared and ten seeded runs all lie in the enumerated set.
pub fn single_runs_are_members_of_the_enumeration(_cases: u32) -> Result<(), String> {
    let a = analyze_texts(&[ORACLE], Profile::Ts);
    if a.has_errors() {
        return Err(format!("{:?}", a.diagnostics));
    }
    let stim: Vec<PortValuation> = (0..5)
        .map(|c| PortValuation::from([("go".to_string(), Some(Value::Bool(c != 2)))]))
        .collect();
    let all = enumerate_ts(&a.model, "Oracle", &stim, 5, 256).map_err(|e| e.to_string())?;
    if all.len() <= 2 {
        return Err(format!("only {} traces enumerated", all.len()));
    }
    let mut sorted = all.clone();
    sorted.dedup();
    if sorted != all {
        return Err("enumeration contains duplicates".into());
    }
    let first = run_ts(&a.model, "Oracle", &stim, 5, Policy::FirstDeclared).map_err(|e| e.to_string())?;
    if !all.contains(&first) {
        return Err("first-declared trace not enumerated".into());
    }
    for seed in 0..10 {
        let t = run_ts(&a.model, "Oracle", &stim, 5, Policy::Seeded(seed)).map_err(|e| e.to_string())?;
        if !all.contains(&t) {
            return Err(format!("seed {seed} trace not enumerated"));
        }
    }
    Ok(())
}

pub type Property = (&'static str, fn(u32) -> Result<(), String>);

pub const ALL: &[Property] = &[
    ("follower_is_strongly_causal", follower_is_strongly_causal),
    ("generated_models_are_strongly_causal", generated_models_are_strongly_causal),
    ("idle_completion_and_variable_preservation", idle_completion_and_variable_preservation),
    ("at_most_one_message_per_port", at_most_one_message_per_port),
    ("seeded_runs_are_reproducible_and_contained", seeded_runs_are_reproducible_and_contained),
    ("every_event_is_consumed_once", every_event_is_consumed_once),
    ("single_runs_are_members_of_the_enumeration", single_runs_are_members_of_the_enumeration),
];
