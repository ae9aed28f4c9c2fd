use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/corpus")
        .join(rel)
        .to_string_lossy()
        .into_owned()
}

fn maa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maa")).args(args).output().expect("maa runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn types() -> String {
    corpus("types")
}

#[test]
fn warnings_alone_exit_zero() {
    let o = maa(&["check", &corpus("violations/IntegerBufferC1.maa"), "--types", &types()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1, "{out}");
    assert!(out.contains("warning C1"), "{out}");
}

#[test]
fn profile_errors_exit_one() {
    let f = corpus("violations/InitialFib.maa");
    let o = maa(&["check", &f, "--types", &types(), "--profile", "ts"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.contains("S3TS")).count(), 1, "{out}");
    assert!(out.lines().any(|l| l.contains(":9:")));
    let generic = maa(&["check", &f, "--types", &types()]);
    assert!(!stdout(&generic).contains("S3TS"));
}

#[test]
fn clean_model_prints_nothing() {
    let o = maa(&["check", &corpus("models/bumperbot/BumpControl.maa"), "--types", &types(), "--profile", "ts"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "");
}

#[test]
fn json_diagnostics_have_sorted_keys() {
    let o = maa(&["check", &corpus("violations/IntegerBufferU2.maa"), "--types", &types(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let items = v.as_array().unwrap();
    // the model also lacks an initial state
    assert_eq!(items.len(), 3);
    let keys: Vec<&str> = items[0].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["code", "column", "file", "line", "message", "severity"]);
    assert_eq!(items[0]["code"], "C1");
    assert_eq!(items[0]["severity"], "warning");
    assert_eq!(items[1]["code"], "U2");
    assert_eq!(items[2]["line"], 5);
}

#[test]
fn syntax_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("Broken.maa");
    std::fs::write(&f, "component Broken {\n  port in Integer;\n}\n").unwrap();
    let o = maa(&["check", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("SYN"), "{}", stdout(&o));
}

#[test]
fn missing_file_exits_two() {
    let o = maa(&["check", "/definitely/not/here.maa"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error:"));
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(maa(&["check", &corpus("models/Echo1.maa"), "--profile", "xyz"]).status.code(), Some(2));
    assert_eq!(maa(&["frobnicate"]).status.code(), Some(2));
}

fn follower(extra: &[&str]) -> Output {
    let mut args = vec![
        "sim-ts",
        "--types",
        "",
        "--main",
        "FollowTheLeaderOnline",
        "--stimulus",
        "",
    ];
    let (t, s, m) = (types(), corpus("sim/follow.tsv"), corpus("models/robot/FollowTheLeaderOnline.maa"));
    args[2] = &t;
    args[6] = &s;
    args.push(&m);
    args.extend_from_slice(extra);
    maa(&args)
}

#[test]
fn follower_command_column() {
    let o = follower(&[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    let header: Vec<&str> = lines.next().unwrap().split('\t').collect();
    let col = header.iter().position(|h| *h == "out:cmd").unwrap();
    let cmd: Vec<String> = lines.map(|l| l.split('\t').nth(col).unwrap().to_string()).collect();
    assert_eq!(
        cmd,
        ["SLOW_FORWARD", "--", "--", "FAST_FORWARD", "FAST_FORWARD", "--", "TURN", "--"]
    );
}

#[test]
fn cycles_override_stimulus_length() {
    let out = stdout(&follower(&["--cycles", "3"]));
    assert_eq!(out.lines().count(), 4);
}

#[test]
fn seeded_runs_are_identical() {
    let a = follower(&["--seed", "7"]);
    let b = follower(&["--policy", "seeded", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn enumeration_lists_traces_and_count() {
    let o = follower(&["--enumerate"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.ends_with("\ntraces: 1\n"), "{out}");
    assert!(out.starts_with(&stdout(&follower(&[]))));
    assert_eq!(follower(&["--enumerate", "--policy", "first"]).status.code(), Some(2));
}

#[test]
fn malformed_stimulus_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.tsv");
    std::fs::write(&s, "inLane\tnope\ntrue\t1\n").unwrap();
    let m = corpus("models/robot/FollowTheLeaderOnline.maa");
    let o = maa(&["sim-ts", &m, "--types", &types(), "--main", "FollowTheLeaderOnline", "--stimulus", s.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn unknown_main_exits_two() {
    let m = corpus("models/robot/FollowTheLeaderOnline.maa");
    let o = maa(&["sim-ts", &m, "--types", &types(), "--main", "Nobody"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn warnings_block_simulation_unless_forced() {
    let m = corpus("violations/IntegerBufferC2to4.maa");
    let name = "IntegerBufferC2to4";
    let blocked = maa(&["sim-ts", &m, "--main", name]);
    assert_eq!(blocked.status.code(), Some(1));
    assert!(stderr(&blocked).contains("--force"));
}

#[test]
fn runtime_failures_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("Fwd.maa");
    std::fs::write(
        &m,
        "component Fwd {\n  port in Integer i, out Integer o;\n  automaton {\n    state S;\n    initial S;\n    S / o = i;\n  }\n}\n",
    )
    .unwrap();
    let o = maa(&["sim-ts", m.to_str().unwrap(), "--main", "Fwd", "--cycles", "2"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("cycle 1"), "{}", stderr(&o));
}

#[test]
fn toast_event_log() {
    let m = corpus("models/robot/ToastArmController.maa");
    let o = maa(&["sim-ed", &m, "--types", &types(), "--main", "ToastArmController", "--script", &corpus("sim/toast.script")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let emits: Vec<&str> = out.lines().filter(|l| l.starts_with("emit ")).collect();
    assert_eq!(emits.len(), 10);
    assert_eq!(out.lines().last(), Some("state Idle"));

    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.script");
    std::fs::write(&empty, "# nothing\n").unwrap();
    let o = maa(&["sim-ed", &m, "--types", &types(), "--main", "ToastArmController", "--script", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "");
}

#[test]
fn export_describes_the_model() {
    let m = corpus("models/bumperbot/BumpControl.maa");
    let a = maa(&["export-ir", &m, "--types", &types(), "--profile", "ts"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    let b = maa(&["export-ir", &m, "--types", &types(), "--profile", "ts"]);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["profile"], "ts");
    let c = v["components"].as_array().unwrap().iter().find(|c| c["name"].as_str().unwrap().ends_with("BumpControl")).unwrap();
    assert_eq!(c["ports"].as_array().unwrap().len(), 5);
    let aut = &c["automata"][0];
    assert_eq!(aut["states"].as_array().unwrap().len(), 4);
    assert_eq!(aut["transitions"].as_array().unwrap().len(), 4);
    assert_eq!(aut["initials"].as_array().unwrap().len(), 1);
}

#[test]
fn export_keeps_generic_parameters_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ir.json");
    let o = maa(&["export-ir", &corpus("models/Arbiter.maa"), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["components"][0]["genericParams"], serde_json::json!(["T"]));
}
