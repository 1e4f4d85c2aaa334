use std::process::{Command, Output};

fn madic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_madic"))
        .args(args)
        .env_remove("MADIC_BALL_CAP")
        .env_remove("MADIC_LEVEL_CAP")
        .env_remove("MADIC_BUDGET_STEPS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn project_prints_shifted_word() {
    let o = madic(&["project", "--m", "2", "--s", "2", "--word", "[[1,1],[0,1]]", "--j", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "a_0 a_1");
}

#[test]
fn wordlen_of_identity_is_zero() {
    let o = madic(&["wordlen", "--m", "2", "--s", "2", "--word", "[]", "--cap", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn wordlen_of_commutator() {
    let o = madic(&[
        "wordlen", "--m", "2", "--s", "2", "--word", "a_0^-1 a_1^-1 a_0 a_1", "--cap", "5",
        "--format", "structured",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["length"], 4);
}

#[test]
fn lengths_suite_reports_zero_violations() {
    let o = madic(&[
        "verify", "--m", "2", "--s", "2", "--suite", "lengths", "--radius", "5", "--format",
        "structured",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 4);
    for r in &lines {
        let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, ["instances_checked", "lemma", "unverified", "violations"]);
        assert_eq!(r["violations"].as_array().unwrap().len(), 0);
    }
}

#[test]
fn every_suite_passes_on_small_group() {
    for suite in ["congruence", "projection", "alignment", "transitivity", "recursions"] {
        let o = madic(&["verify", "--m", "3", "--s", "2", "--suite", suite]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
    }
}

#[test]
fn section_record_round_trip() {
    let o = madic(&[
        "section", "--word", r#"{"m":2,"s":2,"word":[[1,1],[0,1]]}"#, "--vertex", "1", "--format",
        "structured",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), r#"{"m":2,"s":2,"word":[[0,1],[1,1]]}"#);
}

#[test]
fn normalize_emits_witness_fields() {
    let o = madic(&[
        "normalize", "--m", "2", "--s", "2", "--word", "[[1,1],[0,1],[1,1],[0,1],[1,-1],[0,-1]]",
        "--format", "structured",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["vertex", "power_exponent", "pi", "signs", "certificate_word"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn split_then_replay() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let p = path.to_str().unwrap();
    let o = madic(&[
        "split", "--m", "3", "--s", "3", "--seed-noise", "5", "--format", "structured", "--out", p,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = madic(&["replay", p]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let text = std::fs::read_to_string(&path).unwrap();
    let mut t: serde_json::Value = serde_json::from_str(&text).unwrap();
    let moves = t["moves"].as_array_mut().unwrap();
    let last = moves.last_mut().unwrap();
    let first_out = last["outputs"][0].clone();
    last["outputs"][0] = last["outputs"][1].clone();
    last["outputs"][1] = first_out;
    std::fs::write(&path, t.to_string()).unwrap();
    let o = madic(&["replay", p]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    assert_eq!(madic(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        madic(&["section", "--m", "2", "--s", "2", "--word", "[[2,1]]"]).status.code(),
        Some(2)
    );
    assert_eq!(
        madic(&["section", "--m", "2", "--s", "2", "--word", "[[0,"]).status.code(),
        Some(2)
    );
    assert_eq!(
        madic(&["normalize", "--m", "2", "--s", "2", "--word", "[[0,1],[1,1],[0,1]]"]).status.code(),
        Some(2)
    );
    assert_eq!(
        madic(&["wordlen", "--m", "2", "--s", "2", "--word", "[[0,1],[1,1],[0,1],[1,1]]", "--cap", "2"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn environment_caps_apply_and_flags_win() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_madic"));
        c.args(["wordlen", "--m", "2", "--s", "2", "--word", "[[0,1]]", "--cap", "4"]);
        if let Some(f) = flag {
            c.args(["--ball-cap", f]);
        }
        c.env_remove("MADIC_BALL_CAP");
        if let Some(e) = env {
            c.env("MADIC_BALL_CAP", e);
        }
        c.output().unwrap().status.code()
    };
    assert_eq!(run(None, None), Some(0));
    assert_eq!(run(Some("10"), None), Some(3));
    assert_eq!(run(Some("10"), Some("1000")), Some(0));
}

#[test]
fn portrait_is_graphviz() {
    let o = madic(&["portrait", "--m", "2", "--s", "2", "--word", "[[0,1]]", "--depth", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("digraph"));
    assert!(out.contains("label=\"ε:1\""));
    assert!(out.contains("label=\"1:0\""));
}

#[test]
fn output_is_deterministic() {
    let args = ["split", "--m", "2", "--s", "3", "--seed-noise", "9", "--format", "structured"];
    assert_eq!(stdout(&madic(&args)), stdout(&madic(&args)));
}
